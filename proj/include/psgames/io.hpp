#ifndef PSGAMES_IO_HPP
#define PSGAMES_IO_HPP

#include <charconv>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "psgames/analysis.hpp"

// Sweep tables as CSV (with a '#'-prefixed metadata header) or JSON. Doubles
// are written in shortest round-trip form, so parsing an emitted file
// reproduces the in-memory table bit for bit.

namespace psgames {

inline std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text) {
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return value;
}

namespace detail {

inline std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      return out;
    }
    out.emplace_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::string opt_field(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

inline std::optional<double> parse_opt(const std::string& field) {
  if (field.empty()) return std::nullopt;
  return parse_double(field);
}

}  // namespace detail

// Column order is fixed: gamma[,second],p_star,pi_star,total_production,classification.
inline std::string to_csv(const SweepTable& table) {
  std::ostringstream out;
  out << "# " << table.metadata.dump() << "\n";
  out << "gamma," << (table.second_name.empty() ? "" : table.second_name + ",")
      << "p_star,pi_star,total_production,classification\n";
  for (const SweepRow& row : table.rows) {
    out << format_double(row.gamma) << ',';
    if (!table.second_name.empty()) {
      out << (row.second ? format_double(*row.second) : std::string()) << ',';
    }
    out << detail::opt_field(row.p_star) << ',' << detail::opt_field(row.pi_star) << ','
        << detail::opt_field(row.total_production) << ',' << to_string(row.kind) << "\n";
  }
  return out.str();
}

inline SweepTable from_csv(const std::string& text) {
  SweepTable table;
  std::istringstream in(text);
  std::string line;
  bool header_seen = false;
  bool has_second = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const size_t start = line.find_first_not_of(" \t", 1);
      if (start != std::string::npos && table.metadata.is_object() && table.metadata.empty()) {
        table.metadata = nlohmann::json::parse(line.substr(start));
      }
      continue;
    }
    const std::vector<std::string> fields = detail::split(line, ',');
    if (!header_seen) {
      header_seen = true;
      if (fields.size() == 6) {
        has_second = true;
        table.second_name = fields[1];
      } else if (fields.size() != 5) {
        throw std::invalid_argument("csv: unexpected header '" + line + "'");
      }
      continue;
    }
    if (fields.size() != (has_second ? 6u : 5u)) {
      throw std::invalid_argument("csv: wrong field count in '" + line + "'");
    }
    SweepRow row;
    size_t i = 0;
    row.gamma = parse_double(fields[i++]);
    if (has_second) row.second = detail::parse_opt(fields[i++]);
    row.p_star = detail::parse_opt(fields[i++]);
    row.pi_star = detail::parse_opt(fields[i++]);
    row.total_production = detail::parse_opt(fields[i++]);
    const auto kind = ess_kind_from_string(fields[i]);
    if (!kind) throw std::invalid_argument("csv: unknown classification '" + fields[i] + "'");
    row.kind = *kind;
    table.rows.push_back(row);
  }
  if (!header_seen) throw std::invalid_argument("csv: missing header row");
  return table;
}

inline nlohmann::json to_json(const SweepTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const SweepRow& row : table.rows) {
    nlohmann::json r = {{"gamma", row.gamma}, {"classification", to_string(row.kind)}};
    if (!table.second_name.empty() && row.second) r[table.second_name] = *row.second;
    if (row.p_star) r["p_star"] = *row.p_star;
    if (row.pi_star) r["pi_star"] = *row.pi_star;
    if (row.total_production) r["total_production"] = *row.total_production;
    rows.push_back(std::move(r));
  }
  nlohmann::json out = {{"rows", std::move(rows)}, {"metadata", table.metadata}};
  if (!table.second_name.empty()) out["second_axis"] = table.second_name;
  return out;
}

inline SweepTable from_json(const nlohmann::json& j) {
  SweepTable table;
  table.metadata = j.at("metadata");
  if (j.contains("second_axis")) table.second_name = j.at("second_axis").get<std::string>();
  for (const nlohmann::json& r : j.at("rows")) {
    SweepRow row;
    row.gamma = r.at("gamma").get<double>();
    if (!table.second_name.empty() && r.contains(table.second_name)) {
      row.second = r.at(table.second_name).get<double>();
    }
    if (r.contains("p_star")) row.p_star = r.at("p_star").get<double>();
    if (r.contains("pi_star")) row.pi_star = r.at("pi_star").get<double>();
    if (r.contains("total_production")) {
      row.total_production = r.at("total_production").get<double>();
    }
    const auto kind = ess_kind_from_string(r.at("classification").get<std::string>());
    if (!kind) throw std::invalid_argument("json: unknown classification");
    row.kind = *kind;
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace psgames

#endif  // PSGAMES_IO_HPP

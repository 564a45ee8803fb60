#pragma once

// JSON and CSV renderings of the result types, and atomic file output.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include <json.hpp>

#include "horofourier/errors.hpp"
#include "horofourier/euclidean.hpp"
#include "horofourier/invariant_operators.hpp"
#include "horofourier/paley_wiener.hpp"

namespace horofourier {

using Json = nlohmann::ordered_json;

// Shortest round-trippable decimal form; identical on every run.
inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  template <class... Cells>
  void add(const Cells&... cells) {
    std::vector<std::string> row{cell(cells)...};
    if (row.size() != header_.size()) throw ConfigError("CsvTable: row width differs from the header");
    rows_.push_back(std::move(row));
  }

  std::size_t size() const { return rows_.size(); }

  std::string str() const {
    std::string out;
    auto line = [&out](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + r[i];
      out += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
  }

 private:
  static std::string cell(double v) { return format_number(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  static std::string cell(const char* s) { return cell(std::string(s)); }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Writes to a sibling temporary and renames it over `path`.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

inline Json to_json(const RoundTripError& e) { return {{"sup_err", e.sup_error}, {"l2_err", e.l2_error}}; }

inline Json to_json(const SeminormReport& r) {
  Json j{{"order", r.order},       {"radius", r.radius},   {"value", r.value},
         {"grid_value", r.grid_value}, {"argmax", {r.argmax.real(), r.argmax.imag()}},
         {"at_real_boundary", r.at_real_boundary}, {"diverged", r.diverged}};
  if (r.refinement_change) j["refinement_change"] = *r.refinement_change;
  return j;
}

inline Json to_json(const PWReport& r) {
  Json sn = Json::array();
  for (const auto& [n, v] : r.seminorms) sn.push_back({{"N", n}, {"value", v}});
  Json details = Json::array();
  for (const auto& d : r.details) details.push_back(to_json(d));
  return {{"radius", r.radius},
          {"seminorms", sn},
          {"exponential_type", r.exponential_type},
          {"weyl_defect", r.weyl_defect},
          {"details", details}};
}

inline Json to_json(const ModeFactorizationReport& r) {
  Json tails = Json::array(), types = Json::array();
  for (const auto& [k, v] : r.tail_norms) tails.push_back({{"K", k}, {"value", v}});
  for (const auto& [k, t] : r.per_mode_types) types.push_back({{"mode", k}, {"type", t}});
  return {{"modes_active", r.modes_active}, {"tail_norms", tails}, {"per_mode_types", types}};
}

template <int Dim>
Json to_json(const SolveResult<Dim>& r) {
  return {{"residual", r.residual},
          {"symbol_min", r.symbol_min},
          {"support_radius_in", r.support_in.radius},
          {"support_radius_out", r.support_out.radius}};
}

inline Json to_json(const Diagnostics& d) { return Json(d.warnings); }

}  // namespace horofourier

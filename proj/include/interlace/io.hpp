#pragma once

// CSV / JSON emission. Floats carry 9 significant digits everywhere.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include <json.hpp>

#include "chamber.hpp"
#include "stats.hpp"

#ifndef INTERLACE_VERSION
#define INTERLACE_VERSION "unknown"
#endif

namespace interlace {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = INTERLACE_VERSION;

inline std::string fmt9(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

/// v rounded to 9 significant digits; JSON numbers go through this.
inline Json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::stod(fmt9(v));
}

inline Json json_numbers(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(json_number(x));
  return a;
}

inline Json to_json(const MetaValue& m) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return json_number(v);
        } else {
          return v;
        }
      },
      m);
}

inline Json to_json(const TestReport& r) {
  Json j;
  j["name"] = r.name;
  j["statistic"] = json_number(r.statistic);
  j["p_value"] = r.p_value ? json_number(*r.p_value) : Json(nullptr);
  j["threshold"] = json_number(r.threshold);
  j["passed"] = r.passed;
  Json meta = Json::object();
  for (const auto& [k, v] : r.meta) meta[k] = to_json(v);
  j["meta"] = std::move(meta);
  return j;
}

inline Json to_json(const BoundaryPoint& w) {
  Json j;
  j["alphas"] = json_numbers(w.alphas());
  j["gamma"] = json_number(w.gamma());
  return j;
}

/// RFC-4180 quoting, only when needed.
inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os << ',';
    os << csv_field(fields[i]);
  }
  os << '\n';
}

inline std::vector<std::string> indexed_header(std::string_view prefix, std::size_t n) {
  std::vector<std::string> h;
  for (std::size_t i = 1; i <= n; ++i) h.push_back(std::string(prefix) + std::to_string(i));
  return h;
}

/// Header prefix1..prefixN, then one row per point.
inline void write_points_csv(std::ostream& os, const std::vector<OrderedPoint>& pts, std::string_view prefix,
                             std::size_t dim) {
  write_csv_row(os, indexed_header(prefix, dim));
  std::vector<std::string> row(dim);
  for (const auto& p : pts) {
    for (std::size_t i = 0; i < dim; ++i) row[i] = fmt9(p[i]);
    write_csv_row(os, row);
  }
}

inline Json points_json(const std::vector<OrderedPoint>& pts) {
  Json a = Json::array();
  for (const auto& p : pts) a.push_back(json_numbers(p.vec()));
  return a;
}

}  // namespace interlace

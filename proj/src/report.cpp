#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

#include "fpp/io.hpp"

namespace fpp {

namespace {

nlohmann::json number(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string report_json(const ExperimentReport& r) {
  using nlohmann::json;
  json j;
  j["format"] = kReportFormat;
  j["kind"] = r.kind;
  json cfg = json::object();
  for (const auto& [k, v] : r.config) cfg[k] = v;
  j["config"] = cfg;
  json aggs = json::array();
  for (const auto& s : r.aggregates)
    aggs.push_back({{"name", s.name},
                    {"value", number(s.value)},
                    {"stderr", number(s.std_err)},
                    {"lo", number(s.interval.lo)},
                    {"hi", number(s.interval.hi)},
                    {"n", s.n}});
  j["aggregates"] = aggs;
  json gates = json::array();
  for (const auto& g : r.gates) gates.push_back({{"name", g.name}, {"passed", g.passed}, {"detail", g.detail}});
  j["gates"] = gates;
  j["passed"] = r.passed();
  json counters = json::object();
  for (const auto& [k, v] : r.counters) counters[k] = number(v);
  j["counters"] = counters;
  j["notes"] = r.notes;
  j["columns"] = r.columns;
  j["trial_rows"] = r.rows.size();
  j["wall_seconds"] = r.wall_seconds;
  return j.dump(2) + "\n";
}

std::string report_csv(const ExperimentReport& r) {
  std::ostringstream out;
  for (std::size_t k = 0; k < r.columns.size(); ++k) out << (k ? "," : "") << r.columns[k];
  out << '\n';
  for (const auto& row : r.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << format_double(row[k]);
    out << '\n';
  }
  return out.str();
}

}  // namespace fpp

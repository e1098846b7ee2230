#include "mapipro/report_io.hpp"

#include <cstdio>
#include <limits>

namespace mapipro {

namespace {

ordered_json edp_to_json(const ScaledEdp& edp) {
  if (edp.num_cycles == edp.den_cycles &&
      edp.stable_edp <= std::numeric_limits<u64>::max())
    return static_cast<u64>(edp.stable_edp);
  return edp.value();
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

ordered_json simulation_to_json(const SimulationReport& report) {
  ordered_json j;
  j["total_energy_nj"] = report.total_energy_nj;
  j["total_cycles"] = report.total_cycles;
  j["nc_execute"] = report.nc_execute;
  j["nc_backup"] = report.nc_backup;
  j["nc_restore"] = report.nc_restore;
  j["eta"] = report.eta;
  j["progress"] = report.progress;
  j["edp_system"] = edp_to_json(report.edp_system);
  j["failures_served"] = report.failures_served;
  j["completed"] = report.completed;
  j["reexecutions"] = report.reexecutions;
  return j;
}

ordered_json comparison_to_json(const ComparisonReport& report) {
  ordered_json j;
  j["normalization"] = report.normalization;
  j["rows"] = ordered_json::array();
  for (const auto& row : report.rows) {
    ordered_json r;
    r["strategy"] = row.strategy;
    if (row.infeasible) {
      r["infeasible"] = true;
      r["error"] = row.message;
      r["completed"] = false;
    } else {
      r["energy_nj"] = row.report.total_energy_nj;
      r["cycles"] = row.report.total_cycles;
      r["edp"] = edp_to_json(row.report.edp_system);
      r["eta"] = row.report.eta;
      r["progress"] = row.report.progress;
      r["normalized_edp"] = row.normalized_edp;
      r["completed"] = row.report.completed;
      r["reexecutions"] = row.report.reexecutions;
    }
    if (!row.config.empty()) r["config"] = row.config;
    j["rows"].push_back(std::move(r));
  }
  return j;
}

std::string comparison_to_csv(const ComparisonReport& report) {
  std::string out =
      "strategy,energy_nj,cycles,edp,eta,progress,normalized_edp,completed,"
      "reexecutions\n";
  for (const auto& row : report.rows) {
    if (row.infeasible) {
      out += row.strategy + ",,,,,,,false,\n";
      continue;
    }
    out += row.strategy + ",";
    out += std::to_string(row.report.total_energy_nj) + ",";
    out += std::to_string(row.report.total_cycles) + ",";
    out += format_double(row.report.edp_system.value()) + ",";
    out += format_double(row.report.eta) + ",";
    out += format_double(row.report.progress) + ",";
    out += format_double(row.normalized_edp) + ",";
    out += row.report.completed ? "true," : "false,";
    out += std::to_string(row.report.reexecutions) + "\n";
  }
  return out;
}

}  // namespace mapipro

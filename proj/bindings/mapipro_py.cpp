#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mapipro/instance_gen.hpp"
#include "mapipro/json_io.hpp"
#include "mapipro/linker_emitter.hpp"
#include "mapipro/simulator.hpp"
#include "mapipro/solver.hpp"

namespace py = pybind11;

namespace {

using namespace mapipro;

py::object u128_to_pyint(u128 v) {
  return py::reinterpret_steal<py::object>(
      PyLong_FromString(to_decimal(v).c_str(), nullptr, 10));
}

py::dict scaled_edp_to_dict(const ScaledEdp& edp) {
  py::dict d;
  d["stable_edp"] = u128_to_pyint(edp.stable_edp);
  d["num_cycles"] = edp.num_cycles;
  d["den_cycles"] = edp.den_cycles;
  d["value"] = edp.value();
  return d;
}

Placement placement_from_dict(const py::dict& assignments,
                              const std::string& application) {
  Placement p;
  p.application = application;
  for (const auto& item : assignments)
    p.by_id[py::cast<std::string>(item.first)] =
        region_from_string(py::cast<std::string>(item.second));
  return p;
}

py::dict placement_to_dict(const Placement& p) {
  py::dict d;
  for (const auto& [id, region] : p.by_id)
    d[py::str(id)] = to_string(region);
  return d;
}

PowerModel make_power(u64 failures, const std::string& edp_scaling) {
  PowerModel power;
  power.failure_count = failures;
  power.edp_scaling = edp_scaling_from_string(edp_scaling);
  return power;
}

SolveOptions make_options(u64 failures, bool backup_region,
                          const std::string& edp_scaling,
                          const std::string& latency_mode,
                          const std::string& algorithm, double time_limit_s) {
  SolveOptions options;
  options.latency_mode = latency_mode_from_string(latency_mode);
  options.power = make_power(failures, edp_scaling);
  options.backup_region = backup_region;
  options.time_limit_s = time_limit_s;
  options.algorithm = algorithm_from_string(algorithm);
  return options;
}

py::dict result_to_dict(const SolveResult& result) {
  py::dict d;
  d["placement"] = placement_to_dict(result.placement);
  d["objective"] = result.objective.value();
  d["objective_exact"] = scaled_edp_to_dict(result.objective);
  d["proven_optimal"] = result.proven_optimal;
  d["timed_out"] = result.timed_out;
  d["nodes_explored"] = result.nodes_explored;
  return d;
}

py::dict report_to_dict(const SimulationReport& report) {
  py::dict d;
  d["total_energy_nj"] = report.total_energy_nj;
  d["total_cycles"] = report.total_cycles;
  d["nc_execute"] = report.nc_execute;
  d["nc_backup"] = report.nc_backup;
  d["nc_restore"] = report.nc_restore;
  d["eta"] = report.eta;
  d["progress"] = report.progress;
  d["edp_system"] = report.edp_system.value();
  d["edp_system_exact"] = scaled_edp_to_dict(report.edp_system);
  d["failures_served"] = report.failures_served;
  d["completed"] = report.completed;
  d["reexecutions"] = report.reexecutions;
  return d;
}

}  // namespace

PYBIND11_MODULE(_mapipro, m) {
  m.doc() =
      "EDP-optimal SRAM/FRAM placement, intermittent-power simulation, and "
      "linker fragment emission";

  // Translators run newest-first, so register the base before the derived
  // class to keep InfeasibleError from degrading into the base Error.
  py::register_exception<Error>(m, "Error");
  py::register_exception<InfeasibleError>(m, "InfeasibleError");

  py::class_<AppProfile>(m, "AppProfile")
      .def_readonly("application", &AppProfile::application)
      .def_property_readonly(
          "item_ids",
          [](const AppProfile& p) {
            std::vector<std::string> ids;
            for (const auto& item : flatten(p)) ids.push_back(item.id);
            return ids;
          })
      .def("__repr__", [](const AppProfile& p) {
        return "<AppProfile '" + p.application + "': " +
               std::to_string(p.globals.size()) + " globals, " +
               std::to_string(p.functions.size()) + " functions>";
      });

  py::class_<Device>(m, "Device")
      .def_property_readonly("regions",
                             [](const Device& d) {
                               std::vector<std::string> out;
                               for (const auto& r : d.regions)
                                 out.push_back(to_string(r.id));
                               return out;
                             })
      .def("__repr__", [](const Device& d) {
        std::string s = "<Device:";
        for (const auto& r : d.regions)
          s += " " + to_string(r.id) + "=" + std::to_string(r.capacity_bytes) +
               "B";
        return s + ">";
      });

  m.def("load_profile", &load_profile, py::arg("path"));
  m.def("load_device", &load_device, py::arg("path"));
  m.def(
      "profile_from_json",
      [](const std::string& text) {
        return parse_profile(nlohmann::json::parse(text));
      },
      py::arg("text"));
  m.def(
      "device_from_json",
      [](const std::string& text) {
        return parse_device(nlohmann::json::parse(text));
      },
      py::arg("text"));
  m.def("default_fr6989", &default_fr6989);
  m.def("default_f5529", &default_f5529);
  m.def("random_profile", &random_profile, py::arg("seed"),
        py::arg("max_items"));

  m.def(
      "solve",
      [](const AppProfile& profile, const Device& device, u64 failures,
         bool backup_region, const std::string& edp_scaling,
         const std::string& latency_mode, const std::string& algorithm,
         double time_limit_s) {
        return result_to_dict(
            solve(profile, device,
                  make_options(failures, backup_region, edp_scaling,
                               latency_mode, algorithm, time_limit_s)));
      },
      py::arg("profile"), py::arg("device"), py::arg("failures") = 0,
      py::arg("backup_region") = true,
      py::arg("edp_scaling") = "inverse_eta",
      py::arg("latency_mode") = "per_region",
      py::arg("algorithm") = "branch_and_bound",
      py::arg("time_limit_s") = 60.0);

  m.def(
      "simulate",
      [](const AppProfile& profile, const Device& device,
         const py::dict& placement, u64 failures, bool backup_region,
         const std::string& edp_scaling, const std::string& latency_mode) {
        return report_to_dict(
            simulate(placement_from_dict(placement, profile.application),
                     profile, device, make_power(failures, edp_scaling),
                     backup_region, latency_mode_from_string(latency_mode)));
      },
      py::arg("profile"), py::arg("device"), py::arg("placement"),
      py::arg("failures") = 0, py::arg("backup_region") = true,
      py::arg("edp_scaling") = "inverse_eta",
      py::arg("latency_mode") = "per_region");

  m.def(
      "compare",
      [](const AppProfile& profile, const Device& device,
         const std::vector<std::string>& strategies, u64 failures,
         const std::string& normalize, const std::string& scenario,
         const std::string& edp_scaling, const std::string& latency_mode) {
        CompareOptions options;
        options.strategies = strategies;
        options.normalize = normalize;
        if (!scenario.empty())
          options.scenario = scenario_from_string(scenario);
        options.latency_mode = latency_mode_from_string(latency_mode);
        const ComparisonReport report = compare_strategies(
            profile, device, make_power(failures, edp_scaling), options);
        py::list rows;
        for (const auto& row : report.rows) {
          py::dict d;
          d["strategy"] = row.strategy;
          d["infeasible"] = row.infeasible;
          if (row.infeasible) {
            d["error"] = row.message;
          } else {
            d["energy_nj"] = row.report.total_energy_nj;
            d["cycles"] = row.report.total_cycles;
            d["edp"] = row.report.edp_system.value();
            d["eta"] = row.report.eta;
            d["progress"] = row.report.progress;
            d["normalized_edp"] = row.normalized_edp;
            d["completed"] = row.report.completed;
            d["reexecutions"] = row.report.reexecutions;
          }
          if (!row.config.empty()) d["config"] = row.config;
          rows.append(std::move(d));
        }
        return rows;
      },
      py::arg("profile"), py::arg("device"), py::arg("strategies"),
      py::arg("failures") = 0, py::arg("normalize") = "fram-only",
      py::arg("scenario") = "", py::arg("edp_scaling") = "inverse_eta",
      py::arg("latency_mode") = "per_region");

  m.def(
      "edp_stable",
      [](const AppProfile& profile, const Device& device,
         const py::dict& placement, const std::string& latency_mode) {
        const CostBreakdown breakdown = edp_stable(
            placement_from_dict(placement, profile.application), profile,
            device, latency_mode_from_string(latency_mode));
        py::dict d;
        d["energy_nj"] = breakdown.energy_nj;
        d["cycles"] = breakdown.cycles;
        d["edp"] = u128_to_pyint(breakdown.edp);
        return d;
      },
      py::arg("profile"), py::arg("device"), py::arg("placement"),
      py::arg("latency_mode") = "per_region");

  m.def(
      "emit_linker",
      [](const AppProfile& profile, const py::dict& placement) {
        const LinkerOutput out = emit_linker(
            placement_from_dict(placement, profile.application), profile);
        return py::make_tuple(out.cmd, out.pragmas);
      },
      py::arg("profile"), py::arg("placement"));

  m.def(
      "emit_placement_table",
      [](const AppProfile& profile, const py::dict& placement) {
        return emit_placement_table(
            placement_from_dict(placement, profile.application), profile);
      },
      py::arg("profile"), py::arg("placement"));
}

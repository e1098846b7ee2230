#include "mapipro/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mapipro {

namespace {

u64 sram_occupancy(const Placement& placement,
                   const std::vector<PlacementItem>& items) {
  u64 bytes = 0;
  for (const auto& it : items)
    if (placement.region_of(it.id) == Region::SRAM)
      bytes = checked_add(bytes, it.size_bytes, "SRAM occupancy");
  return bytes;
}

}  // namespace

void check_placement_fits(const Placement& placement,
                          const std::vector<PlacementItem>& items,
                          const Device& device) {
  std::map<Region, u64> load;
  for (const auto& it : items) {
    const Region r = placement.region_of(it.id);
    load[r] = checked_add(load[r], it.size_bytes, "region load");
  }
  for (const auto& [region, bytes] : load) {
    const MemRegion& mem = device.require(region);
    if (bytes > mem.capacity_bytes)
      throw InfeasibleError("placement loads " + std::to_string(bytes) +
                            " B into " + to_string(region) +
                            " whose capacity is " +
                            std::to_string(mem.capacity_bytes) + " B");
  }
}

SimulationReport simulate(const Placement& placement, const AppProfile& profile,
                          const Device& device, const PowerModel& power,
                          bool backup_region, LatencyMode mode) {
  device.validate();
  const std::vector<PlacementItem> items = flatten(profile);
  placement.validate(items);
  const CostBreakdown stable = edp_stable_items(placement, items, device, mode);
  const u64 failures = power.failure_count;

  SimulationReport report;
  if (backup_region) {
    const MemRegion& fb = device.require(Region::FRAM_B);
    const u64 sram_bytes = sram_occupancy(placement, items);
    const u64 volume =
        checked_add(sram_bytes, device.register_file_bytes, "backup volume");
    if (volume > fb.capacity_bytes)
      throw InfeasibleError(
          "backup of " + std::to_string(volume) +
          " B (SRAM occupancy + registers) does not fit the backup region (" +
          std::to_string(fb.capacity_bytes) + " B)");
    // Failures hit at cycle marks k*nc_execute/(failures+1); evenly spaced
    // checkpoints leave the totals independent of the mark positions.
    const u64 per_backup =
        checked_mul(volume, device.backup_cycles_per_byte, "backup cycles");
    const u64 per_restore =
        checked_mul(volume, device.restore_cycles_per_byte, "restore cycles");
    report.nc_execute = stable.cycles;
    report.nc_backup = checked_mul(failures, per_backup, "backup cycles");
    report.nc_restore = checked_mul(failures, per_restore, "restore cycles");
    report.total_cycles = checked_add(
        report.nc_execute,
        checked_add(report.nc_backup, report.nc_restore, "checkpoint cycles"),
        "total cycles");
    const u64 backup_energy = checked_mul(
        failures,
        checked_mul(volume, device.backup_energy_per_byte_nj, "backup energy"),
        "backup energy");
    const u64 restore_energy = checked_mul(
        failures,
        checked_mul(volume, device.restore_energy_per_byte_nj,
                    "restore energy"),
        "restore energy");
    report.total_energy_nj = checked_add(
        stable.energy_nj,
        checked_add(backup_energy, restore_energy, "checkpoint energy"),
        "total energy");
    report.edp_system = scale_edp(stable.edp, report.nc_execute,
                                  report.nc_backup, report.nc_restore,
                                  power.edp_scaling);
    report.reexecutions = 0;
  } else {
    const u64 runs = checked_add(failures, 1, "run count");
    report.nc_execute = checked_mul(runs, stable.cycles, "execute cycles");
    report.nc_backup = 0;
    report.nc_restore = 0;
    report.total_cycles = report.nc_execute;
    report.total_energy_nj =
        checked_mul(runs, stable.energy_nj, "execute energy");
    // Every restart repeats the whole run, so the charged EDP is the
    // stable EDP once per execution; there is no checkpoint traffic to
    // scale by.
    report.edp_system = ScaledEdp::unscaled(
        checked_mul128(runs, stable.edp, "EDP total"));
    report.reexecutions = failures;
  }
  report.failures_served = failures;
  report.completed = true;
  if (report.nc_backup == 0 && report.nc_restore == 0) {
    report.eta = 1.0;
  } else {
    report.eta = eta(report.nc_execute, report.nc_backup, report.nc_restore);
  }
  report.progress = report.eta;
  return report;
}

double progress_of(const SimulationReport& report) { return report.eta; }

namespace {

const char* kConfigs[8] = {"SSS", "SSF", "SFS", "SFF",
                           "FSS", "FSF", "FFS", "FFF"};

}  // namespace

EnergyTable synthesize_energy_table(const AppProfile& profile,
                                    const Device& device,
                                    const PowerModel& power,
                                    LatencyMode mode) {
  const std::vector<PlacementItem> items = flatten(profile);
  EnergyTable table;
  for (const char* config : kConfigs) {
    EnergyTableRow row;
    row.config = config;
    try {
      const Placement p = empirical_placement(config, profile, device);
      check_placement_fits(p, items, device);
      const CostBreakdown stable = edp_stable_items(p, items, device, mode);
      row.energy_stable = static_cast<double>(stable.energy_nj);
      const SimulationReport sim =
          simulate(p, profile, device, power, /*backup_region=*/true, mode);
      row.energy_unstable = static_cast<double>(sim.total_energy_nj);
    } catch (const InfeasibleError&) {
      row.energy_stable = std::numeric_limits<double>::infinity();
      row.energy_unstable = std::numeric_limits<double>::infinity();
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

namespace {

ComparisonRow run_strategy(const std::string& name, const AppProfile& profile,
                           const Device& device, const PowerModel& power,
                           const CompareOptions& options) {
  ComparisonRow row;
  row.strategy = name;
  SolveOptions solve_options;
  solve_options.latency_mode = options.latency_mode;
  solve_options.power = power;
  solve_options.backup_region = true;
  solve_options.time_limit_s = options.time_limit_s;

  const std::vector<PlacementItem> items = flatten(profile);
  try {
    Placement placement;
    bool backup_region = true;
    if (name == "proposed") {
      placement = solve(profile, device, solve_options).placement;
    } else if (name == "empirical") {
      const EnergyTable table =
          options.energy_table
              ? *options.energy_table
              : synthesize_energy_table(profile, device, power,
                                        options.latency_mode);
      const Scenario scenario = options.scenario.value_or(
          power.failure_count == 0 ? Scenario::Stable : Scenario::Unstable);
      row.config = empirical_baseline(table, scenario);
      placement = empirical_placement(row.config, profile, device);
    } else if (name == "sram-fram-ilp-no-br") {
      placement = baseline_placement(BaselineKind::SramFramIlpNoBr, profile,
                                     device, solve_options)
                      .placement;
      backup_region = false;
    } else {
      placement = baseline_placement(baseline_kind_from_string(name), profile,
                                     device, solve_options)
                      .placement;
    }
    check_placement_fits(placement, items, device);
    row.report = simulate(placement, profile, device, power, backup_region,
                          options.latency_mode);
  } catch (const InfeasibleError& e) {
    row.infeasible = true;
    row.message = e.what();
  } catch (const ValidationError& e) {
    row.infeasible = true;
    row.message = e.what();
  }
  return row;
}

}  // namespace

ComparisonReport compare_strategies(const AppProfile& profile,
                                    const Device& device,
                                    const PowerModel& power,
                                    const CompareOptions& options) {
  static const char* kKnown[] = {"proposed",       "fram-only",
                                 "sram-only",      "empirical",
                                 "sram-flash-ilp", "sram-fram-ilp-no-br"};
  for (const auto& s : options.strategies) {
    if (std::find_if(std::begin(kKnown), std::end(kKnown), [&](const char* k) {
          return s == k;
        }) == std::end(kKnown))
      throw ParseError("unknown strategy '" + s + "'");
  }

  ComparisonReport report;
  report.normalization = options.normalize;
  for (const auto& name : options.strategies)
    report.rows.push_back(run_strategy(name, profile, device, power, options));

  const ComparisonRow* norm = nullptr;
  for (const auto& row : report.rows)
    if (row.strategy == options.normalize) norm = &row;
  if (!norm)
    throw ValidationError("normalization strategy '" + options.normalize +
                          "' is not among the requested strategies");
  if (norm->infeasible)
    throw InfeasibleError("normalization strategy '" + options.normalize +
                          "' is infeasible: " + norm->message);
  const double norm_edp = norm->report.edp_system.value();
  if (!(norm_edp > 0.0))
    throw ValidationError("normalization strategy '" + options.normalize +
                          "' has non-positive EDP");
  for (auto& row : report.rows) {
    if (row.infeasible) continue;
    row.normalized_edp =
        &row == norm ? 1.0 : row.report.edp_system.value() / norm_edp;
  }
  return report;
}

}  // namespace mapipro

#pragma once

#include <optional>

#include "mapipro/solver.hpp"

namespace mapipro {

struct SimulationReport {
  u64 total_energy_nj = 0;
  u64 total_cycles = 0;
  u64 nc_execute = 0;
  u64 nc_backup = 0;
  u64 nc_restore = 0;
  double eta = 1.0;
  double progress = 1.0;
  ScaledEdp edp_system;
  u64 failures_served = 0;
  bool completed = true;
  u64 reexecutions = 0;
};

/// Replays the application under failure_count evenly spaced power
/// failures.
///
/// With the backup region: every failure checkpoints the SRAM occupancy
/// plus the register file into FRAM_B (rejected if that volume does not
/// fit) and restores it on resume, preserving forward progress, so
/// execute cycles stay at the stable run's count while backup/restore
/// cycles and energy accrue per byte.
///
/// Without it: every failure discards progress and the application
/// restarts, charging (failure_count + 1) full executions and zero
/// checkpoint traffic.
SimulationReport simulate(const Placement& placement, const AppProfile& profile,
                          const Device& device, const PowerModel& power,
                          bool backup_region,
                          LatencyMode mode = LatencyMode::PerRegion);

/// Useful-work fraction of the run; identical to the report's eta.
double progress_of(const SimulationReport& report);

/// Raw per-region byte loads checked against raw capacities.
void check_placement_fits(const Placement& placement,
                          const std::vector<PlacementItem>& items,
                          const Device& device);

/// Evaluates all eight {S,F}^3 section configs on the cost model:
/// energy_stable is the stable-power total energy, energy_unstable the
/// backup-region simulation's total energy under `power`. Configs that
/// violate a capacity get +infinity in both columns.
EnergyTable synthesize_energy_table(const AppProfile& profile,
                                    const Device& device,
                                    const PowerModel& power,
                                    LatencyMode mode = LatencyMode::PerRegion);

struct ComparisonRow {
  std::string strategy;
  bool infeasible = false;
  std::string message;      // why the strategy could not run
  std::string config;       // chosen {S,F}^3 letters (empirical only)
  SimulationReport report;
  double normalized_edp = 0.0;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  std::string normalization;
};

struct CompareOptions {
  std::vector<std::string> strategies;  // dash-separated names
  std::string normalize = "fram-only";
  std::optional<Scenario> scenario;     // empirical column; defaults by P
  std::optional<EnergyTable> energy_table;
  LatencyMode latency_mode = LatencyMode::PerRegion;
  double time_limit_s = 60.0;
};

/// One row per requested strategy (proposed, fram-only, sram-only,
/// empirical, sram-flash-ilp, sram-fram-ilp-no-br): choose a placement,
/// simulate it, and normalize EDP against the named strategy's row.
/// Strategies that cannot run on the device or do not fit get an
/// infeasibility marker instead of aborting the report; the normalization
/// strategy itself must be present and feasible.
ComparisonReport compare_strategies(const AppProfile& profile,
                                    const Device& device,
                                    const PowerModel& power,
                                    const CompareOptions& options);

}  // namespace mapipro

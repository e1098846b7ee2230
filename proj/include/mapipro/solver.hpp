#pragma once

#include "mapipro/cost_model.hpp"

namespace mapipro {

struct SolveResult {
  Placement placement;
  ScaledEdp objective;
  bool proven_optimal = false;
  bool timed_out = false;
  u64 nodes_explored = 0;
};

enum class BaselineKind { FramOnly, SramOnly, SramFlashIlp, SramFramIlpNoBr };

std::string to_string(BaselineKind k);
BaselineKind baseline_kind_from_string(const std::string& s);

/// Exact EDP-minimizing placement over the device's placement regions.
///
/// Constraints: one region per item; per-region byte capacities; with the
/// backup region enabled, SRAM occupancy + register_file_bytes must fit
/// FRAM_B. The objective is edp_system where backup/restore cycles are
/// failure_count * (sram bytes used + register bytes) * per-byte costs;
/// with the backup region disabled the objective is the stable EDP
/// (restart accounting is the simulator's job).
///
/// Branch and bound over items ordered by decreasing region-cost spread,
/// bounded by per-item minima plus a fractional relaxation of the SRAM
/// capacity; all comparisons in exact integer arithmetic. Ties in the
/// objective resolve to the lexicographically smallest assignment vector
/// in flatten order with regions ranked SRAM < FRAM_N < FLASH, which the
/// exhaustive oracle reproduces independently.
SolveResult solve(const AppProfile& profile, const Device& device,
                  const SolveOptions& options);

/// Enumerates every assignment (guarded to <= 24 items) and returns the
/// exact argmin with the same tie-break as solve().
SolveResult exhaustive_oracle(const AppProfile& profile, const Device& device,
                              const SolveOptions& options);

/// Keeps only the named regions (plus their backup parameters).
Device filtered_device(const Device& device,
                       std::initializer_list<Region> keep);

/// Reference strategies: fram_only / sram_only force every item into one
/// region; sram_flash_ilp re-solves with FLASH as the only non-volatile
/// placement region; sram_fram_ilp_no_br re-solves SRAM+FRAM_N with the
/// backup region disabled.
SolveResult baseline_placement(BaselineKind kind, const AppProfile& profile,
                               const Device& device,
                               const SolveOptions& options);

/// Argmin config over the scenario's energy column. Ties prefer more 'S'
/// letters, then the 'S'-before-'F' lexicographic order.
std::string empirical_baseline(const EnergyTable& table, Scenario scenario);

/// Expands a 3-letter (text, data, stack) config into a placement: every
/// function's sections follow their letters; globals follow the data
/// letter. 'F' means the device's first non-volatile placement region.
Placement empirical_placement(const std::string& config,
                              const AppProfile& profile, const Device& device);

}  // namespace mapipro

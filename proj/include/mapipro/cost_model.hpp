#pragma once

#include <map>

#include "mapipro/profile.hpp"

namespace mapipro {

struct ItemCost {
  u64 energy_nj = 0;
  u64 cycles = 0;
};

/// Stable-power evaluation of a placement. `edp` is the sum of per-item
/// energy x cycles products, so it is not in general energy_nj x cycles.
struct CostBreakdown {
  u64 energy_nj = 0;
  u64 cycles = 0;
  u128 edp = 0;
  std::map<std::string, ItemCost> per_item;
};

/// (read_energy * reads + write_energy * writes) * weight.
/// The backup region is not a placement target; passing it throws ModelError.
u64 item_energy(const PlacementItem& item, const MemRegion& region);

/// fixed: base_cycles * weight (region-independent, the literal
/// optimization-model cycle count). per_region: adds the region's extra
/// (cycles_per_access - 1) cycles for every access before weighting.
u64 item_cycles(const PlacementItem& item, const MemRegion& region,
                LatencyMode mode);

CostBreakdown edp_stable(const Placement& placement, const AppProfile& profile,
                         const Device& device,
                         LatencyMode mode = LatencyMode::PerRegion);

/// Same evaluation over an already-flattened item list.
CostBreakdown edp_stable_items(const Placement& placement,
                               const std::vector<PlacementItem>& items,
                               const Device& device, LatencyMode mode);

/// nc_execute / (nc_backup + nc_execute + nc_restore), in (0, 1].
/// nc_execute = 0 is undefined progress and throws ModelError.
double eta(u64 nc_execute, u64 nc_backup, u64 nc_restore);

/// Applies the power-failure scaling factor to a stable EDP total.
/// eta_literal multiplies by eta; inverse_eta (the default elsewhere)
/// divides by eta, charging checkpoint traffic as overhead. With zero
/// backup+restore cycles both collapse to the stable EDP.
ScaledEdp scale_edp(u128 stable_edp, u64 nc_execute, u64 nc_backup,
                    u64 nc_restore, EdpScaling scaling);

/// Full-system EDP for a placement given backup/restore cycle totals
/// (computed by the solver estimate or the simulator schedule).
ScaledEdp edp_system(const Placement& placement, const AppProfile& profile,
                     const Device& device, const PowerModel& power,
                     u64 backup_cycles, u64 restore_cycles,
                     LatencyMode mode = LatencyMode::PerRegion);

}  // namespace mapipro

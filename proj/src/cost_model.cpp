#include "mapipro/cost_model.hpp"

namespace mapipro {

u64 item_energy(const PlacementItem& item, const MemRegion& region) {
  if (region.id == Region::FRAM_B)
    throw ModelError("item '" + item.id +
                     "' evaluated against backup region FRAM_B");
  const u64 per_access =
      checked_add(checked_mul(region.read_energy_nj, item.reads, "item energy"),
                  checked_mul(region.write_energy_nj, item.writes, "item energy"),
                  "item energy");
  return checked_mul(per_access, item.weight, "item energy");
}

u64 item_cycles(const PlacementItem& item, const MemRegion& region,
                LatencyMode mode) {
  u64 per_call = item.base_cycles;
  if (mode == LatencyMode::PerRegion) {
    const u64 accesses = checked_add(item.reads, item.writes, "item cycles");
    per_call = checked_add(
        per_call,
        checked_mul(accesses, region.cycles_per_access - 1, "item cycles"),
        "item cycles");
  }
  return checked_mul(per_call, item.weight, "item cycles");
}

CostBreakdown edp_stable_items(const Placement& placement,
                               const std::vector<PlacementItem>& items,
                               const Device& device, LatencyMode mode) {
  CostBreakdown out;
  for (const auto& item : items) {
    const MemRegion& region = device.require(placement.region_of(item.id));
    ItemCost cost;
    cost.energy_nj = item_energy(item, region);
    cost.cycles = item_cycles(item, region, mode);
    out.energy_nj = checked_add(out.energy_nj, cost.energy_nj, "energy total");
    out.cycles = checked_add(out.cycles, cost.cycles, "cycle total");
    out.edp = checked_add128(
        out.edp,
        checked_mul128(cost.energy_nj, cost.cycles, "item EDP"), "EDP total");
    out.per_item.emplace(item.id, cost);
  }
  return out;
}

CostBreakdown edp_stable(const Placement& placement, const AppProfile& profile,
                         const Device& device, LatencyMode mode) {
  return edp_stable_items(placement, flatten(profile), device, mode);
}

double eta(u64 nc_execute, u64 nc_backup, u64 nc_restore) {
  if (nc_execute == 0)
    throw ModelError("undefined progress: zero execute cycles");
  const u64 total = checked_add(nc_backup, checked_add(nc_execute, nc_restore,
                                                       "intermittent cycles"),
                                "intermittent cycles");
  return static_cast<double>(nc_execute) / static_cast<double>(total);
}

ScaledEdp scale_edp(u128 stable_edp, u64 nc_execute, u64 nc_backup,
                    u64 nc_restore, EdpScaling scaling) {
  const u64 overhead = checked_add(nc_backup, nc_restore, "checkpoint cycles");
  if (overhead == 0) return ScaledEdp::unscaled(stable_edp);
  if (nc_execute == 0)
    throw ModelError("undefined progress: zero execute cycles");
  const u64 total = checked_add(nc_execute, overhead, "intermittent cycles");
  if (scaling == EdpScaling::EtaLiteral)
    return ScaledEdp{stable_edp, nc_execute, total};
  return ScaledEdp{stable_edp, total, nc_execute};
}

ScaledEdp edp_system(const Placement& placement, const AppProfile& profile,
                     const Device& device, const PowerModel& power,
                     u64 backup_cycles, u64 restore_cycles, LatencyMode mode) {
  const CostBreakdown stable = edp_stable(placement, profile, device, mode);
  return scale_edp(stable.edp, stable.cycles, backup_cycles, restore_cycles,
                   power.edp_scaling);
}

}  // namespace mapipro

#include "mapipro/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>

namespace mapipro {

std::string to_string(BaselineKind k) {
  switch (k) {
    case BaselineKind::FramOnly: return "fram_only";
    case BaselineKind::SramOnly: return "sram_only";
    case BaselineKind::SramFlashIlp: return "sram_flash_ilp";
    case BaselineKind::SramFramIlpNoBr: return "sram_fram_ilp_no_br";
  }
  throw ValidationError("unknown baseline kind enum value");
}

BaselineKind baseline_kind_from_string(const std::string& s) {
  std::string norm = s;
  std::replace(norm.begin(), norm.end(), '-', '_');
  if (norm == "fram_only") return BaselineKind::FramOnly;
  if (norm == "sram_only") return BaselineKind::SramOnly;
  if (norm == "sram_flash_ilp") return BaselineKind::SramFlashIlp;
  if (norm == "sram_fram_ilp_no_br") return BaselineKind::SramFramIlpNoBr;
  throw ParseError("unknown baseline strategy '" + s + "'");
}

namespace {

constexpr u64 kU64Max = std::numeric_limits<u64>::max();

u64 sat_add(u64 a, u64 b) {
  u64 r;
  return __builtin_add_overflow(a, b, &r) ? kU64Max : r;
}

u64 sat_mul(u64 a, u64 b) {
  u64 r;
  return __builtin_mul_overflow(a, b, &r) ? kU64Max : r;
}

struct RegionCost {
  u128 edp = 0;
  u64 cycles = 0;
};

/// Precomputed per-item, per-placement-region costs plus the capacity and
/// backup parameters one solve run needs.
struct Ctx {
  std::string application;
  std::vector<PlacementItem> items;
  std::vector<Region> pregions;  // rank order, SRAM first
  std::vector<u64> caps;         // effective capacities (SRAM shrunk by FRAM_B)
  std::vector<std::vector<RegionCost>> cost;  // [item][region index]
  u64 regs = 0;
  u64 failures = 0;  // 0 when the backup region is disabled
  u64 bcpb = 0;
  u64 rcpb = 0;
  EdpScaling scaling = EdpScaling::InverseEta;

  void backup_restore_cycles(u64 sram_bytes, u64& nc_b, u64& nc_r) const {
    if (failures == 0) {
      nc_b = nc_r = 0;
      return;
    }
    const u64 volume = checked_add(sram_bytes, regs, "backup volume");
    const u64 per_failure_b = checked_mul(volume, bcpb, "backup cycles");
    const u64 per_failure_r = checked_mul(volume, rcpb, "restore cycles");
    nc_b = checked_mul(failures, per_failure_b, "backup cycles");
    nc_r = checked_mul(failures, per_failure_r, "restore cycles");
  }
};

Ctx build_ctx(const AppProfile& profile, const Device& device,
              const SolveOptions& options) {
  device.validate();
  if (options.time_limit_s <= 0.0)
    throw ValidationError("time limit must be positive");
  Ctx ctx;
  ctx.application = profile.application;
  ctx.items = flatten(profile);
  if (ctx.items.empty())
    throw ValidationError("profile has no placement items");
  ctx.pregions = device.placement_regions();
  for (Region r : ctx.pregions)
    ctx.caps.push_back(device.require(r).capacity_bytes);
  ctx.regs = device.register_file_bytes;
  ctx.scaling = options.power.edp_scaling;
  if (options.backup_region) {
    const MemRegion& fb = device.require(Region::FRAM_B);
    if (ctx.regs > fb.capacity_bytes)
      throw InfeasibleError(
          "register file (" + std::to_string(ctx.regs) +
          " B) alone exceeds the backup region capacity (" +
          std::to_string(fb.capacity_bytes) + " B)");
    ctx.caps[0] = std::min(ctx.caps[0], fb.capacity_bytes - ctx.regs);
    ctx.failures = options.power.failure_count;
    ctx.bcpb = device.backup_cycles_per_byte;
    ctx.rcpb = device.restore_cycles_per_byte;
  }
  ctx.cost.resize(ctx.items.size());
  for (size_t i = 0; i < ctx.items.size(); ++i) {
    for (Region rid : ctx.pregions) {
      const MemRegion& region = device.require(rid);
      RegionCost c;
      const u64 energy = item_energy(ctx.items[i], region);
      c.cycles = item_cycles(ctx.items[i], region, options.latency_mode);
      c.edp = checked_mul128(energy, c.cycles, "item EDP");
      ctx.cost[i].push_back(c);
    }
  }
  u64 total_bytes = 0, total_caps = 0;
  for (const auto& it : ctx.items)
    total_bytes = checked_add(total_bytes, it.size_bytes, "item bytes");
  for (u64 c : ctx.caps) total_caps = sat_add(total_caps, c);
  if (total_bytes > total_caps)
    throw InfeasibleError("total item bytes (" + std::to_string(total_bytes) +
                          ") exceed total placement capacity (" +
                          std::to_string(total_caps) + ")");
  return ctx;
}

/// Exact objective of a complete assignment, or nullopt when it violates a
/// capacity constraint. assign[i] indexes ctx.pregions.
std::optional<ScaledEdp> evaluate_assignment(const Ctx& ctx,
                                             const std::vector<int>& assign) {
  std::vector<u64> load(ctx.pregions.size(), 0);
  u128 se = 0;
  u64 cycles = 0;
  for (size_t i = 0; i < ctx.items.size(); ++i) {
    const int r = assign[i];
    load[r] = checked_add(load[r], ctx.items[i].size_bytes, "region load");
    se = checked_add128(se, ctx.cost[i][r].edp, "EDP total");
    cycles = checked_add(cycles, ctx.cost[i][r].cycles, "cycle total");
  }
  for (size_t r = 0; r < load.size(); ++r)
    if (load[r] > ctx.caps[r]) return std::nullopt;
  u64 nc_b = 0, nc_r = 0;
  ctx.backup_restore_cycles(load[0], nc_b, nc_r);
  return scale_edp(se, cycles, nc_b, nc_r, ctx.scaling);
}

Placement assignment_to_placement(const Ctx& ctx,
                                  const std::vector<int>& assign) {
  Placement p;
  p.application = ctx.application;
  for (size_t i = 0; i < ctx.items.size(); ++i)
    p.by_id[ctx.items[i].id] = ctx.pregions[assign[i]];
  return p;
}

int wanting_cmp_mul(const u128& sa, u64 zb, const u128& sb, u64 za) {
  return wide_cmp(wide_mul(sa, zb, 1), wide_mul(sb, za, 1));
}

struct Search {
  const Ctx& ctx;
  int n;
  int nregions;
  std::vector<int> order;  // positions → item index, widest cost spread first
  std::vector<u128> suf_alt;     // suffix sums of cheapest non-SRAM EDP
  std::vector<u64> suf_min_cyc;  // suffix sums of per-item minimum cycles
  std::vector<u64> suf_max_cyc;  // saturating suffix sums of maximum cycles
  std::vector<u64> suf_size;     // saturating suffix sums of item sizes
  struct Wanting {
    int item;
    u128 savings;  // non-SRAM minimum EDP - SRAM EDP, > 0
    u64 size;
  };
  std::vector<Wanting> wanting;  // exact savings-density descending

  std::vector<int> assign;  // item index → region index, -1 while free
  std::vector<u64> rem;
  u128 part_se = 0;
  u64 part_cyc = 0;
  u64 part_sram = 0;

  bool have_inc = false;
  std::vector<int> inc_assign;
  ScaledEdp inc_obj;

  u64 nodes = 0;
  bool timed_out = false;
  std::chrono::steady_clock::time_point deadline;

  explicit Search(const Ctx& c, double time_limit_s)
      : ctx(c),
        n(static_cast<int>(c.items.size())),
        nregions(static_cast<int>(c.pregions.size())),
        assign(c.items.size(), -1),
        rem(c.caps) {
    deadline = std::chrono::steady_clock::now() +
               std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                   std::chrono::duration<double>(time_limit_s));
    order.resize(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::vector<u128> spread(n);
    for (int i = 0; i < n; ++i) {
      u128 lo = ctx.cost[i][0].edp, hi = ctx.cost[i][0].edp;
      for (int r = 1; r < nregions; ++r) {
        lo = std::min(lo, ctx.cost[i][r].edp);
        hi = std::max(hi, ctx.cost[i][r].edp);
      }
      spread[i] = hi - lo;
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (spread[a] != spread[b]) return spread[a] > spread[b];
      return a < b;
    });

    suf_alt.assign(n + 1, 0);
    suf_min_cyc.assign(n + 1, 0);
    suf_max_cyc.assign(n + 1, 0);
    suf_size.assign(n + 1, 0);
    for (int k = n - 1; k >= 0; --k) {
      const int i = order[k];
      u128 alt = ctx.cost[i][1].edp;
      u64 cmin = ctx.cost[i][0].cycles, cmax = ctx.cost[i][0].cycles;
      for (int r = 1; r < nregions; ++r) {
        if (r >= 2) alt = std::min(alt, ctx.cost[i][r].edp);
        cmin = std::min(cmin, ctx.cost[i][r].cycles);
        cmax = std::max(cmax, ctx.cost[i][r].cycles);
      }
      suf_alt[k] = checked_add128(suf_alt[k + 1], alt, "EDP bound");
      suf_min_cyc[k] = checked_add(suf_min_cyc[k + 1], cmin, "cycle bound");
      suf_max_cyc[k] = sat_add(suf_max_cyc[k + 1], cmax);
      suf_size[k] = sat_add(suf_size[k + 1], ctx.items[i].size_bytes);

      if (alt > ctx.cost[i][0].edp) {
        wanting.push_back(
            Wanting{i, alt - ctx.cost[i][0].edp, ctx.items[i].size_bytes});
      }
    }
    // Exact density order: zero-size items first (free savings), then
    // savings/size descending via cross multiplication.
    std::sort(wanting.begin(), wanting.end(),
              [](const Wanting& a, const Wanting& b) {
                if ((a.size == 0) != (b.size == 0)) return a.size == 0;
                if (a.size == 0) return a.savings > b.savings;
                const int c =
                    wanting_cmp_mul(a.savings, b.size, b.savings, a.size);
                if (c != 0) return c > 0;
                return a.item < b.item;
              });
  }

  /// Largest stable-EDP saving SRAM can still offer the free items, by
  /// fractional relaxation of the remaining SRAM capacity (rounded up, so
  /// the resulting lower bound stays a true lower bound).
  u128 max_savings(u64 rem_sram) const {
    u128 total = 0;
    for (const auto& w : wanting) {
      if (assign[w.item] != -1) continue;
      if (w.size == 0) {
        total += w.savings;
        continue;
      }
      if (rem_sram == 0) break;
      if (w.size <= rem_sram) {
        total += w.savings;
        rem_sram -= w.size;
        continue;
      }
      // Fractional tail item: ceil(savings * rem / size), capped at savings.
      u128 part;
      const u128 max128 = ~static_cast<u128>(0);
      if (w.savings > max128 / rem_sram) {
        part = w.savings;
      } else {
        part = (w.savings * rem_sram + (w.size - 1)) / w.size;
        part = std::min(part, w.savings);
      }
      total += part;
      rem_sram = 0;
    }
    return total;
  }

  bool bound_prunes(int k) {
    if (!have_inc) return false;
    const u128 base = checked_add128(part_se, suf_alt[k], "EDP bound");
    const u128 save = max_savings(rem[0]);
    const u128 lb_se = base - std::min(base, save);

    u64 fnum = 1, fden = 1;
    const u64 cpb = sat_add(ctx.bcpb, ctx.rcpb);
    if (ctx.failures > 0 && cpb > 0) {
      if (ctx.scaling == EdpScaling::InverseEta) {
        const u64 nce_max = sat_add(part_cyc, suf_max_cyc[k]);
        u64 c0 = 0;
        bool c0_ok = true;
        c0_ok = !__builtin_add_overflow(part_sram, ctx.regs, &c0);
        if (c0_ok) c0_ok = !__builtin_mul_overflow(c0, ctx.failures, &c0);
        if (c0_ok) c0_ok = !__builtin_mul_overflow(c0, cpb, &c0);
        if (c0_ok && nce_max > 0) {
          fnum = sat_add(nce_max, c0);
          fden = nce_max;
        }
      } else {
        u64 nce_min = 0;
        if (__builtin_add_overflow(part_cyc, suf_min_cyc[k], &nce_min)) {
          // Every completion overflows the exact cycle total and would
          // fail evaluation; the subtree holds no usable leaf.
          return true;
        }
        if (nce_min > 0) {
          const u64 smax = sat_add(part_sram, std::min(rem[0], suf_size[k]));
          const u64 cmax =
              sat_mul(sat_mul(ctx.failures, sat_add(smax, ctx.regs)), cpb);
          fnum = nce_min;
          fden = sat_add(nce_min, cmax);
        }
      }
    }
    const ScaledEdp lb{lb_se, fnum, fden};
    return compare(lb, inc_obj) > 0;
  }

  bool lex_less(const std::vector<int>& a, const std::vector<int>& b) const {
    for (int i = 0; i < n; ++i) {
      if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
  }

  void leaf() {
    u64 nc_b = 0, nc_r = 0;
    ctx.backup_restore_cycles(part_sram, nc_b, nc_r);
    const ScaledEdp obj =
        scale_edp(part_se, part_cyc, nc_b, nc_r, ctx.scaling);
    if (!have_inc) {
      have_inc = true;
      inc_obj = obj;
      inc_assign = assign;
      return;
    }
    const int c = compare(obj, inc_obj);
    if (c < 0 || (c == 0 && lex_less(assign, inc_assign))) {
      inc_obj = obj;
      inc_assign = assign;
    }
  }

  void dfs(int k) {
    ++nodes;
    if ((nodes & 0xFFF) == 0 &&
        std::chrono::steady_clock::now() > deadline) {
      timed_out = true;
      return;
    }
    if (k == n) {
      leaf();
      return;
    }
    if (bound_prunes(k)) return;
    const int item = order[k];
    const u64 sz = ctx.items[item].size_bytes;
    for (int r = 0; r < nregions; ++r) {
      if (sz > rem[r]) continue;
      rem[r] -= sz;
      assign[item] = r;
      const u128 old_se = part_se;
      const u64 old_cyc = part_cyc, old_sram = part_sram;
      part_se = checked_add128(part_se, ctx.cost[item][r].edp, "EDP total");
      part_cyc = checked_add(part_cyc, ctx.cost[item][r].cycles, "cycle total");
      if (r == 0) part_sram += sz;
      dfs(k + 1);
      part_se = old_se;
      part_cyc = old_cyc;
      part_sram = old_sram;
      rem[r] += sz;
      assign[item] = -1;
      if (timed_out) return;
    }
  }
};

SolveResult finish_search(const Ctx& ctx, Search& s) {
  s.dfs(0);
  if (!s.have_inc) {
    if (s.timed_out)
      throw Error("time limit exceeded before any feasible placement was found");
    throw InfeasibleError(
        "no feasible placement satisfies the capacity constraints");
  }
  SolveResult result;
  result.placement = assignment_to_placement(ctx, s.inc_assign);
  result.objective = s.inc_obj;
  result.timed_out = s.timed_out;
  result.proven_optimal = !s.timed_out;
  result.nodes_explored = s.nodes;
  return result;
}

}  // namespace

SolveResult solve(const AppProfile& profile, const Device& device,
                  const SolveOptions& options) {
  if (options.algorithm == Algorithm::Exhaustive)
    return exhaustive_oracle(profile, device, options);
  const Ctx ctx = build_ctx(profile, device, options);
  Search search(ctx, options.time_limit_s);
  return finish_search(ctx, search);
}

SolveResult exhaustive_oracle(const AppProfile& profile, const Device& device,
                              const SolveOptions& options) {
  const Ctx ctx = build_ctx(profile, device, options);
  const size_t n = ctx.items.size();
  if (n > 24)
    throw ValidationError("exhaustive oracle limited to 24 items, got " +
                          std::to_string(n));
  const u64 limit = u64{1} << 24;
  u64 total = 1;
  for (size_t i = 0; i < n; ++i) {
    total = sat_mul(total, ctx.pregions.size());
    if (total > limit)
      throw ValidationError("exhaustive enumeration too large (> 2^24)");
  }

  std::vector<int> digits(n, 0);
  bool have_best = false;
  std::vector<int> best;
  ScaledEdp best_obj;
  u64 nodes = 0;
  while (true) {
    ++nodes;
    if (auto obj = evaluate_assignment(ctx, digits)) {
      // Enumeration runs in lexicographic order, so strict improvement
      // keeps the lexicographically smallest argmin.
      if (!have_best || compare(*obj, best_obj) < 0) {
        have_best = true;
        best_obj = *obj;
        best = digits;
      }
    }
    int pos = static_cast<int>(n) - 1;
    while (pos >= 0) {
      if (++digits[pos] < static_cast<int>(ctx.pregions.size())) break;
      digits[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  if (!have_best)
    throw InfeasibleError(
        "no feasible placement satisfies the capacity constraints");
  SolveResult result;
  result.placement = assignment_to_placement(ctx, best);
  result.objective = best_obj;
  result.proven_optimal = true;
  result.nodes_explored = nodes;
  return result;
}

Device filtered_device(const Device& device,
                       std::initializer_list<Region> keep) {
  Device out = device;
  out.regions.clear();
  for (const auto& r : device.regions)
    if (std::find(keep.begin(), keep.end(), r.id) != keep.end())
      out.regions.push_back(r);
  return out;
}

namespace {

SolveResult forced_placement(const Ctx& ctx, Region target,
                             const std::string& label) {
  int target_idx = -1;
  for (size_t r = 0; r < ctx.pregions.size(); ++r)
    if (ctx.pregions[r] == target) target_idx = static_cast<int>(r);
  if (target_idx < 0)
    throw ValidationError("device has no " + to_string(target) + " region");
  u64 total = 0;
  for (const auto& it : ctx.items)
    total = checked_add(total, it.size_bytes, "item bytes");
  if (total > ctx.caps[target_idx])
    throw InfeasibleError(label + " placement does not fit: " +
                          std::to_string(total) + " B exceed the usable " +
                          to_string(target) + " capacity of " +
                          std::to_string(ctx.caps[target_idx]) + " B");
  std::vector<int> assign(ctx.items.size(), target_idx);
  auto obj = evaluate_assignment(ctx, assign);
  if (!obj)
    throw InfeasibleError(label + " placement violates a capacity constraint");
  SolveResult result;
  result.placement = assignment_to_placement(ctx, assign);
  result.objective = *obj;
  result.proven_optimal = false;
  result.nodes_explored = 1;
  return result;
}

}  // namespace

SolveResult baseline_placement(BaselineKind kind, const AppProfile& profile,
                               const Device& device,
                               const SolveOptions& options) {
  switch (kind) {
    case BaselineKind::FramOnly: {
      device.require(Region::FRAM_N);
      const Ctx ctx = build_ctx(profile, device, options);
      return forced_placement(ctx, Region::FRAM_N, "FRAM-only");
    }
    case BaselineKind::SramOnly: {
      const Ctx ctx = build_ctx(profile, device, options);
      return forced_placement(ctx, Region::SRAM, "SRAM-only");
    }
    case BaselineKind::SramFlashIlp: {
      if (!device.find(Region::FLASH))
        throw ValidationError("device has no FLASH region");
      return solve(profile,
                   filtered_device(device,
                                   {Region::SRAM, Region::FLASH, Region::FRAM_B}),
                   options);
    }
    case BaselineKind::SramFramIlpNoBr: {
      device.require(Region::FRAM_N);
      SolveOptions no_br = options;
      no_br.backup_region = false;
      return solve(profile,
                   filtered_device(
                       device, {Region::SRAM, Region::FRAM_N, Region::FRAM_B}),
                   no_br);
    }
  }
  throw ValidationError("unknown baseline kind enum value");
}

std::string empirical_baseline(const EnergyTable& table, Scenario scenario) {
  table.validate();
  const EnergyTableRow* best = nullptr;
  auto energy = [&](const EnergyTableRow& r) {
    return scenario == Scenario::Stable ? r.energy_stable : r.energy_unstable;
  };
  auto sram_letters = [](const std::string& c) {
    return std::count(c.begin(), c.end(), 'S');
  };
  // Lexicographic with 'S' ordered before 'F', matching the region ranks.
  auto lex_key = [](const std::string& c) {
    std::string k = c;
    for (char& ch : k) ch = (ch == 'S') ? '0' : '1';
    return k;
  };
  for (const auto& r : table.rows) {
    if (!best) {
      best = &r;
      continue;
    }
    const double er = energy(r), eb = energy(*best);
    if (er < eb) {
      best = &r;
    } else if (er == eb) {
      if (sram_letters(r.config) > sram_letters(best->config) ||
          (sram_letters(r.config) == sram_letters(best->config) &&
           lex_key(r.config) < lex_key(best->config)))
        best = &r;
    }
  }
  if (!best || !std::isfinite(energy(*best)))
    throw InfeasibleError("no measurable configuration in the energy table");
  return best->config;
}

Placement empirical_placement(const std::string& config,
                              const AppProfile& profile,
                              const Device& device) {
  if (config.size() != 3 ||
      config.find_first_not_of("SF") != std::string::npos)
    throw ValidationError("config '" + config +
                          "' is not a 3-letter {S,F} string");
  device.validate();
  Region nonvolatile = device.find(Region::FRAM_N) ? Region::FRAM_N
                                                   : Region::FLASH;
  auto region_of_letter = [&](char c) {
    return c == 'S' ? Region::SRAM : nonvolatile;
  };
  const Region text_r = region_of_letter(config[0]);
  const Region data_r = region_of_letter(config[1]);
  const Region stack_r = region_of_letter(config[2]);
  Placement p;
  p.application = profile.application;
  for (const auto& item : flatten(profile)) {
    Region r = data_r;  // globals follow the data letter
    if (item.is_section) {
      switch (item.section) {
        case SectionKind::Text: r = text_r; break;
        case SectionKind::Data: r = data_r; break;
        case SectionKind::Stack: r = stack_r; break;
      }
    }
    p.by_id[item.id] = r;
  }
  return p;
}

}  // namespace mapipro

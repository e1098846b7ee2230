// Acceptance gate: one pass/fail line per shipped guarantee. Exits
// non-zero when any guarantee fails so CTest reports the binary red.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mapipro/cost_model.hpp"
#include "mapipro/instance_gen.hpp"
#include "mapipro/json_io.hpp"
#include "mapipro/linker_emitter.hpp"
#include "mapipro/simulator.hpp"
#include "mapipro/solver.hpp"
#include "test_support.hpp"

using namespace mapipro;
using mapipro_tests::fixture_path;
using mapipro_tests::golden_path;
using mapipro_tests::golden_profile;
using mapipro_tests::golden_profile_mixed;
using mapipro_tests::read_file;
using mapipro_tests::run_cli;
using mapipro_tests::uniform_placement;

namespace {

struct Criterion {
  bool ok = true;
  std::ostringstream why;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      why << "    expectation failed: " << what << "\n";
    }
  }
};

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

// 1. The branch-and-bound solver and the exhaustive enumerator agree on
//    200 seeded random instances, checked through the CLI in < 60 s.
void crit_oracle_equivalence(Criterion& c) {
  const auto t0 = std::chrono::steady_clock::now();
  auto r = run_cli("verify --instances 200 --max-items 16 --seed 7");
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  c.expect(r.exit_code == 0, "verify exits 0, got " +
                                 std::to_string(r.exit_code) + ": " + r.out);
  c.expect(contains(r.out, "verified 200 instances"),
           "verify reports all 200 instances, got: " + r.out);
  c.expect(secs < 60.0,
           "verify finishes under 60 s, took " + std::to_string(secs));
}

// 2. The shipped measurement table reproduces the expected per-scenario
//    argmins with exact energies.
void crit_empirical_argmins(Criterion& c) {
  EnergyTable table =
      load_energy_table(fixture_path("qsort_empirical.energy.json"));
  const std::string stable = empirical_baseline(table, Scenario::Stable);
  const std::string unstable = empirical_baseline(table, Scenario::Unstable);
  c.expect(stable == "SSS", "stable argmin is SSS, got " + stable);
  c.expect(unstable == "SFS", "unstable argmin is SFS, got " + unstable);
  c.expect(table.row("SSS").energy_stable == 16.70,
           "SSS stable energy is exactly 16.70");
  c.expect(table.row("SFS").energy_unstable == 33.79,
           "SFS unstable energy is exactly 33.79");
}

// 3. Spot values of the access-energy model on the default devices.
void crit_energy_spot_values(Criterion& c) {
  const Device fr = default_fr6989();
  const Device f5 = default_f5529();
  PlacementItem item;
  item.id = "probe";
  item.size_bytes = 16;
  item.reads = 10;
  item.writes = 5;
  item.weight = 1;
  c.expect(item_energy(item, fr.require(Region::SRAM)) == 83000,
           "reads=10 writes=5 costs 83000 nJ in SRAM");
  c.expect(item_energy(item, fr.require(Region::FRAM_N)) == 168875,
           "reads=10 writes=5 costs 168875 nJ in FRAM");
  PlacementItem one_write;
  one_write.id = "w";
  one_write.size_bytes = 1;
  one_write.writes = 1;
  one_write.weight = 1;
  c.expect(f5.require(Region::FLASH).write_energy_nj == 31198,
           "flash write path charges 31198 nJ per access");
  c.expect(item_energy(one_write, f5.require(Region::FLASH)) == 31198,
           "a single flash write costs 31198 nJ");
}

// 4. On 100 random feasible instances the optimal objective is never
//    beaten by any runnable baseline.
void crit_dominance(Criterion& c) {
  const Device dev = default_fr6989();
  int done = 0;
  int violations = 0;
  int comparisons = 0;
  for (u64 seed = 1; done < 100 && seed < 4000; ++seed) {
    AppProfile p = random_profile(seed, 16);
    SolveOptions opt;
    opt.power.failure_count = (seed % 3 == 0) ? 4 : 0;
    SolveResult best;
    try {
      best = solve(p, dev, opt);
    } catch (const InfeasibleError&) {
      continue;
    }
    for (BaselineKind kind : {BaselineKind::FramOnly, BaselineKind::SramOnly}) {
      try {
        SolveResult b = baseline_placement(kind, p, dev, opt);
        ++comparisons;
        if (!(best.objective <= b.objective)) ++violations;
      } catch (const InfeasibleError&) {
        // a baseline that does not fit is not a comparison point
      }
    }
    try {
      EnergyTable table = synthesize_energy_table(p, dev, opt.power);
      const Scenario sc = opt.power.failure_count > 0 ? Scenario::Unstable
                                                      : Scenario::Stable;
      Placement ep = empirical_placement(empirical_baseline(table, sc), p, dev);
      SimulationReport rep = simulate(ep, p, dev, opt.power, true);
      ++comparisons;
      if (!(best.objective <= rep.edp_system)) ++violations;
    } catch (const InfeasibleError&) {
    }
    ++done;
  }
  c.expect(done == 100, "collected 100 feasible instances, got " +
                            std::to_string(done));
  c.expect(comparisons >= 200, "at least 200 baseline comparisons ran, got " +
                                   std::to_string(comparisons));
  c.expect(violations == 0, std::to_string(violations) +
                                " baseline(s) beat the optimal objective");
}

// 5. Restart accounting: P=4 without the backup region re-executes the
//    whole run, 5x the stable cycle count; P=0 matches the stable
//    evaluation (eta = 1, EDP equal to 1e-9 relative tolerance).
void crit_restart_accounting(Criterion& c) {
  AppProfile p = load_profile(fixture_path("small_app.profile.json"));
  const Device dev = default_fr6989();
  SolveOptions opt;
  SolveResult sr = solve(p, dev, opt);
  const CostBreakdown stable = edp_stable(sr.placement, p, dev);

  PowerModel p4;
  p4.failure_count = 4;
  SimulationReport restart = simulate(sr.placement, p, dev, p4, false);
  c.expect(restart.nc_execute == 5 * stable.cycles,
           "P=4 without backup region executes exactly 5x the stable cycles");
  c.expect(restart.reexecutions == 4, "P=4 without backup region restarts 4x");
  c.expect(restart.nc_backup == 0 && restart.nc_restore == 0,
           "restart mode moves no checkpoint bytes");

  PowerModel p0;
  for (bool backup : {true, false}) {
    SimulationReport s0 = simulate(sr.placement, p, dev, p0, backup);
    c.expect(s0.eta == 1.0, "P=0 yields eta exactly 1");
    const double sim = s0.edp_system.value();
    const double ref = to_double(stable.edp);
    c.expect(std::fabs(sim - ref) <= 1e-9 * ref,
             "P=0 simulated EDP matches the stable EDP within 1e-9");
  }
}

// 6. With the backup region enabled and a fixed placement, system EDP
//    (checkpoint overhead charged against progress) never decreases
//    with the failure count, and eta strictly decreases.
void crit_monotonicity(Criterion& c) {
  AppProfile p = load_profile(fixture_path("small_app.profile.json"));
  const Device dev = default_fr6989();
  Placement pl = uniform_placement(p, Region::SRAM);
  bool first = true;
  ScaledEdp prev_edp;
  double prev_eta = 0.0;
  for (u64 failures : {0ull, 1ull, 2ull, 4ull, 8ull, 16ull}) {
    PowerModel pm;
    pm.failure_count = failures;
    SimulationReport rep = simulate(pl, p, dev, pm, true);
    if (!first) {
      c.expect(!(rep.edp_system < prev_edp),
               "system EDP non-decreasing at P=" + std::to_string(failures));
      c.expect(rep.eta < prev_eta,
               "eta strictly decreasing at P=" + std::to_string(failures));
    }
    prev_edp = rep.edp_system;
    prev_eta = rep.eta;
    first = false;
  }
}

// 7. A placement whose SRAM occupancy plus register file exceeds the
//    backup region is rejected by the solver and by the simulator.
void crit_backup_fit(Criterion& c) {
  Device dev = default_fr6989();
  for (auto& r : dev.regions)
    if (r.id == Region::SRAM) r.capacity_bytes = 8192;
  AppProfile p;
  p.application = "backup_overflow";
  // 3050 + 64 register bytes = 3114 B > the 3072 B backup region, while
  // heavy traffic makes SRAM far cheaper than FRAM on stable cost alone.
  p.globals.push_back({"big", 3050, 1000000, 1000000, 10});
  SolveOptions opt;
  opt.power.failure_count = 4;

  SolveResult sr = solve(p, dev, opt);
  c.expect(sr.placement.region_of("big") != Region::SRAM,
           "solver refuses the SRAM assignment that overflows the backup "
           "region");

  Device no_alternative = dev;
  for (auto& r : no_alternative.regions)
    if (r.id == Region::FRAM_N) r.capacity_bytes = 0;
  bool threw = false;
  try {
    solve(p, no_alternative, opt);
  } catch (const InfeasibleError&) {
    threw = true;
  }
  c.expect(threw, "solver reports infeasibility when no region satisfies "
                  "the backup fit");

  Placement bad = uniform_placement(p, Region::SRAM);
  threw = false;
  std::string msg;
  try {
    simulate(bad, p, dev, opt.power, true);
  } catch (const InfeasibleError& e) {
    threw = true;
    msg = e.what();
  }
  c.expect(threw && contains(msg, "does not fit the backup region"),
           "simulator rejects the oversized checkpoint volume");
}

// 8. Emitted linker fragments are byte-identical to the stored goldens
//    and contain the exact directive spellings downstream builds match.
void crit_golden_emission(Criterion& c) {
  AppProfile sram_app = golden_profile("golden_sram");
  LinkerOutput sram_out =
      emit_linker(uniform_placement(sram_app, Region::SRAM), sram_app);
  c.expect(sram_out.cmd == read_file(golden_path("golden_sram.mapipro.cmd")),
           "all-SRAM .cmd fragment matches golden bytes");
  c.expect(sram_out.pragmas ==
               read_file(golden_path("golden_sram.mapipro.pragmas.h")),
           "all-SRAM pragma header matches golden bytes");
  c.expect(contains(sram_out.cmd, ".stack : {} > RAM (HIGH)"),
           "all-SRAM fragment pins the stack directive spelling");

  AppProfile fram_app = golden_profile("golden_fram");
  LinkerOutput fram_out =
      emit_linker(uniform_placement(fram_app, Region::FRAM_N), fram_app);
  c.expect(fram_out.cmd == read_file(golden_path("golden_fram.mapipro.cmd")),
           "all-FRAM .cmd fragment matches golden bytes");
  c.expect(fram_out.pragmas ==
               read_file(golden_path("golden_fram.mapipro.pragmas.h")),
           "all-FRAM pragma header matches golden bytes");

  AppProfile mixed_app = golden_profile_mixed();
  Placement mixed;
  mixed.application = mixed_app.application;
  mixed.by_id = {{"g_buf", Region::FRAM_N},      {"main.text", Region::FRAM_N},
                 {"main.data", Region::SRAM},    {"main.stack", Region::SRAM},
                 {"func_1.text", Region::SRAM},  {"func_1.data", Region::FRAM_N},
                 {"func_1.stack", Region::SRAM}, {"func_2.text", Region::FRAM_N},
                 {"func_2.data", Region::SRAM},  {"func_2.stack", Region::FRAM_N}};
  LinkerOutput mixed_out = emit_linker(mixed, mixed_app);
  c.expect(mixed_out.cmd == read_file(golden_path("golden_mixed.mapipro.cmd")),
           "mixed .cmd fragment matches golden bytes");
  c.expect(mixed_out.pragmas ==
               read_file(golden_path("golden_mixed.mapipro.pragmas.h")),
           "mixed pragma header matches golden bytes");
  c.expect(contains(mixed_out.pragmas,
                    "#pragma DATA_SECTION ( func_1, .Localvars)"),
           "mixed pragma header pins the DATA_SECTION spelling");
}

// 9. Strategy orderings on the shipped fixtures: under stable power small
//    all-SRAM-fitting apps satisfy sram-only <= proposed <= fram-only;
//    under P=4 the proposed placement strictly beats the
//    no-backup-region baseline; and for the same workload the FRAM
//    device yields strictly lower EDP than the flash device in both
//    scenarios.
void crit_strategy_orderings(Criterion& c) {
  const Device fr = default_fr6989();
  const Device f5 = default_f5529();
  AppProfile small = load_profile(fixture_path("small_app.profile.json"));
  AppProfile large = load_profile(fixture_path("large_app.profile.json"));

  for (const AppProfile& p :
       {small, golden_profile("ordering_small")}) {
    SolveOptions st;
    SolveResult prop = solve(p, fr, st);
    SolveResult sram = baseline_placement(BaselineKind::SramOnly, p, fr, st);
    SolveResult fram = baseline_placement(BaselineKind::FramOnly, p, fr, st);
    c.expect(sram.objective <= prop.objective,
             p.application + ": stable sram-only <= proposed");
    c.expect(prop.objective <= fram.objective,
             p.application + ": stable proposed <= fram-only");
  }

  PowerModel p4;
  p4.failure_count = 4;
  for (const AppProfile& p : {small, large}) {
    CompareOptions co;
    co.strategies = {"proposed", "sram-fram-ilp-no-br"};
    co.normalize = "proposed";
    ComparisonReport rep = compare_strategies(p, fr, p4, co);
    double prop_edp = 0.0;
    double nobr_edp = 0.0;
    for (const auto& row : rep.rows) {
      c.expect(!row.infeasible,
               p.application + ": strategy " + row.strategy + " runs");
      if (row.strategy == "proposed") prop_edp = row.normalized_edp;
      if (row.strategy == "sram-fram-ilp-no-br") nobr_edp = row.normalized_edp;
    }
    c.expect(prop_edp == 1.0, p.application + ": proposed normalizes to 1.0");
    c.expect(prop_edp < nobr_edp,
             p.application +
                 ": P=4 proposed strictly beats the no-backup baseline");
  }

  for (u64 failures : {0ull, 4ull}) {
    PowerModel pm;
    pm.failure_count = failures;
    SolveOptions opt;
    opt.power = pm;
    SimulationReport on_fram =
        simulate(solve(large, fr, opt).placement, large, fr, pm, true);
    SimulationReport on_flash =
        simulate(solve(large, f5, opt).placement, large, f5, pm, true);
    c.expect(on_fram.edp_system < on_flash.edp_system,
             "FRAM device EDP strictly below flash device EDP at P=" +
                 std::to_string(failures));
  }
}

struct Entry {
  const char* name;
  std::function<void(Criterion&)> fn;
};

}  // namespace

int main() {
  const std::vector<Entry> entries = {
      {"solver matches the exhaustive oracle on 200 instances in < 60 s",
       crit_oracle_equivalence},
      {"measurement-table argmins: stable SSS @ 16.70, unstable SFS @ 33.79",
       crit_empirical_argmins},
      {"access-energy spot values: 83000 nJ SRAM, 168875 nJ FRAM, 31198 nJ "
       "flash write",
       crit_energy_spot_values},
      {"optimal objective dominates every runnable baseline on 100 random "
       "feasible instances",
       crit_dominance},
      {"restart accounting: 5x cycles at P=4 without backup; P=0 equals the "
       "stable run",
       crit_restart_accounting},
      {"system EDP non-decreasing and eta strictly decreasing in the failure "
       "count",
       crit_monotonicity},
      {"backup-region overflow rejected by solver and simulator",
       crit_backup_fit},
      {"linker fragments byte-identical to goldens with pinned directive "
       "spellings",
       crit_golden_emission},
      {"strategy orderings: sram-only <= proposed <= fram-only (stable, "
       "small); proposed < no-backup baseline (P=4); FRAM device < flash "
       "device",
       crit_strategy_orderings},
  };

  int failed = 0;
  for (size_t i = 0; i < entries.size(); ++i) {
    Criterion c;
    try {
      entries[i].fn(c);
    } catch (const std::exception& e) {
      c.ok = false;
      c.why << "    unexpected exception: " << e.what() << "\n";
    }
    std::cout << (c.ok ? "[PASS] " : "[FAIL] ") << (i + 1) << ": "
              << entries[i].name << "\n";
    if (!c.ok) {
      std::cout << c.why.str();
      ++failed;
    }
  }
  if (failed != 0)
    std::cout << failed << " of " << entries.size()
              << " acceptance criteria failed\n";
  else
    std::cout << "all " << entries.size() << " acceptance criteria passed\n";
  return failed == 0 ? 0 : 1;
}

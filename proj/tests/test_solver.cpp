#include <doctest.h>

#include <limits>

#include "mapipro/instance_gen.hpp"
#include "mapipro/json_io.hpp"
#include "mapipro/solver.hpp"
#include "test_support.hpp"

using namespace mapipro;
using namespace mapipro_tests;

namespace {

Device simple_device(u64 sram_cap, u64 fram_cap = 65536,
                     u64 backup_cap = 3072) {
  Device d;
  d.regions = {
      {Region::SRAM, sram_cap, 1, 2, 1},
      {Region::FRAM_N, fram_cap, 10, 20, 2},
      {Region::FRAM_B, backup_cap, 10, 20, 2},
  };
  d.register_file_bytes = 64;
  d.backup_cycles_per_byte = 2;
  d.restore_cycles_per_byte = 2;
  d.backup_energy_per_byte_nj = 5;
  d.restore_energy_per_byte_nj = 4;
  return d;
}

AppProfile two_globals(u64 size_a, u64 reads_a, u64 size_b, u64 reads_b) {
  AppProfile p;
  p.application = "pair";
  p.globals.push_back({"a", size_a, reads_a, 0, 100});
  p.globals.push_back({"b", size_b, reads_b, 0, 100});
  return p;
}

SolveOptions stable_options() {
  SolveOptions o;
  o.power.failure_count = 0;
  return o;
}

bool same_assignment(const Placement& a, const Placement& b) {
  return a.by_id == b.by_id;
}

}  // namespace

TEST_CASE("everything goes to SRAM when it fits and wins") {
  const AppProfile p = two_globals(256, 100, 256, 10);
  const SolveResult r = solve(p, simple_device(1024), stable_options());
  CHECK(r.placement.region_of("a") == Region::SRAM);
  CHECK(r.placement.region_of("b") == Region::SRAM);
  CHECK(r.proven_optimal);
  CHECK(!r.timed_out);
  // a: 100 reads * 1 nJ * 100 cy = 10000; b: 10 * 1 * 100 = 1000.
  CHECK(r.objective == ScaledEdp::unscaled(11000));
}

TEST_CASE("under SRAM contention the bigger saver wins the space") {
  // Both items are 1024 B but only one fits; item a has 100x the traffic.
  const AppProfile p = two_globals(1024, 1000, 1024, 10);
  const SolveResult r = solve(p, simple_device(1024), stable_options());
  CHECK(r.placement.region_of("a") == Region::SRAM);
  CHECK(r.placement.region_of("b") == Region::FRAM_N);
  // a in SRAM: 1000*1 nJ * 100 cy = 100000.
  // b in FRAM: 10*10 nJ * (100 + 10) cy = 11000.
  CHECK(r.objective == ScaledEdp::unscaled(111000));
  CHECK(r.proven_optimal);
}

TEST_CASE("exact ties resolve to the lexicographically smallest placement") {
  // Zero-traffic, zero-cycle items cost nothing anywhere: every assignment
  // ties at zero EDP.
  AppProfile p;
  p.application = "ties";
  p.globals.push_back({"g0", 16, 0, 0, 0});
  p.globals.push_back({"g1", 16, 0, 0, 0});

  SUBCASE("SRAM preferred when it fits") {
    const SolveResult r = solve(p, simple_device(1024), stable_options());
    CHECK(r.placement.region_of("g0") == Region::SRAM);
    CHECK(r.placement.region_of("g1") == Region::SRAM);
    CHECK(r.objective == ScaledEdp::unscaled(0));
  }

  SUBCASE("FRAM preferred over flash at equal cost") {
    Device d = simple_device(0);
    d.regions.push_back({Region::FLASH, 65536, 10, 20, 2});
    const SolveResult r = solve(p, d, stable_options());
    CHECK(r.placement.region_of("g0") == Region::FRAM_N);
    CHECK(r.placement.region_of("g1") == Region::FRAM_N);
  }
}

TEST_CASE("branch and bound matches the exhaustive oracle on the fixtures") {
  const Device fr = default_fr6989();
  for (const char* name : {"small_app.profile.json", "large_app.profile.json",
                           "qsort_small.profile.json"}) {
    const AppProfile p = load_profile(fixture_path(name));
    for (u64 failures : {u64{0}, u64{4}}) {
      for (EdpScaling scaling :
           {EdpScaling::InverseEta, EdpScaling::EtaLiteral}) {
        SolveOptions o;
        o.power.failure_count = failures;
        o.power.edp_scaling = scaling;
        const SolveResult fast = solve(p, fr, o);
        const SolveResult oracle = exhaustive_oracle(p, fr, o);
        CHECK(fast.objective == oracle.objective);
        CHECK(same_assignment(fast.placement, oracle.placement));
        CHECK(fast.proven_optimal);
        CHECK(oracle.proven_optimal);
      }
    }
  }
}

TEST_CASE("branch and bound matches the oracle on random instances") {
  const Device fr = default_fr6989();
  const Device flash = default_f5529();
  int solved = 0;
  for (u64 seed = 1; seed <= 30; ++seed) {
    const AppProfile p = random_profile(seed, 10);
    for (u64 failures : {u64{0}, u64{3}}) {
      SolveOptions o;
      o.power.failure_count = failures;
      const Device& d = (seed % 3 == 0) ? flash : fr;
      SolveResult fast, oracle;
      bool fast_infeasible = false, oracle_infeasible = false;
      try {
        fast = solve(p, d, o);
      } catch (const InfeasibleError&) {
        fast_infeasible = true;
      }
      try {
        oracle = exhaustive_oracle(p, d, o);
      } catch (const InfeasibleError&) {
        oracle_infeasible = true;
      }
      REQUIRE(fast_infeasible == oracle_infeasible);
      if (fast_infeasible) continue;
      ++solved;
      CHECK(fast.objective == oracle.objective);
      CHECK(same_assignment(fast.placement, oracle.placement));
    }
  }
  // The generator parameters keep most instances feasible.
  CHECK(solved >= 40);
}

TEST_CASE("solving twice returns the identical result") {
  const AppProfile p = load_profile(fixture_path("small_app.profile.json"));
  SolveOptions o;
  o.power.failure_count = 4;
  const SolveResult r1 = solve(p, default_fr6989(), o);
  const SolveResult r2 = solve(p, default_fr6989(), o);
  CHECK(same_assignment(r1.placement, r2.placement));
  CHECK(r1.objective == r2.objective);
  CHECK(r1.nodes_explored == r2.nodes_explored);
}

TEST_CASE("a larger SRAM never hurts the optimum") {
  const AppProfile p = load_profile(fixture_path("small_app.profile.json"));
  SolveOptions o;
  o.power.failure_count = 2;
  Device d = default_fr6989();
  bool first = true;
  ScaledEdp prev;
  for (u64 cap : {u64{0}, u64{256}, u64{512}, u64{1024}, u64{2048}, u64{4096}}) {
    d.regions[0].capacity_bytes = cap;
    const SolveResult r = solve(p, d, o);
    if (!first) CHECK(r.objective <= prev);
    prev = r.objective;
    first = false;
  }
}

TEST_CASE("optimal objective direction as failures increase") {
  const AppProfile p = load_profile(fixture_path("small_app.profile.json"));
  const Device d = default_fr6989();

  // Charging checkpoint overhead (inverse scaling) can only worsen EDP.
  SolveOptions inv;
  inv.power.edp_scaling = EdpScaling::InverseEta;
  bool first = true;
  ScaledEdp prev;
  for (u64 fails : {u64{0}, u64{1}, u64{2}, u64{4}, u64{8}, u64{16}}) {
    inv.power.failure_count = fails;
    const SolveResult r = solve(p, d, inv);
    if (!first) CHECK(prev <= r.objective);
    prev = r.objective;
    first = false;
  }

  // Multiplying by the shrinking progress fraction can only lower it.
  SolveOptions lit;
  lit.power.edp_scaling = EdpScaling::EtaLiteral;
  first = true;
  for (u64 fails : {u64{0}, u64{1}, u64{2}, u64{4}, u64{8}, u64{16}}) {
    lit.power.failure_count = fails;
    const SolveResult r = solve(p, d, lit);
    if (!first) CHECK(r.objective <= prev);
    prev = r.objective;
    first = false;
  }
}

TEST_CASE("forced baselines") {
  const AppProfile small = load_profile(fixture_path("small_app.profile.json"));
  const AppProfile large = load_profile(fixture_path("large_app.profile.json"));
  const Device fr = default_fr6989();
  const Device flash = default_f5529();
  SolveOptions o;
  o.power.failure_count = 4;

  const SolveResult fram =
      baseline_placement(BaselineKind::FramOnly, small, fr, o);
  for (const auto& [id, region] : fram.placement.by_id)
    CHECK(region == Region::FRAM_N);

  const SolveResult sram =
      baseline_placement(BaselineKind::SramOnly, small, fr, o);
  for (const auto& [id, region] : sram.placement.by_id)
    CHECK(region == Region::SRAM);

  // The solver dominates any placement in its search space.
  const SolveResult best = solve(small, fr, o);
  CHECK(best.objective <= fram.objective);
  CHECK(best.objective <= sram.objective);

  // 7112 B cannot fit the 2 KiB SRAM.
  CHECK_THROWS_AS(baseline_placement(BaselineKind::SramOnly, large, fr, o),
                  InfeasibleError);
  // Region mismatches are validation errors, not infeasibilities.
  CHECK_THROWS_AS(baseline_placement(BaselineKind::FramOnly, small, flash, o),
                  ValidationError);
  CHECK_THROWS_AS(baseline_placement(BaselineKind::SramFlashIlp, small, fr, o),
                  ValidationError);

  // On a flash device the flash ILP is exactly the solver.
  const SolveResult direct = solve(small, flash, o);
  const SolveResult flash_ilp =
      baseline_placement(BaselineKind::SramFlashIlp, small, flash, o);
  CHECK(flash_ilp.objective == direct.objective);
  CHECK(same_assignment(flash_ilp.placement, direct.placement));

  // The no-backup variant optimizes the stable EDP.
  const SolveResult no_br =
      baseline_placement(BaselineKind::SramFramIlpNoBr, small, fr, o);
  SolveOptions no_br_opts = o;
  no_br_opts.backup_region = false;
  const SolveResult manual = solve(small, fr, no_br_opts);
  CHECK(no_br.objective == manual.objective);
  CHECK(no_br.objective.num_cycles == no_br.objective.den_cycles);
}

TEST_CASE("baseline names parse with dashes or underscores") {
  CHECK(baseline_kind_from_string("fram-only") == BaselineKind::FramOnly);
  CHECK(baseline_kind_from_string("fram_only") == BaselineKind::FramOnly);
  CHECK(baseline_kind_from_string("sram-flash-ilp") ==
        BaselineKind::SramFlashIlp);
  CHECK(baseline_kind_from_string("sram_fram_ilp_no_br") ==
        BaselineKind::SramFramIlpNoBr);
  CHECK_THROWS_AS(baseline_kind_from_string("greedy"), ParseError);
  CHECK(to_string(BaselineKind::SramOnly) == "sram_only");
}

TEST_CASE("empirical strategy picks the cheapest measured config") {
  const EnergyTable t =
      load_energy_table(fixture_path("qsort_empirical.energy.json"));
  CHECK(empirical_baseline(t, Scenario::Stable) == "SSS");
  CHECK(empirical_baseline(t, Scenario::Unstable) == "SFS");

  // Ties prefer SRAM letters, then the S-before-F lexicographic order.
  EnergyTable flat;
  for (const char* c : {"SSS", "SSF", "SFS", "SFF", "FSS", "FSF", "FFS", "FFF"})
    flat.rows.push_back({c, 5.0, 5.0});
  CHECK(empirical_baseline(flat, Scenario::Stable) == "SSS");

  EnergyTable mid = flat;
  for (auto& r : mid.rows) r.energy_stable = 9.0;
  for (auto& r : mid.rows)
    if (r.config == "SSF" || r.config == "SFS" || r.config == "FSS")
      r.energy_stable = 1.0;
  CHECK(empirical_baseline(mid, Scenario::Stable) == "SSF");

  // A column of unmeasurable entries has no answer.
  EnergyTable inf_table = flat;
  for (auto& r : inf_table.rows)
    r.energy_unstable = std::numeric_limits<double>::infinity();
  CHECK(empirical_baseline(inf_table, Scenario::Stable) == "SSS");
  CHECK_THROWS_AS(empirical_baseline(inf_table, Scenario::Unstable),
                  InfeasibleError);
}

TEST_CASE("a config expands into a section-level placement") {
  const AppProfile p = load_profile(fixture_path("small_app.profile.json"));

  const Placement pl = empirical_placement("SFS", p, default_fr6989());
  CHECK(pl.region_of("main.text") == Region::SRAM);
  CHECK(pl.region_of("main.data") == Region::FRAM_N);
  CHECK(pl.region_of("main.stack") == Region::SRAM);
  CHECK(pl.region_of("sort.data") == Region::FRAM_N);
  // Globals follow the data letter.
  CHECK(pl.region_of("lut") == Region::FRAM_N);
  CHECK(pl.region_of("state") == Region::FRAM_N);

  // On a flash device the F letter means flash.
  const Placement fl = empirical_placement("FSS", p, default_f5529());
  CHECK(fl.region_of("main.text") == Region::FLASH);
  CHECK(fl.region_of("lut") == Region::SRAM);

  CHECK_THROWS_AS(empirical_placement("SF", p, default_fr6989()),
                  ValidationError);
  CHECK_THROWS_AS(empirical_placement("SFX", p, default_fr6989()),
                  ValidationError);
}

TEST_CASE("exhaustive oracle guards its enumeration size") {
  SolveOptions o = stable_options();

  AppProfile many;
  many.application = "many";
  for (int i = 0; i < 25; ++i)
    many.globals.push_back({"g" + std::to_string(i), 8, 1, 1, 10});
  CHECK_THROWS_AS(exhaustive_oracle(many, default_fr6989(), o),
                  ValidationError);

  // 16 items over 3 placement regions: 3^16 > 2^24 assignments.
  AppProfile sixteen;
  sixteen.application = "sixteen";
  for (int i = 0; i < 16; ++i)
    sixteen.globals.push_back({"g" + std::to_string(i), 8, 1, 1, 10});
  Device three = default_fr6989();
  three.regions.push_back({Region::FLASH, 65536, 30, 40, 2});
  CHECK_THROWS_AS(exhaustive_oracle(sixteen, three, o), ValidationError);

  // Two items over two regions enumerate exactly 4 assignments.
  const AppProfile p = two_globals(16, 5, 16, 7);
  const SolveResult r = exhaustive_oracle(p, simple_device(1024), o);
  CHECK(r.nodes_explored == 4);
}

TEST_CASE("infeasibility and input guards") {
  SolveOptions o = stable_options();

  // Items exceed every capacity.
  const AppProfile p = two_globals(4096, 5, 4096, 7);
  CHECK_THROWS_AS(solve(p, simple_device(1024, 2048), o), InfeasibleError);
  CHECK_THROWS_AS(exhaustive_oracle(p, simple_device(1024, 2048), o),
                  InfeasibleError);

  // Empty profiles have nothing to place.
  AppProfile empty;
  empty.application = "empty";
  CHECK_THROWS_AS(solve(empty, simple_device(1024), o), ValidationError);

  // Non-positive time limits are rejected.
  SolveOptions bad = o;
  bad.time_limit_s = 0.0;
  CHECK_THROWS_AS(solve(two_globals(16, 1, 16, 1), simple_device(1024), bad),
                  ValidationError);
}

TEST_CASE("the backup region limits usable SRAM") {
  SolveOptions o;
  o.power.failure_count = 1;

  // FRAM_B holds 128 B; after 64 B of registers only 64 B of SRAM state
  // can be checkpointed, so a 100 B item cannot live in SRAM and the
  // 0-capacity FRAM leaves it nowhere else.
  Device d = simple_device(4096, 0, 128);
  AppProfile p;
  p.application = "one";
  p.globals.push_back({"g", 100, 10, 10, 50});
  CHECK_THROWS_AS(solve(p, d, o), InfeasibleError);

  // Disabling the backup region frees the full SRAM.
  SolveOptions no_br = o;
  no_br.backup_region = false;
  const SolveResult r = solve(p, d, no_br);
  CHECK(r.placement.region_of("g") == Region::SRAM);

  // Registers larger than the backup region can never checkpoint.
  Device tiny = simple_device(4096, 65536, 32);
  CHECK_THROWS_AS(solve(p, tiny, o), InfeasibleError);

  // Without FRAM_B the backup-region model cannot run at all.
  Device no_backup = simple_device(4096);
  no_backup.regions.resize(2);
  CHECK_THROWS_AS(solve(p, no_backup, o), ValidationError);
  CHECK(solve(p, no_backup, no_br).placement.region_of("g") == Region::SRAM);
}

TEST_CASE("filtered devices keep scalars and drop regions") {
  const Device fr = default_fr6989();
  const Device f = filtered_device(fr, {Region::SRAM, Region::FRAM_B});
  CHECK(f.regions.size() == 2);
  CHECK(f.find(Region::FRAM_N) == nullptr);
  CHECK(f.register_file_bytes == fr.register_file_bytes);
  CHECK(f.backup_energy_per_byte_nj == fr.backup_energy_per_byte_nj);
}

TEST_CASE("the solved objective accounts for checkpoint cycles") {
  // Single 100 B item in SRAM; P = 2 failures; volume = 100 + 64 regs.
  AppProfile p;
  p.application = "one";
  p.globals.push_back({"g", 100, 10, 10, 50});
  Device d = simple_device(1024);
  SolveOptions o;
  o.power.failure_count = 2;

  const SolveResult r = solve(p, d, o);
  REQUIRE(r.placement.region_of("g") == Region::SRAM);
  // Stable: energy 10*1 + 10*2 = 30 nJ, cycles 50, EDP 1500.
  // Backup/restore: 2 failures * 164 B * (2+2) cy/B = 1312 cycles.
  // Inverse-eta scaling: 1500 * (50 + 1312) / 50.
  CHECK(r.objective == ScaledEdp{1500, 1362, 50});
  CHECK(r.objective.value() == doctest::Approx(1500.0 * 1362.0 / 50.0));
}

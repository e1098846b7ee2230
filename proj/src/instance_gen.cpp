#include "mapipro/instance_gen.hpp"

#include <algorithm>

namespace mapipro {

namespace {

u64 random_size(SplitMix64& rng) {
  // Log-uniform over [16, 8192]: pick a power-of-two bucket, then a byte
  // count inside it.
  const u64 bucket = rng.uniform(4, 12);
  const u64 lo = u64{1} << bucket;
  const u64 hi = std::min<u64>(u64{1} << (bucket + 1), 8192);
  return rng.uniform(lo, hi);
}

constexpr u64 kMaxAccesses = 100000;
constexpr u64 kMinCycles = 100;
constexpr u64 kMaxCycles = 10000000;

}  // namespace

AppProfile random_profile(u64 seed, int max_items) {
  if (max_items < 1)
    throw ValidationError("max_items must be at least 1");
  SplitMix64 rng(seed);
  AppProfile p;
  p.application = "gen_" + std::to_string(seed);

  const u64 k = static_cast<u64>(max_items);
  u64 n_functions = 0;
  if (k >= 3) n_functions = rng.uniform(1, std::min<u64>(5, k / 3));
  const u64 slots_left = k - 3 * n_functions;
  const u64 g_lo = n_functions == 0 ? 1 : 0;
  const u64 g_hi = std::max(g_lo, std::min<u64>(5, slots_left));
  const u64 n_globals = rng.uniform(g_lo, g_hi);

  for (u64 g = 0; g < n_globals; ++g) {
    GlobalVar var;
    var.name = "g" + std::to_string(g);
    var.size_bytes = random_size(rng);
    var.reads = rng.uniform(0, kMaxAccesses);
    var.writes = rng.uniform(0, kMaxAccesses);
    var.base_cycles = rng.uniform(kMinCycles, kMaxCycles);
    p.globals.push_back(std::move(var));
  }
  for (u64 f = 0; f < n_functions; ++f) {
    FunctionProfile fn;
    fn.name = "f" + std::to_string(f);
    fn.call_count = rng.uniform(1, 8);
    fn.base_cycles = rng.uniform(kMinCycles, kMaxCycles);
    for (SectionProfile* s : {&fn.text, &fn.data, &fn.stack}) {
      s->size_bytes = random_size(rng);
      s->reads = rng.uniform(0, kMaxAccesses);
      s->writes = rng.uniform(0, kMaxAccesses);
    }
    p.functions.push_back(std::move(fn));
  }
  return p;
}

Device default_fr6989() {
  Device d;
  d.regions = {
      {Region::SRAM, 2048, 5500, 5600, 1},
      {Region::FRAM_N, 128000, 10325, 13125, 2},
      {Region::FRAM_B, 3072, 10325, 13125, 2},
  };
  d.register_file_bytes = 64;
  // A full checkpoint moves SRAM capacity + registers = 2112 B;
  // 2112 * 7992 nJ = 16.879 mJ per backup, 2112 * 5495 nJ = 11.605 mJ
  // per restore.
  d.backup_energy_per_byte_nj = 7992;
  d.backup_cycles_per_byte = 3;
  d.restore_energy_per_byte_nj = 5495;
  d.restore_cycles_per_byte = 3;
  return d;
}

Device default_f5529() {
  Device d = default_fr6989();
  d.regions[1] = {Region::FLASH, 128000, 23876, 31198, 2};
  return d;
}

}  // namespace mapipro

#pragma once

#include "mapipro/profile.hpp"

namespace mapipro {

/// Deterministic 64-bit generator (splitmix64) so random instances are
/// reproducible across platforms and standard-library versions.
struct SplitMix64 {
  u64 state;

  explicit SplitMix64(u64 seed) : state(seed) {}

  u64 next() {
    state += 0x9E3779B97F4A7C15ull;
    u64 z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [lo, hi] (inclusive).
  u64 uniform(u64 lo, u64 hi) {
    return lo + next() % (hi - lo + 1);
  }
};

/// Random application profile with at most max_items placement items
/// (one per global, three per function). Sizes are log-uniform over
/// [16 B, 8 KiB] so instances land in both the SRAM-slack and the
/// SRAM-contended regime; access counts, cycles, and call counts span
/// the ranges the cost model is exercised over.
AppProfile random_profile(u64 seed, int max_items);

/// MSP430FR6989-style device: 2 KiB SRAM, 125 KiB FRAM for placement and
/// a 3 KiB FRAM backup region, with per-access energies and the 2x FRAM
/// latency at 16 MHz; per-byte backup/restore costs are calibrated so a
/// full-SRAM checkpoint costs about 16.88 mJ and its restore about
/// 11.61 mJ.
Device default_fr6989();

/// Flash-based counterpart: same SRAM and backup region, but the
/// non-volatile placement region is flash with its higher per-access
/// energies (notably the 31198 nJ write path).
Device default_f5529();

}  // namespace mapipro

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mapipro/exact_int.hpp"

namespace mapipro {

enum class Region { SRAM, FRAM_N, FRAM_B, FLASH };
enum class SectionKind { Text, Data, Stack };
enum class LatencyMode { Fixed, PerRegion };
enum class EdpScaling { EtaLiteral, InverseEta };
enum class Spacing { EvenlySpaced };
enum class Algorithm { BranchAndBound, Exhaustive };

std::string to_string(Region r);
std::string to_string(SectionKind k);
std::string to_string(LatencyMode m);
std::string to_string(EdpScaling s);
std::string to_string(Spacing s);
std::string to_string(Algorithm a);

Region region_from_string(const std::string& s);
SectionKind section_kind_from_string(const std::string& s);
LatencyMode latency_mode_from_string(const std::string& s);
EdpScaling edp_scaling_from_string(const std::string& s);
Spacing spacing_from_string(const std::string& s);
Algorithm algorithm_from_string(const std::string& s);

/// Canonical region ordering used for deterministic tie-breaking:
/// SRAM < FRAM_N < FLASH (FRAM_B is never a placement target).
int region_rank(Region r);

struct GlobalVar {
  std::string name;
  u64 size_bytes = 1;
  u64 reads = 0;
  u64 writes = 0;
  u64 base_cycles = 0;
};

struct SectionProfile {
  u64 size_bytes = 0;
  u64 reads = 0;
  u64 writes = 0;
};

struct FunctionProfile {
  std::string name;
  u64 call_count = 1;
  u64 base_cycles = 0;
  SectionProfile text;
  SectionProfile data;
  SectionProfile stack;

  const SectionProfile& section(SectionKind k) const;
};

struct AppProfile {
  std::string application;
  std::vector<GlobalVar> globals;
  std::vector<FunctionProfile> functions;

  /// Throws ValidationError on an empty application name, duplicate
  /// names, zero-sized globals, zero call counts, or a profile with
  /// nothing to place.
  void validate() const;
};

struct MemRegion {
  Region id = Region::SRAM;
  u64 capacity_bytes = 0;
  u64 read_energy_nj = 0;
  u64 write_energy_nj = 0;
  u64 cycles_per_access = 1;
};

struct Device {
  std::vector<MemRegion> regions;
  u64 register_file_bytes = 64;
  u64 backup_energy_per_byte_nj = 0;
  u64 backup_cycles_per_byte = 0;
  u64 restore_energy_per_byte_nj = 0;
  u64 restore_cycles_per_byte = 0;

  const MemRegion* find(Region id) const;
  /// find() or throw ValidationError naming the missing region.
  const MemRegion& require(Region id) const;
  /// Regions items may be assigned to, in canonical rank order.
  std::vector<Region> placement_regions() const;
  /// Throws ValidationError unless SRAM plus at least one non-volatile
  /// placement region exist, region ids are unique, and every
  /// cycles_per_access is >= 1.
  void validate() const;
};

struct PowerModel {
  u64 failure_count = 0;  // P
  Spacing spacing = Spacing::EvenlySpaced;
  EdpScaling edp_scaling = EdpScaling::InverseEta;
};

/// Atomic unit of placement: one global variable or one
/// (function, section) pair, weighted by call count.
struct PlacementItem {
  std::string id;  // global name, or "<function>.<section>"
  bool is_section = false;
  SectionKind section = SectionKind::Text;  // meaningful when is_section
  std::string function;                     // empty for globals
  u64 size_bytes = 0;
  u64 reads = 0;
  u64 writes = 0;
  u64 base_cycles = 0;
  u64 weight = 1;  // 1 for globals, call_count for sections
};

/// Globals in declaration order, then per function the text/data/stack
/// sections. Throws ValidationError on item-id collisions (a global
/// named like "<function>.<section>").
std::vector<PlacementItem> flatten(const AppProfile& profile);

struct Placement {
  std::string application;
  std::map<std::string, Region> by_id;

  Region region_of(const std::string& item_id) const;
  /// Every flattened item assigned, to a placement region only.
  void validate(const std::vector<PlacementItem>& items) const;
};

struct SolveOptions {
  LatencyMode latency_mode = LatencyMode::PerRegion;
  PowerModel power;
  bool backup_region = true;
  double time_limit_s = 60.0;
  Algorithm algorithm = Algorithm::BranchAndBound;
};

enum class Scenario { Stable, Unstable };

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& s);

/// One measured section-level configuration: three letters from {S, F}
/// ordered (text, data, stack), with its energy under stable and
/// failure-prone power. Units only need to be consistent within a table.
struct EnergyTableRow {
  std::string config;
  double energy_stable = 0.0;
  double energy_unstable = 0.0;
};

/// The eight-configuration measurement table the empirical strategy
/// picks from.
struct EnergyTable {
  std::vector<EnergyTableRow> rows;

  /// Exactly the 8 {S,F}^3 configs, each once; energies non-negative
  /// (+infinity marks an unmeasurable config and never wins argmin).
  void validate() const;
  const EnergyTableRow& row(const std::string& config) const;
};

}  // namespace mapipro

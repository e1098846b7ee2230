#include "mapipro/profile.hpp"

#include <cmath>
#include <set>

namespace mapipro {

std::string to_string(Region r) {
  switch (r) {
    case Region::SRAM: return "SRAM";
    case Region::FRAM_N: return "FRAM_N";
    case Region::FRAM_B: return "FRAM_B";
    case Region::FLASH: return "FLASH";
  }
  throw ValidationError("unknown region enum value");
}

std::string to_string(SectionKind k) {
  switch (k) {
    case SectionKind::Text: return "text";
    case SectionKind::Data: return "data";
    case SectionKind::Stack: return "stack";
  }
  throw ValidationError("unknown section kind enum value");
}

std::string to_string(LatencyMode m) {
  return m == LatencyMode::Fixed ? "fixed" : "per_region";
}

std::string to_string(EdpScaling s) {
  return s == EdpScaling::EtaLiteral ? "eta_literal" : "inverse_eta";
}

std::string to_string(Spacing) { return "evenly_spaced"; }

std::string to_string(Algorithm a) {
  return a == Algorithm::BranchAndBound ? "branch_and_bound" : "exhaustive";
}

Region region_from_string(const std::string& s) {
  if (s == "SRAM") return Region::SRAM;
  if (s == "FRAM_N") return Region::FRAM_N;
  if (s == "FRAM_B") return Region::FRAM_B;
  if (s == "FLASH") return Region::FLASH;
  throw ParseError("unknown region id '" + s + "'");
}

SectionKind section_kind_from_string(const std::string& s) {
  if (s == "text") return SectionKind::Text;
  if (s == "data") return SectionKind::Data;
  if (s == "stack") return SectionKind::Stack;
  throw ParseError("unknown section kind '" + s + "'");
}

LatencyMode latency_mode_from_string(const std::string& s) {
  if (s == "fixed") return LatencyMode::Fixed;
  if (s == "per_region") return LatencyMode::PerRegion;
  throw ParseError("unknown latency mode '" + s + "'");
}

EdpScaling edp_scaling_from_string(const std::string& s) {
  if (s == "eta_literal") return EdpScaling::EtaLiteral;
  if (s == "inverse_eta") return EdpScaling::InverseEta;
  throw ParseError("unknown edp scaling '" + s + "'");
}

Spacing spacing_from_string(const std::string& s) {
  if (s == "evenly_spaced") return Spacing::EvenlySpaced;
  throw ParseError("unknown failure spacing '" + s + "'");
}

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "branch_and_bound") return Algorithm::BranchAndBound;
  if (s == "exhaustive") return Algorithm::Exhaustive;
  throw ParseError("unknown algorithm '" + s + "'");
}

int region_rank(Region r) {
  switch (r) {
    case Region::SRAM: return 0;
    case Region::FRAM_N: return 1;
    case Region::FLASH: return 2;
    case Region::FRAM_B: return 3;
  }
  return 3;
}

const SectionProfile& FunctionProfile::section(SectionKind k) const {
  switch (k) {
    case SectionKind::Text: return text;
    case SectionKind::Data: return data;
    case SectionKind::Stack: return stack;
  }
  throw ValidationError("unknown section kind enum value");
}

void AppProfile::validate() const {
  if (application.empty())
    throw ValidationError("profile has an empty application name");
  if (globals.empty() && functions.empty())
    throw ValidationError("profile '" + application +
                          "' declares no globals and no functions");
  std::set<std::string> seen;
  for (const auto& g : globals) {
    if (g.name.empty())
      throw ValidationError("global variable with empty name");
    if (g.size_bytes == 0)
      throw ValidationError("global '" + g.name + "' has size_bytes 0");
    if (!seen.insert(g.name).second)
      throw ValidationError("duplicate global name '" + g.name + "'");
  }
  std::set<std::string> fseen;
  for (const auto& f : functions) {
    if (f.name.empty()) throw ValidationError("function with empty name");
    if (f.call_count == 0)
      throw ValidationError("function '" + f.name + "' has call_count 0");
    if (!fseen.insert(f.name).second)
      throw ValidationError("duplicate function name '" + f.name + "'");
  }
}

const MemRegion* Device::find(Region id) const {
  for (const auto& r : regions)
    if (r.id == id) return &r;
  return nullptr;
}

const MemRegion& Device::require(Region id) const {
  const MemRegion* r = find(id);
  if (!r)
    throw ValidationError("device has no " + to_string(id) + " region");
  return *r;
}

std::vector<Region> Device::placement_regions() const {
  std::vector<Region> out;
  for (Region id : {Region::SRAM, Region::FRAM_N, Region::FLASH})
    if (find(id)) out.push_back(id);
  return out;
}

void Device::validate() const {
  std::set<Region> ids;
  for (const auto& r : regions) {
    if (!ids.insert(r.id).second)
      throw ValidationError("duplicate device region " + to_string(r.id));
    if (r.cycles_per_access == 0)
      throw ValidationError("region " + to_string(r.id) +
                            " has cycles_per_access 0");
  }
  if (!find(Region::SRAM))
    throw ValidationError("device has no SRAM region");
  if (!find(Region::FRAM_N) && !find(Region::FLASH))
    throw ValidationError(
        "device has no non-volatile placement region (FRAM_N or FLASH)");
}

std::vector<PlacementItem> flatten(const AppProfile& profile) {
  profile.validate();
  std::vector<PlacementItem> items;
  items.reserve(profile.globals.size() + 3 * profile.functions.size());
  std::set<std::string> ids;
  auto add = [&](PlacementItem it) {
    if (!ids.insert(it.id).second)
      throw ValidationError("placement item id collision on '" + it.id + "'");
    items.push_back(std::move(it));
  };
  for (const auto& g : profile.globals) {
    PlacementItem it;
    it.id = g.name;
    it.is_section = false;
    it.size_bytes = g.size_bytes;
    it.reads = g.reads;
    it.writes = g.writes;
    it.base_cycles = g.base_cycles;
    it.weight = 1;
    add(std::move(it));
  }
  for (const auto& f : profile.functions) {
    for (SectionKind k : {SectionKind::Text, SectionKind::Data, SectionKind::Stack}) {
      const SectionProfile& s = f.section(k);
      PlacementItem it;
      it.id = f.name + "." + to_string(k);
      it.is_section = true;
      it.section = k;
      it.function = f.name;
      it.size_bytes = s.size_bytes;
      it.reads = s.reads;
      it.writes = s.writes;
      it.base_cycles = f.base_cycles;
      it.weight = f.call_count;
      add(std::move(it));
    }
  }
  return items;
}

std::string to_string(Scenario s) {
  return s == Scenario::Stable ? "stable" : "unstable";
}

Scenario scenario_from_string(const std::string& s) {
  if (s == "stable") return Scenario::Stable;
  if (s == "unstable") return Scenario::Unstable;
  throw ParseError("unknown scenario '" + s + "'");
}

static bool valid_config(const std::string& c) {
  if (c.size() != 3) return false;
  for (char ch : c)
    if (ch != 'S' && ch != 'F') return false;
  return true;
}

void EnergyTable::validate() const {
  if (rows.size() != 8)
    throw ValidationError("energy table must have exactly 8 rows, got " +
                          std::to_string(rows.size()));
  std::set<std::string> seen;
  for (const auto& r : rows) {
    if (!valid_config(r.config))
      throw ValidationError("energy table config '" + r.config +
                            "' is not a 3-letter {S,F} string");
    if (!seen.insert(r.config).second)
      throw ValidationError("duplicate energy table config '" + r.config +
                            "'");
    // +infinity is allowed: it marks a configuration that could not be
    // measured (or does not fit the device) and simply never wins argmin.
    for (double e : {r.energy_stable, r.energy_unstable})
      if (std::isnan(e) || e < 0.0)
        throw ValidationError("energy table config '" + r.config +
                              "' has a negative or undefined energy");
  }
}

const EnergyTableRow& EnergyTable::row(const std::string& config) const {
  for (const auto& r : rows)
    if (r.config == config) return r;
  throw ValidationError("missing energy table configuration row '" + config +
                        "'");
}

Region Placement::region_of(const std::string& item_id) const {
  auto it = by_id.find(item_id);
  if (it == by_id.end())
    throw ValidationError("placement has no assignment for item '" + item_id +
                          "'");
  return it->second;
}

void Placement::validate(const std::vector<PlacementItem>& items) const {
  for (const auto& it : items) {
    Region r = region_of(it.id);
    if (r == Region::FRAM_B)
      throw ValidationError("item '" + it.id +
                            "' assigned to backup region FRAM_B");
  }
}

}  // namespace mapipro

#include "mapipro/json_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace mapipro {

namespace {

const nlohmann::json& require_field(const nlohmann::json& j, const char* key,
                                    const std::string& ctx) {
  if (!j.is_object())
    throw ParseError(ctx + " must be a JSON object");
  auto it = j.find(key);
  if (it == j.end())
    throw ParseError(ctx + " is missing required field '" + key + "'");
  return *it;
}

u64 as_u64(const nlohmann::json& v, const char* key, const std::string& ctx) {
  if (v.is_number_unsigned()) return v.get<u64>();
  if (v.is_number_integer()) {
    auto s = v.get<std::int64_t>();
    if (s >= 0) return static_cast<u64>(s);
  }
  throw ParseError(ctx + " field '" + key +
                   "' must be a non-negative integer");
}

u64 require_u64(const nlohmann::json& j, const char* key,
                const std::string& ctx) {
  return as_u64(require_field(j, key, ctx), key, ctx);
}

u64 optional_u64(const nlohmann::json& j, const char* key,
                 const std::string& ctx, u64 fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return as_u64(j.at(key), key, ctx);
}

double require_number(const nlohmann::json& j, const char* key,
                      const std::string& ctx) {
  const auto& v = require_field(j, key, ctx);
  if (!v.is_number())
    throw ParseError(ctx + " field '" + key + "' must be a number");
  double d = v.get<double>();
  if (!std::isfinite(d))
    throw ParseError(ctx + " field '" + key + "' must be finite");
  return d;
}

std::string require_string(const nlohmann::json& j, const char* key,
                           const std::string& ctx) {
  const auto& v = require_field(j, key, ctx);
  if (!v.is_string())
    throw ParseError(ctx + " field '" + key + "' must be a string");
  return v.get<std::string>();
}

std::string optional_string(const nlohmann::json& j, const char* key,
                            const std::string& fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  if (!j.at(key).is_string())
    throw ParseError(std::string("field '") + key + "' must be a string");
  return j.at(key).get<std::string>();
}

SectionProfile parse_section(const nlohmann::json& j, const std::string& ctx) {
  SectionProfile s;
  s.size_bytes = require_u64(j, "size_bytes", ctx);
  s.reads = require_u64(j, "reads", ctx);
  s.writes = require_u64(j, "writes", ctx);
  return s;
}

}  // namespace

AppProfile parse_profile(const nlohmann::json& j) {
  AppProfile p;
  p.application = require_string(j, "application", "profile");
  if (j.contains("globals")) {
    if (!j.at("globals").is_array())
      throw ParseError("profile field 'globals' must be an array");
    for (const auto& gj : j.at("globals")) {
      GlobalVar g;
      const std::string ctx = "global";
      g.name = require_string(gj, "name", ctx);
      g.size_bytes = require_u64(gj, "size_bytes", "global '" + g.name + "'");
      g.reads = require_u64(gj, "reads", "global '" + g.name + "'");
      g.writes = require_u64(gj, "writes", "global '" + g.name + "'");
      g.base_cycles = require_u64(gj, "base_cycles", "global '" + g.name + "'");
      p.globals.push_back(std::move(g));
    }
  }
  if (j.contains("functions")) {
    if (!j.at("functions").is_array())
      throw ParseError("profile field 'functions' must be an array");
    for (const auto& fj : j.at("functions")) {
      FunctionProfile f;
      f.name = require_string(fj, "name", "function");
      const std::string ctx = "function '" + f.name + "'";
      f.call_count = require_u64(fj, "call_count", ctx);
      f.base_cycles = require_u64(fj, "base_cycles", ctx);
      const auto& sections = require_field(fj, "sections", ctx);
      if (!sections.is_object())
        throw ParseError(ctx + " field 'sections' must be an object");
      for (auto it = sections.begin(); it != sections.end(); ++it) {
        if (it.key() != "text" && it.key() != "data" && it.key() != "stack")
          throw ParseError(ctx + " has unknown section '" + it.key() + "'");
      }
      f.text = parse_section(require_field(sections, "text", ctx),
                             ctx + " text section");
      f.data = parse_section(require_field(sections, "data", ctx),
                             ctx + " data section");
      f.stack = parse_section(require_field(sections, "stack", ctx),
                              ctx + " stack section");
      p.functions.push_back(std::move(f));
    }
  }
  try {
    p.validate();
  } catch (const ValidationError& e) {
    throw ParseError(std::string("invalid profile: ") + e.what());
  }
  return p;
}

Device parse_device(const nlohmann::json& j) {
  Device d;
  const auto& regions = require_field(j, "regions", "device");
  if (!regions.is_array())
    throw ParseError("device field 'regions' must be an array");
  for (const auto& rj : regions) {
    MemRegion r;
    r.id = region_from_string(require_string(rj, "id", "region"));
    const std::string ctx = "region " + to_string(r.id);
    r.capacity_bytes = require_u64(rj, "capacity_bytes", ctx);
    r.read_energy_nj = require_u64(rj, "read_energy_nj", ctx);
    r.write_energy_nj = require_u64(rj, "write_energy_nj", ctx);
    r.cycles_per_access = require_u64(rj, "cycles_per_access", ctx);
    d.regions.push_back(r);
  }
  d.register_file_bytes = optional_u64(j, "register_file_bytes", "device", 64);
  d.backup_energy_per_byte_nj =
      optional_u64(j, "backup_energy_per_byte_nj", "device", 0);
  d.backup_cycles_per_byte =
      optional_u64(j, "backup_cycles_per_byte", "device", 0);
  d.restore_energy_per_byte_nj =
      optional_u64(j, "restore_energy_per_byte_nj", "device", 0);
  d.restore_cycles_per_byte =
      optional_u64(j, "restore_cycles_per_byte", "device", 0);
  try {
    d.validate();
  } catch (const ValidationError& e) {
    throw ParseError(std::string("invalid device: ") + e.what());
  }
  return d;
}

PowerModel parse_power(const nlohmann::json& j) {
  PowerModel p;
  p.failure_count = require_u64(j, "failure_count", "power model");
  p.spacing = spacing_from_string(
      optional_string(j, "spacing", "evenly_spaced"));
  p.edp_scaling = edp_scaling_from_string(
      optional_string(j, "edp_scaling", "inverse_eta"));
  return p;
}

Placement parse_placement(const nlohmann::json& j) {
  Placement p;
  p.application = require_string(j, "application", "placement");
  const auto& assignments = require_field(j, "assignments", "placement");
  if (!assignments.is_array())
    throw ParseError("placement field 'assignments' must be an array");
  for (const auto& aj : assignments) {
    const std::string item = require_string(aj, "item", "assignment");
    const Region region = region_from_string(
        require_string(aj, "region", "assignment '" + item + "'"));
    if (!p.by_id.emplace(item, region).second)
      throw ParseError("placement assigns item '" + item + "' twice");
  }
  return p;
}

EnergyTable parse_energy_table(const nlohmann::json& j) {
  EnergyTable t;
  const auto& rows = require_field(j, "rows", "energy table");
  if (!rows.is_array())
    throw ParseError("energy table field 'rows' must be an array");
  for (const auto& rj : rows) {
    EnergyTableRow r;
    r.config = require_string(rj, "config", "energy table row");
    const std::string ctx = "energy table row '" + r.config + "'";
    r.energy_stable = require_number(rj, "energy_stable", ctx);
    r.energy_unstable = require_number(rj, "energy_unstable", ctx);
    t.rows.push_back(std::move(r));
  }
  try {
    t.validate();
  } catch (const ValidationError& e) {
    throw ParseError(std::string("invalid energy table: ") + e.what());
  }
  return t;
}

namespace {

nlohmann::json load_json(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in)
    throw ParseError(std::string("cannot open ") + what + " file '" + path +
                     "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed JSON in ") + what + " file '" +
                     path + "': " + e.what());
  }
}

}  // namespace

AppProfile load_profile(const std::string& path) {
  return parse_profile(load_json(path, "profile"));
}

Device load_device(const std::string& path) {
  return parse_device(load_json(path, "device"));
}

PowerModel load_power(const std::string& path) {
  return parse_power(load_json(path, "power"));
}

Placement load_placement(const std::string& path) {
  return parse_placement(load_json(path, "placement"));
}

EnergyTable load_energy_table(const std::string& path) {
  return parse_energy_table(load_json(path, "energy table"));
}

ordered_json profile_to_json(const AppProfile& profile) {
  ordered_json j;
  j["application"] = profile.application;
  j["globals"] = ordered_json::array();
  for (const auto& g : profile.globals) {
    j["globals"].push_back({{"name", g.name},
                            {"size_bytes", g.size_bytes},
                            {"reads", g.reads},
                            {"writes", g.writes},
                            {"base_cycles", g.base_cycles}});
  }
  j["functions"] = ordered_json::array();
  for (const auto& f : profile.functions) {
    ordered_json sections;
    for (SectionKind k :
         {SectionKind::Text, SectionKind::Data, SectionKind::Stack}) {
      const SectionProfile& s = f.section(k);
      sections[to_string(k)] = {{"size_bytes", s.size_bytes},
                                {"reads", s.reads},
                                {"writes", s.writes}};
    }
    j["functions"].push_back({{"name", f.name},
                              {"call_count", f.call_count},
                              {"base_cycles", f.base_cycles},
                              {"sections", sections}});
  }
  return j;
}

ordered_json device_to_json(const Device& device) {
  ordered_json j;
  j["regions"] = ordered_json::array();
  for (const auto& r : device.regions) {
    j["regions"].push_back({{"id", to_string(r.id)},
                            {"capacity_bytes", r.capacity_bytes},
                            {"read_energy_nj", r.read_energy_nj},
                            {"write_energy_nj", r.write_energy_nj},
                            {"cycles_per_access", r.cycles_per_access}});
  }
  j["register_file_bytes"] = device.register_file_bytes;
  j["backup_energy_per_byte_nj"] = device.backup_energy_per_byte_nj;
  j["backup_cycles_per_byte"] = device.backup_cycles_per_byte;
  j["restore_energy_per_byte_nj"] = device.restore_energy_per_byte_nj;
  j["restore_cycles_per_byte"] = device.restore_cycles_per_byte;
  return j;
}

ordered_json power_to_json(const PowerModel& power) {
  return {{"failure_count", power.failure_count},
          {"spacing", to_string(power.spacing)},
          {"edp_scaling", to_string(power.edp_scaling)}};
}

ordered_json options_to_json(const SolveOptions& options) {
  return {{"latency_mode", to_string(options.latency_mode)},
          {"edp_scaling", to_string(options.power.edp_scaling)},
          {"failure_count", options.power.failure_count},
          {"spacing", to_string(options.power.spacing)},
          {"backup_region", options.backup_region},
          {"time_limit_s", options.time_limit_s},
          {"algorithm", to_string(options.algorithm)}};
}

ordered_json placement_to_json(const Placement& placement,
                               const std::vector<PlacementItem>& items,
                               const ScaledEdp& objective, bool proven_optimal,
                               const SolveOptions& options) {
  ordered_json j;
  j["application"] = placement.application;
  j["assignments"] = ordered_json::array();
  for (const auto& item : items) {
    ordered_json a;
    a["item"] = item.id;
    a["origin"] = item.is_section ? to_string(item.section) : "global";
    if (item.is_section) a["function"] = item.function;
    a["region"] = to_string(placement.region_of(item.id));
    j["assignments"].push_back(std::move(a));
  }
  if (objective.num_cycles == objective.den_cycles &&
      objective.stable_edp <= std::numeric_limits<u64>::max()) {
    j["objective_nj_cycles"] = static_cast<u64>(objective.stable_edp);
  } else {
    j["objective_nj_cycles"] = objective.value();
  }
  j["proven_optimal"] = proven_optimal;
  j["options"] = options_to_json(options);
  return j;
}

ordered_json energy_table_to_json(const EnergyTable& table) {
  ordered_json j;
  j["rows"] = ordered_json::array();
  for (const auto& r : table.rows) {
    j["rows"].push_back({{"config", r.config},
                         {"energy_stable", r.energy_stable},
                         {"energy_unstable", r.energy_unstable}});
  }
  return j;
}

void write_json_file(const std::string& path, const ordered_json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write output file '" + path + "'");
  out << j.dump(2) << "\n";
}

}  // namespace mapipro

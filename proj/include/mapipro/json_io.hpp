#pragma once

#include <json.hpp>

#include "mapipro/profile.hpp"

namespace mapipro {

using ordered_json = nlohmann::ordered_json;

AppProfile parse_profile(const nlohmann::json& j);
Device parse_device(const nlohmann::json& j);
PowerModel parse_power(const nlohmann::json& j);
Placement parse_placement(const nlohmann::json& j);
EnergyTable parse_energy_table(const nlohmann::json& j);

/// load_* read a file, parse JSON, and convert, wrapping every failure in
/// ParseError with the offending path in the message.
AppProfile load_profile(const std::string& path);
Device load_device(const std::string& path);
PowerModel load_power(const std::string& path);
Placement load_placement(const std::string& path);
EnergyTable load_energy_table(const std::string& path);

ordered_json profile_to_json(const AppProfile& profile);
ordered_json device_to_json(const Device& device);
ordered_json power_to_json(const PowerModel& power);
ordered_json options_to_json(const SolveOptions& options);

/// Placement document: application, per-item assignments in flatten order,
/// the objective, the optimality flag, and an echo of the solve options.
ordered_json placement_to_json(const Placement& placement,
                               const std::vector<PlacementItem>& items,
                               const ScaledEdp& objective, bool proven_optimal,
                               const SolveOptions& options);

ordered_json energy_table_to_json(const EnergyTable& table);

/// Writes with a trailing newline, LF line endings.
void write_json_file(const std::string& path, const ordered_json& j);

}  // namespace mapipro

#pragma once

#include "mapipro/json_io.hpp"
#include "mapipro/simulator.hpp"

namespace mapipro {

ordered_json simulation_to_json(const SimulationReport& report);
ordered_json comparison_to_json(const ComparisonReport& report);

/// Same columns as the JSON rows: strategy, energy_nj, cycles, edp, eta,
/// progress, normalized_edp, completed, reexecutions. Infeasible rows
/// leave the numeric cells empty.
std::string comparison_to_csv(const ComparisonReport& report);

}  // namespace mapipro

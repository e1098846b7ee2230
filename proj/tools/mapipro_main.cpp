#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "mapipro/instance_gen.hpp"
#include "mapipro/json_io.hpp"
#include "mapipro/linker_emitter.hpp"
#include "mapipro/report_io.hpp"
#include "mapipro/simulator.hpp"
#include "mapipro/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;       // parse/usage errors
constexpr int kExitInfeasible = 2;  // no feasible placement
constexpr int kExitTimeLimit = 3;   // best-effort placement written
constexpr int kExitMismatch = 4;    // oracle disagreement

struct CommonFlags {
  std::string profile_path;
  std::string device_path;
  std::string power_path;
  std::string latency_mode = "per_region";
  std::string edp_scaling;
  long long failures = -1;  // -1: no override
  bool no_backup_region = false;
  double time_limit_s = 60.0;
};

mapipro::PowerModel resolve_power(const CommonFlags& flags) {
  mapipro::PowerModel power;
  if (!flags.power_path.empty()) power = mapipro::load_power(flags.power_path);
  if (flags.failures >= 0)
    power.failure_count = static_cast<mapipro::u64>(flags.failures);
  if (!flags.edp_scaling.empty())
    power.edp_scaling = mapipro::edp_scaling_from_string(flags.edp_scaling);
  return power;
}

mapipro::SolveOptions resolve_solve_options(const CommonFlags& flags,
                                            const std::string& algorithm) {
  mapipro::SolveOptions options;
  options.latency_mode = mapipro::latency_mode_from_string(flags.latency_mode);
  options.power = resolve_power(flags);
  options.backup_region = !flags.no_backup_region;
  options.time_limit_s = flags.time_limit_s;
  options.algorithm = mapipro::algorithm_from_string(algorithm);
  return options;
}

void add_common_flags(CLI::App* cmd, CommonFlags& flags, bool need_device) {
  cmd->add_option("--profile", flags.profile_path, "application profile JSON")
      ->required();
  auto* dev = cmd->add_option("--device", flags.device_path,
                              "memory device JSON");
  if (need_device) dev->required();
  cmd->add_option("--power", flags.power_path, "power model JSON");
  cmd->add_option("--failures", flags.failures,
                  "power failure count override")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--latency-mode", flags.latency_mode,
                  "fixed or per_region (default per_region)");
  cmd->add_option("--edp-scaling", flags.edp_scaling,
                  "eta_literal or inverse_eta override");
  cmd->add_flag("--no-backup-region", flags.no_backup_region,
                "disable the FRAM_B checkpoint region");
  cmd->add_option("--time-limit", flags.time_limit_s,
                  "solver time limit in seconds");
}

int run_solve(const CommonFlags& flags, const std::string& algorithm,
              std::string output_path) {
  const mapipro::AppProfile profile = mapipro::load_profile(flags.profile_path);
  const mapipro::Device device = mapipro::load_device(flags.device_path);
  const mapipro::SolveOptions options = resolve_solve_options(flags, algorithm);
  const mapipro::SolveResult result = mapipro::solve(profile, device, options);
  if (output_path.empty()) output_path = profile.application + ".placement.json";
  const auto items = mapipro::flatten(profile);
  mapipro::write_json_file(
      output_path,
      mapipro::placement_to_json(result.placement, items, result.objective,
                                 result.proven_optimal, options));
  std::cout << "placement: " << output_path << "\n"
            << "objective_nj_cycles: " << result.objective.describe() << "\n"
            << "proven_optimal: " << (result.proven_optimal ? "true" : "false")
            << "\n"
            << "nodes_explored: " << result.nodes_explored << "\n";
  if (result.timed_out) {
    std::cerr << "time limit exceeded; wrote the best placement found\n";
    return kExitTimeLimit;
  }
  return kExitOk;
}

int run_simulate(const CommonFlags& flags, const std::string& placement_path,
                 const std::string& output_path) {
  const mapipro::AppProfile profile = mapipro::load_profile(flags.profile_path);
  const mapipro::Device device = mapipro::load_device(flags.device_path);
  const mapipro::Placement placement = mapipro::load_placement(placement_path);
  const mapipro::PowerModel power = resolve_power(flags);
  const mapipro::SimulationReport report = mapipro::simulate(
      placement, profile, device, power, !flags.no_backup_region,
      mapipro::latency_mode_from_string(flags.latency_mode));
  const mapipro::ordered_json j = mapipro::simulation_to_json(report);
  if (!output_path.empty()) {
    mapipro::write_json_file(output_path, j);
    std::cout << "report: " << output_path << "\n";
  }
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int run_compare(const CommonFlags& flags, const std::string& strategies_csv,
                const std::string& normalize, const std::string& table_path,
                const std::string& scenario, const std::string& format,
                std::string output_base) {
  const mapipro::AppProfile profile = mapipro::load_profile(flags.profile_path);
  const mapipro::Device device = mapipro::load_device(flags.device_path);
  const mapipro::PowerModel power = resolve_power(flags);

  mapipro::CompareOptions options;
  std::string token;
  std::istringstream list(strategies_csv);
  while (std::getline(list, token, ',')) {
    if (!token.empty()) options.strategies.push_back(token);
  }
  if (options.strategies.empty())
    throw mapipro::ParseError("--strategies list is empty");
  options.normalize = normalize;
  if (!table_path.empty())
    options.energy_table = mapipro::load_energy_table(table_path);
  if (!scenario.empty())
    options.scenario = mapipro::scenario_from_string(scenario);
  options.latency_mode = mapipro::latency_mode_from_string(flags.latency_mode);
  options.time_limit_s = flags.time_limit_s;

  const mapipro::ComparisonReport report =
      mapipro::compare_strategies(profile, device, power, options);
  if (output_base.empty()) output_base = profile.application + ".compare";
  if (format == "json" || format == "both") {
    mapipro::write_json_file(output_base + ".json",
                             mapipro::comparison_to_json(report));
    std::cout << "report: " << output_base << ".json\n";
  }
  if (format == "csv" || format == "both") {
    std::ofstream csv(output_base + ".csv", std::ios::binary);
    if (!csv)
      throw mapipro::Error("cannot write output file '" + output_base +
                           ".csv'");
    csv << mapipro::comparison_to_csv(report);
    std::cout << "report: " << output_base << ".csv\n";
  }
  if (format != "json" && format != "csv" && format != "both")
    throw mapipro::ParseError("unknown --format '" + format + "'");
  for (const auto& row : report.rows) {
    std::cout << row.strategy;
    if (!row.config.empty()) std::cout << " [" << row.config << "]";
    if (row.infeasible) {
      std::cout << ": infeasible (" << row.message << ")\n";
    } else {
      std::cout << ": edp " << row.report.edp_system.value()
                << ", normalized " << row.normalized_edp << "\n";
    }
  }
  return kExitOk;
}

int run_emit_linker(const std::string& profile_path,
                    const std::string& placement_path,
                    const std::string& output_dir, bool print_table) {
  const mapipro::AppProfile profile = mapipro::load_profile(profile_path);
  const mapipro::Placement placement = mapipro::load_placement(placement_path);
  const mapipro::LinkerOutput out = mapipro::emit_linker(placement, profile);
  std::error_code dir_err;
  std::filesystem::create_directories(output_dir, dir_err);
  const std::string base = output_dir + "/" + profile.application;
  auto write_file = [&](const std::string& suffix, const std::string& text) {
    std::ofstream file(base + suffix, std::ios::binary);
    if (!file)
      throw mapipro::Error("cannot write output file '" + base + suffix + "'");
    file << text;
    std::cout << "wrote " << base << suffix << "\n";
  };
  write_file(".mapipro.cmd", out.cmd);
  write_file(".mapipro.pragmas.h", out.pragmas);
  if (print_table)
    std::cout << mapipro::emit_placement_table(placement, profile);
  return kExitOk;
}

unsigned verify_thread_count(mapipro::u64 instances) {
  unsigned threads = std::thread::hardware_concurrency();
  if (threads == 0) threads = 1;
  if (const char* cap = std::getenv("MAPIPRO_THREADS")) {
    char* end = nullptr;
    const long parsed = std::strtol(cap, &end, 10);
    if (end == cap || *end != '\0' || parsed < 1)
      throw mapipro::ParseError("MAPIPRO_THREADS must be a positive integer");
    threads = std::min<unsigned>(threads, static_cast<unsigned>(parsed));
  }
  if (instances < threads) threads = static_cast<unsigned>(instances);
  return std::max(1u, threads);
}

int run_verify(mapipro::u64 instances, int max_items, mapipro::u64 seed,
               const CommonFlags& flags, const std::string& device_path) {
  if (max_items < 1 || max_items > 24)
    throw mapipro::ParseError("--max-items must be between 1 and 24");
  if (instances == 0) {
    std::cerr << "warning: --instances 0 verifies nothing (vacuous pass)\n";
    std::cout << "verified 0 instances\n";
    return kExitOk;
  }
  const mapipro::Device device = device_path.empty()
                                     ? mapipro::default_fr6989()
                                     : mapipro::load_device(device_path);
  mapipro::SolveOptions options;
  options.latency_mode = mapipro::latency_mode_from_string(flags.latency_mode);
  options.power.failure_count =
      flags.failures >= 0 ? static_cast<mapipro::u64>(flags.failures) : 0;
  if (!flags.edp_scaling.empty())
    options.power.edp_scaling =
        mapipro::edp_scaling_from_string(flags.edp_scaling);
  options.backup_region = !flags.no_backup_region;
  options.time_limit_s = flags.time_limit_s;

  std::atomic<mapipro::u64> next{0};
  std::mutex failures_mutex;
  std::vector<std::pair<mapipro::u64, std::string>> failures;

  auto check_instance = [&](mapipro::u64 index) {
    const mapipro::u64 instance_seed = seed + index;
    const mapipro::AppProfile profile =
        mapipro::random_profile(instance_seed, max_items);
    std::string message;
    try {
      bool bb_infeasible = false, ex_infeasible = false;
      mapipro::SolveResult bb, ex;
      try {
        bb = mapipro::solve(profile, device, options);
      } catch (const mapipro::InfeasibleError&) {
        bb_infeasible = true;
      }
      try {
        ex = mapipro::exhaustive_oracle(profile, device, options);
      } catch (const mapipro::InfeasibleError&) {
        ex_infeasible = true;
      }
      if (bb_infeasible != ex_infeasible) {
        message = "feasibility disagreement (branch_and_bound " +
                  std::string(bb_infeasible ? "infeasible" : "feasible") +
                  ", exhaustive " +
                  std::string(ex_infeasible ? "infeasible" : "feasible") + ")";
      } else if (!bb_infeasible) {
        if (mapipro::compare(bb.objective, ex.objective) != 0) {
          message = "objective mismatch: branch_and_bound " +
                    bb.objective.describe() + " vs exhaustive " +
                    ex.objective.describe();
        } else if (bb.placement.by_id != ex.placement.by_id) {
          message = "tie-break mismatch: objectives equal but placements differ";
        }
      }
    } catch (const std::exception& e) {
      message = std::string("unexpected error: ") + e.what();
    }
    if (!message.empty()) {
      std::lock_guard<std::mutex> lock(failures_mutex);
      failures.emplace_back(index, message);
    }
  };

  const unsigned threads = verify_thread_count(instances);
  if (threads <= 1) {
    for (mapipro::u64 i = 0; i < instances; ++i) check_instance(i);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (mapipro::u64 i = next.fetch_add(1); i < instances;
             i = next.fetch_add(1))
          check_instance(i);
      });
    }
    for (auto& t : pool) t.join();
  }

  if (!failures.empty()) {
    std::sort(failures.begin(), failures.end());
    const auto& [index, message] = failures.front();
    std::cerr << "mismatch on instance " << index << " (seed "
              << seed + index << "): " << message << "\n";
    std::cerr << "counterexample profile:\n"
              << mapipro::profile_to_json(
                     mapipro::random_profile(seed + index, max_items))
                     .dump(2)
              << "\n";
    std::cerr << failures.size() << "/" << instances << " instances failed\n";
    return kExitMismatch;
  }
  std::cout << "verified " << instances
            << " instances: branch_and_bound matches exhaustive\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "EDP-optimal SRAM/FRAM placement, intermittent-power simulation, and "
      "linker fragment emission for embedded applications"};
  app.require_subcommand(1);

  CommonFlags solve_flags;
  std::string solve_algorithm = "branch_and_bound";
  std::string solve_output;
  auto* solve_cmd =
      app.add_subcommand("solve", "compute the EDP-minimizing placement");
  add_common_flags(solve_cmd, solve_flags, /*need_device=*/true);
  solve_cmd->add_option("--algorithm", solve_algorithm,
                        "branch_and_bound or exhaustive");
  solve_cmd->add_option("--output,-o", solve_output, "placement output path");

  CommonFlags sim_flags;
  std::string sim_placement, sim_output;
  auto* sim_cmd = app.add_subcommand(
      "simulate", "replay a placement under a power-failure schedule");
  add_common_flags(sim_cmd, sim_flags, /*need_device=*/true);
  sim_cmd->add_option("--placement", sim_placement, "placement JSON")
      ->required();
  sim_cmd->add_option("--output,-o", sim_output, "report output path");

  CommonFlags cmp_flags;
  std::string cmp_strategies = "proposed,fram-only";
  std::string cmp_normalize = "fram-only";
  std::string cmp_table, cmp_scenario, cmp_output;
  std::string cmp_format = "both";
  auto* cmp_cmd = app.add_subcommand(
      "compare", "evaluate placement strategies side by side");
  add_common_flags(cmp_cmd, cmp_flags, /*need_device=*/true);
  cmp_cmd->add_option("--strategies", cmp_strategies,
                      "comma list from proposed,fram-only,sram-only,empirical,"
                      "sram-flash-ilp,sram-fram-ilp-no-br");
  cmp_cmd->add_option("--normalize", cmp_normalize,
                      "strategy whose EDP becomes 1.0");
  cmp_cmd->add_option("--energy-table", cmp_table,
                      "measured 8-row energy table JSON for 'empirical'");
  cmp_cmd->add_option("--scenario", cmp_scenario,
                      "stable or unstable column for 'empirical'");
  cmp_cmd->add_option("--format", cmp_format, "json, csv, or both");
  cmp_cmd->add_option("--output,-o", cmp_output,
                      "output base path (suffixes .json/.csv)");

  std::string emit_profile, emit_placement, emit_dir = ".";
  bool emit_table = false;
  auto* emit_cmd = app.add_subcommand(
      "emit-linker", "render a placement as linker fragment + pragmas");
  emit_cmd->add_option("--profile", emit_profile, "application profile JSON")
      ->required();
  emit_cmd->add_option("--placement", emit_placement, "placement JSON")
      ->required();
  emit_cmd->add_option("--output-dir", emit_dir, "output directory");
  emit_cmd->add_flag("--table", emit_table,
                     "print the per-function placement table");

  CommonFlags verify_flags;
  unsigned long long verify_instances = 200;
  int verify_max_items = 16;
  unsigned long long verify_seed = 7;
  std::string verify_device;
  auto* verify_cmd = app.add_subcommand(
      "verify", "check branch-and-bound against exhaustive enumeration");
  verify_cmd->add_option("--instances", verify_instances,
                         "number of random instances");
  verify_cmd->add_option("--max-items", verify_max_items,
                         "item budget per instance (at most 24)");
  verify_cmd->add_option("--seed", verify_seed, "base seed");
  verify_cmd->add_option("--device", verify_device,
                         "device JSON (default: built-in FR6989 model)");
  verify_cmd->add_option("--failures", verify_flags.failures,
                         "power failure count")
      ->check(CLI::NonNegativeNumber);
  verify_cmd->add_option("--latency-mode", verify_flags.latency_mode,
                         "fixed or per_region");
  verify_cmd->add_option("--edp-scaling", verify_flags.edp_scaling,
                         "eta_literal or inverse_eta");
  verify_cmd->add_flag("--no-backup-region", verify_flags.no_backup_region,
                       "disable the FRAM_B checkpoint region");
  verify_cmd->add_option("--time-limit", verify_flags.time_limit_s,
                         "per-solve time limit in seconds");

  try {
    app.parse(argc, argv);
    if (solve_cmd->parsed())
      return run_solve(solve_flags, solve_algorithm, solve_output);
    if (sim_cmd->parsed())
      return run_simulate(sim_flags, sim_placement, sim_output);
    if (cmp_cmd->parsed())
      return run_compare(cmp_flags, cmp_strategies, cmp_normalize, cmp_table,
                         cmp_scenario, cmp_format, cmp_output);
    if (emit_cmd->parsed())
      return run_emit_linker(emit_profile, emit_placement, emit_dir,
                             emit_table);
    if (verify_cmd->parsed())
      return run_verify(verify_instances, verify_max_items, verify_seed,
                        verify_flags, verify_device);
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const mapipro::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const mapipro::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const mapipro::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

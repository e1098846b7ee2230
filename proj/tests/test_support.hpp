#pragma once

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "mapipro/instance_gen.hpp"
#include "mapipro/profile.hpp"

namespace mapipro_tests {

inline std::string fixture_path(const std::string& name) {
  return std::string(MAPIPRO_FIXTURE_DIR) + "/" + name;
}

inline std::string golden_path(const std::string& name) {
  return std::string(MAPIPRO_GOLDEN_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << body;
}

/// One global + two functions; every section distinctly sized so
/// placements are easy to reason about. Total footprint 64+256+128+64+
/// 128+64+32 = 736 bytes.
inline mapipro::AppProfile golden_profile(const std::string& app) {
  using namespace mapipro;
  AppProfile p;
  p.application = app;
  p.globals.push_back({"counter", 64, 10, 10, 100});
  FunctionProfile main_fn;
  main_fn.name = "main";
  main_fn.call_count = 1;
  main_fn.base_cycles = 1000;
  main_fn.text = {256, 5, 0};
  main_fn.data = {128, 3, 2};
  main_fn.stack = {64, 2, 2};
  FunctionProfile func_1;
  func_1.name = "func_1";
  func_1.call_count = 2;
  func_1.base_cycles = 500;
  func_1.text = {128, 4, 0};
  func_1.data = {64, 1, 1};
  func_1.stack = {32, 1, 1};
  p.functions = {main_fn, func_1};
  return p;
}

/// golden_profile plus a third function, for the mixed-placement case.
inline mapipro::AppProfile golden_profile_mixed() {
  using namespace mapipro;
  AppProfile p = golden_profile("golden_mixed");
  p.globals[0].name = "g_buf";
  FunctionProfile func_2;
  func_2.name = "func_2";
  func_2.call_count = 3;
  func_2.base_cycles = 700;
  func_2.text = {96, 2, 0};
  func_2.data = {48, 1, 1};
  func_2.stack = {40, 1, 1};
  p.functions.push_back(func_2);
  return p;
}

inline mapipro::Placement uniform_placement(const mapipro::AppProfile& profile,
                                            mapipro::Region region) {
  mapipro::Placement pl;
  pl.application = profile.application;
  for (const auto& item : mapipro::flatten(profile))
    pl.by_id[item.id] = region;
  return pl;
}

struct CliResult {
  int exit_code = -1;
  std::string out;  // stdout and stderr interleaved
};

/// Runs the command-line tool with the given argument string.
inline CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(MAPIPRO_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed for: " + cmd);
  CliResult result;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) result.out.append(buf, n);
  const int status = pclose(pipe);
  result.exit_code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status)
                                                        : -1;
  return result;
}

}  // namespace mapipro_tests

#pragma once

#include "mapipro/profile.hpp"

namespace mapipro {

struct DataSectionBlock {
  std::string segment;  // .Localvars (non-volatile) or .LocalvarsRam (SRAM)
  Region region = Region::FRAM_N;
  std::vector<std::string> members;  // globals and data-section functions
};

/// Structured form of the emitted fragment. Every function-section
/// assignment lands in exactly one construct: stacks in the .stack
/// directive (or a named per-function stack when it diverges), text in
/// the .text directive block (SRAM-mapped functions via their ramfunc
/// attribute when the block targets non-volatile memory), data sections
/// and globals in one data segment block per region.
struct LinkerFragment {
  std::string application;
  std::string stack_directive;  // empty when the profile has no functions
  std::vector<std::pair<std::string, Region>> divergent_stacks;
  std::vector<std::string> text_directive_block;
  std::vector<std::string> ramfunc_attributes;  // function names
  std::vector<DataSectionBlock> data_section_blocks;
};

struct LinkerOutput {
  std::string cmd;      // contents of <app>.mapipro.cmd
  std::string pragmas;  // contents of <app>.mapipro.pragmas.h
};

LinkerFragment build_linker_fragment(const Placement& placement,
                                     const AppProfile& profile);

/// Deterministic CCS-dialect rendering: LF line endings, no timestamps,
/// byte-identical across runs and platforms.
LinkerOutput emit_linker(const Placement& placement, const AppProfile& profile);

/// One row per function: name, stack, text, data regions (FRAM_N shown
/// as FRAM).
std::string emit_placement_table(const Placement& placement,
                                 const AppProfile& profile);

/// Inverse of emit_placement_table for the section-level assignments.
Placement parse_placement_table(const std::string& text);

}  // namespace mapipro

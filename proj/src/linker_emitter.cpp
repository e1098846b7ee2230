#include "mapipro/linker_emitter.hpp"

#include <algorithm>
#include <sstream>

namespace mapipro {

namespace {

std::string memory_name(Region r) {
  switch (r) {
    case Region::SRAM: return "RAM";
    case Region::FRAM_N: return "FRAM";
    case Region::FLASH: return "FLASH";
    case Region::FRAM_B: break;
  }
  throw ValidationError("region " + to_string(r) +
                        " cannot appear in a linker fragment");
}

std::string display_name(Region r) {
  return r == Region::FRAM_N ? "FRAM" : to_string(r);
}

Region region_from_display(const std::string& s) {
  if (s == "FRAM") return Region::FRAM_N;
  return region_from_string(s);
}

}  // namespace

LinkerFragment build_linker_fragment(const Placement& placement,
                                     const AppProfile& profile) {
  profile.validate();
  placement.validate(flatten(profile));
  LinkerFragment frag;
  frag.application = profile.application;

  if (!profile.functions.empty()) {
    // The toolchain has a single .stack section; it follows main's stack
    // placement (first function when no main), and any function that
    // disagrees gets its own named stack segment.
    const FunctionProfile* anchor = &profile.functions.front();
    for (const auto& f : profile.functions)
      if (f.name == "main") anchor = &f;
    const Region stack_region = placement.region_of(anchor->name + ".stack");
    if (stack_region == Region::SRAM) {
      frag.stack_directive = ".stack : {} > RAM (HIGH)";
    } else {
      frag.stack_directive = ".stack : {} > " + memory_name(stack_region);
    }
    for (const auto& f : profile.functions) {
      const Region r = placement.region_of(f.name + ".stack");
      if (r != stack_region) frag.divergent_stacks.emplace_back(f.name, r);
    }

    bool text_in_nonvolatile = false;
    Region text_nv = Region::FRAM_N;
    bool text_in_sram = false;
    for (const auto& f : profile.functions) {
      const Region r = placement.region_of(f.name + ".text");
      if (r == Region::SRAM) {
        text_in_sram = true;
      } else {
        text_in_nonvolatile = true;
        text_nv = r;
      }
    }
    if (text_in_nonvolatile) {
      frag.text_directive_block = {
          "#ifndef __LARGE_CODE_MODEL__",
          ".text : {} > " + memory_name(text_nv),
          "#else",
          ".text : {} >> SRAM",
      };
      if (text_in_sram) {
        for (const auto& f : profile.functions)
          if (placement.region_of(f.name + ".text") == Region::SRAM)
            frag.ramfunc_attributes.push_back(f.name);
      }
    } else if (text_in_sram) {
      frag.text_directive_block = {".text : {} >> SRAM"};
    }
  }

  DataSectionBlock nonvolatile_block;
  nonvolatile_block.segment = ".Localvars";
  DataSectionBlock sram_block;
  sram_block.segment = ".LocalvarsRam";
  sram_block.region = Region::SRAM;
  auto file_data_member = [&](const std::string& name, Region r) {
    if (r == Region::SRAM) {
      sram_block.members.push_back(name);
    } else {
      nonvolatile_block.region = r;
      nonvolatile_block.members.push_back(name);
    }
  };
  for (const auto& g : profile.globals)
    file_data_member(g.name, placement.region_of(g.name));
  for (const auto& f : profile.functions)
    file_data_member(f.name, placement.region_of(f.name + ".data"));
  if (!nonvolatile_block.members.empty())
    frag.data_section_blocks.push_back(std::move(nonvolatile_block));
  if (!sram_block.members.empty())
    frag.data_section_blocks.push_back(std::move(sram_block));
  return frag;
}

LinkerOutput emit_linker(const Placement& placement,
                         const AppProfile& profile) {
  const LinkerFragment frag = build_linker_fragment(placement, profile);
  LinkerOutput out;

  std::string& cmd = out.cmd;
  cmd = "/* " + frag.application + ": memory placement fragment */\n";
  if (!frag.stack_directive.empty()) {
    cmd += "\n";
    cmd += frag.stack_directive + "\n";
    for (const auto& [func, region] : frag.divergent_stacks) {
      cmd += "/* warning: per-function stack for " + func +
             " diverges from .stack */\n";
      cmd += ".stack_" + func + " : {} > " + memory_name(region) + "\n";
    }
  }
  if (!frag.text_directive_block.empty()) {
    cmd += "\n";
    for (const auto& line : frag.text_directive_block) cmd += line + "\n";
  }
  if (!frag.data_section_blocks.empty()) {
    cmd += "\n";
    for (const auto& block : frag.data_section_blocks) {
      const std::string name = block.region == Region::SRAM
                                   ? "NEW_DATASECTION_RAM"
                                   : "NEW_DATASECTION";
      cmd += name + " : {} > " + memory_name(block.region) + "\n";
    }
  }

  std::string& h = out.pragmas;
  h = "/* " + frag.application + ": data placement pragmas */\n";
  bool any_pragma = false;
  for (const auto& block : frag.data_section_blocks) {
    if (!any_pragma && !block.members.empty()) {
      h += "\n";
      any_pragma = true;
    }
    for (const auto& member : block.members)
      h += "#pragma DATA_SECTION ( " + member + ", " + block.segment + ")\n";
  }
  if (!frag.ramfunc_attributes.empty()) {
    h += "\n";
    for (const auto& func : frag.ramfunc_attributes)
      h += "#define MAPIPRO_RAMFUNC_" + func + " __attribute__((ramfunc))\n";
  }
  return out;
}

std::string emit_placement_table(const Placement& placement,
                                 const AppProfile& profile) {
  std::string out = "function | stack | text | data\n";
  for (const auto& f : profile.functions) {
    out += f.name;
    for (const char* kind : {"stack", "text", "data"}) {
      out += " | " +
             display_name(placement.region_of(f.name + "." + kind));
    }
    out += "\n";
  }
  return out;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Placement parse_placement_table(const std::string& text) {
  Placement p;
  std::istringstream in(text);
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    if (!header_seen) {
      header_seen = true;  // "function | stack | text | data"
      continue;
    }
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream row(line);
    while (std::getline(row, cell, '|')) cells.push_back(trim(cell));
    if (cells.size() != 4)
      throw ParseError("placement table row '" + line +
                       "' does not have 4 columns");
    const std::string& func = cells[0];
    p.by_id[func + ".stack"] = region_from_display(cells[1]);
    p.by_id[func + ".text"] = region_from_display(cells[2]);
    p.by_id[func + ".data"] = region_from_display(cells[3]);
  }
  if (!header_seen)
    throw ParseError("placement table is empty");
  return p;
}

}  // namespace mapipro

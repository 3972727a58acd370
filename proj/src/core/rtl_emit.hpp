// Copyright 2026 The approxcim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Verilog emission for multiplier netlists, the structural logarithmic
// multiplier, the PE wrapper, testbenches and backend flow stubs.
//
// All emitters are pure functions of their arguments and produce LF-only
// text with two-space indentation.

#ifndef APPROXCIM_CORE_RTL_EMIT_HPP
#define APPROXCIM_CORE_RTL_EMIT_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "core/multiplier.hpp"
#include "core/netlist.hpp"
#include "core/sram.hpp"

namespace approxcim {

enum class PortDirection { kInput, kOutput };

struct RtlPort {
  std::string name;
  PortDirection direction = PortDirection::kInput;
  unsigned width = 1;

  friend bool operator==(const RtlPort&, const RtlPort&) = default;
};

struct RtlArtifact {
  std::string module_name;
  std::vector<RtlPort> ports;
  std::string text;
  std::uint64_t digest = 0;  // FNV-1a 64 of text

  std::string digest_hex() const;
};

std::uint64_t fnv1a64(std::string_view bytes);

bool is_verilog_keyword(std::string_view word);
/// Throws kInvalidArgument for keywords and malformed identifiers.
void check_module_name(std::string_view name);

/// Flat module with ports a[n-1:0], b[n-1:0], p[2n-1:0]. Compound cells are
/// lowered to AND/OR/XOR/NOT first; one continuous assignment per gate.
RtlArtifact emit_verilog(const Netlist& netlist, const std::string& module_name);

/// Structural logarithmic multiplier: one submodule per datapath block
/// (lod_a, enc_a, bsh_a, adder1, ...) instantiated under its block name.
RtlArtifact emit_log_mult_rtl(const MultiplierConfig& cfg,
                              const std::string& module_name);

/// Self-checking bench; expected products come from netlist evaluation.
std::string emit_testbench(
    const Netlist& netlist, const std::string& module_name,
    std::span<const std::pair<std::uint64_t, std::uint64_t>> vectors);

/// Registered PE around a single-port SRAM macro: the stored word read in
/// one cycle is multiplied with the operand latched in the same cycle, and
/// the product is registered on the next edge.
RtlArtifact emit_pe_wrapper(const SramConfig& sram, const std::string& macro_name,
                            unsigned mult_width, const std::string& mult_module,
                            const std::string& module_name);

struct FlowInputs {
  std::string design_name;
  std::vector<std::string> verilog_files;  // relative to the output directory
  std::string macro_name;
  std::string lef_file;
  std::string lib_file;
  double clock_period_ns = 10.0;
};

/// Exactly config.mk, constraint.sdc and flow.tcl.
std::map<std::string, std::string> emit_flow_scripts(const FlowInputs& inputs);

}  // namespace approxcim

#endif  // APPROXCIM_CORE_RTL_EMIT_HPP

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

#include "core/rtl_emit.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <set>
#include <sstream>

#include "core/error.hpp"

namespace approxcim {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string RtlArtifact::digest_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
  return buf;
}

namespace {

constexpr std::array<std::string_view, 102> kKeywords = {
    "always", "and", "assign", "automatic", "begin", "buf", "bufif0", "bufif1",
    "case", "casex", "casez", "cell", "cmos", "config", "deassign", "default",
    "defparam", "design", "disable", "edge", "else", "end", "endcase",
    "endconfig", "endfunction", "endgenerate", "endmodule", "endprimitive",
    "endspecify", "endtable", "endtask", "event", "for", "force", "forever",
    "fork", "function", "generate", "genvar", "highz0", "highz1", "if",
    "ifnone", "incdir", "include", "initial", "inout", "input", "instance",
    "integer", "join", "large", "liblist", "library", "localparam",
    "macromodule", "medium", "module", "nand", "negedge", "nmos", "nor",
    "noshowcancelled", "not", "notif0", "notif1", "or", "output", "parameter",
    "pmos", "posedge", "primitive", "pull0", "pull1", "pulldown", "pullup",
    "pulsestyle_onevent", "pulsestyle_ondetect", "rcmos", "real", "realtime",
    "reg", "release", "repeat", "rnmos", "rpmos", "rtran", "rtranif0",
    "rtranif1", "scalared", "showcancelled", "signed", "small", "specify",
    "specparam", "strong0", "strong1", "supply0", "supply1", "table", "task",
    "time"};

constexpr std::array<std::string_view, 20> kMoreKeywords = {
    "tran", "tranif0", "tranif1", "tri", "tri0", "tri1", "triand", "trior",
    "trireg", "unsigned", "use", "uwire", "vectored", "wait", "wand", "weak0",
    "weak1", "while", "wire", "wor"};

}  // namespace

bool is_verilog_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end() ||
         std::find(kMoreKeywords.begin(), kMoreKeywords.end(), word) !=
             kMoreKeywords.end() ||
         word == "xnor" || word == "xor";
}

void check_module_name(std::string_view name) {
  if (name.empty()) fail(ErrorCode::kInvalidArgument, "empty module name");
  const auto head = static_cast<unsigned char>(name[0]);
  bool ok = std::isalpha(head) || head == '_';
  for (unsigned char c : name) ok = ok && (std::isalnum(c) || c == '_');
  if (!ok) {
    fail(ErrorCode::kInvalidArgument,
         "module name '" + std::string(name) + "' is not a Verilog identifier");
  }
  if (is_verilog_keyword(name)) {
    fail(ErrorCode::kInvalidArgument,
         "module name '" + std::string(name) + "' is a Verilog reserved word");
  }
}

namespace {

std::string range(unsigned width) {
  return "[" + std::to_string(width - 1) + ":0]";
}

std::vector<RtlPort> multiplier_ports(unsigned n) {
  return {{"a", PortDirection::kInput, n},
          {"b", PortDirection::kInput, n},
          {"p", PortDirection::kOutput, 2 * n}};
}

std::string port_header(const std::string& module_name,
                        const std::vector<RtlPort>& ports) {
  std::string out = "module " + module_name + " (\n";
  for (std::size_t i = 0; i < ports.size(); ++i) {
    const RtlPort& p = ports[i];
    out += p.direction == PortDirection::kInput ? "  input  wire " : "  output wire ";
    if (p.width > 1) out += range(p.width) + " ";
    out += p.name;
    out += i + 1 < ports.size() ? ",\n" : "\n";
  }
  return out + ");\n";
}

// Net naming over a lowered netlist. `flat` selects the bus-bit form for
// primary inputs ("a[3]") instead of the port-safe form ("a_3").
std::string net_name(const Netlist& nl, Signal s, bool flat) {
  const Gate& g = nl.gates()[s.node];
  switch (g.kind) {
    case GateKind::kConst0: return "1'b0";
    case GateKind::kConst1: return "1'b1";
    case GateKind::kInput: {
      std::string name = nl.input_name(s.node);
      if (!flat) {
        std::replace(name.begin(), name.end(), '[', '_');
        name.erase(std::remove(name.begin(), name.end(), ']'), name.end());
      }
      return name;
    }
    default: return "n" + std::to_string(s.node);
  }
}

std::string gate_expression(const Netlist& nl, const Gate& g, bool flat) {
  auto in = [&](std::size_t i) { return net_name(nl, g.inputs[i], flat); };
  switch (g.kind) {
    case GateKind::kAnd: return in(0) + " & " + in(1);
    case GateKind::kOr: return in(0) + " | " + in(1);
    case GateKind::kXor: return in(0) + " ^ " + in(1);
    case GateKind::kNot: return "~" + in(0);
    default: fail(ErrorCode::kInternal, "unlowered gate in RTL emission");
  }
}

bool is_logic(GateKind kind) {
  return kind != GateKind::kInput && kind != GateKind::kConst0 &&
         kind != GateKind::kConst1;
}

RtlArtifact finish(std::string module_name, std::vector<RtlPort> ports,
                   std::string text) {
  RtlArtifact art;
  art.module_name = std::move(module_name);
  art.ports = std::move(ports);
  art.text = std::move(text);
  art.digest = fnv1a64(art.text);
  return art;
}

}  // namespace

RtlArtifact emit_verilog(const Netlist& netlist, const std::string& module_name) {
  check_module_name(module_name);
  netlist.validate();
  const Netlist nl = lower_to_primitives(netlist);
  const unsigned n = nl.width();
  std::vector<RtlPort> ports = multiplier_ports(n);

  std::string text = port_header(module_name, ports);
  for (std::uint32_t id = 0; id < nl.size(); ++id) {
    if (is_logic(nl.gates()[id].kind)) text += "  wire n" + std::to_string(id) + ";\n";
  }
  for (std::uint32_t id = 0; id < nl.size(); ++id) {
    const Gate& g = nl.gates()[id];
    if (!is_logic(g.kind)) continue;
    text += "  assign n" + std::to_string(id) + " = " + gate_expression(nl, g, true) + ";\n";
  }
  for (unsigned i = 0; i < nl.outputs().size(); ++i) {
    text += "  assign p[" + std::to_string(i) + "] = " +
            net_name(nl, nl.outputs()[i], true) + ";\n";
  }
  text += "endmodule\n";
  return finish(module_name, std::move(ports), std::move(text));
}

RtlArtifact emit_log_mult_rtl(const MultiplierConfig& cfg,
                              const std::string& module_name) {
  check_module_name(module_name);
  if (cfg.family != Family::kLogarithmic) {
    fail(ErrorCode::kInvalidArgument, "structural log RTL needs a logarithmic config");
  }
  const Netlist nl = lower_to_primitives(compile_netlist(cfg));
  const std::size_t group_count = nl.groups().size();

  // Consumers outside the producing group make a signal a block output.
  std::vector<std::set<std::uint32_t>> block_inputs(group_count), block_outputs(group_count);
  std::vector<std::vector<std::uint32_t>> block_gates(group_count);
  std::vector<std::size_t> first_seen;
  for (std::uint32_t id = 0; id < nl.size(); ++id) {
    const Gate& g = nl.gates()[id];
    if (!is_logic(g.kind)) continue;
    if (block_gates[g.group].empty()) first_seen.push_back(g.group);
    block_gates[g.group].push_back(id);
    for (const Signal& s : g.inputs) {
      const Gate& src = nl.gates()[s.node];
      if (src.kind == GateKind::kConst0 || src.kind == GateKind::kConst1) continue;
      if (!is_logic(src.kind) || src.group != g.group) {
        block_inputs[g.group].insert(s.node);
        if (is_logic(src.kind)) block_outputs[src.group].insert(s.node);
      }
    }
  }
  for (const Signal& s : nl.outputs()) {
    const Gate& src = nl.gates()[s.node];
    if (is_logic(src.kind)) block_outputs[src.group].insert(s.node);
  }

  std::string text;
  std::string top_body;
  std::set<std::uint32_t> top_wires;
  for (std::size_t group : first_seen) {
    const std::string& block = nl.groups()[group];
    if (block.empty()) continue;
    const std::string sub = module_name + "_" + block;
    check_module_name(sub);
    std::vector<RtlPort> ports;
    for (std::uint32_t id : block_inputs[group]) {
      ports.push_back({net_name(nl, {id, 0}, false), PortDirection::kInput, 1});
    }
    for (std::uint32_t id : block_outputs[group]) {
      ports.push_back({net_name(nl, {id, 0}, false), PortDirection::kOutput, 1});
    }
    text += port_header(sub, ports);
    for (std::uint32_t id : block_gates[group]) {
      if (!block_outputs[group].count(id)) text += "  wire n" + std::to_string(id) + ";\n";
    }
    for (std::uint32_t id : block_gates[group]) {
      text += "  assign n" + std::to_string(id) + " = " +
              gate_expression(nl, nl.gates()[id], false) + ";\n";
    }
    text += "endmodule\n\n";

    top_body += "  " + sub + " " + block + " (\n";
    for (std::size_t i = 0; i < ports.size(); ++i) {
      const std::uint32_t id = i < block_inputs[group].size()
                                   ? *std::next(block_inputs[group].begin(), i)
                                   : *std::next(block_outputs[group].begin(),
                                                i - block_inputs[group].size());
      if (ports[i].direction == PortDirection::kOutput) top_wires.insert(id);
      top_body += "    ." + ports[i].name + "(" + net_name(nl, {id, 0}, true) + ")";
      top_body += i + 1 < ports.size() ? ",\n" : "\n";
    }
    top_body += "  );\n";
  }

  std::vector<RtlPort> ports = multiplier_ports(nl.width());
  text += port_header(module_name, ports);
  for (std::uint32_t id : top_wires) text += "  wire n" + std::to_string(id) + ";\n";
  for (std::uint32_t id : block_gates[0]) text += "  wire n" + std::to_string(id) + ";\n";
  text += top_body;
  for (std::uint32_t id : block_gates[0]) {
    text += "  assign n" + std::to_string(id) + " = " +
            gate_expression(nl, nl.gates()[id], true) + ";\n";
  }
  for (unsigned i = 0; i < nl.outputs().size(); ++i) {
    text += "  assign p[" + std::to_string(i) + "] = " +
            net_name(nl, nl.outputs()[i], true) + ";\n";
  }
  text += "endmodule\n";
  return finish(module_name, std::move(ports), std::move(text));
}

std::string emit_testbench(
    const Netlist& netlist, const std::string& module_name,
    std::span<const std::pair<std::uint64_t, std::uint64_t>> vectors) {
  check_module_name(module_name);
  if (vectors.empty()) fail(ErrorCode::kInvalidArgument, "testbench needs at least one vector");
  const unsigned n = netlist.width();
  const std::string wn = std::to_string(n), wp = std::to_string(2 * n);
  std::string t;
  t += "`timescale 1ns/1ps\n";
  t += "module " + module_name + "_tb;\n";
  t += "  reg  " + range(n) + " a;\n";
  t += "  reg  " + range(n) + " b;\n";
  t += "  wire " + range(2 * n) + " p;\n";
  t += "  integer passed;\n";
  t += "  integer failed;\n\n";
  t += "  " + module_name + " dut (.a(a), .b(b), .p(p));\n\n";
  t += "  task check(input " + range(n) + " x, input " + range(n) + " y, input " +
       range(2 * n) + " expected);\n";
  t += "    begin\n";
  t += "      a = x;\n";
  t += "      b = y;\n";
  t += "      #1;\n";
  t += "      if (p === expected) begin\n";
  t += "        passed = passed + 1;\n";
  t += "      end else begin\n";
  t += "        failed = failed + 1;\n";
  t += "        $display(\"FAIL a=%0d b=%0d p=%0d expected=%0d\", x, y, p, expected);\n";
  t += "      end\n";
  t += "    end\n";
  t += "  endtask\n\n";
  t += "  initial begin\n";
  t += "    passed = 0;\n";
  t += "    failed = 0;\n";
  for (const auto& [a, b] : vectors) {
    const std::uint64_t expected = netlist.evaluate(a, b);
    t += "    check(" + wn + "'d" + std::to_string(a) + ", " + wn + "'d" +
         std::to_string(b) + ", " + wp + "'d" + std::to_string(expected) + ");\n";
  }
  t += "    $display(\"%0d passed, %0d failed\", passed, failed);\n";
  t += "    $finish;\n";
  t += "  end\n";
  t += "endmodule\n";
  return t;
}

RtlArtifact emit_pe_wrapper(const SramConfig& sram, const std::string& macro_name,
                            unsigned mult_width, const std::string& mult_module,
                            const std::string& module_name) {
  sram.validate();
  check_module_name(module_name);
  check_module_name(macro_name);
  check_module_name(mult_module);
  if (sram.word_width > mult_width) {
    fail(ErrorCode::kConfig, "sram.word_width " + std::to_string(sram.word_width) +
                                 " exceeds the multiplier width " +
                                 std::to_string(mult_width));
  }
  const unsigned aw = sram.address_bits();
  const unsigned w = sram.word_width;
  const unsigned n = mult_width;
  std::vector<RtlPort> ports = {
      {"clk", PortDirection::kInput, 1},        {"ce", PortDirection::kInput, 1},
      {"we", PortDirection::kInput, 1},         {"addr", PortDirection::kInput, aw},
      {"din", PortDirection::kInput, w},        {"operand", PortDirection::kInput, n},
      {"result", PortDirection::kOutput, 2 * n}};

  std::string t;
  t += "// One access per cycle. A read issued at edge k presents its word on\n";
  t += "// dout after edge k; result holds stored*operand after edge k+1.\n";
  t += "module " + module_name + " (\n";
  t += "  input  wire clk,\n";
  t += "  input  wire ce,\n";
  t += "  input  wire we,\n";
  t += "  input  wire " + range(aw) + " addr,\n";
  t += "  input  wire " + range(w) + " din,\n";
  t += "  input  wire " + range(n) + " operand,\n";
  t += "  output reg  " + range(2 * n) + " result\n";
  t += ");\n";
  t += "  wire " + range(w) + " dout;\n";
  t += "  wire " + range(2 * n) + " product;\n";
  t += "  reg  " + range(n) + " operand_q;\n";
  t += "  reg  valid_q;\n\n";
  t += "  " + macro_name + " mem (\n";
  t += "    .clk(clk),\n";
  t += "    .ce(ce),\n";
  t += "    .we(we),\n";
  t += "    .addr_in(addr),\n";
  t += "    .din(din),\n";
  t += "    .dout(dout)\n";
  t += "  );\n\n";
  const std::string stored =
      w == n ? std::string("dout") : "{" + std::to_string(n - w) + "'b0, dout}";
  t += "  " + mult_module + " mult (.a(" + stored + "), .b(operand_q), .p(product));\n\n";
  t += "  always @(posedge clk) begin\n";
  t += "    operand_q <= operand;\n";
  t += "    valid_q <= ce & ~we;\n";
  t += "    if (valid_q) result <= product;\n";
  t += "  end\n";
  t += "endmodule\n";
  return finish(module_name, std::move(ports), std::move(t));
}

std::map<std::string, std::string> emit_flow_scripts(const FlowInputs& in) {
  check_module_name(in.design_name);
  for (const std::string& path : in.verilog_files) {
    if (path.empty() || path.front() == '/') {
      fail(ErrorCode::kInvalidArgument, "flow script paths must be relative: " + path);
    }
  }
  for (const std::string* path : {&in.lef_file, &in.lib_file}) {
    if (!path->empty() && path->front() == '/') {
      fail(ErrorCode::kInvalidArgument, "flow script paths must be relative: " + *path);
    }
  }
  char period[32];
  std::snprintf(period, sizeof period, "%.3f", in.clock_period_ns);

  std::string files;
  for (const std::string& f : in.verilog_files) files += (files.empty() ? "" : " ") + ("./" + f);

  std::string mk;
  mk += "# Backend configuration stub (OpenROAD-flow-scripts style).\n";
  mk += "export DESIGN_NAME = " + in.design_name + "\n";
  mk += "export PLATFORM    = nangate45\n";
  mk += "export VERILOG_FILES = " + files + "\n";
  mk += "export SDC_FILE      = ./constraint.sdc\n";
  if (!in.macro_name.empty()) {
    mk += "export ADDITIONAL_LEFS = ./" + in.lef_file + "\n";
    mk += "export ADDITIONAL_LIBS = ./" + in.lib_file + "\n";
  }
  mk += "export CORE_UTILIZATION = 40\n";

  std::string sdc;
  sdc += "set clk_period " + std::string(period) + "\n";
  sdc += "create_clock -name clk -period $clk_period [get_ports clk]\n";
  sdc += "set_input_delay  [expr $clk_period * 0.2] -clock clk [all_inputs]\n";
  sdc += "set_output_delay [expr $clk_period * 0.2] -clock clk [all_outputs]\n";

  std::string tcl;
  tcl += "# Synthesis and floorplan stub; run from this directory.\n";
  for (const std::string& f : in.verilog_files) tcl += "read_verilog ./" + f + "\n";
  if (!in.macro_name.empty()) {
    tcl += "read_lef ./" + in.lef_file + "\n";
    tcl += "read_liberty ./" + in.lib_file + "\n";
  }
  tcl += "link_design " + in.design_name + "\n";
  tcl += "read_sdc ./constraint.sdc\n";
  tcl += "initialize_floorplan -utilization 40 -aspect_ratio 1 -core_space 2\n";
  tcl += "report_checks -path_delay max\n";

  return {{"config.mk", mk}, {"constraint.sdc", sdc}, {"flow.tcl", tcl}};
}

}  // namespace approxcim

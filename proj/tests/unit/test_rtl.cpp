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

#include <map>
#include <regex>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "core/multiplier.hpp"
#include "core/rtl_emit.hpp"
#include "core/rtl_sim.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace approxcim;
using testutil::contains;
using testutil::thrown;

namespace {

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
  return n;
}

void check_against_netlist(const std::string& text, const std::string& top, const Netlist& net,
                           std::uint64_t seed) {
  const RtlSimulator sim(text, top);
  const auto pairs = testutil::random_pairs(net.width(), 1000, seed);
  std::vector<std::uint64_t> a, b, p(pairs.size());
  for (const auto& [x, y] : pairs) {
    a.push_back(x);
    b.push_back(y);
  }
  sim.evaluate_multiplier(a, b, p);
  std::size_t bad = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] != net.evaluate(a[i], b[i])) ++bad;
  }
  CHECK(bad == 0);
}

}  // namespace

TEST_SUITE("rtl") {
  TEST_CASE("FNV-1a reference values") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
  }

  TEST_CASE("module names") {
    CHECK(is_verilog_keyword("module"));
    CHECK(is_verilog_keyword("wire"));
    CHECK_FALSE(is_verilog_keyword("mult8"));
    CHECK(thrown([] { check_module_name("assign"); }));
    CHECK(thrown([] { check_module_name("9lives"); }));
    CHECK(thrown([] { check_module_name(""); }));
    check_module_name("acim_mult_8");
  }

  TEST_CASE("n=2 exact ports and digest stability") {
    const Netlist net = compile_netlist(MultiplierConfig::exact(2));
    const RtlArtifact art = emit_verilog(net, "m2");
    REQUIRE(art.ports.size() == 3);
    CHECK(art.ports[0] == RtlPort{"a", PortDirection::kInput, 2});
    CHECK(art.ports[1] == RtlPort{"b", PortDirection::kInput, 2});
    CHECK(art.ports[2] == RtlPort{"p", PortDirection::kOutput, 4});
    CHECK(contains(art.text, "input  wire [1:0] a"));
    CHECK(contains(art.text, "output wire [3:0] p"));
    CHECK(art.digest == fnv1a64(art.text));
    CHECK(emit_verilog(net, "m2").digest == art.digest);
    CHECK(art.digest_hex().size() == 16);
    check_against_netlist(art.text, "m2", net, 2);
  }

  TEST_CASE("approximate netlist lowers to primitive assignments only") {
    const auto cfg = MultiplierConfig::approx42(8, builtin_compressor("reference"));
    const Netlist net = compile_netlist(cfg);
    const RtlArtifact art = emit_verilog(net, "ax8");
    const std::regex assign_rhs(R"(assign\s+\S+\s*=\s*([^;]*);)");
    const std::regex allowed(R"(^[\w\[\]'\s~&|^]*$)");
    std::size_t assigns = 0;
    for (auto it = std::sregex_iterator(art.text.begin(), art.text.end(), assign_rhs);
         it != std::sregex_iterator(); ++it) {
      CHECK(std::regex_match((*it)[1].str(), allowed));
      ++assigns;
    }
    CHECK(assigns > 100);
    CHECK_FALSE(contains(art.text, "?"));
    CHECK_FALSE(contains(art.text, "+"));
    check_against_netlist(art.text, "ax8", net, 8);
  }

  TEST_CASE("structural logarithmic multiplier") {
    const auto cfg = MultiplierConfig::logarithmic(8, true);
    const RtlArtifact art = emit_log_mult_rtl(cfg, "lm8");
    for (const char* inst : {"lod_a", "lod_b", "enc_a", "enc_b", "bsh_a", "bsh_b", "comp",
                             "adder1", "adder2", "adder3"}) {
      CHECK(contains(art.text, std::string("lm8_") + inst + " " + inst + " ("));
    }
    CHECK(emit_log_mult_rtl(cfg, "lm8").text == art.text);
    check_against_netlist(art.text, "lm8", compile_netlist(cfg), 81);

    const auto mcfg = MultiplierConfig::logarithmic(8, false);
    const RtlArtifact mitch = emit_log_mult_rtl(mcfg, "mm8");
    CHECK_FALSE(contains(mitch.text, " comp ("));
    check_against_netlist(mitch.text, "mm8", compile_netlist(mcfg), 82);
    CHECK(thrown([] { emit_log_mult_rtl(MultiplierConfig::exact(8), "x"); }));
  }

  TEST_CASE("testbench") {
    const Netlist net = compile_netlist(MultiplierConfig::exact(8));
    const auto vectors = testutil::random_pairs(8, 10, 5);
    const std::string tb = emit_testbench(net, "ex8", vectors);
    CHECK(count_of(tb, "check(") == 10 + 1);  // ten calls plus the task header
    for (const auto& [a, b] : vectors) {
      CHECK(contains(tb, std::to_string(net.evaluate(a, b))));
    }
    const std::vector<std::pair<std::uint64_t, std::uint64_t>> dup = {{3, 5}, {3, 5}};
    CHECK(count_of(emit_testbench(net, "ex8", dup), "16'd15") == 2);
    CHECK(thrown([&] { emit_testbench(net, "ex8", {}); }));
  }

  TEST_CASE("PE wrapper") {
    SramConfig s;
    const RtlArtifact pe = emit_pe_wrapper(s, "sram_16x8", 8, "mult8", "pe8");
    CHECK(contains(pe.text, "module pe8"));
    CHECK(contains(pe.text, "sram_16x8 "));
    CHECK(contains(pe.text, "mult8 "));
    CHECK(contains(pe.text, "always @(posedge clk)"));
    CHECK(contains(pe.text, ".addr_in("));
    CHECK(thrown([&] { emit_pe_wrapper(s, "sram_16x8", 4, "mult4", "pe4"); }));
  }

  TEST_CASE("flow stubs") {
    FlowInputs in;
    in.design_name = "acim_mult";
    in.verilog_files = {"acim_mult.v", "pe_acim_mult.v"};
    in.macro_name = "sram_16x8";
    in.lef_file = "sram_16x8.lef";
    in.lib_file = "sram_16x8.lib";
    const auto files = emit_flow_scripts(in);
    std::set<std::string> names;
    for (const auto& [name, text] : files) {
      names.insert(name);
      CHECK_FALSE(contains(text, "/root"));
    }
    CHECK(names == std::set<std::string>{"config.mk", "constraint.sdc", "flow.tcl"});
    CHECK(emit_flow_scripts(in) == files);
    CHECK(contains(files.at("constraint.sdc"), "10"));
    in.lef_file = "/abs/sram.lef";
    CHECK(thrown([&] { emit_flow_scripts(in); }));
  }

  TEST_CASE("interpreter basics") {
    const char* src =
        "module inner (input wire x, input wire y, output wire z);\n"
        "  assign z = ~(x & y) | 1'b0;\n"
        "endmodule\n"
        "module top (input wire [1:0] a, output wire q);\n"
        "  wire t;\n"
        "  inner u (.x(a[0]), .y(a[1]), .z(t));\n"
        "  assign q = t ^ 1'b1;\n"
        "endmodule\n";
    const RtlSimulator sim(src, "top");
    for (std::uint64_t a = 0; a < 4; ++a) {
      CHECK(sim.evaluate({{"a", a}}).at("q") == (a == 3 ? 1u : 0u));
    }
  }

  TEST_CASE("interpreter rejects unsupported or broken RTL") {
    auto code = [](const std::string& src) {
      auto t = thrown([&] { RtlSimulator(src, "m"); });
      return t ? t->code : ErrorCode::kInternal;
    };
    CHECK(code("module m (input wire clk, output wire q);\n reg r;\n assign q = r;\nendmodule\n") ==
          ErrorCode::kParse);
    CHECK(code("module m (input wire a, output wire q);\n wire t;\n assign q = t;\nendmodule\n") ==
          ErrorCode::kInvalidArgument);
    CHECK(code("module m (input wire a, output wire q);\n assign q = a;\n assign q = ~a;\nendmodule\n") ==
          ErrorCode::kInvalidArgument);
    CHECK(code("module m (input wire a, output wire q);\n wire t;\n assign t = ~t;\n assign q = t;\nendmodule\n") ==
          ErrorCode::kInvalidArgument);
    CHECK(code("module m (input wire a, output wire q);\n assign q = a +;\nendmodule\n") ==
          ErrorCode::kParse);
    CHECK(thrown([] { RtlSimulator("module k (input wire a, output wire q);\n assign q = a;\nendmodule\n", "m"); }));
  }
}

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

#include <cstdint>
#include <set>
#include <string>

#include "core/log_mult.hpp"
#include "core/multiplier.hpp"
#include "doctest.h"
#include "support/oracles.hpp"
#include "test_util.hpp"

using namespace approxcim;
using testutil::thrown;

TEST_SUITE("log_mult") {
  TEST_CASE("leading-one position") {
    CHECK(leading_one_position(1) == 0);
    CHECK(leading_one_position(6) == 2);
    CHECK(leading_one_position(200) == 7);
    auto t = thrown([] { leading_one_position(0); });
    REQUIRE(t);
    CHECK(t->code == ErrorCode::kInvalidArgument);
    for (std::uint64_t x = 1; x < 4096; ++x) CHECK(leading_one_position(x) == oracle::msb(x));
  }

  TEST_CASE("decompose") {
    const LogOperand z = decompose(0);
    CHECK(z.zero);
    const LogOperand d = decompose(13);
    CHECK_FALSE(d.zero);
    CHECK(d.k == 3);
    CHECK(d.residue == 5);
  }

  TEST_CASE("Mitchell examples") {
    CHECK(mitchell_multiply(8, 16) == 128);
    CHECK(mitchell_multiply(6, 5) == 28);
    CHECK(mitchell_multiply(3, 3) == 8);
    CHECK(mitchell_multiply(0, 77) == 0);
  }

  TEST_CASE("Mitchell matches the floating-point log/antilog oracle at n=10") {
    for (std::uint64_t a = 0; a < 1024; a += 3) {
      for (std::uint64_t b = 0; b < 1024; ++b) {
        REQUIRE(mitchell_multiply(a, b) == oracle::mitchell(a, b));
      }
    }
  }

  TEST_CASE("residue rounding") {
    CHECK(round_residue(0) == 0);
    CHECK(round_residue(1) == 1);
    CHECK(round_residue(2) == 2);
    CHECK(round_residue(3) == 4);
    CHECK(round_residue(5) == 4);
    CHECK(round_residue(6) == 8);
    for (std::uint64_t q = 0; q < 5000; ++q) CHECK(round_residue(q) == oracle::nearest_pow2(q));
  }

  TEST_CASE("compensated examples and trace") {
    const CompensatedProduct p = compensated_log_multiply(6, 5);
    CHECK(p.product == 30);
    CHECK(p.trace.comp == 2);
    CHECK(p.trace.k1 == 2);
    CHECK(p.trace.q1 == 2);
    CHECK(p.trace.q2 == 1);
    CHECK(p.trace.chosen == RoundedResidue::kFirst);

    const CompensatedProduct s = compensated_log_multiply(7, 7);
    CHECK(s.product == 52);
    CHECK(s.trace.rounded_to == 4);
    CHECK(s.trace.comp == 12);

    CHECK(compensated_log_multiply(8, 16).product == 128);
    CHECK(compensated_log_multiply(8, 16).trace.comp == 0);
    CHECK(compensated_log_multiply(0, 9).product == 0);
  }

  TEST_CASE("compensated matches the additive oracle at n=10") {
    for (std::uint64_t a = 1; a < 1024; a += 5) {
      for (std::uint64_t b = 1; b < 1024; ++b) {
        REQUIRE(compensated_log_multiply(a, b).product == oracle::compensated(a, b));
      }
    }
  }

  TEST_CASE("rounding error bound and WCE formulas") {
    CHECK(rounding_error_bound(1, 8) == 1);
    CHECK(rounding_error_bound(3, 8) == 4);
    CHECK(rounding_error_bound(6, 8) == 32);
    CHECK(thrown([] { rounding_error_bound(7, 8); }));
    CHECK(wce_bound(8, RoundingChoice::kRoundLarger) == 3072);
    CHECK(wce_bound(8, RoundingChoice::kRoundSmaller) == 4064);
    CHECK(wce_bound(4, RoundingChoice::kRoundLarger) == 12);
    CHECK(thrown([] { wce_bound(2, RoundingChoice::kRoundLarger); }));
  }

  TEST_CASE("rounding error never exceeds half the leading weight") {
    for (std::uint64_t q = 2; q < 256; ++q) {
      const unsigned k = oracle::msb(q);
      const std::uint64_t r = round_residue(q);
      const std::uint64_t err = r > q ? r - q : q - r;
      CHECK(err <= rounding_error_bound(k, 10));
    }
  }

  TEST_CASE("gate-level datapath equals the arithmetic model") {
    for (bool comp : {true, false}) {
      const auto cfg = MultiplierConfig::logarithmic(8, comp);
      const Netlist net = build_log_multiplier_netlist(cfg);
      net.validate();
      std::size_t bad = 0;
      for (std::uint64_t a = 0; a < 256; ++a) {
        for (std::uint64_t b = 0; b < 256; ++b) {
          const std::uint64_t want =
              comp ? compensated_log_multiply(a, b).product : mitchell_multiply(a, b);
          if (net.evaluate(a, b) != want) ++bad;
        }
      }
      CHECK(bad == 0);
    }
    for (unsigned n : {12u, 16u}) {
      const Netlist net = build_log_multiplier_netlist(MultiplierConfig::logarithmic(n, true));
      for (const auto& [a, b] : testutil::random_pairs(n, 3000, n)) {
        REQUIRE(net.evaluate(a, b) == oracle::compensated(a, b));
      }
    }
  }

  TEST_CASE("datapath groups") {
    const Netlist comp = build_log_multiplier_netlist(MultiplierConfig::logarithmic(8, true));
    const std::set<std::string> groups(comp.groups().begin(), comp.groups().end());
    for (const char* g : {"lod_a", "lod_b", "enc_a", "enc_b", "bsh_a", "bsh_b", "comp",
                          "adder1", "adder2", "adder3"}) {
      CHECK(groups.count(g) == 1);
    }
    const Netlist mitch = build_log_multiplier_netlist(MultiplierConfig::logarithmic(8, false));
    for (const std::string& g : mitch.groups()) {
      CHECK(g != "comp");
      CHECK(g != "ormerge");
    }
  }
}

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

#include <algorithm>
#include <cstdint>
#include <vector>

#include "core/multiplier.hpp"
#include "core/netlist.hpp"
#include "doctest.h"
#include "support/oracles.hpp"
#include "test_util.hpp"

using namespace approxcim;
using testutil::thrown;

namespace {

// Max |mult(a,b) - a*b| by brute force over n-bit operands.
std::uint64_t brute_wce(const Multiplier& m) {
  const std::uint64_t top = 1ull << m.width();
  std::uint64_t wce = 0;
  for (std::uint64_t a = 0; a < top; ++a) {
    for (std::uint64_t b = 0; b < top; ++b) {
      const std::uint64_t p = m.multiply(a, b), e = a * b;
      wce = std::max(wce, p > e ? p - e : e - p);
    }
  }
  return wce;
}

}  // namespace

TEST_SUITE("multiplier") {
  TEST_CASE("exact n=8 netlist equals the wide product on every pair") {
    const Netlist net = build_multiplier_netlist(MultiplierConfig::exact(8));
    net.validate();
    std::vector<std::uint64_t> a, b;
    for (std::uint64_t x = 0; x < 256; ++x) {
      for (std::uint64_t y = 0; y < 256; ++y) {
        a.push_back(x);
        b.push_back(y);
      }
    }
    std::vector<std::uint64_t> batch(a.size());
    net.evaluate_batch(a, b, batch);
    std::size_t bad = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto want = static_cast<std::uint64_t>(oracle::wide_product(a[i], b[i]));
      if (net.evaluate(a[i], b[i]) != want || batch[i] != want) ++bad;
    }
    CHECK(bad == 0);
  }

  TEST_CASE("scalar examples") {
    const Multiplier m(MultiplierConfig::exact(8));
    CHECK(m.multiply(3, 5) == 15);
    CHECK(m.multiply(255, 255) == 65025);
    const std::vector<MultiplierConfig> all = {
        MultiplierConfig::exact(8),
        MultiplierConfig::approx42(8, builtin_compressor("reference")),
        MultiplierConfig::logarithmic(8, true), MultiplierConfig::logarithmic(8, false)};
    for (const auto& cfg : all) {
      const Multiplier mm(cfg);
      for (std::uint64_t b = 0; b < 256; ++b) {
        CHECK(mm.multiply(0, b) == 0);
        CHECK(mm.netlist().evaluate(b, 0) == 0);
      }
    }
  }

  TEST_CASE("sign-magnitude wrapper") {
    const Multiplier m(MultiplierConfig::exact(8));
    CHECK(m.multiply_signed(-3, 5) == -15);
    CHECK(m.multiply_signed(-4, -4) == 16);
    CHECK(m.multiply_signed(-127, 126) == -16002);
    auto t = thrown([&] { m.multiply_signed(-128, 1); });
    REQUIRE(t);
    CHECK(t->code == ErrorCode::kOutOfRange);
  }

  TEST_CASE("wide operands at n=32") {
    const Multiplier m(MultiplierConfig::exact(32));
    for (const auto& [a, b] : testutil::random_pairs(32, 2000, 32)) {
      CHECK(m.multiply(a, b) == static_cast<std::uint64_t>(oracle::wide_product(a, b)));
    }
    CHECK(m.multiply(0xFFFFFFFFull, 0xFFFFFFFFull) == 0xFFFFFFFE00000001ull);
  }

  TEST_CASE("empty approximate region behaves and counts like exact") {
    const Multiplier approx(MultiplierConfig::approx42(8, builtin_compressor("reference"), 0u));
    const Multiplier exact(MultiplierConfig::exact(8));
    CHECK(brute_wce(approx) == 0);
    CHECK(gate_count(approx.netlist()).total == gate_count(exact.netlist()).total);
  }

  TEST_CASE("full approximate region with the exact-nocarry table") {
    const Multiplier m(MultiplierConfig::approx42(8, builtin_compressor("exact-nocarry"), 8u));
    const std::uint64_t wce = brute_wce(m);
    CHECK(wce > 0);
    const Multiplier ref(MultiplierConfig::approx42(8, builtin_compressor("reference")));
    CHECK(brute_wce(ref) > 0);
  }

  TEST_CASE("n=2 exact tree is four AND gates and two half adders") {
    const Netlist net = build_multiplier_netlist(MultiplierConfig::exact(2));
    const GateCounts c = gate_count(net);
    CHECK(c.per_kind.at(GateKind::kAnd) == 4);
    CHECK(c.per_kind.at(GateKind::kHalfAdder) == 2);
    CHECK(c.total == 6);
    for (std::uint64_t a = 0; a < 4; ++a) {
      for (std::uint64_t b = 0; b < 4; ++b) CHECK(net.evaluate(a, b) == a * b);
    }
  }

  TEST_CASE("stage heights start at partial-product counts and end at two rows") {
    const Netlist net = build_multiplier_netlist(MultiplierConfig::exact(8));
    const auto& stages = net.stage_heights();
    REQUIRE(stages.size() >= 2);
    for (unsigned col = 0; col < 15; ++col) {
      CHECK(stages.front()[col] == std::min(col + 1, 15 - col));
    }
    for (unsigned h : stages.back()) CHECK(h <= 2);
  }

  TEST_CASE("lowering keeps function and leaves only primitive gates") {
    const Multiplier m(MultiplierConfig::approx42(6, builtin_compressor("reference")));
    const Netlist low = lower_to_primitives(m.netlist());
    for (const Gate& g : low.gates()) {
      CHECK((g.kind == GateKind::kInput || g.kind == GateKind::kConst0 ||
             g.kind == GateKind::kConst1 || is_primitive(g.kind)));
    }
    const Netlist pruned = prune_dead(low);
    CHECK(pruned.size() <= low.size());
    for (std::uint64_t a = 0; a < 64; ++a) {
      for (std::uint64_t b = 0; b < 64; ++b) {
        const std::uint64_t want = m.netlist().evaluate(a, b);
        CHECK(low.evaluate(a, b) == want);
        CHECK(pruned.evaluate(a, b) == want);
      }
    }
  }

  TEST_CASE("netlist build is deterministic") {
    const auto cfg = MultiplierConfig::approx42(8, builtin_compressor("reference"), 5u);
    CHECK(build_multiplier_netlist(cfg) == build_multiplier_netlist(cfg));
  }

  TEST_CASE("gate-count CSV") {
    CHECK(gate_count_csv_header() == "family,width,region,kind,count\n");
    const std::string rows = gate_count_csv_rows(MultiplierConfig::exact(32));
    CHECK(testutil::contains(rows, "exact,32,0,TOTAL,"));
    CHECK(testutil::contains(rows, "exact,32,0,PRIMITIVE_TOTAL,"));
    const std::string approx =
        gate_count_csv_rows(MultiplierConfig::approx42(8, builtin_compressor("reference"), 6u));
    CHECK(testutil::contains(approx, "approx4-2,8,6,"));
  }

  TEST_CASE("config validation") {
    auto code = [](MultiplierConfig cfg) {
      auto t = thrown([&] { cfg.validate(); });
      return t ? t->code : ErrorCode::kInternal;
    };
    CHECK(code(MultiplierConfig::exact(1)) == ErrorCode::kConfig);
    CHECK(code(MultiplierConfig::exact(33)) == ErrorCode::kConfig);
    CHECK(code(MultiplierConfig::approx42(8, builtin_compressor("reference"), 17u)) ==
          ErrorCode::kConfig);
    CHECK(code(MultiplierConfig::approx42(8, CompressorSpec::exact())) == ErrorCode::kConfig);
    MultiplierConfig mixed = MultiplierConfig::exact(8);
    mixed.compensation = true;
    CHECK(code(mixed) == ErrorCode::kConfig);
    CHECK(parse_family("approx4-2") == Family::kApprox42);
    CHECK(thrown([] { parse_family("wallace"); }));
  }

  TEST_CASE("operands wider than the multiplier are rejected") {
    const Multiplier exact(MultiplierConfig::exact(8));
    const Multiplier log(MultiplierConfig::logarithmic(8, true));
    CHECK(thrown([&] { exact.multiply(256, 1); }));
    auto t = thrown([&] { log.multiply(1, 256); });
    REQUIRE(t);
    CHECK(t->code == ErrorCode::kOutOfRange);
    std::vector<std::uint64_t> a(3), b(2), p(3);
    CHECK(thrown([&] { log.multiply_batch(a, b, p); }));
  }
}

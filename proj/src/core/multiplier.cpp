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

#include "core/multiplier.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>

#include "core/error.hpp"
#include "core/log_mult.hpp"

namespace approxcim {

std::string_view family_name(Family family) {
  switch (family) {
    case Family::kExact: return "exact";
    case Family::kApprox42: return "approx4-2";
    case Family::kLogarithmic: return "logarithmic";
  }
  return "?";
}

Family parse_family(std::string_view text) {
  if (text == "exact") return Family::kExact;
  if (text == "approx4-2" || text == "approx42") return Family::kApprox42;
  if (text == "logarithmic" || text == "log") return Family::kLogarithmic;
  fail(ErrorCode::kConfig, "unknown multiplier family '" + std::string(text) + "'");
}

MultiplierConfig MultiplierConfig::exact(unsigned width) {
  MultiplierConfig cfg;
  cfg.width = width;
  return cfg;
}

MultiplierConfig MultiplierConfig::approx42(unsigned width,
                                            CompressorSpec compressor,
                                            std::optional<unsigned> region) {
  MultiplierConfig cfg;
  cfg.width = width;
  cfg.family = Family::kApprox42;
  cfg.compressor = std::move(compressor);
  cfg.approx_region = region;
  return cfg;
}

MultiplierConfig MultiplierConfig::logarithmic(unsigned width,
                                               bool compensation) {
  MultiplierConfig cfg;
  cfg.width = width;
  cfg.family = Family::kLogarithmic;
  cfg.compensation = compensation;
  return cfg;
}

void MultiplierConfig::validate() const {
  if (width < 2 || width > 32) {
    fail(ErrorCode::kConfig,
         "multiplier.width must be in [2, 32], got " + std::to_string(width));
  }
  const bool approx = family == Family::kApprox42;
  if (approx_region && !approx) {
    fail(ErrorCode::kConfig, "multiplier.region only applies to approx4-2");
  }
  if (compressor && !approx) {
    fail(ErrorCode::kConfig, "multiplier.compressor only applies to approx4-2");
  }
  if (compensation && family != Family::kLogarithmic) {
    fail(ErrorCode::kConfig,
         "multiplier.compensation only applies to logarithmic");
  }
  if (approx) {
    if (!compressor) {
      fail(ErrorCode::kConfig, "multiplier.compressor is required for approx4-2");
    }
    if (compressor->is_exact()) {
      fail(ErrorCode::kConfig,
           "multiplier.compressor must be an approximate table");
    }
    if (region() > 2 * width) {
      fail(ErrorCode::kConfig, "multiplier.region " + std::to_string(region()) +
                                   " exceeds 2*width = " +
                                   std::to_string(2 * width));
    }
  }
}

namespace {

std::vector<unsigned> heights_of(const std::vector<std::vector<Signal>>& cols) {
  std::vector<unsigned> heights;
  for (const auto& c : cols) heights.push_back(static_cast<unsigned>(c.size()));
  return heights;
}

constexpr int kMaxStages = 64;

}  // namespace

Netlist build_multiplier_netlist(const MultiplierConfig& cfg) {
  cfg.validate();
  if (cfg.family == Family::kLogarithmic) {
    fail(ErrorCode::kInvalidArgument,
         "build_multiplier_netlist handles exact and approx4-2 families");
  }
  const unsigned n = cfg.width;
  const unsigned columns = 2 * n;
  const unsigned region = cfg.family == Family::kApprox42 ? cfg.region() : 0;

  Netlist nl(n);
  std::uint32_t spec = 0;
  if (cfg.family == Family::kApprox42) spec = nl.add_spec(*cfg.compressor);

  nl.set_group("pp");
  std::vector<std::vector<Signal>> cols(columns);
  for (unsigned i = 0; i < n; ++i) {
    for (unsigned j = 0; j < n; ++j) {
      const std::array<Signal, 2> in{nl.a(i), nl.b(j)};
      cols[i + j].push_back({nl.add_gate(GateKind::kAnd, in), 0});
    }
  }
  nl.stage_heights().push_back(heights_of(cols));

  nl.set_group("reduce");
  auto tallest = [&] {
    std::size_t h = 0;
    for (const auto& c : cols) h = std::max(h, c.size());
    return h;
  };
  int stage = 0;
  while (tallest() > 2) {
    if (++stage > kMaxStages) {
      fail(ErrorCode::kInternal, "reduction tree did not converge");
    }
    std::vector<std::vector<Signal>> next(columns);
    auto emit = [&](unsigned column, Signal s) {
      if (column < columns) next[column].push_back(s);
    };
    std::vector<Signal> couts_in;
    for (unsigned c = 0; c < columns; ++c) {
      const std::vector<Signal>& bits = cols[c];
      std::vector<Signal> couts_out;
      if (bits.size() + couts_in.size() <= 2) {
        for (Signal s : bits) emit(c, s);
        for (Signal s : couts_in) emit(c, s);
        couts_in.clear();
        continue;
      }

      std::vector<Signal> pending;  // bits not yet consumed, in column order
      std::size_t pos = 0;
      if (c < region) {
        pending = bits;
        pending.insert(pending.end(), couts_in.begin(), couts_in.end());
        while (pending.size() - pos >= 4) {
          const std::array<Signal, 4> in{pending[pos], pending[pos + 1],
                                         pending[pos + 2], pending[pos + 3]};
          pos += 4;
          const auto g = nl.add_gate(GateKind::kApproxCompressor42, in, spec);
          emit(c, {g, 0});
          emit(c + 1, {g, 1});
        }
      } else {
        pending = bits;
        std::size_t cin_pos = 0;
        while (pending.size() - pos >= 4) {
          Signal cin;
          std::size_t consumed = 4;
          if (cin_pos < couts_in.size()) {
            cin = couts_in[cin_pos++];
          } else if (pending.size() - pos >= 5) {
            cin = pending[pos + 4];
            consumed = 5;
          } else {
            cin = nl.constant(false);
          }
          const std::array<Signal, 5> in{pending[pos], pending[pos + 1],
                                         pending[pos + 2], pending[pos + 3], cin};
          pos += consumed;
          const auto g = nl.add_gate(GateKind::kCompressor42, in);
          emit(c, {g, 0});
          emit(c + 1, {g, 1});
          couts_out.push_back({g, 2});
        }
        pending.insert(pending.end(), couts_in.begin() + static_cast<std::ptrdiff_t>(cin_pos),
                       couts_in.end());
      }

      // Unused couts can leave more than three bits behind.
      while (pending.size() - pos >= 3) {
        const std::array<Signal, 3> in{pending[pos], pending[pos + 1], pending[pos + 2]};
        pos += 3;
        const auto g = nl.add_gate(GateKind::kFullAdder, in);
        emit(c, {g, 0});
        emit(c + 1, {g, 1});
      }
      const std::size_t left = pending.size() - pos;
      if (left == 2) {
        const std::array<Signal, 2> in{pending[pos], pending[pos + 1]};
        const auto g = nl.add_gate(GateKind::kHalfAdder, in);
        emit(c, {g, 0});
        emit(c + 1, {g, 1});
      } else if (left == 1) {
        emit(c, pending[pos]);
      }
      couts_in = std::move(couts_out);
    }
    cols = std::move(next);
    nl.stage_heights().push_back(heights_of(cols));
  }

  nl.set_group("cpa");
  std::vector<Signal> outputs;
  std::optional<Signal> carry;
  for (unsigned c = 0; c < columns; ++c) {
    std::vector<Signal> in = cols[c];
    if (carry) in.push_back(*carry);
    carry.reset();
    if (in.empty()) {
      outputs.push_back(nl.constant(false));
    } else if (in.size() == 1) {
      outputs.push_back(in[0]);
    } else {
      const auto kind = in.size() == 2 ? GateKind::kHalfAdder : GateKind::kFullAdder;
      const auto g = nl.add_gate(kind, in);
      outputs.push_back({g, 0});
      carry = Signal{g, 1};
    }
  }
  nl.set_group("");
  nl.set_outputs(std::move(outputs));
  Netlist pruned = prune_dead(nl);
  pruned.validate();
  return pruned;
}

Netlist compile_netlist(const MultiplierConfig& cfg) {
  if (cfg.family == Family::kLogarithmic) return build_log_multiplier_netlist(cfg);
  return build_multiplier_netlist(cfg);
}

std::int64_t signed_multiply(const Netlist& netlist, std::int64_t a,
                             std::int64_t b) {
  const std::int64_t limit = std::int64_t{1} << (netlist.width() - 1);
  if (a <= -limit || a >= limit || b <= -limit || b >= limit) {
    fail(ErrorCode::kOutOfRange,
         "magnitude overflow: signed operands must satisfy |x| < 2^" +
             std::to_string(netlist.width() - 1));
  }
  const auto magnitude = static_cast<std::int64_t>(netlist.evaluate(
      static_cast<std::uint64_t>(std::llabs(a)), static_cast<std::uint64_t>(std::llabs(b))));
  return ((a < 0) != (b < 0)) ? -magnitude : magnitude;
}

Multiplier::Multiplier(MultiplierConfig cfg)
    : cfg_(std::move(cfg)),
      netlist_(std::make_shared<const Netlist>(compile_netlist(cfg_))) {}

std::uint64_t Multiplier::multiply(std::uint64_t a, std::uint64_t b) const {
  if (cfg_.family == Family::kLogarithmic) {
    const std::uint64_t limit = std::uint64_t{1} << cfg_.width;
    if (a >= limit || b >= limit) {
      fail(ErrorCode::kOutOfRange,
           "operand does not fit in " + std::to_string(cfg_.width) + " bits");
    }
    return cfg_.compensated() ? compensated_log_multiply(a, b).product
                              : mitchell_multiply(a, b);
  }
  return netlist_->evaluate(a, b);
}

std::int64_t Multiplier::multiply_signed(std::int64_t a, std::int64_t b) const {
  std::int64_t out = 0;
  multiply_signed_batch(std::span(&a, 1), std::span(&b, 1), std::span(&out, 1));
  return out;
}

void Multiplier::multiply_batch(std::span<const std::uint64_t> a,
                                std::span<const std::uint64_t> b,
                                std::span<std::uint64_t> out) const {
  if (cfg_.family != Family::kLogarithmic) {
    netlist_->evaluate_batch(a, b, out);
    return;
  }
  if (a.size() != b.size() || out.size() != a.size()) {
    fail(ErrorCode::kInvalidArgument, "multiply_batch: size mismatch");
  }
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = multiply(a[i], b[i]);
}

void Multiplier::multiply_signed_batch(std::span<const std::int64_t> a,
                                       std::span<const std::int64_t> b,
                                       std::span<std::int64_t> out) const {
  if (a.size() != b.size() || out.size() != a.size()) {
    fail(ErrorCode::kInvalidArgument, "multiply_signed_batch: size mismatch");
  }
  const std::int64_t limit = std::int64_t{1} << (cfg_.width - 1);
  std::vector<std::uint64_t> ma(a.size()), mb(b.size()), mp(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] <= -limit || a[i] >= limit || b[i] <= -limit || b[i] >= limit) {
      fail(ErrorCode::kOutOfRange,
           "magnitude overflow: signed operands must satisfy |x| < 2^" +
               std::to_string(cfg_.width - 1));
    }
    ma[i] = static_cast<std::uint64_t>(std::llabs(a[i]));
    mb[i] = static_cast<std::uint64_t>(std::llabs(b[i]));
  }
  multiply_batch(ma, mb, mp);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto magnitude = static_cast<std::int64_t>(mp[i]);
    out[i] = ((a[i] < 0) != (b[i] < 0)) ? -magnitude : magnitude;
  }
}

std::string gate_count_csv_header() { return "family,width,region,kind,count\n"; }

std::string gate_count_csv_rows(const MultiplierConfig& cfg) {
  const Netlist nl = compile_netlist(cfg);
  const GateCounts cells = gate_count(nl);
  const GateCounts prims = gate_count(lower_to_primitives(nl));
  const std::string prefix = std::string(family_name(cfg.family)) + "," +
                             std::to_string(cfg.width) + "," +
                             std::to_string(cfg.family == Family::kApprox42 ? cfg.region() : 0) +
                             ",";
  std::string out;
  for (const auto& [kind, count] : cells.per_kind) {
    out += prefix + std::string(gate_kind_name(kind)) + "," + std::to_string(count) + "\n";
  }
  out += prefix + "TOTAL," + std::to_string(cells.total) + "\n";
  out += prefix + "PRIMITIVE_TOTAL," + std::to_string(prims.total) + "\n";
  return out;
}

}  // namespace approxcim

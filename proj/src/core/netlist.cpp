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

#include "core/netlist.hpp"

#include <algorithm>
#include <array>
#include <unordered_map>

#include "core/error.hpp"

namespace approxcim {

std::string_view gate_kind_name(GateKind kind) {
  switch (kind) {
    case GateKind::kInput: return "INPUT";
    case GateKind::kConst0: return "CONST0";
    case GateKind::kConst1: return "CONST1";
    case GateKind::kAnd: return "AND";
    case GateKind::kOr: return "OR";
    case GateKind::kXor: return "XOR";
    case GateKind::kNot: return "NOT";
    case GateKind::kHalfAdder: return "HA";
    case GateKind::kFullAdder: return "FA";
    case GateKind::kCompressor42: return "C42";
    case GateKind::kApproxCompressor42: return "C42A";
  }
  return "?";
}

unsigned gate_input_count(GateKind kind) {
  switch (kind) {
    case GateKind::kInput:
    case GateKind::kConst0:
    case GateKind::kConst1: return 0;
    case GateKind::kNot: return 1;
    case GateKind::kAnd:
    case GateKind::kOr:
    case GateKind::kXor:
    case GateKind::kHalfAdder: return 2;
    case GateKind::kFullAdder: return 3;
    case GateKind::kApproxCompressor42: return 4;
    case GateKind::kCompressor42: return 5;
  }
  return 0;
}

unsigned gate_output_count(GateKind kind) {
  switch (kind) {
    case GateKind::kHalfAdder:
    case GateKind::kFullAdder:
    case GateKind::kApproxCompressor42: return 2;
    case GateKind::kCompressor42: return 3;
    default: return 1;
  }
}

bool is_primitive(GateKind kind) {
  switch (kind) {
    case GateKind::kHalfAdder:
    case GateKind::kFullAdder:
    case GateKind::kCompressor42:
    case GateKind::kApproxCompressor42: return false;
    default: return true;
  }
}

Netlist::Netlist(unsigned width) : width_(width) {
  if (width < 1 || width > 32) {
    fail(ErrorCode::kInvalidArgument,
         "netlist width must be in [1, 32], got " + std::to_string(width));
  }
  for (unsigned i = 0; i < width; ++i) a_nodes_.push_back(add_gate(GateKind::kInput, {}));
  for (unsigned i = 0; i < width; ++i) b_nodes_.push_back(add_gate(GateKind::kInput, {}));
}

Signal Netlist::constant(bool value) {
  auto& id = const_nodes_[value ? 1 : 0];
  if (id < 0) {
    // Constants live outside any group so that grouped emission never
    // duplicates them.
    const auto saved = current_group_;
    current_group_ = 0;
    id = add_gate(value ? GateKind::kConst1 : GateKind::kConst0, {});
    current_group_ = saved;
  }
  return {static_cast<std::uint32_t>(id), 0};
}

std::uint32_t Netlist::add_gate(GateKind kind, std::span<const Signal> inputs,
                                std::uint32_t spec) {
  if (inputs.size() != gate_input_count(kind)) {
    fail(ErrorCode::kInternal, std::string(gate_kind_name(kind)) +
                                   ": wrong number of inputs");
  }
  for (const Signal& s : inputs) {
    if (s.node >= gates_.size() ||
        s.port >= gate_output_count(gates_[s.node].kind)) {
      fail(ErrorCode::kInternal, "gate input references an undriven signal");
    }
  }
  if (kind == GateKind::kApproxCompressor42 && spec >= specs_.size()) {
    fail(ErrorCode::kInternal, "unknown compressor spec index");
  }
  const auto id = static_cast<std::uint32_t>(gates_.size());
  gates_.push_back(Gate{kind, {inputs.begin(), inputs.end()}, spec, current_group_});
  slot_base_.push_back(slot_count_);
  slot_count_ += gate_output_count(kind);
  return id;
}

bool Netlist::is_const(Signal s, bool value) const {
  return gates_[s.node].kind == (value ? GateKind::kConst1 : GateKind::kConst0);
}

Signal Netlist::and2(Signal x, Signal y) {
  if (is_const(x, false) || is_const(y, false)) return constant(false);
  if (is_const(x, true)) return y;
  if (is_const(y, true) || x == y) return x;
  const std::array<Signal, 2> in{x, y};
  return {add_gate(GateKind::kAnd, in), 0};
}

Signal Netlist::or2(Signal x, Signal y) {
  if (is_const(x, true) || is_const(y, true)) return constant(true);
  if (is_const(x, false)) return y;
  if (is_const(y, false) || x == y) return x;
  const std::array<Signal, 2> in{x, y};
  return {add_gate(GateKind::kOr, in), 0};
}

Signal Netlist::xor2(Signal x, Signal y) {
  if (x == y) return constant(false);
  if (is_const(x, false)) return y;
  if (is_const(y, false)) return x;
  if (is_const(x, true)) return not1(y);
  if (is_const(y, true)) return not1(x);
  const std::array<Signal, 2> in{x, y};
  return {add_gate(GateKind::kXor, in), 0};
}

Signal Netlist::not1(Signal x) {
  if (is_const(x, false)) return constant(true);
  if (is_const(x, true)) return constant(false);
  if (gates_[x.node].kind == GateKind::kNot) return gates_[x.node].inputs[0];
  const std::array<Signal, 1> in{x};
  return {add_gate(GateKind::kNot, in), 0};
}

Signal Netlist::mux2(Signal select, Signal when0, Signal when1) {
  if (when0 == when1) return when0;
  if (is_const(select, false)) return when0;
  if (is_const(select, true)) return when1;
  return or2(and2(select, when1), and2(not1(select), when0));
}

std::uint32_t Netlist::add_spec(const CompressorSpec& spec) {
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    if (specs_[i] == spec) return static_cast<std::uint32_t>(i);
  }
  if (spec.is_exact()) {
    fail(ErrorCode::kInvalidArgument, "only approximate specs are table-driven");
  }
  specs_.push_back(spec);
  return static_cast<std::uint32_t>(specs_.size() - 1);
}

void Netlist::set_group(const std::string& group) {
  const auto it = std::find(groups_.begin(), groups_.end(), group);
  if (it != groups_.end()) {
    current_group_ = static_cast<std::uint16_t>(it - groups_.begin());
    return;
  }
  groups_.push_back(group);
  current_group_ = static_cast<std::uint16_t>(groups_.size() - 1);
}

void Netlist::set_outputs(std::vector<Signal> outputs) {
  if (outputs.size() != output_width()) {
    fail(ErrorCode::kInternal, "netlist must drive exactly " +
                                   std::to_string(output_width()) +
                                   " output bits");
  }
  for (const Signal& s : outputs) {
    if (s.node >= gates_.size() ||
        s.port >= gate_output_count(gates_[s.node].kind)) {
      fail(ErrorCode::kInternal, "output references an undriven signal");
    }
  }
  outputs_ = std::move(outputs);
}

std::string Netlist::input_name(std::uint32_t node) const {
  if (node < width_) return "a[" + std::to_string(node) + "]";
  if (node < 2 * width_) return "b[" + std::to_string(node - width_) + "]";
  return {};
}

void Netlist::validate() const {
  for (std::uint32_t id = 0; id < gates_.size(); ++id) {
    const Gate& g = gates_[id];
    if (g.inputs.size() != gate_input_count(g.kind)) {
      fail(ErrorCode::kInternal, "gate " + std::to_string(id) + " has wrong arity");
    }
    for (const Signal& s : g.inputs) {
      if (s.node >= id) {
        fail(ErrorCode::kInternal,
             "gate " + std::to_string(id) + " reads a later gate (cycle)");
      }
      if (s.port >= gate_output_count(gates_[s.node].kind)) {
        fail(ErrorCode::kInternal, "gate " + std::to_string(id) + " reads a missing port");
      }
    }
    if (g.kind == GateKind::kInput && id >= 2 * width_) {
      fail(ErrorCode::kInternal, "stray input gate");
    }
  }
  if (outputs_.size() != output_width()) {
    fail(ErrorCode::kInternal, "netlist outputs not set");
  }
}

void Netlist::eval_lanes(std::vector<std::uint64_t>& slots) const {
  constexpr std::uint64_t kOnes = ~std::uint64_t{0};
  for (std::uint32_t id = 2 * width_; id < gates_.size(); ++id) {
    const Gate& g = gates_[id];
    std::uint64_t* out = &slots[slot_base_[id]];
    auto in = [&](unsigned i) { return slots[slot(g.inputs[i])]; };
    switch (g.kind) {
      case GateKind::kInput: break;
      case GateKind::kConst0: out[0] = 0; break;
      case GateKind::kConst1: out[0] = kOnes; break;
      case GateKind::kAnd: out[0] = in(0) & in(1); break;
      case GateKind::kOr: out[0] = in(0) | in(1); break;
      case GateKind::kXor: out[0] = in(0) ^ in(1); break;
      case GateKind::kNot: out[0] = ~in(0); break;
      case GateKind::kHalfAdder: {
        const auto x = in(0), y = in(1);
        out[0] = x ^ y;
        out[1] = x & y;
        break;
      }
      case GateKind::kFullAdder: {
        const auto x = in(0), y = in(1), c = in(2);
        const auto p = x ^ y;
        out[0] = p ^ c;
        out[1] = (x & y) | (p & c);
        break;
      }
      case GateKind::kCompressor42: {
        const auto x1 = in(0), x2 = in(1), x3 = in(2), x4 = in(3), c = in(4);
        const auto p = x1 ^ x2;
        const auto s1 = p ^ x3;
        const auto cout = (x1 & x2) | (p & x3);
        const auto q = s1 ^ x4;
        out[0] = q ^ c;
        out[1] = (s1 & x4) | (q & c);
        out[2] = cout;
        break;
      }
      case GateKind::kApproxCompressor42: {
        const auto& table = specs_[g.spec].table();
        const std::array<std::uint64_t, 4> x{in(0), in(1), in(2), in(3)};
        std::uint64_t sum = 0, carry = 0;
        for (unsigned p = 0; p < 16; ++p) {
          if (!table[p].sum && !table[p].carry) continue;
          std::uint64_t minterm = kOnes;
          for (unsigned v = 0; v < 4; ++v) {
            minterm &= ((p >> (3 - v)) & 1u) ? x[v] : ~x[v];
          }
          if (table[p].sum) sum |= minterm;
          if (table[p].carry) carry |= minterm;
        }
        out[0] = sum;
        out[1] = carry;
        break;
      }
    }
  }
}

std::uint64_t Netlist::evaluate(std::uint64_t a, std::uint64_t b) const {
  std::uint64_t out = 0;
  evaluate_batch(std::span(&a, 1), std::span(&b, 1), std::span(&out, 1));
  return out;
}

void Netlist::evaluate_batch(std::span<const std::uint64_t> a,
                             std::span<const std::uint64_t> b,
                             std::span<std::uint64_t> out) const {
  if (a.size() != b.size() || out.size() != a.size()) {
    fail(ErrorCode::kInvalidArgument, "evaluate_batch: size mismatch");
  }
  if (outputs_.size() != output_width()) {
    fail(ErrorCode::kInternal, "netlist outputs not set");
  }
  const std::uint64_t limit = 1ull << width_;
  std::vector<std::uint64_t> slots(slot_count_);
  for (std::size_t base = 0; base < a.size(); base += 64) {
    const std::size_t lanes = std::min<std::size_t>(64, a.size() - base);
    std::fill(slots.begin(), slots.end(), 0);
    for (std::size_t lane = 0; lane < lanes; ++lane) {
      const std::uint64_t av = a[base + lane], bv = b[base + lane];
      if (av >= limit || bv >= limit) {
        fail(ErrorCode::kOutOfRange,
             "operand does not fit in " + std::to_string(width_) + " bits");
      }
      for (unsigned bit = 0; bit < width_; ++bit) {
        slots[slot_base_[a_nodes_[bit]]] |= ((av >> bit) & 1u) << lane;
        slots[slot_base_[b_nodes_[bit]]] |= ((bv >> bit) & 1u) << lane;
      }
    }
    eval_lanes(slots);
    for (std::size_t lane = 0; lane < lanes; ++lane) {
      std::uint64_t product = 0;
      for (unsigned bit = 0; bit < outputs_.size(); ++bit) {
        product |= ((slots[slot(outputs_[bit])] >> lane) & 1u) << bit;
      }
      out[base + lane] = product;
    }
  }
}

bool operator==(const Netlist& lhs, const Netlist& rhs) {
  if (lhs.width_ != rhs.width_ || lhs.outputs_ != rhs.outputs_ ||
      lhs.specs_ != rhs.specs_ || lhs.groups_ != rhs.groups_ ||
      lhs.gates_.size() != rhs.gates_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < lhs.gates_.size(); ++i) {
    const Gate& x = lhs.gates_[i];
    const Gate& y = rhs.gates_[i];
    if (x.kind != y.kind || x.inputs != y.inputs || x.spec != y.spec ||
        x.group != y.group) {
      return false;
    }
  }
  return true;
}

namespace {

// Synthesizes one truth table over the trailing (4 - level) variables.
class TableSynthesizer {
 public:
  TableSynthesizer(Netlist& out, std::array<Signal, 4> vars)
      : out_(out), vars_(vars) {}

  Signal synthesize(unsigned level, std::uint32_t table) {
    const unsigned remaining = 4 - level;
    const std::uint32_t mask = (1u << (1u << remaining)) - 1u;
    table &= mask;
    if (table == 0) return out_.constant(false);
    if (table == mask) return out_.constant(true);
    const std::uint64_t key = (std::uint64_t{level} << 32) | table;
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    const unsigned half = 1u << (remaining - 1);
    const std::uint32_t half_mask = (1u << half) - 1u;
    const std::uint32_t low = table & half_mask;   // variable = 0
    const std::uint32_t high = table >> half;      // variable = 1
    const Signal var = vars_[level];

    Signal result;
    if (low == high) {
      result = synthesize(level + 1, low);
    } else if (high == (~low & half_mask)) {
      result = out_.xor2(var, synthesize(level + 1, low));
    } else if (low == 0) {
      result = out_.and2(var, synthesize(level + 1, high));
    } else if (high == 0) {
      result = out_.and2(out_.not1(var), synthesize(level + 1, low));
    } else if (high == half_mask) {
      result = out_.or2(var, synthesize(level + 1, low));
    } else if (low == half_mask) {
      result = out_.or2(out_.not1(var), synthesize(level + 1, high));
    } else {
      result = out_.mux2(var, synthesize(level + 1, low),
                         synthesize(level + 1, high));
    }
    memo_.emplace(key, result);
    return result;
  }

 private:
  Netlist& out_;
  std::array<Signal, 4> vars_;
  std::unordered_map<std::uint64_t, Signal> memo_;
};

// Truth tables indexed with x1 as the most significant pattern bit; the
// synthesizer splits on x1 first, which is the top half of the index space.
std::pair<std::uint32_t, std::uint32_t> table_bits(const CompressorSpec& spec) {
  std::uint32_t sum = 0, carry = 0;
  for (unsigned p = 0; p < 16; ++p) {
    const AdderBits row = spec.lookup(p);
    sum |= std::uint32_t{row.sum} << p;
    carry |= std::uint32_t{row.carry} << p;
  }
  return {sum, carry};
}

}  // namespace

Netlist lower_to_primitives(const Netlist& src) {
  Netlist out(src.width());
  std::vector<std::vector<Signal>> map(src.size());
  for (unsigned i = 0; i < src.width(); ++i) {
    map[src.a(i).node] = {out.a(i)};
    map[src.b(i).node] = {out.b(i)};
  }
  out.stage_heights() = src.stage_heights();

  const auto& gates = src.gates();
  for (std::uint32_t id = 2 * src.width(); id < gates.size(); ++id) {
    const Gate& g = gates[id];
    out.set_group(src.groups()[g.group]);
    std::vector<Signal> in;
    for (const Signal& s : g.inputs) in.push_back(map[s.node][s.port]);
    auto& dst = map[id];
    switch (g.kind) {
      case GateKind::kInput: break;
      case GateKind::kConst0: dst = {out.constant(false)}; break;
      case GateKind::kConst1: dst = {out.constant(true)}; break;
      case GateKind::kAnd: dst = {out.and2(in[0], in[1])}; break;
      case GateKind::kOr: dst = {out.or2(in[0], in[1])}; break;
      case GateKind::kXor: dst = {out.xor2(in[0], in[1])}; break;
      case GateKind::kNot: dst = {out.not1(in[0])}; break;
      case GateKind::kHalfAdder:
        dst = {out.xor2(in[0], in[1]), out.and2(in[0], in[1])};
        break;
      case GateKind::kFullAdder: {
        const Signal p = out.xor2(in[0], in[1]);
        dst = {out.xor2(p, in[2]),
               out.or2(out.and2(in[0], in[1]), out.and2(p, in[2]))};
        break;
      }
      case GateKind::kCompressor42: {
        const Signal p = out.xor2(in[0], in[1]);
        const Signal s1 = out.xor2(p, in[2]);
        const Signal cout = out.or2(out.and2(in[0], in[1]), out.and2(p, in[2]));
        const Signal q = out.xor2(s1, in[3]);
        dst = {out.xor2(q, in[4]),
               out.or2(out.and2(s1, in[3]), out.and2(q, in[4])), cout};
        break;
      }
      case GateKind::kApproxCompressor42: {
        const auto [sum_bits, carry_bits] = table_bits(src.specs()[g.spec]);
        TableSynthesizer synth(out, {in[0], in[1], in[2], in[3]});
        dst = {synth.synthesize(0, sum_bits), synth.synthesize(0, carry_bits)};
        break;
      }
    }
  }
  std::vector<Signal> outputs;
  for (const Signal& s : src.outputs()) outputs.push_back(map[s.node][s.port]);
  out.set_group("");
  out.set_outputs(std::move(outputs));
  return prune_dead(out);
}

Netlist prune_dead(const Netlist& src) {
  const auto& gates = src.gates();
  std::vector<bool> live(gates.size(), false);
  for (const Signal& s : src.outputs()) live[s.node] = true;
  for (std::size_t id = gates.size(); id-- > 0;) {
    if (!live[id]) continue;
    for (const Signal& s : gates[id].inputs) live[s.node] = true;
  }

  Netlist out(src.width());
  out.stage_heights() = src.stage_heights();
  std::vector<std::uint32_t> spec_map(src.specs().size());
  for (std::size_t i = 0; i < src.specs().size(); ++i) {
    spec_map[i] = out.add_spec(src.specs()[i]);
  }
  std::vector<std::uint32_t> map(gates.size());
  for (unsigned i = 0; i < src.width(); ++i) {
    map[src.a(i).node] = out.a(i).node;
    map[src.b(i).node] = out.b(i).node;
  }
  for (std::uint32_t id = 2 * src.width(); id < gates.size(); ++id) {
    if (!live[id]) continue;
    const Gate& g = gates[id];
    out.set_group(src.groups()[g.group]);
    if (g.kind == GateKind::kConst0 || g.kind == GateKind::kConst1) {
      map[id] = out.constant(g.kind == GateKind::kConst1).node;
      continue;
    }
    std::vector<Signal> in;
    for (const Signal& s : g.inputs) in.push_back({map[s.node], s.port});
    const std::uint32_t spec =
        g.kind == GateKind::kApproxCompressor42 ? spec_map[g.spec] : 0;
    map[id] = out.add_gate(g.kind, in, spec);
  }
  std::vector<Signal> outputs;
  for (const Signal& s : src.outputs()) outputs.push_back({map[s.node], s.port});
  out.set_group("");
  out.set_outputs(std::move(outputs));
  return out;
}

GateCounts gate_count(const Netlist& netlist) {
  GateCounts counts;
  for (const Gate& g : netlist.gates()) {
    if (g.kind == GateKind::kInput || g.kind == GateKind::kConst0 ||
        g.kind == GateKind::kConst1) {
      continue;
    }
    ++counts.per_kind[g.kind];
    ++counts.total;
  }
  return counts;
}

}  // namespace approxcim

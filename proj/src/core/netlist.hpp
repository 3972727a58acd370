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

// Gate-level netlist for two-operand arithmetic circuits.
//
// Gates are stored in creation order, and a gate may only read signals of
// gates created before it, so the storage order is always a valid
// topological order. Compound cells (half/full adders, 4-2 compressors)
// have several output ports; a Signal names one (gate, port) pair.

#ifndef APPROXCIM_CORE_NETLIST_HPP
#define APPROXCIM_CORE_NETLIST_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "core/cells.hpp"

namespace approxcim {

enum class GateKind : std::uint8_t {
  kInput,
  kConst0,
  kConst1,
  kAnd,
  kOr,
  kXor,
  kNot,
  kHalfAdder,          // (a, b) -> (sum, carry)
  kFullAdder,          // (a, b, cin) -> (sum, carry)
  kCompressor42,       // (x1, x2, x3, x4, cin) -> (sum, carry, cout)
  kApproxCompressor42  // (x1, x2, x3, x4) -> (sum, carry), table-driven
};

std::string_view gate_kind_name(GateKind kind);
unsigned gate_input_count(GateKind kind);
unsigned gate_output_count(GateKind kind);
bool is_primitive(GateKind kind);

struct Signal {
  std::uint32_t node = 0;
  std::uint8_t port = 0;

  friend auto operator<=>(const Signal&, const Signal&) = default;
};

struct Gate {
  GateKind kind = GateKind::kInput;
  std::vector<Signal> inputs;
  std::uint32_t spec = 0;   // kApproxCompressor42 only
  std::uint16_t group = 0;  // index into Netlist::groups()
};

class Netlist {
 public:
  /// Creates inputs a[0..width-1], b[0..width-1]. The circuit must later
  /// drive exactly 2*width outputs.
  explicit Netlist(unsigned width);

  unsigned width() const { return width_; }
  unsigned output_width() const { return 2 * width_; }

  Signal a(unsigned bit) const { return {a_nodes_.at(bit), 0}; }
  Signal b(unsigned bit) const { return {b_nodes_.at(bit), 0}; }
  Signal constant(bool value);

  /// Appends a gate; inputs must reference existing gates. Returns its id.
  std::uint32_t add_gate(GateKind kind, std::span<const Signal> inputs,
                         std::uint32_t spec = 0);

  // Folding helpers: constants are propagated, no gate is added when the
  // result is already available.
  Signal and2(Signal x, Signal y);
  Signal or2(Signal x, Signal y);
  Signal xor2(Signal x, Signal y);
  Signal not1(Signal x);
  Signal mux2(Signal select, Signal when0, Signal when1);

  bool is_const(Signal s, bool value) const;

  std::uint32_t add_spec(const CompressorSpec& spec);
  const std::vector<CompressorSpec>& specs() const { return specs_; }

  /// Subsequent gates are tagged with this group (empty string = untagged).
  void set_group(const std::string& group);
  const std::vector<std::string>& groups() const { return groups_; }
  const std::string& group_of(std::uint32_t node) const {
    return groups_[gates_[node].group];
  }

  void set_outputs(std::vector<Signal> outputs);
  const std::vector<Signal>& outputs() const { return outputs_; }

  const std::vector<Gate>& gates() const { return gates_; }
  std::size_t size() const { return gates_.size(); }

  /// Display name of an input gate ("a[3]"), empty for other gates.
  std::string input_name(std::uint32_t node) const;

  /// Column heights of each reduction stage, stage 0 = partial products.
  std::vector<std::vector<unsigned>>& stage_heights() { return stage_heights_; }
  const std::vector<std::vector<unsigned>>& stage_heights() const {
    return stage_heights_;
  }

  /// Throws kInternal if a structural invariant is broken.
  void validate() const;

  /// Unsigned evaluation; operands must fit in width() bits.
  std::uint64_t evaluate(std::uint64_t a, std::uint64_t b) const;

  /// Bit-sliced evaluation of many operand pairs, 64 at a time.
  void evaluate_batch(std::span<const std::uint64_t> a,
                      std::span<const std::uint64_t> b,
                      std::span<std::uint64_t> out) const;

  friend bool operator==(const Netlist&, const Netlist&);

 private:
  std::uint32_t slot(Signal s) const { return slot_base_[s.node] + s.port; }
  void eval_lanes(std::vector<std::uint64_t>& slots) const;

  unsigned width_;
  std::vector<Gate> gates_;
  std::vector<std::uint32_t> slot_base_;
  std::uint32_t slot_count_ = 0;
  std::vector<std::uint32_t> a_nodes_;
  std::vector<std::uint32_t> b_nodes_;
  std::vector<Signal> outputs_;
  std::vector<CompressorSpec> specs_;
  std::vector<std::string> groups_{""};
  std::uint16_t current_group_ = 0;
  std::int64_t const_nodes_[2] = {-1, -1};
  std::vector<std::vector<unsigned>> stage_heights_;
};

bool operator==(const Netlist& lhs, const Netlist& rhs);

/// Expands compound cells into AND/OR/XOR/NOT gates. Approximate compressor
/// tables are synthesized by cofactor expansion with shared subfunctions.
/// Groups and outputs are preserved.
Netlist lower_to_primitives(const Netlist& netlist);

/// Drops gates that do not reach any output; relative order is kept.
Netlist prune_dead(const Netlist& netlist);

struct GateCounts {
  std::map<GateKind, std::size_t> per_kind;  // excludes inputs and constants
  std::size_t total = 0;
};

GateCounts gate_count(const Netlist& netlist);

}  // namespace approxcim

#endif  // APPROXCIM_CORE_NETLIST_HPP

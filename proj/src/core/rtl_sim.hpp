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

// Interpreter for the combinational Verilog subset produced by the emitters:
// ANSI port lists of wires, wire declarations, continuous assignments over
// ~ & ^ | with 1-bit literals and bit selects, and named-port instances.
// The hierarchy is flattened at elaboration and evaluated 64 vectors at a
// time.

#ifndef APPROXCIM_CORE_RTL_SIM_HPP
#define APPROXCIM_CORE_RTL_SIM_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "core/rtl_emit.hpp"

namespace approxcim {

class RtlSimulator {
 public:
  /// Parses every module in `source` and flattens `top`. Throws kParse on
  /// syntax outside the subset, kInvalidArgument on undriven or multiply
  /// driven nets and combinational loops.
  RtlSimulator(std::string_view source, const std::string& top);

  const std::vector<RtlPort>& ports() const { return ports_; }
  std::size_t operation_count() const { return ops_.size(); }

  /// Port values are at most 64 bits wide.
  std::map<std::string, std::uint64_t> evaluate(
      const std::map<std::string, std::uint64_t>& inputs) const;

  /// Convenience for multiplier modules with ports a, b and p.
  void evaluate_multiplier(std::span<const std::uint64_t> a,
                           std::span<const std::uint64_t> b,
                           std::span<std::uint64_t> p) const;

  enum class OpKind : std::uint8_t { kCopy, kNot, kAnd, kOr, kXor };
  struct Op {
    OpKind kind;
    std::uint32_t dst;
    std::uint32_t x;
    std::uint32_t y;
  };

 private:
  void run(std::vector<std::uint64_t>& slots) const;

  std::vector<RtlPort> ports_;
  std::map<std::string, std::vector<std::uint32_t>> port_slots_;
  std::vector<Op> ops_;
  std::uint32_t slot_count_ = 0;
};

}  // namespace approxcim

#endif  // APPROXCIM_CORE_RTL_SIM_HPP

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

#ifndef APPROXCIM_CORE_MULTIPLIER_HPP
#define APPROXCIM_CORE_MULTIPLIER_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "core/cells.hpp"
#include "core/netlist.hpp"

namespace approxcim {

enum class Family { kExact, kApprox42, kLogarithmic };
enum class Signedness { kUnsigned, kSignMagnitude };

std::string_view family_name(Family family);
Family parse_family(std::string_view text);

struct MultiplierConfig {
  unsigned width = 8;
  Signedness signedness = Signedness::kUnsigned;
  Family family = Family::kExact;
  std::optional<unsigned> approx_region;     // approx4-2 only; defaults to width
  std::optional<CompressorSpec> compressor;  // approx4-2 only
  std::optional<bool> compensation;          // logarithmic only

  static MultiplierConfig exact(unsigned width);
  static MultiplierConfig approx42(unsigned width, CompressorSpec compressor,
                                   std::optional<unsigned> region = {});
  static MultiplierConfig logarithmic(unsigned width, bool compensation);

  /// Throws kConfig naming the offending field.
  void validate() const;
  unsigned region() const { return approx_region.value_or(width); }
  bool compensated() const { return compensation.value_or(true); }
};

/// Partial products, column-wise greedy 4-2 reduction (approximate cells on
/// columns below the region boundary), then a ripple-carry adder.
/// Requires family exact or approx4-2.
Netlist build_multiplier_netlist(const MultiplierConfig& cfg);

/// Dispatches on the family; logarithmic configs get the structural
/// leading-one/shift/compensate datapath.
Netlist compile_netlist(const MultiplierConfig& cfg);

/// Sign-magnitude wrapper around an unsigned magnitude netlist.
std::int64_t signed_multiply(const Netlist& netlist, std::int64_t a,
                             std::int64_t b);

/// Gate-count CSV: family,width,region,kind,count. One row per cell kind
/// of the compiled netlist, then TOTAL and PRIMITIVE_TOTAL (after lowering
/// every cell to AND/OR/XOR/NOT).
std::string gate_count_csv_header();
std::string gate_count_csv_rows(const MultiplierConfig& cfg);

/// A compiled multiplier: the structural netlist plus a fast behavioral
/// route (netlist bit-sliced evaluation, or the arithmetic model for the
/// logarithmic family).
class Multiplier {
 public:
  explicit Multiplier(MultiplierConfig cfg);

  const MultiplierConfig& config() const { return cfg_; }
  const Netlist& netlist() const { return *netlist_; }
  unsigned width() const { return cfg_.width; }

  std::uint64_t multiply(std::uint64_t a, std::uint64_t b) const;
  std::int64_t multiply_signed(std::int64_t a, std::int64_t b) const;
  void multiply_batch(std::span<const std::uint64_t> a,
                      std::span<const std::uint64_t> b,
                      std::span<std::uint64_t> out) const;
  void multiply_signed_batch(std::span<const std::int64_t> a,
                             std::span<const std::int64_t> b,
                             std::span<std::int64_t> out) const;

 private:
  MultiplierConfig cfg_;
  std::shared_ptr<const Netlist> netlist_;
};

}  // namespace approxcim

#endif  // APPROXCIM_CORE_MULTIPLIER_HPP

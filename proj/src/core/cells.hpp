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

// Bit-level arithmetic cells: half/full adders and 4-2 compressors.

#ifndef APPROXCIM_CORE_CELLS_HPP
#define APPROXCIM_CORE_CELLS_HPP

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace approxcim {

using Bit = std::uint8_t;

struct AdderBits {
  Bit sum = 0;
  Bit carry = 0;

  friend bool operator==(const AdderBits&, const AdderBits&) = default;
};

struct Compressor42Bits {
  Bit sum = 0;
  Bit carry = 0;
  Bit cout = 0;

  friend bool operator==(const Compressor42Bits&, const Compressor42Bits&) = default;
};

constexpr AdderBits half_adder(Bit a, Bit b) {
  return {static_cast<Bit>(a ^ b), static_cast<Bit>(a & b)};
}

constexpr AdderBits full_adder(Bit a, Bit b, Bit cin) {
  const Bit p = a ^ b;
  return {static_cast<Bit>(p ^ cin), static_cast<Bit>((a & b) | (p & cin))};
}

/// Exact 4-2 compressor built from two chained full adders. The first adder
/// sees only x1..x3, so cout never depends on cin.
constexpr Compressor42Bits exact_compressor42(Bit x1, Bit x2, Bit x3, Bit x4,
                                              Bit cin) {
  const AdderBits upper = full_adder(x1, x2, x3);
  const AdderBits lower = full_adder(upper.sum, x4, cin);
  return {lower.sum, lower.carry, upper.carry};
}

enum class CompressorKind { kExact, kApproximate };

/// A 4-input compressor description. Approximate specs carry a full truth
/// table indexed by the pattern x1x2x3x4 read as a binary number (x1 is the
/// most significant bit).
class CompressorSpec {
 public:
  static CompressorSpec exact();
  static CompressorSpec approximate(std::string name,
                                    const std::array<AdderBits, 16>& table);

  const std::string& name() const { return name_; }
  CompressorKind kind() const { return kind_; }
  bool is_exact() const { return kind_ == CompressorKind::kExact; }

  // Throws for exact specs.
  const std::array<AdderBits, 16>& table() const;
  AdderBits lookup(unsigned pattern) const;

  /// |popcount(pattern) - (sum + 2*carry)|
  unsigned error_distance(unsigned pattern) const;
  unsigned max_error_distance() const;
  unsigned erroneous_patterns() const;

  friend bool operator==(const CompressorSpec&, const CompressorSpec&) = default;

 private:
  CompressorSpec() = default;

  std::string name_;
  CompressorKind kind_ = CompressorKind::kExact;
  std::array<AdderBits, 16> table_{};
};

AdderBits approx_compressor42(const CompressorSpec& spec, Bit x1, Bit x2,
                              Bit x3, Bit x4);

/// Parses the 16-line "x1x2x3x4 sum carry" table format. Lines starting with
/// '#' (and trailing '# ...' comments) are ignored; patterns must appear in
/// ascending binary order. Errors name the offending line.
CompressorSpec load_compressor_spec(std::string_view text, std::string name);

/// Inverse of load_compressor_spec (without comments).
std::string serialize_compressor_spec(const CompressorSpec& spec);

/// Looks up a shipped table by name ("reference", "exact-nocarry"). Throws
/// kConfig for unknown names.
CompressorSpec builtin_compressor(std::string_view name);
bool is_builtin_compressor(std::string_view name);

/// Resolves a name to a builtin table, or otherwise reads it as a table file.
CompressorSpec resolve_compressor(const std::string& name_or_path);

}  // namespace approxcim

#endif  // APPROXCIM_CORE_CELLS_HPP

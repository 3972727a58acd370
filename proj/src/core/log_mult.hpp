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

// Logarithmic multipliers.
//
// An operand N >= 1 is written N = 2^k + Q with 0 <= Q < 2^k. Then
//
//   A*B = 2^(k1+k2) + Q1*2^k2 + Q2*2^k1 + Q1*Q2
//
// Mitchell's multiplier drops the cross term Q1*Q2. The compensated variant
// estimates it as round(Qlarger) * Qsmaller, where round() snaps the larger
// residue to a neighbouring power of two so the product is a single shift.
// The estimate is always below 2^(k1+k2), so it is merged with the leading
// term by a bitwise OR instead of an adder.

#ifndef APPROXCIM_CORE_LOG_MULT_HPP
#define APPROXCIM_CORE_LOG_MULT_HPP

#include <cstdint>

#include "core/multiplier.hpp"
#include "core/netlist.hpp"

namespace approxcim {

struct LogOperand {
  std::uint64_t value = 0;
  bool zero = true;
  unsigned k = 0;             // leading-one position, valid when !zero
  std::uint64_t residue = 0;  // value - 2^k
};

LogOperand decompose(std::uint64_t value);

/// floor(log2(x)); throws kInvalidArgument for x == 0.
unsigned leading_one_position(std::uint64_t x);

std::uint64_t mitchell_multiply(std::uint64_t a, std::uint64_t b);

/// Nearest power of two, ties up: with m the leading-one position of q,
/// returns 2^(m+1) when the bit below the leading one is set, else 2^m.
/// round_residue(0) == 0.
std::uint64_t round_residue(std::uint64_t q);

enum class RoundedResidue { kNone, kFirst, kSecond };

struct CompensationTrace {
  unsigned k1 = 0;
  unsigned k2 = 0;
  std::uint64_t q1 = 0;
  std::uint64_t q2 = 0;
  RoundedResidue chosen = RoundedResidue::kNone;
  std::uint64_t rounded_to = 0;  // power of two (or 0)
  std::uint64_t comp = 0;        // rounded_to * smaller residue
};

struct CompensatedProduct {
  std::uint64_t product = 0;
  CompensationTrace trace;
};

/// Ties (q1 == q2) round q1.
CompensatedProduct compensated_log_multiply(std::uint64_t a, std::uint64_t b);

/// Largest rounding error for a residue with leading one at k: 2^(k-1).
/// Requires 1 <= k <= width-2.
std::uint64_t rounding_error_bound(unsigned k, unsigned width);

enum class RoundingChoice { kRoundSmaller, kRoundLarger };

/// Worst-case error of the compensated product for n-bit operands:
/// 4^(n-2) - 2^(n-3) when the smaller residue is rounded, 3*4^(n-3) when
/// the larger one is. Requires 3 <= n <= 32.
std::uint64_t wce_bound(unsigned n, RoundingChoice choice);

/// Gate-level datapath; gates are grouped per functional block (zdet, lod_a,
/// lod_b, enc_a, enc_b, lor_a, lor_b, adder1, dec, bsh_a, bsh_b, adder2 and,
/// with compensation, comp, round, cshift, ormerge; finally adder3).
Netlist build_log_multiplier_netlist(const MultiplierConfig& cfg);

}  // namespace approxcim

#endif  // APPROXCIM_CORE_LOG_MULT_HPP

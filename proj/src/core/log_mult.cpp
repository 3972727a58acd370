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

#include "core/log_mult.hpp"

#include <bit>
#include <vector>

#include "core/error.hpp"

namespace approxcim {

LogOperand decompose(std::uint64_t value) {
  LogOperand op;
  op.value = value;
  op.zero = value == 0;
  if (!op.zero) {
    op.k = leading_one_position(value);
    op.residue = value - (std::uint64_t{1} << op.k);
  }
  return op;
}

unsigned leading_one_position(std::uint64_t x) {
  if (x == 0) {
    fail(ErrorCode::kInvalidArgument, "leading_one_position of zero");
  }
  return static_cast<unsigned>(std::bit_width(x) - 1);
}

std::uint64_t mitchell_multiply(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  const LogOperand x = decompose(a);
  const LogOperand y = decompose(b);
  return (std::uint64_t{1} << (x.k + y.k)) + (x.residue << y.k) +
         (y.residue << x.k);
}

std::uint64_t round_residue(std::uint64_t q) {
  if (q == 0) return 0;
  const unsigned m = leading_one_position(q);
  if (m == 0) return 1;
  const bool up = (q >> (m - 1)) & 1u;
  return std::uint64_t{1} << (up ? m + 1 : m);
}

CompensatedProduct compensated_log_multiply(std::uint64_t a, std::uint64_t b) {
  CompensatedProduct result;
  if (a == 0 || b == 0) return result;
  const LogOperand x = decompose(a);
  const LogOperand y = decompose(b);
  CompensationTrace& t = result.trace;
  t.k1 = x.k;
  t.k2 = y.k;
  t.q1 = x.residue;
  t.q2 = y.residue;

  const bool first = t.q1 >= t.q2;
  const std::uint64_t larger = first ? t.q1 : t.q2;
  const std::uint64_t smaller = first ? t.q2 : t.q1;
  if (larger != 0) {
    t.chosen = first ? RoundedResidue::kFirst : RoundedResidue::kSecond;
    t.rounded_to = round_residue(larger);
    t.comp = smaller << std::countr_zero(t.rounded_to);
  }
  const std::uint64_t leading = std::uint64_t{1} << (t.k1 + t.k2);
  result.product = (leading | t.comp) + (t.q1 << t.k2) + (t.q2 << t.k1);
  return result;
}

std::uint64_t rounding_error_bound(unsigned k, unsigned width) {
  if (k < 1 || width < 3 || k > width - 2) {
    fail(ErrorCode::kInvalidArgument,
         "rounding_error_bound: k must be in [1, width-2]");
  }
  return std::uint64_t{1} << (k - 1);
}

std::uint64_t wce_bound(unsigned n, RoundingChoice choice) {
  if (n < 3 || n > 32) {
    fail(ErrorCode::kInvalidArgument, "wce_bound: n must be in [3, 32]");
  }
  if (choice == RoundingChoice::kRoundSmaller) {
    return (std::uint64_t{1} << (2 * (n - 2))) - (std::uint64_t{1} << (n - 3));
  }
  return 3 * (std::uint64_t{1} << (2 * (n - 3)));
}

namespace {

using Bus = std::vector<Signal>;

Signal or_reduce(Netlist& nl, const Bus& bits) {
  Signal acc = nl.constant(false);
  for (Signal s : bits) acc = nl.or2(acc, s);
  return acc;
}

// One-hot of the most significant set bit (all zero for x == 0).
Bus leading_one_detect(Netlist& nl, const Bus& x) {
  Bus onehot(x.size());
  Signal above = nl.constant(false);
  for (std::size_t i = x.size(); i-- > 0;) {
    onehot[i] = nl.and2(x[i], nl.not1(above));
    above = nl.or2(above, x[i]);
  }
  return onehot;
}

Bus encode_onehot(Netlist& nl, const Bus& onehot, unsigned bits) {
  Bus code(bits, nl.constant(false));
  for (std::size_t i = 0; i < onehot.size(); ++i) {
    for (unsigned b = 0; b < bits; ++b) {
      if ((i >> b) & 1u) code[b] = nl.or2(code[b], onehot[i]);
    }
  }
  return code;
}

// Ripple-carry sum truncated to `width` bits.
Bus ripple_add(Netlist& nl, Bus x, Bus y, std::size_t width) {
  x.resize(width, nl.constant(false));
  y.resize(width, nl.constant(false));
  Bus sum(width);
  Signal carry = nl.constant(false);
  for (std::size_t i = 0; i < width; ++i) {
    const Signal p = nl.xor2(x[i], y[i]);
    sum[i] = nl.xor2(p, carry);
    if (i + 1 < width) carry = nl.or2(nl.and2(x[i], y[i]), nl.and2(p, carry));
  }
  return sum;
}

// Logarithmic left shifter; result truncated to `width` bits.
Bus barrel_shift_left(Netlist& nl, Bus x, const Bus& amount, std::size_t width) {
  x.resize(width, nl.constant(false));
  for (std::size_t stage = 0; stage < amount.size(); ++stage) {
    const std::size_t step = std::size_t{1} << stage;
    Bus next(width);
    for (std::size_t j = 0; j < width; ++j) {
      const Signal shifted = j >= step ? x[j - step] : nl.constant(false);
      next[j] = nl.mux2(amount[stage], x[j], shifted);
    }
    x = std::move(next);
  }
  return x;
}

// Full decode of `code`, each line additionally gated by `enable`.
Bus decode(Netlist& nl, const Bus& code, Signal enable, std::size_t lines) {
  Bus rows{enable};
  for (std::size_t b = code.size(); b-- > 0;) {
    const Signal hi = code[b];
    const Signal lo = nl.not1(hi);
    Bus next(rows.size() * 2);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      next[2 * r] = nl.and2(rows[r], lo);
      next[2 * r + 1] = nl.and2(rows[r], hi);
    }
    rows = std::move(next);
  }
  rows.resize(lines, nl.constant(false));
  return rows;
}

// x >= y, unsigned, LSB-first ripple.
Signal greater_or_equal(Netlist& nl, const Bus& x, const Bus& y) {
  Signal ge = nl.constant(true);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Signal differ = nl.xor2(x[i], y[i]);
    ge = nl.or2(nl.and2(differ, x[i]), nl.and2(nl.not1(differ), ge));
  }
  return ge;
}

}  // namespace

Netlist build_log_multiplier_netlist(const MultiplierConfig& cfg) {
  cfg.validate();
  if (cfg.family != Family::kLogarithmic) {
    fail(ErrorCode::kInvalidArgument,
         "build_log_multiplier_netlist needs a logarithmic config");
  }
  const unsigned n = cfg.width;
  const std::size_t out_width = 2 * n;
  const unsigned kbits = static_cast<unsigned>(std::bit_width(n - 1));

  Netlist nl(n);
  Bus a(n), b(n);
  for (unsigned i = 0; i < n; ++i) {
    a[i] = nl.a(i);
    b[i] = nl.b(i);
  }

  nl.set_group("zdet");
  const Signal nz_a = or_reduce(nl, a);
  const Signal nz_b = or_reduce(nl, b);
  const Signal nz = nl.and2(nz_a, nz_b);

  nl.set_group("lod_a");
  const Bus h_a = leading_one_detect(nl, a);
  nl.set_group("lod_b");
  const Bus h_b = leading_one_detect(nl, b);
  nl.set_group("enc_a");
  const Bus k_a = encode_onehot(nl, h_a, kbits);
  nl.set_group("enc_b");
  const Bus k_b = encode_onehot(nl, h_b, kbits);

  // Residues are forced to zero when the other operand is zero so every
  // term of the product vanishes.
  nl.set_group("lor_a");
  Bus q_a(n);
  for (unsigned i = 0; i < n; ++i) q_a[i] = nl.and2(nl.xor2(a[i], h_a[i]), nz_b);
  nl.set_group("lor_b");
  Bus q_b(n);
  for (unsigned i = 0; i < n; ++i) q_b[i] = nl.and2(nl.xor2(b[i], h_b[i]), nz_a);

  nl.set_group("adder1");
  const Bus k_sum = ripple_add(nl, k_a, k_b, kbits + 1);
  nl.set_group("dec");
  const Bus leading = decode(nl, k_sum, nz, out_width);

  nl.set_group("bsh_a");
  const Bus term_a = barrel_shift_left(nl, q_a, k_b, out_width);
  nl.set_group("bsh_b");
  const Bus term_b = barrel_shift_left(nl, q_b, k_a, out_width);
  nl.set_group("adder2");
  const Bus approx_part = ripple_add(nl, term_a, term_b, out_width);

  Bus merged = leading;
  if (cfg.compensated()) {
    nl.set_group("comp");
    const Signal first = greater_or_equal(nl, q_a, q_b);
    Bus larger(n), smaller(n);
    for (unsigned i = 0; i < n; ++i) {
      larger[i] = nl.mux2(first, q_b[i], q_a[i]);
      smaller[i] = nl.mux2(first, q_a[i], q_b[i]);
    }

    nl.set_group("round");
    const Bus h_l = leading_one_detect(nl, larger);
    Signal up = nl.constant(false);
    for (unsigned i = 1; i < n; ++i) up = nl.or2(up, nl.and2(h_l[i], larger[i - 1]));
    const Signal down = nl.not1(up);
    Bus rounded(n);
    for (unsigned i = 0; i < n; ++i) {
      const Signal stay = nl.and2(h_l[i], down);
      rounded[i] = i == 0 ? stay : nl.or2(stay, nl.and2(h_l[i - 1], up));
    }
    const Bus exponent = encode_onehot(nl, rounded, kbits);

    nl.set_group("cshift");
    const Bus comp = barrel_shift_left(nl, smaller, exponent, out_width);

    nl.set_group("ormerge");
    for (std::size_t i = 0; i < out_width; ++i) merged[i] = nl.or2(leading[i], comp[i]);
  }

  nl.set_group("adder3");
  Bus product = ripple_add(nl, merged, approx_part, out_width);

  nl.set_group("");
  nl.set_outputs(std::move(product));
  Netlist pruned = prune_dead(nl);
  pruned.validate();
  return pruned;
}

}  // namespace approxcim

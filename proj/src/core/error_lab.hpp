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

#ifndef APPROXCIM_CORE_ERROR_LAB_HPP
#define APPROXCIM_CORE_ERROR_LAB_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string>

#include "core/multiplier.hpp"

namespace approxcim {

struct ErrorReport {
  std::uint64_t samples = 0;
  double med = 0.0;         // mean |exact - approx|
  double nmed = 0.0;        // med / (2^n - 1)^2
  double mred = 0.0;        // mean |exact - approx| / exact, exact != 0
  std::uint64_t wce = 0;    // max |exact - approx|
  double error_rate = 0.0;  // fraction of mismatching pairs
};

/// Batch form of a device under test: out[i] = dut(a[i], b[i]).
using BatchMultiply = std::function<void(std::span<const std::uint64_t>,
                                         std::span<const std::uint64_t>,
                                         std::span<std::uint64_t>)>;

struct SweepMode {
  bool exhaustive = true;
  std::uint64_t count = 0;  // sampled mode
  std::uint64_t seed = 0;

  static SweepMode all() { return {}; }
  static SweepMode sampled(std::uint64_t count, std::uint64_t seed) {
    return {false, count, seed};
  }
};

/// Compares `dut` against the wide-integer product over n-bit operands.
/// Exhaustive sweeps are limited to n <= 10.
ErrorReport sweep_errors(const BatchMultiply& dut, unsigned width,
                         const SweepMode& mode);
ErrorReport sweep_errors(const Multiplier& dut, const SweepMode& mode);

/// Accumulates metrics from explicit (exact, approx) pairs.
class ErrorAccumulator {
 public:
  explicit ErrorAccumulator(unsigned width) : width_(width) {}
  void add(std::uint64_t exact, std::uint64_t approx);
  ErrorReport report() const;

 private:
  unsigned width_;
  std::uint64_t samples_ = 0;
  std::uint64_t mismatches_ = 0;
  std::uint64_t wce_ = 0;
  std::uint64_t nonzero_ = 0;
  long double distance_sum_ = 0;
  long double relative_sum_ = 0;
};

std::string error_report_csv_header();
/// One CSV row: family,width,samples,med,nmed,mred,wce,error_rate
std::string error_report_csv_row(const std::string& family, unsigned width,
                                 const ErrorReport& report);
std::string error_report_json(const std::string& family, unsigned width,
                              const ErrorReport& report);

}  // namespace approxcim

#endif  // APPROXCIM_CORE_ERROR_LAB_HPP

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

#include "core/error_lab.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <vector>

#include "core/error.hpp"
#include "json.hpp"

namespace approxcim {

void ErrorAccumulator::add(std::uint64_t exact, std::uint64_t approx) {
  const std::uint64_t distance = exact > approx ? exact - approx : approx - exact;
  ++samples_;
  if (distance != 0) ++mismatches_;
  wce_ = std::max(wce_, distance);
  distance_sum_ += static_cast<long double>(distance);
  if (exact != 0) {
    ++nonzero_;
    relative_sum_ += static_cast<long double>(distance) / static_cast<long double>(exact);
  }
}

ErrorReport ErrorAccumulator::report() const {
  ErrorReport r;
  r.samples = samples_;
  if (samples_ == 0) return r;
  const long double max_product =
      static_cast<long double>((std::uint64_t{1} << width_) - 1) *
      static_cast<long double>((std::uint64_t{1} << width_) - 1);
  const long double med = distance_sum_ / static_cast<long double>(samples_);
  r.med = static_cast<double>(med);
  r.nmed = static_cast<double>(med / max_product);
  r.mred = nonzero_ ? static_cast<double>(relative_sum_ / static_cast<long double>(nonzero_))
                    : 0.0;
  r.wce = wce_;
  r.error_rate = static_cast<double>(mismatches_) / static_cast<double>(samples_);
  return r;
}

namespace {

constexpr std::size_t kChunk = 1 << 14;

void run_chunk(const BatchMultiply& dut, std::vector<std::uint64_t>& a,
               std::vector<std::uint64_t>& b, std::vector<std::uint64_t>& out,
               ErrorAccumulator& acc) {
  out.resize(a.size());
  dut(a, b, out);
  for (std::size_t i = 0; i < a.size(); ++i) acc.add(a[i] * b[i], out[i]);
  a.clear();
  b.clear();
}

}  // namespace

ErrorReport sweep_errors(const BatchMultiply& dut, unsigned width,
                         const SweepMode& mode) {
  if (width < 1 || width > 32) {
    fail(ErrorCode::kInvalidArgument, "sweep width must be in [1, 32]");
  }
  if (mode.exhaustive && width > 10) {
    fail(ErrorCode::kInvalidArgument,
         "exhaustive sweeps are limited to width <= 10; use sampled mode");
  }
  ErrorAccumulator acc(width);
  std::vector<std::uint64_t> a, b, out;
  a.reserve(kChunk);
  b.reserve(kChunk);
  const std::uint64_t mask = (std::uint64_t{1} << width) - 1;

  if (mode.exhaustive) {
    for (std::uint64_t x = 0; x <= mask; ++x) {
      for (std::uint64_t y = 0; y <= mask; ++y) {
        a.push_back(x);
        b.push_back(y);
        if (a.size() == kChunk) run_chunk(dut, a, b, out, acc);
      }
    }
  } else {
    std::mt19937_64 rng(mode.seed);
    for (std::uint64_t i = 0; i < mode.count; ++i) {
      a.push_back(rng() & mask);
      b.push_back(rng() & mask);
      if (a.size() == kChunk) run_chunk(dut, a, b, out, acc);
    }
  }
  if (!a.empty()) run_chunk(dut, a, b, out, acc);
  return acc.report();
}

ErrorReport sweep_errors(const Multiplier& dut, const SweepMode& mode) {
  return sweep_errors(
      [&dut](auto a, auto b, auto out) { dut.multiply_batch(a, b, out); },
      dut.width(), mode);
}

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

std::string error_report_csv_header() {
  return "family,width,samples,med,nmed,mred,wce,error_rate\n";
}

std::string error_report_csv_row(const std::string& family, unsigned width,
                                 const ErrorReport& r) {
  return family + "," + std::to_string(width) + "," + std::to_string(r.samples) +
         "," + format_double(r.med) + "," + format_double(r.nmed) + "," +
         format_double(r.mred) + "," + std::to_string(r.wce) + "," +
         format_double(r.error_rate) + "\n";
}

std::string error_report_json(const std::string& family, unsigned width,
                              const ErrorReport& r) {
  nlohmann::ordered_json j;
  j["family"] = family;
  j["width"] = width;
  j["samples"] = r.samples;
  j["med"] = r.med;
  j["nmed"] = r.nmed;
  j["mred"] = r.mred;
  j["wce"] = r.wce;
  j["error_rate"] = r.error_rate;
  return j.dump(2) + "\n";
}

}  // namespace approxcim

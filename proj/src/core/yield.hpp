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

// Failure-probability estimation for cells with Gaussian parameter
// variation: plain Monte Carlo and mean-shifted importance sampling.
//
// Both estimators draw samples in batches of 1000. Batch i of a run uses its
// own generator seeded from (seed, stream, i), so a batch can be produced by
// any worker without changing the merged estimate.

#ifndef APPROXCIM_CORE_YIELD_HPP
#define APPROXCIM_CORE_YIELD_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace approxcim {

class CellModel {
 public:
  virtual ~CellModel() = default;
  virtual unsigned dimension() const = 0;
  /// Fails iff margin < 0.
  virtual double margin(std::span<const double> v) const = 0;
  virtual std::string name() const = 0;
  /// Closed-form failure probability when known.
  virtual std::optional<double> exact_failure_probability() const { return {}; }

  bool fails(std::span<const double> v) const { return margin(v) < 0.0; }
};

/// g(v) = beta - v[0]; Pf = Phi(-beta).
class LinearLimitState final : public CellModel {
 public:
  explicit LinearLimitState(double beta, unsigned dimension = 1);
  unsigned dimension() const override { return dimension_; }
  double margin(std::span<const double> v) const override { return beta_ - v[0]; }
  std::string name() const override { return "linear"; }
  std::optional<double> exact_failure_probability() const override;

 private:
  double beta_;
  unsigned dimension_;
};

/// Six-parameter stand-in for a 6T cell's read margin, one threshold-voltage
/// deviation per transistor: v = (pull-up L, pull-up R, pull-down L,
/// pull-down R, access L, access R) in units of sigma.
///
///   s = (0.6 (pdL - pdR) + 0.5 (axL - axR) - 0.3 (puL - puR)) / sqrt(1.4)
///   t = (puL + puR - pdL - pdR) / 2
///   margin = beta - s - 0.1 s^2 + 0.05 t^2
///
/// s has unit variance, so beta controls the rarity of failures.
class SnmSurrogate final : public CellModel {
 public:
  explicit SnmSurrogate(double beta);
  unsigned dimension() const override { return 6; }
  double margin(std::span<const double> v) const override;
  std::string name() const override { return "snm-surrogate"; }

 private:
  double beta_;
};

double normal_cdf(double x);

enum class YieldMethod { kMonteCarlo, kMnis };
std::string yield_method_name(YieldMethod method);

struct YieldParams {
  double target_fom = 0.1;
  std::uint64_t max_sims = 1'000'000;
  std::uint64_t seed = 1;
  std::uint64_t presamples = 1000;  // MNIS phase 1
  double sigma_s = 3.0;             // MNIS phase-1 spread
};

struct YieldResult {
  YieldMethod method = YieldMethod::kMonteCarlo;
  double pf = 0.0;
  double std_dev = 0.0;
  double fom = 0.0;  // +infinity when pf == 0
  std::uint64_t sims = 0;
  std::uint64_t seed = 0;
  bool converged = false;
  std::vector<double> shift;  // MNIS mean shift
};

inline constexpr std::uint64_t kYieldBatch = 1000;

/// Plain Monte Carlo; stops at the first batch boundary with fom <= target.
YieldResult mc_yield(const CellModel& model, const YieldParams& params);

/// Phase 1 finds the minimum-norm failing point of a widened normal; phase 2
/// samples around it and reweights by the likelihood ratio. Simulation count
/// includes the presamples. Throws kNotConverged if phase 1 finds no failure.
YieldResult mnis_yield(const CellModel& model, const YieldParams& params);

/// Likelihood ratio N(x; 0, I) / N(x; shift, I) = exp(-shift.x + |shift|^2/2).
double mnis_weight(std::span<const double> shift, std::span<const double> x);

/// Minimum-norm failing point among `presamples` draws of N(0, sigma_s^2 I);
/// ties keep the first. Empty when none fail.
std::vector<double> find_mean_shift(const CellModel& model, std::uint64_t presamples,
                                    double sigma_s, std::uint64_t seed);

struct FixedEstimate {
  double pf = 0.0;
  double std_dev = 0.0;
};

/// Fixed-size estimators sharing the sample streams of mc_yield/mnis_yield.
/// With a zero shift the importance estimate equals the MC estimate.
FixedEstimate mc_estimate(const CellModel& model, std::uint64_t samples,
                          std::uint64_t seed);
FixedEstimate importance_estimate(const CellModel& model,
                                  std::span<const double> shift,
                                  std::uint64_t samples, std::uint64_t seed);

struct MethodRow {
  YieldMethod method;
  double pf = 0.0;
  double fom = 0.0;
  double sims = 0.0;
};

struct MethodComparison {
  MethodRow mc;
  MethodRow mnis;
  double speedup = 0.0;  // median MC sims / median MNIS sims
};

/// Medians over the seed list.
MethodComparison compare_methods(const CellModel& model, const YieldParams& params,
                                 std::span<const std::uint64_t> seeds);

std::string yield_result_csv_header();
std::string yield_result_csv_row(const std::string& model, const YieldResult& r);
/// Pf, FoM, #Sim, Speedup per method.
std::string comparison_csv(const MethodComparison& c);

std::unique_ptr<CellModel> make_cell_model(const std::string& name, double beta,
                                           unsigned dimension);

}  // namespace approxcim

#endif  // APPROXCIM_CORE_YIELD_HPP

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

#include "core/yield.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "core/error.hpp"

namespace approxcim {

LinearLimitState::LinearLimitState(double beta, unsigned dimension)
    : beta_(beta), dimension_(dimension) {
  if (dimension == 0) fail(ErrorCode::kInvalidArgument, "model dimension must be >= 1");
}

std::optional<double> LinearLimitState::exact_failure_probability() const {
  return normal_cdf(-beta_);
}

SnmSurrogate::SnmSurrogate(double beta) : beta_(beta) {}

double SnmSurrogate::margin(std::span<const double> v) const {
  const double s =
      (0.6 * (v[2] - v[3]) + 0.5 * (v[4] - v[5]) - 0.3 * (v[0] - v[1])) /
      std::sqrt(1.4);
  const double t = (v[0] + v[1] - v[2] - v[3]) / 2.0;
  return beta_ - s - 0.1 * s * s + 0.05 * t * t;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

std::string yield_method_name(YieldMethod method) {
  return method == YieldMethod::kMonteCarlo ? "mc" : "mnis";
}

namespace {

constexpr std::uint64_t kStreamSampling = 0;
constexpr std::uint64_t kStreamPresample = 1;

std::mt19937_64 batch_rng(std::uint64_t seed, std::uint64_t stream,
                          std::uint64_t batch) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(batch),
                    static_cast<std::uint32_t>(batch >> 32)};
  return std::mt19937_64(seq);
}

// Calls visit(x) for `count` standard-normal vectors of batch `batch`.
template <typename Visit>
void draw_batch(unsigned dim, std::uint64_t seed, std::uint64_t stream,
                std::uint64_t batch, std::uint64_t count, Visit visit) {
  std::mt19937_64 rng = batch_rng(seed, stream, batch);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> x(dim);
  for (std::uint64_t i = 0; i < count; ++i) {
    for (double& xi : x) xi = normal(rng);
    visit(std::span<const double>(x));
  }
}

void check_params(const YieldParams& p) {
  if (!(p.target_fom > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "target FoM must be positive");
  }
  if (p.max_sims == 0) fail(ErrorCode::kInvalidArgument, "max_sims must be >= 1");
}

// Running sums of weighted failure indicators.
struct Moments {
  std::uint64_t n = 0;
  long double sum = 0;
  long double sum_sq = 0;

  void add(double value) {
    ++n;
    sum += value;
    sum_sq += static_cast<long double>(value) * value;
  }
  double mean() const { return n ? static_cast<double>(sum / n) : 0.0; }
  double std_of_mean() const {
    if (n < 2) return 0.0;
    const long double m = sum / n;
    const long double var = std::max<long double>(0, (sum_sq - n * m * m) / (n - 1));
    return static_cast<double>(std::sqrt(var / n));
  }
};

double fom_of(double pf, double std_dev) {
  return pf > 0.0 ? std_dev / pf : std::numeric_limits<double>::infinity();
}

}  // namespace

YieldResult mc_yield(const CellModel& model, const YieldParams& params) {
  check_params(params);
  YieldResult r;
  r.method = YieldMethod::kMonteCarlo;
  r.seed = params.seed;
  std::uint64_t fails = 0;
  for (std::uint64_t batch = 0; r.sims < params.max_sims; ++batch) {
    const std::uint64_t count = std::min(kYieldBatch, params.max_sims - r.sims);
    draw_batch(model.dimension(), params.seed, kStreamSampling, batch, count,
               [&](std::span<const double> x) { fails += model.fails(x); });
    r.sims += count;
    r.pf = static_cast<double>(fails) / static_cast<double>(r.sims);
    r.std_dev = std::sqrt(r.pf * (1.0 - r.pf) / static_cast<double>(r.sims));
    r.fom = fom_of(r.pf, r.std_dev);
    if (fails > 0 && r.fom <= params.target_fom) {
      r.converged = true;
      break;
    }
  }
  return r;
}

double mnis_weight(std::span<const double> shift, std::span<const double> x) {
  double dot = 0.0, norm_sq = 0.0;
  for (std::size_t i = 0; i < shift.size(); ++i) {
    dot += shift[i] * x[i];
    norm_sq += shift[i] * shift[i];
  }
  return std::exp(-dot + 0.5 * norm_sq);
}

std::vector<double> find_mean_shift(const CellModel& model, std::uint64_t presamples,
                                    double sigma_s, std::uint64_t seed) {
  std::vector<double> best;
  double best_norm = std::numeric_limits<double>::infinity();
  std::vector<double> scaled(model.dimension());
  for (std::uint64_t batch = 0, done = 0; done < presamples; ++batch) {
    const std::uint64_t count = std::min(kYieldBatch, presamples - done);
    draw_batch(model.dimension(), seed, kStreamPresample, batch, count,
               [&](std::span<const double> z) {
                 double norm = 0.0;
                 for (std::size_t i = 0; i < z.size(); ++i) {
                   scaled[i] = sigma_s * z[i];
                   norm += scaled[i] * scaled[i];
                 }
                 if (norm < best_norm && model.fails(scaled)) {
                   best_norm = norm;
                   best = scaled;
                 }
               });
    done += count;
  }
  return best;
}

namespace {

void importance_batch(const CellModel& model, std::span<const double> shift,
                      std::uint64_t seed, std::uint64_t batch, std::uint64_t count,
                      Moments& moments) {
  std::vector<double> x(shift.size());
  draw_batch(model.dimension(), seed, kStreamSampling, batch, count,
             [&](std::span<const double> z) {
               for (std::size_t i = 0; i < z.size(); ++i) x[i] = shift[i] + z[i];
               moments.add(model.fails(x) ? mnis_weight(shift, x) : 0.0);
             });
}

}  // namespace

YieldResult mnis_yield(const CellModel& model, const YieldParams& params) {
  check_params(params);
  if (params.presamples < 100) {
    fail(ErrorCode::kInvalidArgument, "MNIS needs at least 100 presamples");
  }
  if (params.presamples >= params.max_sims) {
    fail(ErrorCode::kInvalidArgument, "max_sims must exceed the presample count");
  }
  YieldResult r;
  r.method = YieldMethod::kMnis;
  r.seed = params.seed;
  r.shift = find_mean_shift(model, params.presamples, params.sigma_s, params.seed);
  if (r.shift.empty()) {
    fail(ErrorCode::kNotConverged,
         "MNIS phase 1 found no failing sample; increase --sigma-s or --presamples");
  }
  r.sims = params.presamples;
  Moments moments;
  for (std::uint64_t batch = 0; r.sims < params.max_sims; ++batch) {
    const std::uint64_t count = std::min(kYieldBatch, params.max_sims - r.sims);
    importance_batch(model, r.shift, params.seed, batch, count, moments);
    r.sims += count;
    r.pf = moments.mean();
    r.std_dev = moments.std_of_mean();
    r.fom = fom_of(r.pf, r.std_dev);
    if (r.pf > 0.0 && r.fom <= params.target_fom) {
      r.converged = true;
      break;
    }
  }
  return r;
}

FixedEstimate mc_estimate(const CellModel& model, std::uint64_t samples,
                          std::uint64_t seed) {
  std::uint64_t fails = 0;
  for (std::uint64_t batch = 0, done = 0; done < samples; ++batch) {
    const std::uint64_t count = std::min(kYieldBatch, samples - done);
    draw_batch(model.dimension(), seed, kStreamSampling, batch, count,
               [&](std::span<const double> x) { fails += model.fails(x); });
    done += count;
  }
  FixedEstimate e;
  if (samples == 0) return e;
  e.pf = static_cast<double>(fails) / static_cast<double>(samples);
  e.std_dev = std::sqrt(e.pf * (1.0 - e.pf) / static_cast<double>(samples));
  return e;
}

FixedEstimate importance_estimate(const CellModel& model,
                                  std::span<const double> shift,
                                  std::uint64_t samples, std::uint64_t seed) {
  if (shift.size() != model.dimension()) {
    fail(ErrorCode::kInvalidArgument, "shift dimension does not match the model");
  }
  Moments moments;
  for (std::uint64_t batch = 0, done = 0; done < samples; ++batch) {
    const std::uint64_t count = std::min(kYieldBatch, samples - done);
    importance_batch(model, shift, seed, batch, count, moments);
    done += count;
  }
  return {moments.mean(), moments.std_of_mean()};
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

MethodRow summarize(YieldMethod method, const std::vector<YieldResult>& runs) {
  std::vector<double> pf, fom, sims;
  for (const YieldResult& r : runs) {
    pf.push_back(r.pf);
    fom.push_back(r.fom);
    sims.push_back(static_cast<double>(r.sims));
  }
  return {method, median(pf), median(fom), median(sims)};
}

std::string g9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

MethodComparison compare_methods(const CellModel& model, const YieldParams& params,
                                 std::span<const std::uint64_t> seeds) {
  if (seeds.empty()) fail(ErrorCode::kInvalidArgument, "compare_methods needs seeds");
  std::vector<YieldResult> mc, mnis;
  for (std::uint64_t seed : seeds) {
    YieldParams p = params;
    p.seed = seed;
    mc.push_back(mc_yield(model, p));
    mnis.push_back(mnis_yield(model, p));
  }
  MethodComparison c;
  c.mc = summarize(YieldMethod::kMonteCarlo, mc);
  c.mnis = summarize(YieldMethod::kMnis, mnis);
  c.speedup = c.mnis.sims > 0 ? c.mc.sims / c.mnis.sims : 0.0;
  return c;
}

std::string yield_result_csv_header() {
  return "model,method,pf,fom,sims,seed,converged\n";
}

std::string yield_result_csv_row(const std::string& model, const YieldResult& r) {
  return model + "," + yield_method_name(r.method) + "," + g9(r.pf) + "," +
         (std::isfinite(r.fom) ? g9(r.fom) : std::string("inf")) + "," +
         std::to_string(r.sims) + "," + std::to_string(r.seed) + "," +
         (r.converged ? "true" : "false") + "\n";
}

std::string comparison_csv(const MethodComparison& c) {
  std::string out = "method,pf,fom,sims,speedup\n";
  out += "mc," + g9(c.mc.pf) + "," + g9(c.mc.fom) + "," + g9(c.mc.sims) + ",1\n";
  out += "mnis," + g9(c.mnis.pf) + "," + g9(c.mnis.fom) + "," + g9(c.mnis.sims) + "," +
         g9(c.speedup) + "\n";
  return out;
}

std::unique_ptr<CellModel> make_cell_model(const std::string& name, double beta,
                                           unsigned dimension) {
  if (name == "linear") return std::make_unique<LinearLimitState>(beta, dimension);
  if (name == "snm-surrogate") return std::make_unique<SnmSurrogate>(beta);
  fail(ErrorCode::kInvalidArgument, "unknown cell model '" + name + "'");
}

}  // namespace approxcim

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

#include <cmath>
#include <string>
#include <vector>

#include "core/yield.hpp"
#include "doctest.h"
#include "support/oracles.hpp"
#include "test_util.hpp"

using namespace approxcim;
using testutil::thrown;

TEST_SUITE("yield") {
  TEST_CASE("normal CDF") {
    for (double x : {-6.0, -4.5, -3.0, -1.0, 0.0, 0.7, 2.5}) {
      CHECK(normal_cdf(x) == doctest::Approx(oracle::phi(x)).epsilon(1e-12));
    }
    CHECK(normal_cdf(-3.0) == doctest::Approx(1.3499e-3).epsilon(1e-4));
    CHECK(*LinearLimitState(3.0).exact_failure_probability() ==
          doctest::Approx(oracle::phi(-3.0)));
  }

  TEST_CASE("binomial standard deviation of the MC estimate") {
    const LinearLimitState model(2.326347874);  // pf close to 0.01
    const FixedEstimate e = mc_estimate(model, 10000, 3);
    CHECK(e.std_dev == doctest::Approx(std::sqrt(e.pf * (1 - e.pf) / 10000)));
    CHECK(std::sqrt(0.01 * 0.99 / 10000) == doctest::Approx(9.95e-4).epsilon(1e-3));
    CHECK(std::sqrt(0.01 * 0.99 / 10000) / 0.01 == doctest::Approx(0.0995).epsilon(1e-3));
  }

  TEST_CASE("MC on a median event converges in one batch") {
    const YieldResult r = mc_yield(LinearLimitState(0.0), YieldParams{});
    CHECK(r.converged);
    CHECK(r.sims == kYieldBatch);
    CHECK(r.pf == doctest::Approx(0.5).epsilon(0.1));
    CHECK(r.fom <= 0.1);
  }

  TEST_CASE("MC at beta 3 is within three standard deviations") {
    const YieldResult r = mc_yield(LinearLimitState(3.0), YieldParams{});
    CHECK(r.converged);
    CHECK(r.fom <= 0.1);
    CHECK(std::fabs(r.pf - oracle::phi(-3.0)) <= 3 * r.std_dev);
    CHECK(r.sims % kYieldBatch == 0);
  }

  TEST_CASE("MC without failures is flagged") {
    YieldParams p;
    p.max_sims = 5000;
    const YieldResult r = mc_yield(LinearLimitState(10.0), p);
    CHECK_FALSE(r.converged);
    CHECK(r.pf == 0.0);
    CHECK(std::isinf(r.fom));
    CHECK(r.sims == 5000);
  }

  TEST_CASE("likelihood-ratio weight") {
    const std::vector<double> s = {3.0, 0.0, 0.0};
    CHECK(mnis_weight(s, s) == doctest::Approx(std::exp(-4.5)));
    CHECK(mnis_weight(s, s) == doctest::Approx(1.11e-2).epsilon(1e-2));
    const std::vector<double> zero(3, 0.0), x = {0.3, -1.2, 2.0};
    CHECK(mnis_weight(zero, x) == 1.0);
  }

  TEST_CASE("a zero shift reduces importance sampling to MC") {
    const LinearLimitState model(1.5, 2);
    const std::vector<double> zero(2, 0.0);
    const FixedEstimate mc = mc_estimate(model, 4000, 11);
    const FixedEstimate is = importance_estimate(model, zero, 4000, 11);
    CHECK(is.pf == mc.pf);
  }

  TEST_CASE("mean shift is a failing point") {
    const LinearLimitState model(3.0, 4);
    const std::vector<double> s = find_mean_shift(model, 1000, 3.0, 5);
    REQUIRE(s.size() == 4);
    CHECK(model.fails(s));
    CHECK(s[0] >= 3.0);
    CHECK(find_mean_shift(LinearLimitState(40.0), 200, 1.0, 5).empty());
  }

  TEST_CASE("MNIS at beta 3") {
    YieldParams p;
    const YieldResult mc = mc_yield(LinearLimitState(3.0), p);
    const YieldResult is = mnis_yield(LinearLimitState(3.0), p);
    CHECK(is.converged);
    CHECK(is.fom <= 0.1);
    CHECK(std::fabs(is.pf - oracle::phi(-3.0)) <= 3 * is.std_dev);
    CHECK(is.sims * 5 <= mc.sims);
    CHECK(is.shift.size() == 1);
  }

  TEST_CASE("MNIS works in higher dimension") {
    const YieldResult r = mnis_yield(LinearLimitState(3.5, 6), YieldParams{});
    CHECK(r.converged);
    CHECK(std::fabs(r.pf - oracle::phi(-3.5)) <= 3 * r.std_dev);
  }

  TEST_CASE("MNIS errors") {
    YieldParams p;
    p.presamples = 200;
    p.sigma_s = 1.0;
    auto t = thrown([&] { mnis_yield(LinearLimitState(40.0), p); });
    REQUIRE(t);
    CHECK(t->code == ErrorCode::kNotConverged);
    p.presamples = 10;
    CHECK(thrown([&] { mnis_yield(LinearLimitState(3.0), p); }));
  }

  TEST_CASE("runs are deterministic per seed") {
    YieldParams p;
    p.seed = 42;
    const YieldResult a = mnis_yield(LinearLimitState(3.0), p);
    const YieldResult b = mnis_yield(LinearLimitState(3.0), p);
    CHECK(a.pf == b.pf);
    CHECK(a.sims == b.sims);
    CHECK(a.shift == b.shift);
    p.seed = 43;
    CHECK(mnis_yield(LinearLimitState(3.0), p).pf != a.pf);
  }

  TEST_CASE("SRAM-cell stand-in model") {
    const SnmSurrogate m(3.0);
    CHECK(m.dimension() == 6);
    const std::vector<double> zero(6, 0.0);
    CHECK(m.margin(zero) == doctest::Approx(3.0));
    const std::vector<double> v = {0.5, -0.2, 1.0, 0.1, -0.4, 0.3};
    const double s = (0.6 * (1.0 - 0.1) + 0.5 * (-0.4 - 0.3) - 0.3 * (0.5 + 0.2)) / std::sqrt(1.4);
    const double t = (0.5 - 0.2 - 1.0 - 0.1) / 2;
    CHECK(m.margin(v) == doctest::Approx(3.0 - s - 0.1 * s * s + 0.05 * t * t));
    YieldParams p;
    const YieldResult r = mnis_yield(SnmSurrogate(4.0), p);
    CHECK(r.converged);
    CHECK(r.pf > 0.0);
  }

  TEST_CASE("method comparison") {
    const std::vector<std::uint64_t> seeds = {1, 2, 3};
    const MethodComparison c = compare_methods(LinearLimitState(3.0), YieldParams{}, seeds);
    CHECK(c.speedup > 1.0);
    CHECK(c.speedup == doctest::Approx(c.mc.sims / c.mnis.sims));
    const std::string csv = comparison_csv(c);
    CHECK(csv.rfind("method,pf,fom,sims,speedup\n", 0) == 0);
    CHECK(testutil::contains(csv, "\nmc,"));
    CHECK(testutil::contains(csv, "\nmnis,"));
  }

  TEST_CASE("result CSV and model factory") {
    CHECK(yield_result_csv_header() == "model,method,pf,fom,sims,seed,converged\n");
    YieldResult r;
    r.method = YieldMethod::kMnis;
    r.pf = 0.5;
    r.fom = 0.1;
    r.sims = 2000;
    r.seed = 7;
    r.converged = true;
    CHECK(yield_result_csv_row("linear", r).rfind("linear,mnis,", 0) == 0);
    CHECK(make_cell_model("linear", 3.0, 2)->dimension() == 2);
    CHECK(make_cell_model("snm-surrogate", 3.0, 1)->dimension() == 6);
    CHECK(thrown([] { make_cell_model("spice", 3.0, 1); }));
  }
}

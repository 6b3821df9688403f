// Copyright 2026 The SARR Authors
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

#include "sarr/bayes.hpp"

#include <cmath>
#include <doctest.h>

#include "sarr/calibration.hpp"

TEST_CASE("posterior at a perfectly powered test is 1/(alpha + 1)") {
  for (double alpha : {0.005, 0.01, 0.05, 0.1}) {
    const auto report = sarr::posterior_h1(1, 0.5, alpha, 1.0);
    CHECK(report.p_h1_given_d == 1.0 / (alpha + 1.0));
  }
}

TEST_CASE("both posterior branches match the direct Bayes quotient") {
  const double prior = 0.3, alpha = 0.05, P = 0.6;
  CHECK(sarr::posterior_h1(1, prior, alpha, P).p_h1_given_d ==
        doctest::Approx(prior * P / (0.7 * alpha + prior * P)));
  CHECK(sarr::posterior_h1(0, prior, alpha, P).p_h1_given_d ==
        doctest::Approx(prior * 0.4 / (0.7 * 0.95 + prior * 0.4)));
  // Rejections move belief toward H1, acceptances away, whenever P > alpha.
  CHECK(sarr::posterior_h1(1, prior, alpha, P).p_h1_given_d > prior);
  CHECK(sarr::posterior_h1(0, prior, alpha, P).p_h1_given_d < prior);
}

TEST_CASE("posterior precondition checks") {
  CHECK_THROWS_AS(sarr::posterior_h1(2, 0.5, 0.05, 0.5), std::domain_error);
  CHECK_THROWS_AS(sarr::posterior_h1(1, 0.0, 0.05, 0.5), std::domain_error);
  CHECK_THROWS_AS(sarr::posterior_h1(1, 0.5, -0.1, 0.5), std::domain_error);
  CHECK_THROWS_AS(sarr::posterior_h1(1, 0.5, 0.05, 1.5), std::domain_error);
  CHECK_THROWS_AS((sarr::BetaMuKappa{0.0, 3.0}).validate(), std::domain_error);
  CHECK_THROWS_AS((sarr::BetaMuKappa{0.5, 0.0}).validate(), std::domain_error);
}

TEST_CASE("a concentrated prior pins the average power to its mean") {
  const int k = 2;
  const double p = sarr::solve_p(k, 1.0);
  for (double g : {0.2, 0.6}) {
    const sarr::BetaMuKappa prior{g, 1e7};
    CHECK(sarr::p_d1_given_h1(k, p, prior) ==
          doctest::Approx(sarr::rejection_prob(g, k, p)).epsilon(1e-3));
  }
}

TEST_CASE("average power under a beta prior matches Monte Carlo") {
  sarr::RandomStream rng(31);
  const int k = 1;
  const double p = sarr::solve_p(k, 1.5);
  const sarr::BetaMuKappa prior{0.3, 3.0};
  const long reps = 400000;
  double acc = 0.0;
  for (long r = 0; r < reps; ++r)
    acc += sarr::rejection_prob(rng.beta(prior.a(), prior.b()), k, p);
  const double mc = acc / reps;
  CHECK(sarr::p_d1_given_h1(k, p, prior) == doctest::Approx(mc).epsilon(0.005));
}

TEST_CASE("unit-information average z power behaves sensibly") {
  for (double level : {0.01, 0.05}) {
    double prev = level;
    for (int b : {1, 5, 20, 80}) {
      const double value = sarr::unit_info_z_power(b, level);
      CHECK(value > prev);  // grows with the subgroup size
      CHECK(value < 1.0);
      prev = value;
    }
  }
  CHECK_THROWS_AS(sarr::unit_info_z_power(10, 0.0), std::domain_error);
}

TEST_CASE("expected z p-value at b = 1 sits in (0, 1/2) and matches MC") {
  const double value = sarr::expected_pvalue_z(1);
  CHECK(value > 0.0);
  CHECK(value < 0.5);

  sarr::RandomStream rng(32);
  const long reps = 1000000;
  double acc = 0.0;
  for (long r = 0; r < reps; ++r) {
    const double delta = rng.normal();
    const double z = rng.normal(delta, 1.0);  // sqrt(b) = 1
    acc += std::erfc(std::abs(z) / M_SQRT2);
  }
  const double mc = acc / reps;
  // MC standard error of a mean of [0,1] values at 10^6 reps.
  CHECK(std::abs(value - mc) < 3.0 * 0.5 / std::sqrt(1.0 * reps) + 1e-3);

  // Larger subgroups drive the expected p-value down.
  CHECK(sarr::expected_pvalue_z(20) < sarr::expected_pvalue_z(5));
  CHECK(sarr::expected_pvalue_z(5) < value);
}

TEST_CASE("quadrature and Monte Carlo prior powers agree for every method") {
  const double eps = 1.0, alpha = 0.05;
  const long reps = 200000;
  for (int k : {1, 3}) {
    const double p = sarr::solve_p(k, eps);
    const double alpha0 = sarr::solve_alpha0(k, p, 0.2);
    for (int b : {10, 20}) {
      for (sarr::PriorMethod method :
           {sarr::PriorMethod::truth, sarr::PriorMethod::sarr,
            sarr::PriorMethod::avg_p, sarr::PriorMethod::sum}) {
        sarr::LaplaceMechanismConfig laplace;
        const sarr::LaplaceMechanismConfig* config = nullptr;
        if (method == sarr::PriorMethod::avg_p ||
            method == sarr::PriorMethod::sum) {
          sarr::RandomStream calib_rng(
              sarr::derive_seed(500, {static_cast<std::uint64_t>(k),
                                      static_cast<std::uint64_t>(b)}));
          laplace = sarr::laplace_calibrate(
              method == sarr::PriorMethod::avg_p ? sarr::LaplaceKind::avg_p
                                                 : sarr::LaplaceKind::sum,
              k, eps, alpha, alpha0, 100000, calib_rng);
          config = &laplace;
        }
        const double quad =
            sarr::table2_prior_power(method, k, b, alpha0, eps, config);
        sarr::RandomStream mc_rng(
            sarr::derive_seed(501, {static_cast<std::uint64_t>(k),
                                    static_cast<std::uint64_t>(b),
                                    static_cast<std::uint64_t>(method)}));
        const double mc = sarr::table2_prior_power_mc(method, k, b, alpha0,
                                                      eps, config, reps,
                                                      mc_rng);
        const double se =
            std::sqrt(std::max(quad * (1.0 - quad), 1e-4) / reps);
        CHECK(std::abs(quad - mc) < 3.0 * se + 2e-3);
        CHECK(quad >= 0.0);
        CHECK(quad <= 1.0);
      }
    }
  }
}

TEST_CASE("competitor priors refuse to run without a calibrated config") {
  CHECK_THROWS_AS(
      sarr::table2_prior_power(sarr::PriorMethod::avg_p, 1, 10, 0.1, 1.0),
      std::domain_error);
  CHECK_THROWS_AS(
      sarr::table2_prior_power(sarr::PriorMethod::sum, 1, 10, 0.1, 1.0),
      std::domain_error);
}

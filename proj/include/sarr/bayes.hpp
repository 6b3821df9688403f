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

#ifndef SARR_BAYES_HPP
#define SARR_BAYES_HPP

#include <string>

#include "sarr/dp_testing.hpp"

namespace sarr {

// Beta distribution parametrized by mean mu and effective sample size kappa;
// shape parameters a = mu * kappa, b = (1 - mu) * kappa.
struct BetaMuKappa {
  double mu;
  double kappa;

  double a() const { return mu * kappa; }
  double b() const { return (1.0 - mu) * kappa; }
  void validate() const;
};

// P(H1 | d) with the prior specification that produced it.
struct PosteriorReport {
  double p_h1_given_d = 0.0;
  int d = 0;
  double prior_h1 = 0.5;
  double alpha = 0.05;
  double p_d1_given_h1 = 0.0;
  std::string prior_spec;
};

// Two-branch posterior of H1 given the binary decision of a test calibrated
// to type I error alpha, with P = P(d = 1 | H1).
PosteriorReport posterior_h1(int d, double prior_h1, double alpha,
                             double p_d1_given_h1);

// Integral of rejection_prob(gamma0, k, p) against the beta prior on gamma0,
// by Gauss-Legendre quadrature (order 128) on the prior's quantile scale.
double p_d1_given_h1(int k, double p, const BetaMuKappa& prior);

// Average power of the two-sided z-test under the standard normal effect-size
// prior induced by the unit information prior, Gauss-Hermite order 64.
double unit_info_z_power(int b, double level);

// Average p-value of the two-sided z-test under the same effect-size prior;
// the inner expectation integrates over the test statistic.
double expected_pvalue_z(int b);

enum class PriorMethod { truth, sarr, avg_p, sum };

// P(d = 1 | H1) for each mechanism under the study's prior constructions:
// a z-test-proxy beta prior with mean 0.8 * (average z power) and effective
// sample size 2k + 1 (for binarized mechanisms), and a beta prior on the
// average p-value centered at 0.8 * (expected z p-value) for avg_p.
// Competitor methods need calibrated critical values.
double table2_prior_power(PriorMethod method, int k, int b, double alpha0,
                          double epsilon,
                          const LaplaceMechanismConfig* laplace_config = nullptr);

// Monte-Carlo counterpart of table2_prior_power, used as an independent
// evaluation path.
double table2_prior_power_mc(PriorMethod method, int k, int b, double alpha0,
                             double epsilon,
                             const LaplaceMechanismConfig* laplace_config,
                             long reps, RandomStream& rng);

}  // namespace sarr

#endif  // SARR_BAYES_HPP

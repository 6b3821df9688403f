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

#ifndef SARR_DP_TESTING_HPP
#define SARR_DP_TESTING_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "sarr/base_tests.hpp"
#include "sarr/calibration.hpp"
#include "sarr/mechanism.hpp"

namespace sarr {

// Uniformly random balanced partition of n records into m disjoint subsets.
// Sizes differ by at most 1; extra records go to the lowest-indexed subsets.
struct Partition {
  std::vector<std::vector<int>> subsets;

  int m() const { return static_cast<int>(subsets.size()); }
};

// Fisher-Yates shuffle of indices sliced into m near-equal blocks;
// deterministic given the stream seed. Requires m odd and 1 <= m <= n.
Partition make_partition(int n, int m, RandomStream& rng);

// Per-group balanced partition: each group's records are shuffled and dealt
// across the m subsets, so grouped tests keep every group represented when
// floor(group size / m) >= 1.
Partition make_stratified_partition(const Dataset& data, int m,
                                    RandomStream& rng);

// End-to-end SARR test: calibrates (k via min_k if absent, p, alpha0),
// partitions, runs the base test at alpha0 in each subset, majority-votes
// through randomized response.
PrivateDecision sarr_test(const Dataset& data, const BaseTest& test,
                          const CalibrationTarget& target,
                          std::optional<int> k, RandomStream& rng,
                          DecisionMode mode = DecisionMode::nominal);

// SARR run with an already calibrated config (study harness path; skips the
// per-replicate solvers).
PrivateDecision sarr_test_with_config(const Dataset& data, const BaseTest& test,
                                      const MechanismConfig& config,
                                      double alpha, RandomStream& rng,
                                      DecisionMode mode = DecisionMode::nominal);

enum class LaplaceKind { avg_p, sum };

// A subsample-and-aggregate Laplace competitor with its Monte-Carlo
// calibrated critical value.
struct LaplaceMechanismConfig {
  LaplaceKind kind = LaplaceKind::avg_p;
  int k = 0;
  double epsilon = 1.0;
  double alpha = 0.05;
  double alpha0 = 0.05;  // subset-test level (sum variant)
  double critical_value = 0.0;
  long calibration_reps = 0;
  std::uint64_t calibration_seed = 0;

  int m() const { return 2 * k + 1; }
  bool calibrated() const { return calibration_reps > 0; }
  double noise_scale() const;
};

// Simulates the H0 statistic distribution (avg_p: mean of m iid Uniform(0,1)
// p-values plus Laplace noise; sum: Binomial(m, alpha0) plus Laplace noise)
// and returns the empirical alpha-quantile as the critical value.
LaplaceMechanismConfig laplace_calibrate(LaplaceKind kind, int k,
                                         double epsilon, double alpha,
                                         double alpha0, long reps,
                                         RandomStream& rng);

// Computes the per-subset statistic, aggregates, adds Laplace noise and
// thresholds at the calibrated critical value.
PrivateDecision laplace_test(const Dataset& data, const BaseTest& test,
                             const LaplaceMechanismConfig& config,
                             RandomStream& rng);

// m independent SARR runs at level alpha/m and budget epsilon/m on
// independently drawn partitions of the same data; total budget is epsilon
// by sequential composition.
std::vector<PrivateDecision> bonferroni_sarr(
    const Dataset& data, const std::vector<const BaseTest*>& tests,
    const CalibrationTarget& target, RandomStream& rng);

// The k = 0 gated baseline: the base test on the full data at level alpha0,
// randomized response at p = e^eps/(1+e^eps), Bernoulli gate forcing type I
// error alpha.
PrivateDecision gated_rr_test(const Dataset& data, const BaseTest& test,
                              double epsilon, double alpha0, double alpha,
                              RandomStream& rng);

}  // namespace sarr

#endif  // SARR_DP_TESTING_HPP

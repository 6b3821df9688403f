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

#ifndef SARR_CALIBRATION_HPP
#define SARR_CALIBRATION_HPP

#include <utility>
#include <vector>

#include "sarr/mechanism.hpp"

namespace sarr {

// User targets the solvers turn into a feasible MechanismConfig.
struct CalibrationTarget {
  double epsilon = 1.0;    // privacy level, > 0
  double alpha = 0.05;     // type-I error, in (0, 1)
  double alpha0_min = 0.0; // lower bound on the subset-test level, < 1

  void validate() const;
};

// Rejection probability as a function of gamma0 (or of an effect size, when
// a base test supplies an analytic power function).
struct PowerCurve {
  std::vector<std::pair<double, double>> points;
  MechanismConfig config;
};

// The p in (1/2, 1) making the majority vote exactly epsilon-DP at this k,
// by bisection to |epsilon_of(k, k, p) - epsilon| <= 1e-10. Always feasible.
double solve_p(int k, double epsilon);

// The alpha0 giving the majority vote type I error exactly alpha at (k, p).
// Throws infeasible_error when alpha is below the attainable floor
// ("increase k or epsilon").
double solve_alpha0(int k, double p, double alpha);

// Smallest k (linear scan from 0, hard cap) for which exact-epsilon p and
// exact-alpha alpha0 >= alpha0_min exist; returns the full config.
std::pair<int, MechanismConfig> min_k(const CalibrationTarget& target,
                                      int k_cap = 200);

// min_k with alpha0_min = 0 across an (alpha, epsilon) grid; row-major in
// alphas.
std::vector<std::vector<int>> table_min_k(const std::vector<double>& alphas,
                                          const std::vector<double>& epsilons);

// Calibrates (p, alpha0) at this k and evaluates rejection_prob over the grid
// of gamma0 values.
PowerCurve power_curve(int k, const CalibrationTarget& target,
                       const std::vector<double>& gamma0_grid);

}  // namespace sarr

#endif  // SARR_CALIBRATION_HPP

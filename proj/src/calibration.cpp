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

#include "sarr/calibration.hpp"

#include <cmath>
#include <string>

#include "sarr/binom.hpp"

namespace sarr {

void CalibrationTarget::validate() const {
  if (!(epsilon > 0.0))
    throw std::domain_error("CalibrationTarget: epsilon must be > 0");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("CalibrationTarget: alpha must lie in (0, 1)");
  if (!(alpha0_min >= 0.0 && alpha0_min < 1.0))
    throw std::domain_error("CalibrationTarget: alpha0_min must lie in [0, 1)");
}

double solve_p(int k, double epsilon) {
  if (k < 0) throw std::domain_error("solve_p: k must be >= 0");
  if (!(epsilon > 0.0)) throw std::domain_error("solve_p: epsilon must be > 0");
  // epsilon_of(k, k, p) is strictly increasing in p, vanishes as p -> 1/2+
  // and diverges as p -> 1-.
  double lo = 0.5, hi = 1.0;
  double p = 0.75;
  for (int iter = 0; iter < 200; ++iter) {
    p = 0.5 * (lo + hi);
    const double eps = epsilon_of(k, k, p);
    if (std::abs(eps - epsilon) <= 1e-10) break;
    if (eps < epsilon)
      lo = p;
    else
      hi = p;
  }
  return p;
}

double solve_alpha0(int k, double p, double alpha) {
  if (k < 0) throw std::domain_error("solve_alpha0: k must be >= 0");
  if (!(p > 0.5 && p < 1.0))
    throw std::domain_error("solve_alpha0: p must lie in (1/2, 1)");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("solve_alpha0: alpha must lie in (0, 1)");
  const double q_star = binom_tail_inverse(2 * k + 1, k, alpha);
  if (q_star < 1.0 - p) {
    throw infeasible_error(
        "solve_alpha0: target alpha " + std::to_string(alpha) +
        " lies below the attainable floor at k = " + std::to_string(k) +
        "; increase k or epsilon");
  }
  double alpha0 = (q_star - (1.0 - p)) / (2.0 * p - 1.0);
  if (alpha0 >= 1.0)
    throw infeasible_error("solve_alpha0: required alpha0 >= 1");
  return std::max(alpha0, 0.0);
}

std::pair<int, MechanismConfig> min_k(const CalibrationTarget& target, int k_cap) {
  target.validate();
  for (int k = 0; k <= k_cap; ++k) {
    const double p = solve_p(k, target.epsilon);
    double alpha0;
    try {
      alpha0 = solve_alpha0(k, p, target.alpha);
    } catch (const infeasible_error&) {
      continue;
    }
    if (alpha0 >= target.alpha0_min)
      return {k, MechanismConfig{k, p, k, alpha0}};
  }
  throw infeasible_error(
      "min_k: no feasible k <= " + std::to_string(k_cap) + " for epsilon = " +
      std::to_string(target.epsilon) + ", alpha = " + std::to_string(target.alpha) +
      ", alpha0_min = " + std::to_string(target.alpha0_min));
}

std::vector<std::vector<int>> table_min_k(const std::vector<double>& alphas,
                                          const std::vector<double>& epsilons) {
  if (alphas.empty() || epsilons.empty())
    throw std::domain_error("table_min_k: grids must be nonempty");
  std::vector<std::vector<int>> table;
  table.reserve(alphas.size());
  for (double alpha : alphas) {
    std::vector<int> row;
    row.reserve(epsilons.size());
    for (double eps : epsilons) {
      CalibrationTarget t{eps, alpha, 0.0};
      row.push_back(min_k(t).first);
    }
    table.push_back(std::move(row));
  }
  return table;
}

PowerCurve power_curve(int k, const CalibrationTarget& target,
                       const std::vector<double>& gamma0_grid) {
  target.validate();
  const double p = solve_p(k, target.epsilon);
  const double alpha0 = solve_alpha0(k, p, target.alpha);
  if (alpha0 < target.alpha0_min)
    throw infeasible_error("power_curve: calibrated alpha0 below alpha0_min");
  PowerCurve curve;
  curve.config = MechanismConfig{k, p, k, alpha0};
  curve.points.reserve(gamma0_grid.size());
  for (double g : gamma0_grid)
    curve.points.emplace_back(g, rejection_prob(g, k, p));
  return curve;
}

}  // namespace sarr

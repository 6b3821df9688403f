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

#include "sarr/mechanism.hpp"

#include <algorithm>
#include <cmath>

#include "sarr/binom.hpp"
#include "sarr/calibration.hpp"

namespace sarr {

int randomized_response(int x, double p, RandomStream& rng) {
  if (x != 0 && x != 1) throw std::domain_error("randomized_response: x must be binary");
  if (!(p > 0.5 && p < 1.0))
    throw std::domain_error("randomized_response: p must lie in (1/2, 1)");
  return rng.bernoulli(p) ? x : 1 - x;
}

double epsilon_of(int k, int c, double p) {
  if (k < 0 || c < 0 || c > 2 * k)
    throw std::domain_error("epsilon_of: requires k >= 0 and c in [0, 2k]");
  if (!(p > 0.5 && p < 1.0))
    throw std::domain_error("epsilon_of: p must lie in (1/2, 1)");
  const int n = 2 * k + 1;
  const int c_star = std::max(c, 2 * k - c);
  // Ratios of tiny tails are differences of logs, never quotients of
  // underflowed floats.
  return conv_tail({1, n, p}, c_star) - conv_tail({0, n, p}, c_star);
}

double epsilon_limit(double p) {
  if (!(p > 0.5 && p < 1.0))
    throw std::domain_error("epsilon_limit: p must lie in (1/2, 1)");
  const double d = 2.0 * p - 1.0;
  return std::log1p(d * d / (2.0 * p * (1.0 - p)));
}

PBounds p_bounds(double epsilon) {
  if (!(epsilon > 0.0)) throw std::domain_error("p_bounds: epsilon must be > 0");
  const double e = std::exp(epsilon);
  PBounds b;
  b.p_sufficient = e / (1.0 + e);
  b.p_necessary = 0.5 * (1.0 + std::sqrt(std::expm1(2.0 * epsilon)) / (1.0 + e));
  return b;
}

double disagreement_prob(int s, int k, double p) {
  if (k < 0 || s < 0 || s > 2 * k + 1)
    throw std::domain_error("disagreement_prob: requires 0 <= s <= 2k+1");
  if (!(p > 0.5 && p < 1.0))
    throw std::domain_error("disagreement_prob: p must lie in (1/2, 1)");
  const int n = 2 * k + 1;
  const BinConvDist dist{s, n, p};
  if (s <= k) return std::exp(conv_tail(dist, k));
  return -std::expm1(conv_tail(dist, k));  // P(B_s <= k)
}

double rejection_prob(double gamma0, int k, double p) {
  if (!(gamma0 >= 0.0 && gamma0 <= 1.0))
    throw std::domain_error("rejection_prob: gamma0 must lie in [0, 1]");
  if (k < 0) throw std::domain_error("rejection_prob: k must be >= 0");
  if (!(p > 0.5 && p < 1.0))
    throw std::domain_error("rejection_prob: p must lie in (1/2, 1)");
  const double q = p * gamma0 + (1.0 - p) * (1.0 - gamma0);
  return std::exp(log_binom_tail(2 * k + 1, k, q));
}

double gated_rr_rho(double epsilon, double alpha0, double alpha) {
  const double p = std::exp(epsilon) / (1.0 + std::exp(epsilon));
  const double rho = alpha / (p * alpha0 + (1.0 - p) * (1.0 - alpha0));
  if (rho > 1.0)
    throw infeasible_error(
        "gated randomized response: gate probability exceeds 1; the target "
        "alpha is not reachable at this (epsilon, alpha0)");
  return rho;
}

double gated_rr_power(double gamma0, double epsilon, double alpha0, double alpha) {
  const double p = std::exp(epsilon) / (1.0 + std::exp(epsilon));
  const double rho = gated_rr_rho(epsilon, alpha0, alpha);
  return rho * (p * gamma0 + (1.0 - p) * (1.0 - gamma0));
}

double min_alpha(int k, double epsilon) {
  if (k < 0) throw std::domain_error("min_alpha: k must be >= 0");
  if (!(epsilon > 0.0)) throw std::domain_error("min_alpha: epsilon must be > 0");
  const double p = solve_p(k, epsilon);
  return std::exp(log_binom_tail(2 * k + 1, k, 1.0 - p));
}

PrivateDecision sarr_vote(const std::vector<int>& outcomes, double p, int c,
                          RandomStream& rng) {
  if (outcomes.empty() || outcomes.size() % 2 == 0)
    throw std::domain_error("sarr_vote: outcomes must have odd length 2k+1");
  const int k = (static_cast<int>(outcomes.size()) - 1) / 2;
  if (c < 0 || c > 2 * k)
    throw std::domain_error("sarr_vote: c must lie in [0, 2k]");
  int votes = 0;
  for (int x : outcomes) votes += randomized_response(x, p, rng);

  PrivateDecision out;
  out.d = votes > c ? 1 : 0;
  out.vote_count = votes;
  out.config = MechanismConfig{k, p, c, 0.0};
  out.epsilon = epsilon_of(k, c, p);
  out.seed = rng.seed();
  return out;
}

}  // namespace sarr

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

#ifndef SARR_MECHANISM_HPP
#define SARR_MECHANISM_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sarr/random.hpp"

namespace sarr {

// Signalled when a requested gate/calibration target cannot be met;
// the message names the failing precondition.
struct infeasible_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The tuple (k, p, c, alpha0) fully determining a subsampled-and-aggregated
// randomized response test over m = 2k + 1 subsets.
struct MechanismConfig {
  int k = 0;              // data split into 2k + 1 subsets
  double p = 0.75;        // per-vote truth probability, in (1/2, 1)
  int c = 0;              // vote threshold in [0, 2k]; default c = k
  double alpha0 = 0.05;   // subset-test significance level, < 1

  int m() const { return 2 * k + 1; }
  bool majority() const { return c == k; }
};

// Binary DP decision plus audit metadata.
struct PrivateDecision {
  int d = 0;               // 1 = reject H0
  double epsilon = 0.0;    // achieved privacy level of the realized config
  double alpha = 0.0;      // calibrated type-I error target
  int vote_count = 0;      // realized T
  MechanismConfig config;
  std::uint64_t seed = 0;  // stream seed; replays the decision
  std::string mechanism = "sarr";
};

// Reports x with probability p, 1-x otherwise. Consumes exactly one
// uniform draw from rng.
int randomized_response(int x, double p, RandomStream& rng);

// Exact privacy level of d_c = 1(T > c): log-space tail difference of the
// two boundary convolution laws at c* = max(c, 2k - c).
double epsilon_of(int k, int c, double p);

// Large-k limit log(1 + (2p-1)^2 / (2p(1-p))).
double epsilon_limit(double p);

struct PBounds {
  double p_sufficient;  // e^eps / (1 + e^eps), valid for every k
  double p_necessary;   // from the large-k limit
};
PBounds p_bounds(double epsilon);

// P(majority vote flips the noiseless decision | sum of outcomes = s).
double disagreement_prob(int s, int k, double p);

// P(Binomial(2k+1, q) > k) with q = p*gamma0 + (1-p)*(1-gamma0). Type I
// error at gamma0 = alpha0, power at the alternative rejection probability.
double rejection_prob(double gamma0, int k, double p);

// Power of the k = 0 gated baseline B * r(x): rho * (p*gamma0 + (1-p)*(1-gamma0))
// with p = e^eps/(1+e^eps) and gate rho = alpha / (p*alpha0 + (1-p)*(1-alpha0)).
// Throws infeasible_error if rho > 1.
double gated_rr_power(double gamma0, double epsilon, double alpha0, double alpha);

// Gate probability rho itself (the power ceiling of the gated baseline).
double gated_rr_rho(double epsilon, double alpha0, double alpha);

// Minimum type I error attainable at privacy level epsilon (alpha0 = 0 case):
// P(Binomial(2k+1, 1-p) > k) at the exactly-calibrated p.
double min_alpha(int k, double epsilon);

// Applies independent randomized response to each outcome, majority-thresholds
// the sum at c, and packages the decision with audit metadata. Outcomes must
// have odd length 2k + 1 and c in [0, 2k].
PrivateDecision sarr_vote(const std::vector<int>& outcomes, double p, int c,
                          RandomStream& rng);

}  // namespace sarr

#endif  // SARR_MECHANISM_HPP

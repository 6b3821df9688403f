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

#ifndef SARR_BINOM_HPP
#define SARR_BINOM_HPP

namespace sarr {

// Natural-log probability in [-inf, 0].
using LogProb = double;

// Streaming two-value log-sum-exp.
LogProb log_add(LogProb a, LogProb b);

// log P(Binomial(n, p) = x); -inf outside the support.
LogProb log_binom_pmf(int n, int x, double p);

// log P(Binomial(n, p) > x) for -1 <= x <= n.
LogProb log_binom_tail(int n, int x, double p);

// The law of Binomial(i, p) + Binomial(n - i, 1 - p) with 1/2 < p < 1.
// All mechanism uses have n = 2k + 1.
struct BinConvDist {
  int i;     // success-biased trials, 0 <= i <= n
  int n;     // total trials
  double p;  // success probability in (1/2, 1)
};

// log P(B_i = x). Direct O(i * (n - i)) log-sum-exp over the convolution.
LogProb conv_pmf(const BinConvDist& dist, int x);

// log P(B_i > x) for -1 <= x <= n; equals 0 at x = -1, -inf at x = n.
LogProb conv_tail(const BinConvDist& dist, int x);

// The unique q in (0, 1) with P(Binomial(n, q) > x) = alpha, by bisection
// (the tail is strictly increasing in q) to |tail - alpha| <= 1e-12.
double binom_tail_inverse(int n, int x, double alpha);

}  // namespace sarr

#endif  // SARR_BINOM_HPP

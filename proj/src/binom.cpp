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

#include "sarr/binom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sarr {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

LogProb log_add(LogProb a, LogProb b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

LogProb log_binom_pmf(int n, int x, double p) {
  if (n < 0) throw std::domain_error("log_binom_pmf: n < 0");
  if (p < 0.0 || p > 1.0) throw std::domain_error("log_binom_pmf: p outside [0,1]");
  if (x < 0 || x > n) return kNegInf;
  if (p == 0.0) return x == 0 ? 0.0 : kNegInf;
  if (p == 1.0) return x == n ? 0.0 : kNegInf;
  double log_choose = 0.0;
  if (x > 0 && x < n) {
    log_choose = std::lgamma(n + 1.0) - std::lgamma(x + 1.0) -
                 std::lgamma(n - x + 1.0);
  }
  return log_choose + x * std::log(p) + (n - x) * std::log1p(-p);
}

LogProb log_binom_tail(int n, int x, double p) {
  if (x < -1 || x > n) throw std::domain_error("log_binom_tail: x out of range");
  if (x == -1) return 0.0;
  LogProb acc = kNegInf;
  for (int t = x + 1; t <= n; ++t) acc = log_add(acc, log_binom_pmf(n, t, p));
  return std::min(acc, 0.0);
}

namespace {

void check_dist(const BinConvDist& dist) {
  if (dist.n < 0 || dist.i < 0 || dist.i > dist.n)
    throw std::domain_error("BinConvDist: requires 0 <= i <= n");
  if (!(dist.p > 0.0 && dist.p < 1.0))
    throw std::domain_error("BinConvDist: requires p in (0, 1)");
}

}  // namespace

LogProb conv_pmf(const BinConvDist& dist, int x) {
  check_dist(dist);
  if (x < 0 || x > dist.n) throw std::domain_error("conv_pmf: x out of range");
  const int i = dist.i;
  const int m = dist.n - dist.i;
  const int lo = std::max(0, x - m);
  const int hi = std::min(i, x);
  LogProb acc = kNegInf;
  for (int j = lo; j <= hi; ++j) {
    acc = log_add(acc, log_binom_pmf(i, j, dist.p) +
                           log_binom_pmf(m, x - j, 1.0 - dist.p));
  }
  return std::min(acc, 0.0);
}

LogProb conv_tail(const BinConvDist& dist, int x) {
  check_dist(dist);
  if (x < -1 || x > dist.n) throw std::domain_error("conv_tail: x out of range");
  if (x == -1) return 0.0;
  LogProb acc = kNegInf;
  for (int t = x + 1; t <= dist.n; ++t) acc = log_add(acc, conv_pmf(dist, t));
  return std::min(acc, 0.0);
}

double binom_tail_inverse(int n, int x, double alpha) {
  if (!(x >= 0 && x < n)) throw std::domain_error("binom_tail_inverse: requires 0 <= x < n");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("binom_tail_inverse: requires alpha in (0, 1)");
  const double log_alpha = std::log(alpha);
  double lo = 0.0, hi = 1.0;
  double q = 0.5;
  for (int iter = 0; iter < 200; ++iter) {
    q = 0.5 * (lo + hi);
    const double tail = log_binom_tail(n, x, q);
    if (std::abs(std::exp(tail) - alpha) <= 1e-12) break;
    if (tail < log_alpha)
      lo = q;
    else
      hi = q;
  }
  return q;
}

}  // namespace sarr

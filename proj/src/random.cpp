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

#include "sarr/random.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <stdexcept>

namespace sarr {

std::uint64_t RandomStream::uniform_int(std::uint64_t bound) {
  if (bound == 0) throw std::domain_error("uniform_int: bound must be > 0");
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(engine_()) * bound) >> 64);
}

double RandomStream::normal(double mean, double sd) {
  // Inverse-CDF; nudge u away from 0 to keep erf_inv finite.
  double u = uniform();
  if (u <= 0.0) u = 0x1.0p-53;
  return mean + sd * M_SQRT2 * boost::math::erf_inv(2.0 * u - 1.0);
}

double RandomStream::laplace(double scale) {
  double u = uniform() - 0.5;
  double au = std::abs(u);
  if (au >= 0.5) au = 0.5 - 0x1.0p-54;
  return (u < 0 ? scale : -scale) * std::log1p(-2.0 * au);
}

double RandomStream::exponential(double rate) {
  double u = uniform();
  if (u >= 1.0) u = 1.0 - 0x1.0p-53;
  return -std::log1p(-u) / rate;
}

double RandomStream::gamma(double shape, double scale) {
  if (shape <= 0.0 || scale <= 0.0)
    throw std::domain_error("gamma: shape and scale must be > 0");
  if (shape < 1.0) {
    // Boost shape up by one, correct with u^{1/shape}.
    double u = uniform();
    if (u <= 0.0) u = 0x1.0p-53;
    return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
  }
  // Marsaglia-Tsang squeeze.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return scale * d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
      return scale * d * v;
  }
}

double RandomStream::beta(double a, double b) {
  const double x = gamma(a);
  const double y = gamma(b);
  return x / (x + y);
}

double RandomStream::student_t(double df) {
  const double z = normal();
  const double v = chi_squared(df);
  return z / std::sqrt(v / df);
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t v : path) h = splitmix64(h ^ splitmix64(v));
  return h;
}

}  // namespace sarr

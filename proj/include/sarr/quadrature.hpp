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

#ifndef SARR_QUADRATURE_HPP
#define SARR_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace sarr {

struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1]. Nodes by Newton iteration on the Legendre
// recurrence; rules are cached per order.
const QuadRule& gauss_legendre(int order);

// Gauss-Hermite rule for weight exp(-x^2). Normalized recurrence keeps the
// iteration stable up to order ~200.
const QuadRule& gauss_hermite(int order);

// Integral of f over (0, 1), Gauss-Legendre at the given order.
double integrate01(const std::function<double(double)>& f, int order = 128);

// E[f(X)] for X ~ Normal(0, 1), Gauss-Hermite at the given order.
double integrate_gaussian(const std::function<double(double)>& f,
                          int order = 64);

}  // namespace sarr

#endif  // SARR_QUADRATURE_HPP

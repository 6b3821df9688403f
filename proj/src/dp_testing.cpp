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

#include "sarr/dp_testing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace sarr {

namespace {

void fisher_yates(std::vector<int>& idx, RandomStream& rng) {
  for (std::size_t i = idx.size(); i > 1; --i) {
    const std::size_t j = rng.uniform_int(i);
    std::swap(idx[i - 1], idx[j]);
  }
}

}  // namespace

Partition make_partition(int n, int m, RandomStream& rng) {
  if (m % 2 == 0) throw std::domain_error("partition: m must be odd");
  if (m < 1 || m > n)
    throw std::domain_error("partition: requires 1 <= m <= n");
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  fisher_yates(idx, rng);

  Partition part;
  part.subsets.resize(m);
  const int base = n / m;
  const int extra = n % m;  // extra records go to the lowest-indexed subsets
  int pos = 0;
  for (int s = 0; s < m; ++s) {
    const int size = base + (s < extra ? 1 : 0);
    part.subsets[s].assign(idx.begin() + pos, idx.begin() + pos + size);
    pos += size;
  }
  return part;
}

Partition make_stratified_partition(const Dataset& data, int m,
                                    RandomStream& rng) {
  if (!data.grouped()) return make_partition(static_cast<int>(data.size()), m, rng);
  if (m % 2 == 0) throw std::domain_error("partition: m must be odd");
  std::map<int, std::vector<int>> by_group;
  for (std::size_t i = 0; i < data.size(); ++i)
    by_group[data.groups[i]].push_back(static_cast<int>(i));

  Partition part;
  part.subsets.resize(m);
  for (auto& [label, idx] : by_group) {
    if (static_cast<int>(idx.size()) < m)
      throw data_error("stratified partition: group smaller than subset count");
    fisher_yates(idx, rng);
    const int base = static_cast<int>(idx.size()) / m;
    const int extra = static_cast<int>(idx.size()) % m;
    int pos = 0;
    for (int s = 0; s < m; ++s) {
      const int size = base + (s < extra ? 1 : 0);
      part.subsets[s].insert(part.subsets[s].end(), idx.begin() + pos,
                             idx.begin() + pos + size);
      pos += size;
    }
  }
  return part;
}

namespace {

Partition partition_for(const Dataset& data, const BaseTest& test, int m,
                        RandomStream& rng) {
  Partition part = data.grouped()
                       ? make_stratified_partition(data, m, rng)
                       : make_partition(static_cast<int>(data.size()), m, rng);
  for (const auto& subset : part.subsets) {
    if (subset.size() < test.min_subset_size())
      throw data_error("subset too small for base test " + test.name());
  }
  return part;
}

std::vector<int> subset_outcomes(const Dataset& data, const BaseTest& test,
                                 const Partition& part, double alpha0,
                                 DecisionMode mode, RandomStream& rng) {
  std::vector<int> outcomes;
  outcomes.reserve(part.subsets.size());
  for (const auto& indices : part.subsets) {
    const TestResult r = test.run(data.subset(indices), alpha0);
    outcomes.push_back(mode == DecisionMode::randomized_exact
                           ? exact_randomized_decision(r, alpha0, rng)
                           : r.decision);
  }
  return outcomes;
}

}  // namespace

PrivateDecision sarr_test(const Dataset& data, const BaseTest& test,
                          const CalibrationTarget& target,
                          std::optional<int> k_opt, RandomStream& rng,
                          DecisionMode mode) {
  target.validate();
  MechanismConfig config;
  if (k_opt) {
    const int k = *k_opt;
    const double p = solve_p(k, target.epsilon);
    config = MechanismConfig{k, p, k, solve_alpha0(k, p, target.alpha)};
    if (config.alpha0 < target.alpha0_min)
      throw infeasible_error("sarr_test: calibrated alpha0 below alpha0_min");
  } else {
    config = min_k(target).second;
  }
  return sarr_test_with_config(data, test, config, target.alpha, rng, mode);
}

PrivateDecision sarr_test_with_config(const Dataset& data, const BaseTest& test,
                                      const MechanismConfig& config,
                                      double alpha, RandomStream& rng,
                                      DecisionMode mode) {
  if (static_cast<int>(data.size()) < config.m())
    throw data_error("sarr_test: fewer records than subsets");

  const Partition part = partition_for(data, test, config.m(), rng);
  const std::vector<int> outcomes =
      subset_outcomes(data, test, part, config.alpha0, mode, rng);

  PrivateDecision decision = sarr_vote(outcomes, config.p, config.k, rng);
  decision.config = config;
  decision.alpha = alpha;
  decision.mechanism = "sarr";
  return decision;
}

double LaplaceMechanismConfig::noise_scale() const {
  return kind == LaplaceKind::avg_p ? 1.0 / (epsilon * (2 * k + 1))
                                    : 1.0 / epsilon;
}

LaplaceMechanismConfig laplace_calibrate(LaplaceKind kind, int k,
                                         double epsilon, double alpha,
                                         double alpha0, long reps,
                                         RandomStream& rng) {
  if (reps < 10000)
    throw std::domain_error("laplace_calibrate: reps must be >= 10^4");
  LaplaceMechanismConfig config;
  config.kind = kind;
  config.k = k;
  config.epsilon = epsilon;
  config.alpha = alpha;
  config.alpha0 = alpha0;
  config.calibration_reps = reps;
  config.calibration_seed = rng.seed();

  const int m = config.m();
  const double scale = config.noise_scale();
  std::vector<double> stats(reps);
  for (long r = 0; r < reps; ++r) {
    double stat;
    if (kind == LaplaceKind::avg_p) {
      double acc = 0.0;
      for (int i = 0; i < m; ++i) acc += rng.uniform();
      stat = acc / m;
    } else {
      int count = 0;
      for (int i = 0; i < m; ++i) count += rng.bernoulli(alpha0) ? 1 : 0;
      stat = static_cast<double>(count);
    }
    stats[r] = stat + rng.laplace(scale);
  }
  std::sort(stats.begin(), stats.end());
  // avg_p rejects below c_alpha, sum rejects above c~_alpha.
  const long idx =
      kind == LaplaceKind::avg_p
          ? static_cast<long>(alpha * reps)
          : static_cast<long>((1.0 - alpha) * reps);
  config.critical_value = stats[std::clamp(idx, 0L, reps - 1)];
  return config;
}

PrivateDecision laplace_test(const Dataset& data, const BaseTest& test,
                             const LaplaceMechanismConfig& config,
                             RandomStream& rng) {
  if (!config.calibrated())
    throw std::domain_error("laplace_test: config is not calibrated");
  if (static_cast<int>(data.size()) < config.m())
    throw data_error("laplace_test: fewer records than subsets");
  const Partition part = partition_for(data, test, config.m(), rng);

  double stat = 0.0;
  if (config.kind == LaplaceKind::avg_p) {
    for (const auto& indices : part.subsets)
      stat += test.run(data.subset(indices), config.alpha0).p_value;
    stat /= config.m();
  } else {
    for (const auto& indices : part.subsets)
      stat += test.run(data.subset(indices), config.alpha0).decision;
  }
  stat += rng.laplace(config.noise_scale());

  PrivateDecision out;
  out.d = config.kind == LaplaceKind::avg_p ? (stat < config.critical_value)
                                            : (stat > config.critical_value);
  out.epsilon = config.epsilon;
  out.alpha = config.alpha;
  out.config = MechanismConfig{config.k, 0.0, config.k, config.alpha0};
  out.seed = rng.seed();
  out.mechanism = config.kind == LaplaceKind::avg_p ? "avg_p" : "sum";
  return out;
}

std::vector<PrivateDecision> bonferroni_sarr(
    const Dataset& data, const std::vector<const BaseTest*>& tests,
    const CalibrationTarget& target, RandomStream& rng) {
  if (tests.empty()) throw std::domain_error("bonferroni_sarr: no tests");
  const double m = static_cast<double>(tests.size());
  CalibrationTarget per_test = target;
  per_test.epsilon = target.epsilon / m;
  per_test.alpha = target.alpha / m;
  std::vector<PrivateDecision> out;
  out.reserve(tests.size());
  for (const BaseTest* test : tests)
    out.push_back(sarr_test(data, *test, per_test, std::nullopt, rng));
  return out;
}

PrivateDecision gated_rr_test(const Dataset& data, const BaseTest& test,
                              double epsilon, double alpha0, double alpha,
                              RandomStream& rng) {
  const double p = std::exp(epsilon) / (1.0 + std::exp(epsilon));
  const double rho = gated_rr_rho(epsilon, alpha0, alpha);
  const int x = test.run(data, alpha0).decision;
  const int gate = rng.bernoulli(rho) ? 1 : 0;
  const int r = randomized_response(x, p, rng);

  PrivateDecision out;
  out.d = gate * r;
  out.epsilon = epsilon;
  out.alpha = alpha;
  out.config = MechanismConfig{0, p, 0, alpha0};
  out.seed = rng.seed();
  out.mechanism = "gated_rr";
  return out;
}

}  // namespace sarr

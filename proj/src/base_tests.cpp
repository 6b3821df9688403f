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

#include "sarr/base_tests.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <shared_mutex>

namespace sarr {

Dataset Dataset::subset(const std::vector<int>& indices) const {
  Dataset out;
  out.values.reserve(indices.size());
  if (grouped()) out.groups.reserve(indices.size());
  for (int idx : indices) {
    out.values.push_back(values.at(idx));
    if (grouped()) out.groups.push_back(groups.at(idx));
  }
  return out;
}

int Dataset::group_count() const {
  if (!grouped()) return 1;
  return static_cast<int>(std::set<int>(groups.begin(), groups.end()).size());
}

namespace {

const boost::math::normal_distribution<double> kStdNormal;

int nominal_decision(double p_value, double level) {
  return p_value < level ? 1 : 0;
}

// Midranks of v, average ranks for ties.
std::vector<double> midranks(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * (i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
    i = j + 1;
  }
  return ranks;
}

// Sum of (t^3 - t) over tie groups of v.
double tie_term(const std::vector<double>& v) {
  std::vector<double> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  double acc = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i + 1);
    acc += t * t * t - t;
    i = j + 1;
  }
  return acc;
}

}  // namespace

TestResult z_test(const std::vector<double>& sample, double mu0, double sigma,
                  double level) {
  if (sample.empty()) throw data_error("z_test: empty sample");
  if (!(sigma > 0.0)) throw std::domain_error("z_test: sigma must be > 0");
  const double b = static_cast<double>(sample.size());
  const double mean =
      std::accumulate(sample.begin(), sample.end(), 0.0) / b;
  const double z = std::sqrt(b) * (mean - mu0) / sigma;
  const double p = std::erfc(std::abs(z) / M_SQRT2);
  return {z, p, nominal_decision(p, level), TestMethod::z};
}

double z_power(double delta, int b, double level) {
  if (b < 1) throw std::domain_error("z_power: b must be >= 1");
  if (!(level > 0.0 && level < 1.0))
    throw std::domain_error("z_power: level must lie in (0, 1)");
  const double zq = quantile(kStdNormal, 1.0 - level / 2.0);
  const double shift = std::sqrt(static_cast<double>(b)) * std::abs(delta);
  return cdf(kStdNormal, -zq + shift) + cdf(kStdNormal, -zq - shift);
}

const std::vector<double>& wilcoxon_null_counts(int b) {
  if (b < 1) throw std::domain_error("wilcoxon_null_counts: b must be >= 1");
  static std::map<int, std::vector<double>> cache;
  static std::shared_mutex mutex;
  {
    std::shared_lock lock(mutex);
    auto it = cache.find(b);
    if (it != cache.end()) return it->second;
  }
  // counts[w] = #subsets of {1..b} summing to w.
  std::vector<double> counts(b * (b + 1) / 2 + 1, 0.0);
  counts[0] = 1.0;
  int max_w = 0;
  for (int r = 1; r <= b; ++r) {
    max_w += r;
    for (int w = max_w; w >= r; --w) counts[w] += counts[w - r];
  }
  std::unique_lock lock(mutex);
  return cache.emplace(b, std::move(counts)).first->second;
}

TestResult wilcoxon_signed_rank(const std::vector<double>& sample,
                                double theta0, double level, int exact_limit) {
  std::vector<double> diffs;
  diffs.reserve(sample.size());
  for (double y : sample) {
    const double d = y - theta0;
    if (d != 0.0) diffs.push_back(d);
  }
  if (sample.size() < 2) throw data_error("wilcoxon: sample size must be >= 2");
  if (diffs.empty())
    throw data_error("wilcoxon: all differences are zero");
  const int b = static_cast<int>(diffs.size());

  std::vector<double> abs_diffs(diffs.size());
  std::transform(diffs.begin(), diffs.end(), abs_diffs.begin(),
                 [](double d) { return std::abs(d); });
  const std::vector<double> ranks = midranks(abs_diffs);
  double w_plus = 0.0;
  for (std::size_t i = 0; i < diffs.size(); ++i)
    if (diffs[i] > 0.0) w_plus += ranks[i];

  const double ties = tie_term(abs_diffs);
  double p;
  double p_more_extreme = -1.0;
  if (b <= exact_limit && ties == 0.0) {
    const std::vector<double>& counts = wilcoxon_null_counts(b);
    const double total = std::ldexp(1.0, b);  // 2^b
    const int w_max = static_cast<int>(counts.size()) - 1;
    const auto two_sided = [&](int w) {
      double below = 0.0, above = 0.0;
      for (int t = 0; t <= w; ++t) below += counts[t];
      for (int t = w; t <= w_max; ++t) above += counts[t];
      return std::min(1.0, 2.0 * std::min(below, above) / total);
    };
    const int w = static_cast<int>(std::lround(w_plus));
    p = two_sided(w);
    // Attained level of the next more extreme statistic (one step toward
    // the nearer tail); feeds the randomized-exact decision rule.
    const int toward_tail = 2 * w <= w_max ? w - 1 : w + 1;
    p_more_extreme =
        (toward_tail < 0 || toward_tail > w_max) ? 0.0 : two_sided(toward_tail);
    if (p_more_extreme >= p) p_more_extreme = p;
  } else {
    const double mu = b * (b + 1.0) / 4.0;
    const double var = b * (b + 1.0) * (2.0 * b + 1.0) / 24.0 - ties / 48.0;
    if (var <= 0.0) {
      p = 1.0;
    } else {
      // Continuity correction toward the mean.
      const double num = w_plus - mu;
      const double cc = num > 0.5 ? -0.5 : (num < -0.5 ? 0.5 : -num);
      const double z = (num + cc) / std::sqrt(var);
      p = std::erfc(std::abs(z) / M_SQRT2);
    }
  }
  return {w_plus, p, nominal_decision(p, level), TestMethod::wilcoxon,
          p_more_extreme};
}

int exact_randomized_decision(const TestResult& result, double level,
                              RandomStream& rng) {
  if (result.p_more_extreme < 0.0 || result.p_more_extreme >= result.p_value)
    return nominal_decision(result.p_value, level);
  if (result.p_value <= level) return 1;
  if (result.p_more_extreme >= level) return 0;
  const double frac = (level - result.p_more_extreme) /
                      (result.p_value - result.p_more_extreme);
  return rng.bernoulli(frac) ? 1 : 0;
}

TestResult kruskal_wallis(const std::vector<std::vector<double>>& groups,
                          double level) {
  if (groups.size() < 2)
    throw data_error("kruskal_wallis: needs at least 2 groups");
  std::vector<double> pooled;
  for (const auto& g : groups) {
    if (g.empty()) throw data_error("kruskal_wallis: empty group");
    pooled.insert(pooled.end(), g.begin(), g.end());
  }
  const double n = static_cast<double>(pooled.size());
  if (n < 3) throw data_error("kruskal_wallis: total sample size must be >= 3");

  const std::vector<double> ranks = midranks(pooled);
  double h = 0.0;
  std::size_t offset = 0;
  for (const auto& g : groups) {
    double rank_sum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) rank_sum += ranks[offset + i];
    h += rank_sum * rank_sum / static_cast<double>(g.size());
    offset += g.size();
  }
  h = 12.0 / (n * (n + 1.0)) * h - 3.0 * (n + 1.0);

  const double correction = 1.0 - tie_term(pooled) / (n * n * n - n);
  double p;
  if (correction <= 0.0) {
    h = 0.0;  // all observations identical
    p = 1.0;
  } else {
    h /= correction;
    const boost::math::chi_squared_distribution<double> chi2(
        static_cast<double>(groups.size()) - 1.0);
    p = cdf(complement(chi2, std::max(h, 0.0)));
  }
  return {h, p, nominal_decision(p, level), TestMethod::kruskal_wallis};
}

TestResult ZTest::run(const Dataset& data, double level) const {
  return z_test(data.values, mu0_, sigma_, level);
}

TestResult WilcoxonTest::run(const Dataset& data, double level) const {
  return wilcoxon_signed_rank(data.values, theta0_, level, exact_limit_);
}

TestResult KruskalWallisTest::run(const Dataset& data, double level) const {
  if (!data.grouped())
    throw data_error("kruskal_wallis: dataset has no group labels");
  std::map<int, std::vector<double>> by_group;
  for (std::size_t i = 0; i < data.values.size(); ++i)
    by_group[data.groups[i]].push_back(data.values[i]);
  std::vector<std::vector<double>> groups;
  groups.reserve(by_group.size());
  for (auto& [label, values] : by_group) groups.push_back(std::move(values));
  return kruskal_wallis(groups, level);
}

std::unique_ptr<BaseTest> make_base_test(const std::string& name, double mu0,
                                         double sigma, double theta0) {
  if (name == "z") return std::make_unique<ZTest>(mu0, sigma);
  if (name == "wilcoxon") return std::make_unique<WilcoxonTest>(theta0);
  if (name == "kw") return std::make_unique<KruskalWallisTest>();
  throw std::domain_error("unknown base test: " + name);
}

}  // namespace sarr

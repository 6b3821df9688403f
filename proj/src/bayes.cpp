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

#include "sarr/bayes.hpp"

#include <boost/math/distributions/beta.hpp>
#include <cmath>

#include "sarr/binom.hpp"
#include "sarr/quadrature.hpp"

namespace sarr {

namespace {

double laplace_cdf(double x, double scale) {
  if (x < 0.0) return 0.5 * std::exp(x / scale);
  return 1.0 - 0.5 * std::exp(-x / scale);
}

// E[f(G)] for G ~ Beta(mu*kappa, (1-mu)*kappa), integrating on the quantile
// scale so endpoint-singular densities (shapes < 1) stay benign.
double beta_expectation(const BetaMuKappa& prior,
                        const std::function<double(double)>& f) {
  const boost::math::beta_distribution<double> dist(prior.a(), prior.b());
  return integrate01([&](double u) { return f(quantile(dist, u)); }, 128);
}

const double kShrink = 0.8;  // study-design prior shrinkage factor

}  // namespace

void BetaMuKappa::validate() const {
  if (!(mu > 0.0 && mu < 1.0))
    throw std::domain_error("BetaMuKappa: mu must lie in (0, 1)");
  if (!(kappa > 0.0))
    throw std::domain_error("BetaMuKappa: kappa must be > 0");
}

PosteriorReport posterior_h1(int d, double prior_h1, double alpha,
                             double p_d1_given_h1) {
  if (d != 0 && d != 1) throw std::domain_error("posterior_h1: d must be binary");
  if (!(prior_h1 > 0.0 && prior_h1 < 1.0))
    throw std::domain_error("posterior_h1: prior must lie in (0, 1)");
  if (!(alpha >= 0.0 && alpha <= 1.0) ||
      !(p_d1_given_h1 >= 0.0 && p_d1_given_h1 <= 1.0))
    throw std::domain_error("posterior_h1: probabilities must lie in [0, 1]");

  const double prior_h0 = 1.0 - prior_h1;
  double posterior;
  if (d == 1) {
    posterior = prior_h1 * p_d1_given_h1 /
                (prior_h0 * alpha + prior_h1 * p_d1_given_h1);
  } else {
    posterior = prior_h1 * (1.0 - p_d1_given_h1) /
                (prior_h0 * (1.0 - alpha) + prior_h1 * (1.0 - p_d1_given_h1));
  }
  PosteriorReport report;
  report.p_h1_given_d = posterior;
  report.d = d;
  report.prior_h1 = prior_h1;
  report.alpha = alpha;
  report.p_d1_given_h1 = p_d1_given_h1;
  return report;
}

double p_d1_given_h1(int k, double p, const BetaMuKappa& prior) {
  prior.validate();
  return beta_expectation(prior,
                          [&](double g) { return rejection_prob(g, k, p); });
}

double unit_info_z_power(int b, double level) {
  if (!(level > 0.0 && level < 1.0))
    throw std::domain_error("unit_info_z_power: level must lie in (0, 1)");
  return integrate_gaussian(
      [&](double delta) { return z_power(delta, b, level); }, 64);
}

double expected_pvalue_z(int b) {
  if (b < 1) throw std::domain_error("expected_pvalue_z: b must be >= 1");
  const double sqrt_b = std::sqrt(static_cast<double>(b));
  return integrate_gaussian(
      [&](double delta) {
        const double shift = sqrt_b * delta;
        // E[p-value | delta]: the two-sided p as a function of the statistic
        // Z ~ Normal(sqrt(b) * delta, 1), integrated over Z.
        return integrate_gaussian(
            [&](double z) { return std::erfc(std::abs(z + shift) / M_SQRT2); },
            128);
      },
      64);
}

namespace {

const LaplaceMechanismConfig& require_calibrated(
    const LaplaceMechanismConfig* config, LaplaceKind kind) {
  if (config == nullptr || !config->calibrated() || config->kind != kind)
    throw std::domain_error(
        "table2 prior: competitor method needs a calibrated critical value");
  return *config;
}

}  // namespace

double table2_prior_power(PriorMethod method, int k, int b, double alpha0,
                          double epsilon,
                          const LaplaceMechanismConfig* laplace_config) {
  const double kappa = 2.0 * k + 1.0;
  switch (method) {
    case PriorMethod::truth:
      return kShrink * unit_info_z_power(b, alpha0);
    case PriorMethod::sarr: {
      const double p = solve_p(k, epsilon);
      const BetaMuKappa prior{kShrink * unit_info_z_power(b, alpha0), kappa};
      return p_d1_given_h1(k, p, prior);
    }
    case PriorMethod::avg_p: {
      const LaplaceMechanismConfig& config =
          require_calibrated(laplace_config, LaplaceKind::avg_p);
      const BetaMuKappa prior{kShrink * expected_pvalue_z(b), kappa};
      prior.validate();
      return beta_expectation(prior, [&](double pbar) {
        return laplace_cdf(config.critical_value - pbar, config.noise_scale());
      });
    }
    case PriorMethod::sum: {
      const LaplaceMechanismConfig& config =
          require_calibrated(laplace_config, LaplaceKind::sum);
      const BetaMuKappa prior{kShrink * unit_info_z_power(b, alpha0), kappa};
      prior.validate();
      const int m = 2 * k + 1;
      return beta_expectation(prior, [&](double g) {
        double acc = 0.0;
        for (int j = 0; j <= m; ++j) {
          acc += std::exp(log_binom_pmf(m, j, g)) *
                 (1.0 - laplace_cdf(config.critical_value - j,
                                    config.noise_scale()));
        }
        return acc;
      });
    }
  }
  throw std::domain_error("table2_prior_power: unknown method");
}

double table2_prior_power_mc(PriorMethod method, int k, int b, double alpha0,
                             double epsilon,
                             const LaplaceMechanismConfig* laplace_config,
                             long reps, RandomStream& rng) {
  const double kappa = 2.0 * k + 1.0;
  const int m = 2 * k + 1;
  double acc = 0.0;
  switch (method) {
    case PriorMethod::truth: {
      for (long r = 0; r < reps; ++r)
        acc += kShrink * z_power(rng.normal(), b, alpha0);
      return acc / reps;
    }
    case PriorMethod::sarr: {
      const double p = solve_p(k, epsilon);
      const BetaMuKappa prior{kShrink * unit_info_z_power(b, alpha0), kappa};
      prior.validate();
      for (long r = 0; r < reps; ++r) {
        const double g = rng.beta(prior.a(), prior.b());
        const double q = p * g + (1.0 - p) * (1.0 - g);
        int votes = 0;
        for (int i = 0; i < m; ++i) votes += rng.bernoulli(q) ? 1 : 0;
        acc += votes > k ? 1.0 : 0.0;
      }
      return acc / reps;
    }
    case PriorMethod::avg_p: {
      const LaplaceMechanismConfig& config =
          require_calibrated(laplace_config, LaplaceKind::avg_p);
      const BetaMuKappa prior{kShrink * expected_pvalue_z(b), kappa};
      prior.validate();
      for (long r = 0; r < reps; ++r) {
        const double pbar = rng.beta(prior.a(), prior.b());
        acc += pbar + rng.laplace(config.noise_scale()) < config.critical_value
                   ? 1.0
                   : 0.0;
      }
      return acc / reps;
    }
    case PriorMethod::sum: {
      const LaplaceMechanismConfig& config =
          require_calibrated(laplace_config, LaplaceKind::sum);
      const BetaMuKappa prior{kShrink * unit_info_z_power(b, alpha0), kappa};
      prior.validate();
      for (long r = 0; r < reps; ++r) {
        const double g = rng.beta(prior.a(), prior.b());
        int sum = 0;
        for (int i = 0; i < m; ++i) sum += rng.bernoulli(g) ? 1 : 0;
        acc += sum + rng.laplace(config.noise_scale()) > config.critical_value
                   ? 1.0
                   : 0.0;
      }
      return acc / reps;
    }
  }
  throw std::domain_error("table2_prior_power_mc: unknown method");
}

}  // namespace sarr

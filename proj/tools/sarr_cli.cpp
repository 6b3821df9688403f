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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sarr/sim.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitData = 4;

void print_config(const sarr::MechanismConfig& config, double epsilon) {
  std::printf("k       %d\n", config.k);
  std::printf("m       %d\n", config.m());
  std::printf("p       %.6f\n", config.p);
  std::printf("c       %d\n", config.c);
  std::printf("alpha0  %.6f\n", config.alpha0);
  std::printf("epsilon %.6f\n", sarr::epsilon_of(config.k, config.c, config.p));
  (void)epsilon;
}

int cmd_table1() {
  const std::vector<double> alphas{0.005, 0.01, 0.05, 0.1};
  const std::vector<double> epsilons{0.5, 0.75, 1.0, 1.25, 1.5};
  const auto table = sarr::table_min_k(alphas, epsilons);
  std::printf("%8s", "alpha");
  for (double eps : epsilons) std::printf("  eps=%-5.4g", eps);
  std::printf("\n");
  for (std::size_t r = 0; r < alphas.size(); ++r) {
    std::printf("%8.3f", alphas[r]);
    for (int k : table[r]) std::printf("  %-9d", k);
    std::printf("\n");
  }
  return 0;
}

std::ostream* open_or_stdout(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return &std::cout;
  file.open(path);
  if (!file) throw sarr::data_error("cannot open output file: " + path);
  return &file;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private hypothesis testing via subsampled "
               "randomized response"};
  app.require_subcommand(1);

  auto* table1 = app.add_subcommand("table1", "Minimal k over the standard "
                                             "(alpha, epsilon) grid");

  double epsilon = 1.0, alpha = 0.05, alpha0_min = 0.0;
  std::optional<int> k_opt;
  auto* calibrate = app.add_subcommand("calibrate",
                                       "Solve (k, p, alpha0) for a target");
  calibrate->add_option("--epsilon", epsilon, "privacy level")->required();
  calibrate->add_option("--alpha", alpha, "type I error target")->required();
  calibrate->add_option("--alpha0-min", alpha0_min,
                        "lower bound on the subset-test level");
  calibrate->add_option("--k", k_opt, "fix k instead of minimizing it");

  std::string input_path, test_name = "z", mech_name = "sarr";
  std::uint64_t seed = 1;
  long calibration_reps = 1000000;
  bool randomized_exact = false;
  auto* test_cmd = app.add_subcommand("test", "Run a private test on a file");
  test_cmd->add_option("--input", input_path, "dataset file")->required();
  test_cmd->add_option("--test", test_name, "base test: z, wilcoxon or kw");
  test_cmd->add_option("--mechanism", mech_name,
                       "sarr, avg_p, sum or gated_rr");
  test_cmd->add_option("--epsilon", epsilon, "privacy level")->required();
  test_cmd->add_option("--alpha", alpha, "type I error target")->required();
  test_cmd->add_option("--alpha0-min", alpha0_min,
                       "lower bound on the subset-test level");
  test_cmd->add_option("--k", k_opt, "fix k instead of minimizing it");
  test_cmd->add_option("--seed", seed, "random stream seed");
  test_cmd->add_option("--calibration-reps", calibration_reps,
                       "Laplace critical-value simulation size");
  test_cmd->add_flag("--randomized-exact", randomized_exact,
                     "randomize subset decisions to exact level");

  std::string spec_path, power_out, posterior_out, audit_out;
  std::optional<long> reps_override;
  std::optional<int> workers_override;
  auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo study");
  simulate->add_option("--spec", spec_path, "study spec (JSON)")->required();
  simulate->add_option("--power-out", power_out, "power CSV path (default stdout)");
  simulate->add_option("--posterior-out", posterior_out, "posterior CSV path");
  simulate->add_option("--audit-out", audit_out, "JSON-lines audit path");
  simulate->add_option("--reps", reps_override, "override spec reps");
  simulate->add_option("--workers", workers_override, "override spec workers");

  int d = 1;
  double prior_h1 = 0.5, p_d1_h1 = -1.0, prior_mu = -1.0, prior_kappa = -1.0;
  auto* bayes = app.add_subcommand("bayes", "Posterior probability of H1");
  bayes->add_option("--d", d, "observed decision")->required();
  bayes->add_option("--prior-h1", prior_h1, "prior P(H1)")->required();
  bayes->add_option("--alpha", alpha, "type I error of the mechanism")
      ->required();
  bayes->add_option("--p-d1-h1", p_d1_h1, "P(d=1 | H1)");
  bayes->add_option("--epsilon", epsilon, "privacy level (with --mu/--kappa)");
  bayes->add_option("--k", k_opt, "subset parameter (with --mu/--kappa)");
  bayes->add_option("--mu", prior_mu, "Beta prior mean for gamma0 under H1");
  bayes->add_option("--kappa", prior_kappa, "Beta prior concentration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (table1->parsed()) return cmd_table1();

    if (calibrate->parsed()) {
      sarr::CalibrationTarget target{epsilon, alpha, alpha0_min};
      sarr::MechanismConfig config;
      if (k_opt) {
        const double p = sarr::solve_p(*k_opt, epsilon);
        config = sarr::MechanismConfig{*k_opt, p, *k_opt,
                                       sarr::solve_alpha0(*k_opt, p, alpha)};
      } else {
        config = sarr::min_k(target).second;
      }
      print_config(config, epsilon);
      return 0;
    }

    if (test_cmd->parsed()) {
      const sarr::Dataset data = sarr::load_dataset(input_path);
      const auto base = sarr::make_base_test(test_name);
      sarr::RandomStream rng(seed);
      const sarr::CalibrationTarget target{epsilon, alpha, alpha0_min};
      const auto mode = randomized_exact
                            ? sarr::DecisionMode::randomized_exact
                            : sarr::DecisionMode::nominal;
      sarr::PrivateDecision decision;
      if (mech_name == "sarr") {
        decision = sarr::sarr_test(data, *base, target, k_opt, rng, mode);
      } else if (mech_name == "avg_p" || mech_name == "sum") {
        sarr::MechanismConfig config =
            k_opt ? sarr::MechanismConfig{
                        *k_opt, sarr::solve_p(*k_opt, epsilon), *k_opt,
                        sarr::solve_alpha0(
                            *k_opt, sarr::solve_p(*k_opt, epsilon), alpha)}
                  : sarr::min_k(target).second;
        sarr::RandomStream calib_rng(sarr::derive_seed(seed, {0xCA11B}));
        const auto lconfig = sarr::laplace_calibrate(
            mech_name == "avg_p" ? sarr::LaplaceKind::avg_p
                                 : sarr::LaplaceKind::sum,
            config.k, epsilon, alpha, config.alpha0, calibration_reps,
            calib_rng);
        decision = sarr::laplace_test(data, *base, lconfig, rng);
      } else if (mech_name == "gated_rr") {
        decision = sarr::gated_rr_test(data, *base, epsilon, alpha, alpha, rng);
      } else {
        std::cerr << "unknown mechanism: " << mech_name << "\n";
        return kExitUsage;
      }
      std::cout << sarr::audit_record(decision) << "\n";
      return 0;
    }

    if (simulate->parsed()) {
      sarr::StudySpec spec = sarr::StudySpec::load(spec_path);
      if (reps_override) spec.reps = *reps_override;
      if (workers_override) spec.workers = *workers_override;
      if (!audit_out.empty()) spec.audit = true;
      spec.validate();
      const sarr::StudyResult result = sarr::run_study(spec);
      {
        std::ofstream file;
        sarr::write_power_csv(*open_or_stdout(power_out, file), result.rows);
      }
      if (!posterior_out.empty()) {
        std::ofstream file;
        sarr::write_posterior_csv(*open_or_stdout(posterior_out, file),
                                  result.posteriors);
      }
      if (!audit_out.empty()) {
        std::ofstream file;
        std::ostream* os = open_or_stdout(audit_out, file);
        for (const std::string& line : result.audit) *os << line << "\n";
      }
      return 0;
    }

    if (bayes->parsed()) {
      double p = p_d1_h1;
      if (p < 0.0) {
        if (!k_opt || prior_mu <= 0.0 || prior_kappa <= 0.0) {
          std::cerr << "bayes: provide --p-d1-h1, or --k with --mu/--kappa\n";
          return kExitUsage;
        }
        const sarr::BetaMuKappa prior{prior_mu, prior_kappa};
        p = sarr::p_d1_given_h1(*k_opt, sarr::solve_p(*k_opt, epsilon), prior);
      }
      const auto report = sarr::posterior_h1(d, prior_h1, alpha, p);
      std::printf("d               %d\n", report.d);
      std::printf("prior_h1        %.6f\n", report.prior_h1);
      std::printf("alpha           %.6f\n", report.alpha);
      std::printf("p_d1_given_h1   %.6f\n", report.p_d1_given_h1);
      std::printf("posterior_h1    %.6f\n", report.p_h1_given_d);
      return 0;
    }
  } catch (const sarr::infeasible_error& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const sarr::data_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

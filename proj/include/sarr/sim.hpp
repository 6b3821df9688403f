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

#ifndef SARR_SIM_HPP
#define SARR_SIM_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sarr/bayes.hpp"
#include "sarr/dp_testing.hpp"

namespace sarr {

// --- Data generators for the study designs ---

// n iid draws of theta + Student-t(df) noise.
std::vector<double> gen_student_t_shift(int n, double theta, double df,
                                        RandomStream& rng);

// Three balanced groups of size b with unit variance and means
// (1, 1 + spacing, 1 + 2 * spacing).
Dataset gen_group_shift_normal(int b, double spacing, RandomStream& rng);

// The fixed-means (1, 2, 3) design.
Dataset gen_three_group_normal(int b, RandomStream& rng);

// n iid skew-normal(0, 1, theta) draws via the two-normal representation.
std::vector<double> gen_skew_normal(int n, double theta, RandomStream& rng);

// --- Study harness ---

enum class StudyKind { ztest_example1, wilcoxon_bayes, kruskal_wallis, custom };
enum class Mechanism { sarr, avg_p, sum, gated_rr, nonprivate };

std::string to_string(StudyKind kind);
std::string to_string(Mechanism mech);
StudyKind study_from_string(const std::string& s);
Mechanism mechanism_from_string(const std::string& s);

struct StudySpec {
  int schema_version = 1;
  StudyKind study = StudyKind::kruskal_wallis;
  std::vector<double> alphas{0.05};
  std::vector<double> epsilons{1.0};
  std::vector<double> effects{1.0};    // delta (z), theta (wilcoxon), group spacing (kw)
  std::vector<int> sample_sizes{105};  // total n per dataset
  long reps = 2000;
  std::uint64_t master_seed = 1;
  std::vector<Mechanism> mechanisms{Mechanism::sarr};
  long calibration_reps = 1000000;     // Laplace critical-value simulation
  std::optional<double> alpha0_min;    // defaults to alpha per cell when unset
  int workers = 1;
  bool audit = false;                  // collect per-decision audit records

  void validate() const;
  static StudySpec load(const std::string& path);
  static StudySpec parse(const std::string& json_text);
};

// One row of the power CSV. Infeasible cells carry a reason and NA estimates;
// they are always emitted, never dropped.
struct PowerRow {
  std::string study;
  std::string mechanism;
  double alpha = 0.0;
  double epsilon = 0.0;
  std::optional<int> k;
  std::optional<double> p;
  std::optional<double> alpha0;
  double effect = 0.0;
  int n = 0;
  std::optional<double> power;
  std::optional<double> se;  // sqrt(power * (1 - power) / reps)
  long reps = 0;
  std::uint64_t seed = 0;
  std::string note;  // empty, or the infeasibility reason

  bool feasible() const { return power.has_value(); }
};

// Posterior summary for the Bayesian Wilcoxon study.
struct PosteriorRow {
  std::string study;
  std::string mechanism;
  double alpha = 0.0;
  double epsilon = 0.0;
  std::optional<int> k;
  int b = 0;  // subgroup sample size feeding the prior
  double effect = 0.0;
  int n = 0;
  std::optional<double> p_d1_given_h1;
  std::optional<double> avg_posterior_h1;
  long reps = 0;
  std::uint64_t seed = 0;
  std::string note;
};

struct StudyResult {
  std::vector<PowerRow> rows;
  std::vector<PosteriorRow> posteriors;
  std::vector<std::string> audit;  // JSON-lines, one per private decision
};

// Calibrates each feasible (cell, mechanism) once, replicates with
// counter-derived seeds, and aggregates. Output is bit-identical for any
// worker count.
StudyResult run_study(const StudySpec& spec);

void write_power_csv(std::ostream& os, const std::vector<PowerRow>& rows);
void write_posterior_csv(std::ostream& os,
                         const std::vector<PosteriorRow>& rows);

// JSON audit record for a single private decision.
std::string audit_record(const PrivateDecision& decision);

// Delimited text loader: one record per line, "value" or "value,group"
// (comma or whitespace separated). '#' starts a comment.
Dataset load_dataset(const std::string& path);

}  // namespace sarr

#endif  // SARR_SIM_HPP

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

#include "sarr/sim.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace sarr {

std::vector<double> gen_student_t_shift(int n, double theta, double df,
                                        RandomStream& rng) {
  if (!(df > 0.0)) throw std::domain_error("gen_student_t_shift: df must be > 0");
  std::vector<double> out(n);
  for (double& y : out) y = theta + rng.student_t(df);
  return out;
}

Dataset gen_group_shift_normal(int b, double spacing, RandomStream& rng) {
  if (b < 1) throw std::domain_error("gen_group_shift_normal: b must be >= 1");
  Dataset data;
  data.values.reserve(3 * b);
  data.groups.reserve(3 * b);
  for (int g = 0; g < 3; ++g) {
    const double mean = 1.0 + spacing * g;
    for (int i = 0; i < b; ++i) {
      data.values.push_back(rng.normal(mean, 1.0));
      data.groups.push_back(g);
    }
  }
  return data;
}

Dataset gen_three_group_normal(int b, RandomStream& rng) {
  return gen_group_shift_normal(b, 1.0, rng);
}

std::vector<double> gen_skew_normal(int n, double theta, RandomStream& rng) {
  const double delta = theta / std::sqrt(1.0 + theta * theta);
  const double comp = std::sqrt(1.0 - delta * delta);
  std::vector<double> out(n);
  for (double& y : out) {
    const double u1 = rng.normal();
    const double u2 = rng.normal();
    y = delta * std::abs(u1) + comp * u2;
  }
  return out;
}

std::string to_string(StudyKind kind) {
  switch (kind) {
    case StudyKind::ztest_example1: return "ztest_example1";
    case StudyKind::wilcoxon_bayes: return "wilcoxon_bayes";
    case StudyKind::kruskal_wallis: return "kruskal_wallis";
    case StudyKind::custom: return "custom";
  }
  return "?";
}

std::string to_string(Mechanism mech) {
  switch (mech) {
    case Mechanism::sarr: return "sarr";
    case Mechanism::avg_p: return "avg_p";
    case Mechanism::sum: return "sum";
    case Mechanism::gated_rr: return "gated_rr";
    case Mechanism::nonprivate: return "nonprivate";
  }
  return "?";
}

StudyKind study_from_string(const std::string& s) {
  if (s == "ztest_example1") return StudyKind::ztest_example1;
  if (s == "wilcoxon_bayes") return StudyKind::wilcoxon_bayes;
  if (s == "kruskal_wallis") return StudyKind::kruskal_wallis;
  if (s == "custom") return StudyKind::custom;
  throw std::domain_error("unknown study: " + s);
}

Mechanism mechanism_from_string(const std::string& s) {
  if (s == "sarr") return Mechanism::sarr;
  if (s == "avg_p") return Mechanism::avg_p;
  if (s == "sum") return Mechanism::sum;
  if (s == "gated_rr") return Mechanism::gated_rr;
  if (s == "nonprivate") return Mechanism::nonprivate;
  throw std::domain_error("unknown mechanism: " + s);
}

void StudySpec::validate() const {
  if (schema_version != 1)
    throw std::domain_error("StudySpec: unsupported schema_version");
  if (reps < 1) throw std::domain_error("StudySpec: reps must be >= 1");
  if (alphas.empty() || epsilons.empty() || effects.empty() ||
      sample_sizes.empty() || mechanisms.empty())
    throw std::domain_error("StudySpec: grids must be nonempty");
  if (workers < 1) throw std::domain_error("StudySpec: workers must be >= 1");
}

StudySpec StudySpec::parse(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  StudySpec spec;
  spec.schema_version = j.value("schema_version", 1);
  spec.study = study_from_string(j.at("study").get<std::string>());
  if (j.contains("alphas")) spec.alphas = j["alphas"].get<std::vector<double>>();
  if (j.contains("epsilons"))
    spec.epsilons = j["epsilons"].get<std::vector<double>>();
  if (j.contains("effects"))
    spec.effects = j["effects"].get<std::vector<double>>();
  if (j.contains("sample_sizes"))
    spec.sample_sizes = j["sample_sizes"].get<std::vector<int>>();
  spec.reps = j.value("reps", 2000L);
  spec.master_seed = j.value("master_seed", std::uint64_t{1});
  if (j.contains("mechanisms")) {
    spec.mechanisms.clear();
    for (const auto& m : j["mechanisms"])
      spec.mechanisms.push_back(mechanism_from_string(m.get<std::string>()));
  }
  spec.calibration_reps = j.value("calibration_reps", 1000000L);
  if (j.contains("alpha0_min") && !j["alpha0_min"].is_null())
    spec.alpha0_min = j["alpha0_min"].get<double>();
  spec.workers = j.value("workers", 1);
  spec.audit = j.value("audit", false);
  spec.validate();
  return spec;
}

StudySpec StudySpec::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open study spec: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open dataset: " + path);
  Dataset data;
  bool any_group = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    for (char& c : line)
      if (c == ',' || c == '\t') c = ' ';
    std::istringstream ls(line);
    double value;
    if (!(ls >> value)) {
      std::string token;
      if (std::istringstream(line) >> token)
        throw data_error("bad value at line " + std::to_string(lineno) +
                         " of " + path);
      continue;  // blank line
    }
    int group;
    if (ls >> group) {
      any_group = true;
      data.groups.resize(data.values.size(), 0);
      data.groups.push_back(group);
    } else if (any_group) {
      throw data_error("missing group label at line " + std::to_string(lineno));
    }
    data.values.push_back(value);
  }
  if (data.values.empty()) throw data_error("empty dataset: " + path);
  if (any_group && data.groups.size() != data.values.size())
    throw data_error("inconsistent group labels in " + path);
  return data;
}

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

std::string opt_fmt(const std::optional<double>& x) {
  return x ? fmt(*x) : std::string("NA");
}

std::string opt_fmt(const std::optional<int>& x) {
  return x ? std::to_string(*x) : std::string("NA");
}

// Everything fixed for one (alpha, epsilon, effect, n) cell and mechanism.
struct MechPlan {
  Mechanism mech = Mechanism::sarr;
  bool feasible = false;
  std::string note;
  MechanismConfig config;          // sarr / gated_rr
  LaplaceMechanismConfig laplace;  // avg_p / sum
};

struct Cell {
  double alpha = 0.0;
  double epsilon = 0.0;
  double effect = 0.0;
  int n = 0;
  std::vector<MechPlan> plans;
};

std::unique_ptr<BaseTest> study_test(StudyKind study) {
  switch (study) {
    case StudyKind::ztest_example1: return std::make_unique<ZTest>(0.0, 1.0);
    case StudyKind::wilcoxon_bayes:
    case StudyKind::custom: return std::make_unique<WilcoxonTest>(0.0);
    case StudyKind::kruskal_wallis: return std::make_unique<KruskalWallisTest>();
  }
  throw std::domain_error("study_test: unknown study");
}

Dataset study_data(StudyKind study, double effect, int n, RandomStream& rng) {
  switch (study) {
    case StudyKind::ztest_example1: {
      Dataset d;
      d.values.resize(n);
      for (double& y : d.values) y = rng.normal(effect, 1.0);
      return d;
    }
    case StudyKind::wilcoxon_bayes: {
      Dataset d;
      d.values = gen_student_t_shift(n, effect, 1.5, rng);
      return d;
    }
    case StudyKind::kruskal_wallis:
      return gen_group_shift_normal(n / 3, effect, rng);
    case StudyKind::custom: {
      Dataset d;
      d.values = gen_skew_normal(n, effect, rng);
      return d;
    }
  }
  throw std::domain_error("study_data: unknown study");
}

// m-subset feasibility for the data shape of this study.
void check_partition(StudyKind study, const BaseTest& test, int n, int m) {
  if (m > n) throw infeasible_error("sample too small for 2k+1 subsets");
  if (study == StudyKind::kruskal_wallis) {
    // The subset-level test needs min_subset_size observations from every
    // group, not just in total; below that the subsets carry no signal.
    if (n / 3 < m * static_cast<int>(test.min_subset_size()))
      throw infeasible_error(
          "fewer than 3 observations per group per subset");
  } else if (static_cast<std::size_t>(n / m) < test.min_subset_size()) {
    throw infeasible_error("subset size below base-test minimum");
  }
}

MechPlan plan_mechanism(const StudySpec& spec, const BaseTest& test,
                        Mechanism mech, const Cell& cell, std::size_t cell_idx,
                        std::size_t mech_idx) {
  MechPlan plan;
  plan.mech = mech;
  const double alpha0_min = spec.alpha0_min.value_or(cell.alpha);
  try {
    switch (mech) {
      case Mechanism::nonprivate:
        plan.feasible = true;
        break;
      case Mechanism::gated_rr:
        gated_rr_rho(cell.epsilon, cell.alpha, cell.alpha);  // throws if > 1
        plan.config = MechanismConfig{
            0, std::exp(cell.epsilon) / (1.0 + std::exp(cell.epsilon)), 0,
            cell.alpha};
        plan.feasible = true;
        break;
      case Mechanism::sarr:
      case Mechanism::avg_p:
      case Mechanism::sum: {
        // All data-splitting mechanisms share the heuristic's k (and, head to
        // head, SARR's alpha0 for the sum variant).
        CalibrationTarget target{cell.epsilon, cell.alpha, alpha0_min};
        plan.config = min_k(target).second;
        check_partition(spec.study, test, cell.n, plan.config.m());
        if (mech != Mechanism::sarr) {
          RandomStream calib_rng(derive_seed(
              spec.master_seed, {0xCA11B, cell_idx, mech_idx}));
          plan.laplace = laplace_calibrate(
              mech == Mechanism::avg_p ? LaplaceKind::avg_p : LaplaceKind::sum,
              plan.config.k, cell.epsilon, cell.alpha, plan.config.alpha0,
              spec.calibration_reps, calib_rng);
        }
        plan.feasible = true;
        break;
      }
    }
  } catch (const infeasible_error& e) {
    plan.note = e.what();
  }
  return plan;
}

int run_one(const StudySpec& spec, const BaseTest& test, const Cell& cell,
            const MechPlan& plan, RandomStream& rng, PrivateDecision* audit) {
  const Dataset data = study_data(spec.study, cell.effect, cell.n, rng);
  PrivateDecision decision;
  switch (plan.mech) {
    case Mechanism::nonprivate: {
      const TestResult r = test.run(data, cell.alpha);
      decision.d = r.decision;
      decision.alpha = cell.alpha;
      decision.mechanism = "nonprivate";
      decision.seed = rng.seed();
      break;
    }
    case Mechanism::gated_rr:
      decision = gated_rr_test(data, test, cell.epsilon, cell.alpha,
                               cell.alpha, rng);
      break;
    case Mechanism::sarr:
      decision = sarr_test_with_config(data, test, plan.config, cell.alpha, rng);
      break;
    case Mechanism::avg_p:
    case Mechanism::sum:
      decision = laplace_test(data, test, plan.laplace, rng);
      break;
  }
  if (audit != nullptr) *audit = decision;
  return decision.d;
}

}  // namespace

std::string audit_record(const PrivateDecision& decision) {
  nlohmann::json j;
  j["mechanism"] = decision.mechanism;
  j["epsilon"] = decision.epsilon;
  j["alpha"] = decision.alpha;
  j["k"] = decision.config.k;
  j["p"] = decision.config.p;
  j["alpha0"] = decision.config.alpha0;
  j["decision"] = decision.d;
  j["seed"] = decision.seed;
  return j.dump();
}

StudyResult run_study(const StudySpec& spec) {
  spec.validate();
  const std::unique_ptr<BaseTest> test = study_test(spec.study);

  // Build the cell grid and calibrate every (cell, mechanism) pair up front.
  std::vector<Cell> cells;
  for (double alpha : spec.alphas)
    for (double eps : spec.epsilons)
      for (double effect : spec.effects)
        for (int n : spec.sample_sizes) {
          Cell cell;
          cell.alpha = alpha;
          cell.epsilon = eps;
          cell.effect = effect;
          cell.n = n;
          cells.push_back(cell);
        }
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (std::size_t m = 0; m < spec.mechanisms.size(); ++m)
      cells[c].plans.push_back(
          plan_mechanism(spec, *test, spec.mechanisms[m], cells[c], c, m));

  // Flatten replicates into jobs; each job derives its own stream.
  struct Job {
    std::size_t cell, mech;
    long rep;
  };
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (std::size_t m = 0; m < cells[c].plans.size(); ++m)
      if (cells[c].plans[m].feasible)
        for (long r = 0; r < spec.reps; ++r) jobs.push_back({c, m, r});

  std::vector<signed char> results(jobs.size(), 0);
  std::vector<std::string> audit_lines(spec.audit ? jobs.size() : 0);

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t j = next.fetch_add(1);
      if (j >= jobs.size()) break;
      const Job& job = jobs[j];
      const Cell& cell = cells[job.cell];
      const MechPlan& plan = cell.plans[job.mech];
      RandomStream rng(derive_seed(
          spec.master_seed,
          {job.cell, job.mech, static_cast<std::uint64_t>(job.rep) + 1}));
      PrivateDecision decision;
      results[j] = static_cast<signed char>(run_one(
          spec, *test, cell, plan, rng, spec.audit ? &decision : nullptr));
      if (spec.audit) audit_lines[j] = audit_record(decision);
    }
  };
  if (spec.workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < spec.workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Aggregate in deterministic (cell, mechanism) order.
  StudyResult out;
  std::size_t job_pos = 0;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const Cell& cell = cells[c];
    for (std::size_t m = 0; m < cell.plans.size(); ++m) {
      const MechPlan& plan = cell.plans[m];
      PowerRow row;
      row.study = to_string(spec.study);
      row.mechanism = to_string(plan.mech);
      row.alpha = cell.alpha;
      row.epsilon = cell.epsilon;
      row.effect = cell.effect;
      row.n = cell.n;
      row.seed = derive_seed(spec.master_seed, {c, m});
      row.note = plan.note;
      if (plan.feasible) {
        double hits = 0.0;
        for (long r = 0; r < spec.reps; ++r) hits += results[job_pos + r];
        if (spec.audit)
          out.audit.insert(out.audit.end(), audit_lines.begin() + job_pos,
                           audit_lines.begin() + job_pos + spec.reps);
        job_pos += spec.reps;
        const double power = hits / static_cast<double>(spec.reps);
        row.power = power;
        row.se = std::sqrt(power * (1.0 - power) / spec.reps);
        row.reps = spec.reps;
        if (plan.mech == Mechanism::sarr || plan.mech == Mechanism::gated_rr) {
          row.k = plan.config.k;
          row.p = plan.config.p;
          row.alpha0 = plan.config.alpha0;
        } else if (plan.mech != Mechanism::nonprivate) {
          row.k = plan.laplace.k;
          row.alpha0 = plan.laplace.alpha0;
        }
      }
      out.rows.push_back(row);

      if (spec.study == StudyKind::wilcoxon_bayes &&
          plan.mech != Mechanism::gated_rr) {
        PosteriorRow prow;
        prow.study = row.study;
        prow.mechanism = row.mechanism;
        prow.alpha = cell.alpha;
        prow.epsilon = cell.epsilon;
        prow.effect = cell.effect;
        prow.n = cell.n;
        prow.k = row.k;
        prow.reps = row.reps;
        prow.seed = row.seed;
        prow.note = plan.note;
        if (plan.feasible) {
          PriorMethod method = PriorMethod::truth;
          int b = cell.n;
          double alpha0 = cell.alpha;
          const LaplaceMechanismConfig* lcfg = nullptr;
          if (plan.mech == Mechanism::sarr) {
            method = PriorMethod::sarr;
            b = cell.n / plan.config.m();
            alpha0 = plan.config.alpha0;
          } else if (plan.mech == Mechanism::avg_p) {
            method = PriorMethod::avg_p;
            b = cell.n / plan.laplace.m();
            lcfg = &plan.laplace;
          } else if (plan.mech == Mechanism::sum) {
            method = PriorMethod::sum;
            b = cell.n / plan.laplace.m();
            alpha0 = plan.laplace.alpha0;
            lcfg = &plan.laplace;
          }
          prow.b = b;
          const double p_d1 =
              table2_prior_power(method, plan.mech == Mechanism::nonprivate
                                             ? 0
                                             : (row.k ? *row.k : 0),
                                 b, alpha0, cell.epsilon, lcfg);
          prow.p_d1_given_h1 = p_d1;
          const double post1 =
              posterior_h1(1, 0.5, cell.alpha, p_d1).p_h1_given_d;
          const double post0 =
              posterior_h1(0, 0.5, cell.alpha, p_d1).p_h1_given_d;
          prow.avg_posterior_h1 = *row.power * post1 + (1.0 - *row.power) * post0;
        }
        out.posteriors.push_back(prow);
      }
    }
  }
  return out;
}

void write_power_csv(std::ostream& os, const std::vector<PowerRow>& rows) {
  os << "study,mechanism,alpha,epsilon,k,p,alpha0,effect,n,power,se,reps,seed\n";
  for (const PowerRow& r : rows) {
    os << r.study << ',' << r.mechanism << ',' << fmt(r.alpha) << ','
       << fmt(r.epsilon) << ',' << opt_fmt(r.k) << ',' << opt_fmt(r.p) << ','
       << opt_fmt(r.alpha0) << ',' << fmt(r.effect) << ',' << r.n << ','
       << opt_fmt(r.power) << ',' << opt_fmt(r.se) << ',' << r.reps << ','
       << r.seed << '\n';
  }
}

void write_posterior_csv(std::ostream& os,
                         const std::vector<PosteriorRow>& rows) {
  os << "study,mechanism,alpha,epsilon,k,b,effect,n,p_d1_given_h1,"
        "avg_posterior_h1,reps,seed\n";
  for (const PosteriorRow& r : rows) {
    os << r.study << ',' << r.mechanism << ',' << fmt(r.alpha) << ','
       << fmt(r.epsilon) << ',' << opt_fmt(r.k) << ',' << r.b << ','
       << fmt(r.effect) << ',' << r.n << ',' << opt_fmt(r.p_d1_given_h1) << ','
       << opt_fmt(r.avg_posterior_h1) << ',' << r.reps << ',' << r.seed
       << '\n';
  }
}

}  // namespace sarr

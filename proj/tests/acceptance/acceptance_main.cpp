// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Expected values and tolerances are frozen here; the suite invokes
// the CLI binary (PCS_CLI_PATH) where the contract is about file outputs.

#include <sys/wait.h>
#include <unistd.h>

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "pcs/benchmark.hpp"
#include "pcs/config.hpp"
#include "pcs/csv.hpp"
#include "pcs/report_io.hpp"

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

constexpr std::uint64_t kMasterSeed = 20240101;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

pcs::DataMatrix gaussian_fixture(int n, int p, int active, double sd,
                                 std::uint64_t seed) {
  pcs::RngStream rng(seed);
  Eigen::MatrixXd x(n, p);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) x(i, j) = rng.normal();
  for (int i = 0; i < n; ++i) {
    double mu = 0.0;
    for (int j = 0; j < active; ++j) mu += x(i, j);
    y(i) = mu + sd * rng.normal();
  }
  return pcs::make_data_matrix(std::move(x), std::move(y),
                               pcs::default_feature_names(p));
}

nlohmann::json engine_config_json(int B, int nlambda, int k,
                                  std::uint64_t seed) {
  return nlohmann::json{
      {"target", "selected_features"},
      {"perturbations",
       {{"data", {{"kind", "bootstrap"}, {"B", B}}},
        {"model", {{"nlambda", nlambda}, {"min_ratio", "auto"}}}}},
      {"split", {{"fraction", 0.5}}},
      {"metric", "l2"},
      {"screening", {{"rule", "top_k"}, {"k", k}}},
      {"master_seed", seed}};
}

// ---------------------------------------------------------------------------
// 1. Solver correctness: KKT on random instances, closed forms on
//    orthonormal designs, normal equations at lambda = 0. Runtime < 10 s.
bool criterion_solver(std::string& detail) {
  const auto start = Clock::now();

  for (std::uint64_t rep = 0; rep < 50; ++rep) {
    const auto data = gaussian_fixture(50, 20, 3, 1.0, 100 + rep);
    pcs::LassoSolver solver(data);
    pcs::RngStream rng(900 + rep);
    const double lambda =
        solver.lambda_max() * (0.01 + 0.98 * rng.uniform());
    const auto fit = solver.fit(lambda);
    if (!fit.converged) {
      detail = "fit did not converge";
      return false;
    }
    const Eigen::VectorXd resid =
        data.y - (data.x * fit.beta).eval() -
        Eigen::VectorXd::Constant(data.n(), fit.intercept);
    for (Eigen::Index j = 0; j < data.p(); ++j) {
      const double g = data.x.col(j).dot(resid) / 50.0;
      const double violation =
          fit.beta(j) != 0.0
              ? std::abs(g - lambda * (fit.beta(j) > 0 ? 1.0 : -1.0))
              : std::max(0.0, std::abs(g) - lambda);
      if (violation > 1e-6) {
        detail = "KKT violation " + std::to_string(violation);
        return false;
      }
    }
  }

  // Orthonormal designs: coefficients equal soft thresholding within 1e-8.
  for (std::uint64_t rep = 0; rep < 5; ++rep) {
    const int n = 60, p = 8;
    pcs::RngStream rng(2000 + rep);
    Eigen::MatrixXd raw(n, p + 1);
    raw.col(0).setOnes();
    for (int i = 0; i < n; ++i)
      for (int j = 1; j <= p; ++j) raw(i, j) = rng.normal();
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(raw);
    const Eigen::MatrixXd q =
        qr.householderQ() * Eigen::MatrixXd::Identity(n, p + 1);
    Eigen::MatrixXd x = q.rightCols(p) * std::sqrt(static_cast<double>(n));
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) y(i) = rng.normal();
    const auto data = pcs::make_data_matrix(x, y,
                                            pcs::default_feature_names(p));

    const double y_mean = y.mean();
    const Eigen::VectorXd z =
        x.transpose() * (y.array() - y_mean).matrix() / static_cast<double>(n);
    for (const double lambda : {0.02, 0.1, 0.3}) {
      const auto fit = pcs::fit_lasso(data, lambda);
      for (int j = 0; j < p; ++j) {
        const double expect =
            std::abs(z(j)) > lambda
                ? (z(j) > 0 ? z(j) - lambda : z(j) + lambda)
                : 0.0;
        if (std::abs(fit.beta(j) - expect) > 1e-8) {
          detail = "soft-threshold mismatch";
          return false;
        }
      }
    }
  }

  // lambda = 0 with full rank: match the normal equations within 1e-6.
  for (std::uint64_t rep = 0; rep < 5; ++rep) {
    const auto data = gaussian_fixture(50, 5, 2, 1.0, 3000 + rep);
    const auto fit = pcs::fit_lasso(data, 0.0);
    Eigen::MatrixXd design(50, 6);
    design.col(0).setOnes();
    design.rightCols(5) = data.x;
    const Eigen::VectorXd coef =
        (design.transpose() * design)
            .ldlt()
            .solve(design.transpose() * data.y);
    if (std::abs(fit.intercept - coef(0)) > 1e-6) {
      detail = "OLS intercept mismatch";
      return false;
    }
    for (int j = 0; j < 5; ++j) {
      if (std::abs(fit.beta(j) - coef(j + 1)) > 1e-6) {
        detail = "OLS coefficient mismatch";
        return false;
      }
    }
  }

  const double elapsed = seconds_since(start);
  detail = "60 instances, " + std::to_string(elapsed) + " s";
  return elapsed < 10.0;
}

// ---------------------------------------------------------------------------
// 2. Stability scores equal an independent recount over the stored grid,
//    exactly. Runtime < 1 s.
bool criterion_score_oracle(std::string& detail) {
  const auto start = Clock::now();
  const auto data = gaussian_fixture(60, 10, 3, 0.5, 42);
  const auto standardized = pcs::standardize(data);
  const auto path = pcs::compute_lambda_path(standardized, 20);
  pcs::LambdaPath p = path;
  const auto plan = pcs::build_plan(p, 5, std::nullopt, pcs::SeedSpec{7});

  pcs::ScreeningRule rule;
  rule.kind = pcs::ScreeningRule::Kind::top_k;
  rule.k = 3;
  const auto screening = pcs::screen_models(
      plan.model_perturbations, standardized, pcs::CvEval{5, 11}, rule);
  const auto dist = pcs::compute_target_distribution(
      standardized, screening.survivors, plan, 2);
  const auto report = pcs::stability_scores(dist);

  if (dist.entries.size() != 15) {
    detail = "grid incomplete";
    return false;
  }
  std::vector<long> counts(10, 0);
  for (const auto& e : dist.entries)
    for (int j : e.selected) ++counts[static_cast<std::size_t>(j)];
  for (int j = 0; j < 10; ++j) {
    const double recount =
        static_cast<double>(counts[static_cast<std::size_t>(j)]) / 15.0;
    if (report.scores[static_cast<std::size_t>(j)] != recount) {
      detail = "score mismatch at feature " + std::to_string(j);
      return false;
    }
  }
  const double elapsed = seconds_since(start);
  detail = "B=5 x 3 survivors x p=10, exact, " + std::to_string(elapsed) + " s";
  return elapsed < 1.0;
}

// ---------------------------------------------------------------------------
// 3. Screening keeps exactly k survivors in top-k mode and partitions
//    candidates exactly at tau in threshold mode.
bool criterion_screening(std::string& detail) {
  const auto data = gaussian_fixture(150, 12, 3, 0.8, 55);
  const auto standardized = pcs::standardize(data);
  const auto split_result = pcs::split(standardized, 0.5, pcs::SeedSpec{56});
  const auto halves = pcs::swap_halves(standardized, split_result);

  const auto path = pcs::compute_lambda_path(halves[0].first, 100);
  pcs::LambdaPath p = path;
  const auto candidates =
      pcs::build_plan(p, 1, std::nullopt, pcs::SeedSpec{0}).model_perturbations;
  if (candidates.size() != 100) {
    detail = "expected 100 candidates";
    return false;
  }

  pcs::ScreeningRule top10;
  top10.kind = pcs::ScreeningRule::Kind::top_k;
  top10.k = 10;
  const auto ranked = pcs::screen_models(candidates, halves[0].first,
                                         pcs::HoldoutEval{halves[0].second},
                                         top10);
  if (ranked.survivors.size() != 10) {
    detail = "top_k=10 kept " + std::to_string(ranked.survivors.size());
    return false;
  }

  const double tau = ranked.errors[40].error;  // mid-pack threshold
  pcs::ScreeningRule threshold;
  threshold.kind = pcs::ScreeningRule::Kind::threshold;
  threshold.tau = tau;
  const auto cut = pcs::screen_models(candidates, halves[0].first,
                                      pcs::HoldoutEval{halves[0].second},
                                      threshold);
  std::vector<std::string> surviving;
  for (const auto& m : cut.survivors) surviving.push_back(m.model_id);
  for (const auto& e : ranked.errors) {
    const bool in = std::find(surviving.begin(), surviving.end(),
                              e.model_id) != surviving.end();
    if (in != (e.error < tau)) {
      detail = "partition broken at tau";
      return false;
    }
  }
  detail = "10 of 100 survive; threshold splits exactly at tau";
  return true;
}

// ---------------------------------------------------------------------------
// 4. Desk-scale replication: iid Gaussian, n=250, p=55, B=50, top-10,
//    20 replicates. PCS mean AUC >= OLS mean AUC and >= 0.85. < 5 min.
bool criterion_desk_scale(std::string& detail) {
  const auto start = Clock::now();
  nlohmann::json config;
  config["replicates"] = 20;
  config["methods"] = {"pcs", "ols_baseline"};
  config["master_seed"] = kMasterSeed;
  config["sim"] = {{"setting", "gaussian"},
                   {"n", 250},
                   {"p_base", 10},
                   {"noise", {{"sd", 1.0}}}};
  auto engine = engine_config_json(50, 100, 10, kMasterSeed);
  engine.erase("master_seed");
  config["pcs"] = engine;

  const auto job = pcs::parse_roc_config(config, -1, 4);
  const auto result = pcs::run_roc_benchmark(job);

  double pcs_auc = 0.0, ols_auc = 0.0;
  for (const auto& m : result.methods) {
    if (m.method == "pcs") pcs_auc = m.auc_mean;
    if (m.method == "ols_baseline") ols_auc = m.auc_mean;
  }
  const double elapsed = seconds_since(start);
  std::ostringstream ss;
  ss << "PCS AUC " << pcs_auc << " vs OLS " << ols_auc << ", " << elapsed
     << " s";
  detail = ss.str();
  return pcs_auc >= ols_auc && pcs_auc >= 0.85 && elapsed < 300.0;
}

// ---------------------------------------------------------------------------
// 5. Same scale under drop_active(k=3): PCS mean AUC >= OLS mean AUC.
bool criterion_misspecified(std::string& detail) {
  const auto start = Clock::now();
  nlohmann::json config;
  config["replicates"] = 20;
  config["methods"] = {"pcs", "ols_baseline"};
  config["master_seed"] = kMasterSeed;
  config["sim"] = {{"setting", "drop_active"},
                   {"n", 250},
                   {"p_base", 10},
                   {"noise", {{"sd", 1.0}}},
                   {"misspec", {{"drop_k", 3}}}};
  auto engine = engine_config_json(50, 100, 10, kMasterSeed);
  engine.erase("master_seed");
  config["pcs"] = engine;

  const auto job = pcs::parse_roc_config(config, -1, 4);
  const auto result = pcs::run_roc_benchmark(job);

  double pcs_auc = 0.0, ols_auc = 0.0;
  for (const auto& m : result.methods) {
    if (m.method == "pcs") pcs_auc = m.auc_mean;
    if (m.method == "ols_baseline") ols_auc = m.auc_mean;
  }
  const double elapsed = seconds_since(start);
  std::ostringstream ss;
  ss << "PCS AUC " << pcs_auc << " vs OLS " << ols_auc << ", " << elapsed
     << " s";
  detail = ss.str();
  return pcs_auc >= ols_auc && elapsed < 300.0;
}

// ---------------------------------------------------------------------------
// 6. Hypothesis-test contrast on a strong-signal fixture: in >= 18 of 20
//    replicates every active feature scores higher on D than on D0. < 2 min.
bool criterion_hypotest(std::string& detail) {
  const auto start = Clock::now();
  int clean = 0;
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    const auto data = gaussian_fixture(200, 20, 4, 0.25, 4000 + rep);
    const auto config = pcs::parse_engine_config(
        engine_config_json(25, 50, 10, 6000 + rep), -1, 4);
    pcs::NullSpec null_spec;
    null_spec.kind = pcs::NullSpec::Kind::permute_response;
    const auto result = pcs::pcs_hypothesis_test(data, null_spec, config);

    bool all_above = true;
    for (int j = 0; j < 4; ++j) {
      if (result.observed.scores[static_cast<std::size_t>(j)] <=
          result.null_report.scores[static_cast<std::size_t>(j)])
        all_above = false;
    }
    if (all_above) ++clean;
  }
  const double elapsed = seconds_since(start);
  detail = std::to_string(clean) + "/20 replicates separated, " +
           std::to_string(elapsed) + " s";
  return clean >= 18 && elapsed < 120.0;
}

// ---------------------------------------------------------------------------
// 7. cmd_analyze with --threads 1 and --threads 8 writes byte-identical
//    reports on three fixtures.
bool criterion_determinism(std::string& detail) {
  const fs::path dir =
      fs::temp_directory_path() /
      ("pcs_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);

  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };

  bool ok = true;
  for (int f = 0; f < 3 && ok; ++f) {
    const auto csv = dir / ("fixture" + std::to_string(f) + ".csv");
    pcs::write_csv(csv, gaussian_fixture(60 + 10 * f, 5 + f, 2, 0.5,
                                         8000 + f));
    nlohmann::json config = engine_config_json(10, 20, 5, 9000 + f);
    config["data"] = {{"csv", csv.string()}, {"response", "y"}};
    const auto config_path = dir / ("config" + std::to_string(f) + ".json");
    std::ofstream(config_path) << config.dump();

    const auto out1 = dir / ("t1_" + std::to_string(f));
    const auto out8 = dir / ("t8_" + std::to_string(f));
    const std::string base = std::string(PCS_CLI_PATH) + " analyze --config " +
                             config_path.string();
    if (std::system((base + " --threads 1 --out " + out1.string() +
                     " >/dev/null 2>&1").c_str()) != 0 ||
        std::system((base + " --threads 8 --out " + out8.string() +
                     " >/dev/null 2>&1").c_str()) != 0) {
      detail = "CLI run failed on fixture " + std::to_string(f);
      ok = false;
      break;
    }
    if (slurp(out1 / "report.json") != slurp(out8 / "report.json")) {
      detail = "reports differ on fixture " + std::to_string(f);
      ok = false;
    }
  }
  fs::remove_all(dir);
  if (ok) detail = "3 fixtures byte-identical across thread counts";
  return ok;
}

// ---------------------------------------------------------------------------
// 8. Null-feature OLS p-values are uniform: KS distance < 0.05 over 500
//    seeds at n = 10^4. Runtime < 1 min.
bool criterion_calibration(std::string& detail) {
  const auto start = Clock::now();
  const pcs::SeedSpec seed{kMasterSeed};
  std::vector<double> pvals;
  pvals.reserve(500);
  for (int rep = 0; rep < 500; ++rep) {
    pcs::RngStream rng(seed.child("calibration", rep));
    Eigen::MatrixXd x(10000, 3);
    Eigen::VectorXd y(10000);
    for (int i = 0; i < 10000; ++i) {
      for (int j = 0; j < 3; ++j) x(i, j) = rng.normal();
      y(i) = rng.normal();  // independent of every feature
    }
    const auto data = pcs::make_data_matrix(std::move(x), std::move(y),
                                            pcs::default_feature_names(3));
    pvals.push_back(pcs::baseline_ols_pvalues(data, {0, 1, 2}).pvalues(0));
  }
  std::sort(pvals.begin(), pvals.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < pvals.size(); ++i) {
    const double hi = static_cast<double>(i + 1) / 500.0;
    const double lo = static_cast<double>(i) / 500.0;
    ks = std::max(ks, std::max(std::abs(hi - pvals[i]),
                               std::abs(pvals[i] - lo)));
  }
  const double elapsed = seconds_since(start);
  std::ostringstream ss;
  ss << "KS distance " << ks << ", " << elapsed << " s";
  detail = ss.str();
  return ks < 0.05 && elapsed < 60.0;
}

// ---------------------------------------------------------------------------
// 9. ROC properties: perfect / anti-perfect / random score suites give
//    AUC 1 / 0 / 0.5 +- 0.03.
bool criterion_roc(std::string& detail) {
  std::vector<double> perfect(10, 0.0);
  std::vector<int> truth;
  for (int j = 0; j < 3; ++j) {
    perfect[static_cast<std::size_t>(j)] = 1.0;
    truth.push_back(j);
  }
  const double auc_perfect = pcs::roc_from_scores(perfect, truth).auc;

  std::vector<double> inverted;
  for (double s : perfect) inverted.push_back(1.0 - s);
  const double auc_anti = pcs::roc_from_scores(inverted, truth).auc;

  const pcs::SeedSpec seed{kMasterSeed};
  std::vector<int> big_truth;
  for (int j = 0; j < 40; ++j) big_truth.push_back(j);
  double total = 0.0;
  for (int rep = 0; rep < 500; ++rep) {
    pcs::RngStream rng(seed.child("roc", rep));
    std::vector<double> scores(200);
    for (auto& s : scores) s = rng.uniform();
    total += pcs::roc_from_scores(scores, big_truth).auc;
  }
  const double mean_random = total / 500.0;

  std::ostringstream ss;
  ss << "perfect " << auc_perfect << ", anti " << auc_anti << ", random mean "
     << mean_random;
  detail = ss.str();
  return auc_perfect == 1.0 && auc_anti == 0.0 &&
         std::abs(mean_random - 0.5) <= 0.03;
}

struct Criterion {
  const char* name;
  bool passed;
  std::string detail;
};

}  // namespace

int main() {
  std::vector<Criterion> results;
  std::string detail;

  detail.clear();
  results.push_back({"1 solver correctness (KKT, closed forms, OLS oracle)",
                     criterion_solver(detail), detail});
  detail.clear();
  results.push_back({"2 stability-score oracle equivalence",
                     criterion_score_oracle(detail), detail});
  detail.clear();
  results.push_back(
      {"3 screening contract (top-10 of 100, threshold partition)",
       criterion_screening(detail), detail});
  detail.clear();
  results.push_back({"4 desk-scale benchmark: PCS >= OLS and PCS >= 0.85",
                     criterion_desk_scale(detail), detail});
  detail.clear();
  results.push_back({"5 drop-active misspecification: PCS >= OLS",
                     criterion_misspecified(detail), detail});
  detail.clear();
  results.push_back({"6 hypothesis-test contrast (>= 18/20 replicates)",
                     criterion_hypotest(detail), detail});
  detail.clear();
  results.push_back({"7 determinism across --threads 1/8 on 3 fixtures",
                     criterion_determinism(detail), detail});
  detail.clear();
  results.push_back({"8 baseline p-value calibration (KS < 0.05)",
                     criterion_calibration(detail), detail});
  detail.clear();
  results.push_back({"9 ROC properties (AUC 1 / 0 / 0.5 +- 0.03)",
                     criterion_roc(detail), detail});

  int failures = 0;
  for (const auto& c : results) {
    std::cout << (c.passed ? "PASS" : "FAIL") << " criterion " << c.name
              << " -- " << c.detail << '\n';
    if (!c.passed) ++failures;
  }
  return failures;
}

#include "pcs/inference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pcs/errors.hpp"
#include "pcs/eval.hpp"
#include "pcs/parallel.hpp"

namespace pcs {

namespace {

// Descending-lambda visit order for warm-started path fits; positions refer
// to the caller's candidate order.
std::vector<std::size_t> warm_order(std::span<const ModelPerturbation> models) {
  std::vector<std::size_t> order(models.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return models[a].lambda > models[b].lambda;
                   });
  return order;
}

std::vector<double> holdout_errors(std::span<const ModelPerturbation> models,
                                   const DataMatrix& train,
                                   const DataMatrix& eval_data) {
  if (eval_data.p() != train.p())
    throw DimensionMismatch("holdout data has a different feature count");
  std::vector<double> errors(models.size(), 0.0);
  LassoSolver solver(train);
  Eigen::VectorXd warm;
  const Eigen::VectorXd* warm_ptr = nullptr;
  for (std::size_t pos : warm_order(models)) {
    const LassoFit fit = solver.fit(models[pos].lambda, warm_ptr);
    errors[pos] = l2_error(predict(fit, eval_data.x), eval_data.y);
    warm = fit.beta;
    warm_ptr = &warm;
  }
  return errors;
}

std::vector<double> cv_errors(std::span<const ModelPerturbation> models,
                              const DataMatrix& train, const CvEval& cv) {
  if (cv.folds < 2) throw BadConfig("cross-validation needs >= 2 folds");
  const auto n = static_cast<std::size_t>(train.n());
  if (static_cast<std::size_t>(cv.folds) > n)
    throw BadConfig("more folds than observations");

  RngStream rng(cv.seed);
  const auto perm = rng.permutation(n);
  std::vector<int> fold_of(n);
  for (std::size_t i = 0; i < n; ++i)
    fold_of[perm[i]] = static_cast<int>(i % static_cast<std::size_t>(cv.folds));

  std::vector<double> errors(models.size(), 0.0);
  for (int f = 0; f < cv.folds; ++f) {
    std::vector<Eigen::Index> in_fold, out_fold;
    for (std::size_t i = 0; i < n; ++i)
      (fold_of[i] == f ? in_fold : out_fold)
          .push_back(static_cast<Eigen::Index>(i));
    const DataMatrix fit_data = subset_rows(train, out_fold);
    const DataMatrix held = subset_rows(train, in_fold);

    LassoSolver solver(fit_data);
    Eigen::VectorXd warm;
    const Eigen::VectorXd* warm_ptr = nullptr;
    for (std::size_t pos : warm_order(models)) {
      const LassoFit fit = solver.fit(models[pos].lambda, warm_ptr);
      errors[pos] += l2_error(predict(fit, held.x), held.y);
      warm = fit.beta;
      warm_ptr = &warm;
    }
  }
  for (double& e : errors) e /= static_cast<double>(cv.folds);
  return errors;
}

std::vector<double> per_model_frequencies(const TargetDistribution& dist,
                                          int model_index) {
  std::vector<double> freq(static_cast<std::size_t>(dist.p), 0.0);
  for (int d = 0; d < dist.n_data_perturbations; ++d) {
    const auto& entry = dist.entries[static_cast<std::size_t>(
        d * dist.n_models + model_index)];
    for (int j : entry.selected) freq[static_cast<std::size_t>(j)] += 1.0;
  }
  for (double& f : freq) f /= static_cast<double>(dist.n_data_perturbations);
  return freq;
}

struct HalfResult {
  StabilityReport report;
  ScreeningResult screening;
};

HalfResult run_half(const DataMatrix& train, const DataMatrix& eval_data,
                    const PcsConfig& config, const SeedSpec& half_seed) {
  const LambdaPath path =
      compute_lambda_path(train, config.nlambda, config.min_ratio);

  PerturbationPlan plan;
  if (config.data_perturbation == DataPerturbation::Kind::identity) {
    plan = build_plan(path, 1, std::nullopt, half_seed);
    plan.data_perturbations.clear();
    DataPerturbation ident;
    ident.kind = DataPerturbation::Kind::identity;
    ident.id = "identity";
    plan.data_perturbations.push_back(std::move(ident));
  } else {
    plan = build_plan(path, config.B, std::nullopt, half_seed);
  }

  ScreeningResult screening;
  if (config.screen_with_cv) {
    screening = screen_models(plan.model_perturbations, train,
                              CvEval{config.cv_folds, half_seed.child("cv")},
                              config.screening);
  } else {
    screening = screen_models(plan.model_perturbations, train,
                              HoldoutEval{eval_data}, config.screening);
  }

  const TargetDistribution dist =
      compute_target_distribution(train, screening.survivors, plan,
                                  config.threads, config.select_tol);

  HalfResult out;
  out.report = stability_scores(dist);
  out.screening = screening;

  const int n_models = dist.n_models;
  std::vector<std::vector<double>> freqs;
  freqs.reserve(static_cast<std::size_t>(n_models));
  for (int m = 0; m < n_models; ++m)
    freqs.push_back(per_model_frequencies(dist, m));

  if (config.with_intervals) {
    std::vector<std::pair<double, double>> intervals;
    intervals.reserve(static_cast<std::size_t>(dist.p));
    for (int j = 0; j < dist.p; ++j) {
      std::vector<double> values;
      values.reserve(static_cast<std::size_t>(n_models));
      for (int m = 0; m < n_models; ++m)
        values.push_back(freqs[static_cast<std::size_t>(m)]
                              [static_cast<std::size_t>(j)]);
      intervals.push_back(perturbation_interval(
          std::move(values), config.interval_lo_pct, config.interval_hi_pct));
    }
    out.report.intervals = std::move(intervals);
  }

  if (config.per_model) {
    for (int m = 0; m < n_models; ++m) {
      PerModelScores pm;
      pm.model_id = screening.survivors[static_cast<std::size_t>(m)].model_id;
      pm.lambda = screening.survivors[static_cast<std::size_t>(m)].lambda;
      for (const ModelError& e : screening.errors)
        if (e.model_id == pm.model_id) pm.screening_error = e.error;
      pm.scores = std::move(freqs[static_cast<std::size_t>(m)]);
      out.report.per_model.push_back(std::move(pm));
    }
  }

  out.report.feature_names = train.feature_names;
  return out;
}

}  // namespace

ScreeningResult screen_models(std::span<const ModelPerturbation> candidates,
                              const DataMatrix& train, const EvalSpec& eval,
                              const ScreeningRule& rule) {
  if (candidates.empty()) throw BadConfig("no candidate models to screen");

  std::vector<double> errors;
  bool used_cv = false;
  if (std::holds_alternative<HoldoutEval>(eval)) {
    errors = holdout_errors(candidates, train,
                            std::get<HoldoutEval>(eval).data);
  } else {
    errors = cv_errors(candidates, train, std::get<CvEval>(eval));
    used_cv = true;
  }

  // Rank by error, ties toward larger lambda (the sparser model).
  std::vector<std::size_t> rank(candidates.size());
  std::iota(rank.begin(), rank.end(), std::size_t{0});
  std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
    if (errors[a] != errors[b]) return errors[a] < errors[b];
    return candidates[a].lambda > candidates[b].lambda;
  });

  ScreeningResult out;
  out.rule = rule;
  out.used_cv = used_cv;
  out.errors.reserve(candidates.size());
  for (std::size_t pos : rank)
    out.errors.push_back(
        {candidates[pos].model_id, candidates[pos].lambda, errors[pos]});

  switch (rule.kind) {
    case ScreeningRule::Kind::top_k: {
      if (rule.k < 1) throw BadConfig("top_k rule needs k >= 1");
      const std::size_t keep =
          std::min(static_cast<std::size_t>(rule.k), candidates.size());
      for (std::size_t i = 0; i < keep; ++i)
        out.survivors.push_back(candidates[rank[i]]);
      break;
    }
    case ScreeningRule::Kind::threshold: {
      for (std::size_t pos : rank)
        if (errors[pos] < rule.tau) out.survivors.push_back(candidates[pos]);
      if (out.survivors.empty())
        throw EmptySurvivors("no model has prediction error below " +
                             std::to_string(rule.tau));
      break;
    }
  }
  return out;
}

TargetDistribution compute_target_distribution(
    const DataMatrix& train, std::span<const ModelPerturbation> survivors,
    const PerturbationPlan& plan, int threads, double select_tol) {
  if (survivors.empty()) throw BadConfig("no surviving models");
  if (plan.data_perturbations.empty())
    throw BadConfig("plan has no data perturbations");

  const int D = static_cast<int>(plan.data_perturbations.size());
  const int M = static_cast<int>(survivors.size());

  TargetDistribution dist;
  dist.p = static_cast<int>(train.p());
  dist.n_data_perturbations = D;
  dist.n_models = M;
  dist.entries.resize(static_cast<std::size_t>(D) * static_cast<std::size_t>(M));

  const auto order = warm_order(survivors);

  // One task per data perturbation; each fills its own row of slots, so the
  // grid is identical for any thread count.
  parallel_for(D, threads, [&](int d) {
    const DataPerturbation& pert =
        plan.data_perturbations[static_cast<std::size_t>(d)];
    DataMatrix perturbed = apply_perturbation(train, pert);
    // Resampling knocks column scales off unit variance; restore them so
    // every refit solves the same unit-scale problem as the screened path
    // (glmnet re-standardizes per fit). Columns collapsed to a constant by
    // the resample are left alone and cannot be selected.
    if (pert.kind != DataPerturbation::Kind::identity) {
      const auto n = static_cast<double>(perturbed.n());
      for (Eigen::Index j = 0; j < perturbed.p(); ++j) {
        const double mean = perturbed.x.col(j).mean();
        const double sd = std::sqrt(
            (perturbed.x.col(j).array() - mean).square().sum() / (n - 1.0));
        if (sd > 1e-12) perturbed.x.col(j) /= sd;
      }
    }
    LassoSolver solver(perturbed);
    Eigen::VectorXd warm;
    const Eigen::VectorXd* warm_ptr = nullptr;
    for (std::size_t pos : order) {
      const LassoFit fit = solver.fit(survivors[pos].lambda, warm_ptr);
      TargetEntry& entry = dist.entries[static_cast<std::size_t>(d) *
                                            static_cast<std::size_t>(M) +
                                        pos];
      entry.pert_id = pert.id;
      entry.model_id = survivors[pos].model_id;
      entry.selected = selected_features(fit, select_tol);
      entry.converged = fit.converged;
      warm = fit.beta;
      warm_ptr = &warm;
    }
  });

  for (const TargetEntry& e : dist.entries)
    if (!e.converged) ++dist.convergence_failures;
  return dist;
}

StabilityReport stability_scores(const TargetDistribution& dist) {
  if (dist.entries.empty()) throw BadConfig("empty target distribution");
  std::vector<std::int64_t> counts(static_cast<std::size_t>(dist.p), 0);
  for (const TargetEntry& e : dist.entries)
    for (int j : e.selected) ++counts[static_cast<std::size_t>(j)];

  StabilityReport report;
  report.scores.resize(static_cast<std::size_t>(dist.p));
  const auto denom = static_cast<double>(dist.entries.size());
  for (std::size_t j = 0; j < report.scores.size(); ++j)
    report.scores[j] = static_cast<double>(counts[j]) / denom;
  report.convergence_failures = dist.convergence_failures;
  return report;
}

std::pair<double, double> perturbation_interval(std::vector<double> values,
                                                double lo_pct, double hi_pct) {
  if (values.empty())
    throw BadConfig("perturbation interval needs at least one value");
  if (!(lo_pct >= 0.0 && hi_pct <= 100.0 && lo_pct <= hi_pct))
    throw BadConfig("percentiles must satisfy 0 <= lo <= hi <= 100");
  std::sort(values.begin(), values.end());

  const auto at = [&](double pct) {
    const double q = pct / 100.0;
    const double h = static_cast<double>(values.size() - 1) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= values.size()) return values.back();
    const double frac = h - std::floor(h);
    return values[lo] + frac * (values[lo + 1] - values[lo]);
  };
  return {at(lo_pct), at(hi_pct)};
}

StabilityReport run_pcs(const DataMatrix& data, const PcsConfig& config) {
  const DataMatrix base = (config.standardize_first && !data.standardized)
                              ? standardize(data)
                              : data;
  const SeedSpec seed{config.master_seed};
  const TrainTestSplit halves_split = split(base, config.split_fraction, seed);
  const auto halves = swap_halves(base, halves_split);

  std::vector<StabilityReport> reports;
  for (std::size_t h = 0; h < halves.size(); ++h) {
    const SeedSpec half_seed{seed.child("half", h)};
    HalfResult result =
        run_half(halves[h].first, halves[h].second, config, half_seed);
    for (auto& pm : result.report.per_model)
      pm.model_id = "half" + std::to_string(h) + ":" + pm.model_id;
    reports.push_back(std::move(result.report));
  }

  StabilityReport merged;
  const std::size_t p = reports[0].scores.size();
  merged.scores.resize(p);
  for (std::size_t j = 0; j < p; ++j)
    merged.scores[j] = 0.5 * (reports[0].scores[j] + reports[1].scores[j]);

  if (reports[0].intervals && reports[1].intervals) {
    std::vector<std::pair<double, double>> intervals(p);
    for (std::size_t j = 0; j < p; ++j) {
      intervals[j] = {0.5 * ((*reports[0].intervals)[j].first +
                             (*reports[1].intervals)[j].first),
                      0.5 * ((*reports[0].intervals)[j].second +
                             (*reports[1].intervals)[j].second)};
    }
    merged.intervals = std::move(intervals);
  }

  merged.halves_averaged = true;
  merged.provenance = config.digest;
  merged.master_seed = config.master_seed;
  merged.convergence_failures =
      reports[0].convergence_failures + reports[1].convergence_failures;
  merged.feature_names = base.feature_names;
  for (auto& rep : reports)
    for (auto& pm : rep.per_model) merged.per_model.push_back(std::move(pm));
  return merged;
}

std::vector<double> run_ols_baseline(const DataMatrix& data,
                                     const PcsConfig& config) {
  const DataMatrix base = (config.standardize_first && !data.standardized)
                              ? standardize(data)
                              : data;
  const SeedSpec seed{config.master_seed};
  const TrainTestSplit halves_split = split(base, config.split_fraction, seed);
  const auto halves = swap_halves(base, halves_split);

  const auto p = static_cast<std::size_t>(base.p());
  std::vector<double> scores(p, 0.0);
  for (std::size_t h = 0; h < halves.size(); ++h) {
    const DataMatrix& train = halves[h].first;
    const DataMatrix& eval_data = halves[h].second;
    const SeedSpec half_seed{seed.child("half", h)};

    const LambdaPath path =
        compute_lambda_path(train, config.nlambda, config.min_ratio);
    const PerturbationPlan plan = build_plan(path, 1, std::nullopt, half_seed);

    ScreeningRule best_one;
    best_one.kind = ScreeningRule::Kind::top_k;
    best_one.k = 1;
    ScreeningResult screening;
    if (config.screen_with_cv) {
      screening =
          screen_models(plan.model_perturbations, train,
                        CvEval{config.cv_folds, half_seed.child("cv")},
                        best_one);
    } else {
      screening = screen_models(plan.model_perturbations, train,
                                HoldoutEval{eval_data}, best_one);
    }

    const LassoFit fit = fit_lasso(train, screening.survivors[0].lambda);
    FeatureSet selected = selected_features(fit, config.select_tol);
    // Keep the design estimable: cap the submodel below the residual-df
    // limit, preferring larger |beta| (ties toward the smaller index).
    const auto cap = static_cast<std::size_t>(
        std::max<Eigen::Index>(1, train.n() - 2));
    if (selected.size() > cap) {
      std::stable_sort(selected.begin(), selected.end(), [&](int a, int b) {
        return std::abs(fit.beta(a)) > std::abs(fit.beta(b));
      });
      selected.resize(cap);
      std::sort(selected.begin(), selected.end());
    }

    const BaselineScores baseline = baseline_ols_pvalues(train, selected);
    const auto half_scores = baseline.ranking_scores();
    for (std::size_t j = 0; j < p; ++j) scores[j] += 0.5 * half_scores[j];
  }
  return scores;
}

HypothesisTestResult pcs_hypothesis_test(const DataMatrix& data,
                                         const NullSpec& null_spec,
                                         const PcsConfig& config) {
  const DataMatrix base = (config.standardize_first && !data.standardized)
                              ? standardize(data)
                              : data;
  NullSpec spec = null_spec;
  if (spec.seed == 0)
    spec.seed = SeedSpec{config.master_seed}.child("null-data");
  const DataMatrix null_data = generate_null_data(base, spec);

  PcsConfig run_config = config;
  run_config.standardize_first = false;  // both runs see identical preprocessing

  HypothesisTestResult result;
  result.observed = run_pcs(base, run_config);
  result.null_report = run_pcs(null_data, run_config);

  const std::size_t p = result.observed.scores.size();
  result.score_diff.resize(p);
  for (std::size_t j = 0; j < p; ++j)
    result.score_diff[j] =
        result.observed.scores[j] - result.null_report.scores[j];

  if (result.observed.intervals && result.null_report.intervals) {
    std::vector<bool> overlap(p);
    for (std::size_t j = 0; j < p; ++j) {
      const auto& a = (*result.observed.intervals)[j];
      const auto& b = (*result.null_report.intervals)[j];
      overlap[j] = !(a.second < b.first || b.second < a.first);
    }
    result.interval_overlap = std::move(overlap);
  }
  return result;
}

}  // namespace pcs

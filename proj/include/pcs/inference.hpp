#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pcs/data.hpp"
#include "pcs/lasso.hpp"
#include "pcs/perturb.hpp"

namespace pcs {

struct ScreeningRule {
  enum class Kind { top_k, threshold };
  Kind kind = Kind::top_k;
  int k = 10;
  double tau = 0.0;  // threshold mode: survivors have error < tau
};

/// Evaluate candidate errors on a disjoint holdout set...
struct HoldoutEval {
  const DataMatrix& data;
};

/// ...or by k-fold cross-validation on the training data itself.
struct CvEval {
  int folds = 5;
  std::uint64_t seed = 0;
};

using EvalSpec = std::variant<HoldoutEval, CvEval>;

struct ModelError {
  std::string model_id;
  double lambda = 0.0;
  double error = 0.0;
};

struct ScreeningResult {
  std::vector<ModelPerturbation> survivors;  // ranked best-first
  std::vector<ModelError> errors;            // every candidate, ranked
  ScreeningRule rule;
  bool used_cv = false;
};

/// Fit every candidate penalty on `train`, score each by mean squared
/// prediction error, keep the rule's survivors. Ties in error rank are
/// broken toward larger lambda (the sparser model).
ScreeningResult screen_models(std::span<const ModelPerturbation> candidates,
                              const DataMatrix& train, const EvalSpec& eval,
                              const ScreeningRule& rule);

struct TargetEntry {
  std::string pert_id;
  std::string model_id;
  FeatureSet selected;
  bool converged = true;
};

/// The realized set {T(D, lambda)} over the full perturbation grid.
struct TargetDistribution {
  std::vector<TargetEntry> entries;  // data-major order, grid complete
  int p = 0;
  int n_data_perturbations = 0;
  int n_models = 0;
  int convergence_failures = 0;
};

/// Refit on every (data perturbation, surviving model) cell of the grid.
/// Non-converged fits keep their selected set and are tallied, not dropped.
/// Output is bit-identical for any thread count.
TargetDistribution compute_target_distribution(
    const DataMatrix& train, std::span<const ModelPerturbation> survivors,
    const PerturbationPlan& plan, int threads = 1, double select_tol = 1e-8);

struct PerModelScores {
  std::string model_id;
  double lambda = 0.0;
  double screening_error = 0.0;
  std::vector<double> scores;  // per-feature selection frequency at this model
};

struct StabilityReport {
  std::vector<double> scores;  // per-feature, pooled over the grid
  std::optional<std::vector<std::pair<double, double>>> intervals;
  bool halves_averaged = false;
  std::string provenance;  // config digest
  std::uint64_t master_seed = 0;
  int convergence_failures = 0;
  std::vector<std::string> feature_names;
  std::vector<PerModelScores> per_model;  // filled when requested
};

/// Pooled selection frequencies: score_j = count_j / (|D| * |models|).
StabilityReport stability_scores(const TargetDistribution& dist);

/// Percentile pair by linear interpolation between order statistics:
/// h = (m-1) q, value = v[floor(h)] + frac(h) * (v[floor(h)+1] - v[floor(h)]).
std::pair<double, double> perturbation_interval(std::vector<double> values,
                                                double lo_pct = 10.0,
                                                double hi_pct = 90.0);

struct PcsConfig {
  double split_fraction = 0.5;
  ScreeningRule screening;
  bool screen_with_cv = false;
  int cv_folds = 5;
  int nlambda = 100;
  double min_ratio = 0.0;  // 0 = auto
  DataPerturbation::Kind data_perturbation = DataPerturbation::Kind::bootstrap;
  int B = 100;
  std::uint64_t master_seed = 0;
  double select_tol = 1e-8;
  double interval_lo_pct = 10.0;
  double interval_hi_pct = 90.0;
  bool with_intervals = true;
  bool per_model = false;
  bool standardize_first = true;
  int threads = 1;
  std::string digest;  // provenance stamp for reports
};

/// The full pipeline: standardize, split in half, screen the penalty path on
/// each half against the other, realize the target distribution over the
/// perturbation grid, pool stability scores, and average the two halves.
StabilityReport run_pcs(const DataMatrix& data, const PcsConfig& config);

/// Comparison baseline: on each half, select features with lasso at the
/// best-screened penalty, compute OLS t-test p-values on that half, and
/// average the 1-p ranking scores over both half orderings. Unselected
/// features score 0.
std::vector<double> run_ols_baseline(const DataMatrix& data,
                                     const PcsConfig& config);

struct HypothesisTestResult {
  StabilityReport observed;
  StabilityReport null_report;
  std::vector<double> score_diff;  // observed - null, per feature
  std::optional<std::vector<bool>> interval_overlap;
};

/// Run run_pcs identically (same seeds, same plan shape) on the observed
/// data and on null data generated from the constrained perturbation, and
/// summarize the per-feature divergence. No accept/reject decision is made.
HypothesisTestResult pcs_hypothesis_test(const DataMatrix& data,
                                         const NullSpec& null_spec,
                                         const PcsConfig& config);

}  // namespace pcs

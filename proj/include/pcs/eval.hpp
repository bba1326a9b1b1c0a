#pragma once

#include <Eigen/Core>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pcs/data.hpp"
#include "pcs/lasso.hpp"

namespace pcs {

struct RocCurve {
  std::vector<std::pair<double, double>> points;  // (fpr, tpr), sorted by fpr
  double auc = 0.0;                               // trapezoidal integral
};

/// Sweep over unique score thresholds (ties grouped at one point) to build
/// an ROC curve against the positive set `truth`. Throws DegenerateTruth if
/// truth is empty or covers every feature.
RocCurve roc_from_scores(std::span<const double> scores,
                         const std::vector<int>& truth,
                         bool higher_is_positive = true);

struct BaselineScores {
  Eigen::VectorXd pvalues;  // length p; unselected features carry exactly 1
  std::string method = "ols_on_selected";
  std::vector<int> dropped;  // collinear columns dropped (smallest index kept)

  /// Ranking score 1 - p.
  std::vector<double> ranking_scores() const;
};

/// OLS on the lasso-selected columns with two-sided t-test p-values at
/// n - |kept| - 1 degrees of freedom. p-values are floored at 1e-300.
BaselineScores baseline_ols_pvalues(const DataMatrix& train,
                                    const FeatureSet& selected);

/// Vertical averaging: tpr linearly interpolated at each grid fpr, then
/// averaged across curves. Default grid: 101 equispaced points on [0, 1].
RocCurve average_roc(std::span<const RocCurve> curves,
                     std::span<const double> grid = {});

}  // namespace pcs

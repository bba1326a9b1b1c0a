#pragma once

#include <Eigen/Core>
#include <vector>

#include "pcs/data.hpp"

namespace pcs {

using FeatureSet = std::vector<int>;

struct LassoFit {
  Eigen::VectorXd beta;
  double intercept = 0.0;
  double lambda = 0.0;
  bool converged = false;
  int iterations = 0;  // coordinate-descent sweeps
};

/// Log-equispaced penalty sequence from lambda_max down to
/// lambda_max * min_ratio.
struct LambdaPath {
  std::vector<double> values;
  int nlambda = 0;
  double min_ratio = 0.0;
};

/// lambda_max = max_j |x_j^T (y - ybar)| / n. min_ratio <= 0 selects the
/// glmnet default: 1e-4 when n > p, 1e-2 otherwise.
LambdaPath compute_lambda_path(const DataMatrix& train, int nlambda = 100,
                               double min_ratio = 0.0);

/// Cyclic coordinate descent for
///   (1/2n) ||y - b0 - x b||^2 + lambda ||b||_1
/// with the intercept fit unpenalized via centering.
///
/// Centering the columns and the response once here amortizes across the
/// warm-started fits of a penalty path; one solver instance is not
/// thread-safe, but independent instances share nothing.
class LassoSolver {
 public:
  explicit LassoSolver(const DataMatrix& train);

  /// A sweep converges when the largest coefficient change drops below 1e-7
  /// and the KKT conditions hold; the sweep cap is 1e5, after which
  /// `converged` is reported false rather than throwing.
  LassoFit fit(double lambda, const Eigen::VectorXd* warm_start = nullptr);

  double lambda_max() const { return lambda_max_; }

 private:
  double sweep(Eigen::VectorXd& beta, Eigen::VectorXd& resid, double lambda,
               bool active_only) const;
  bool kkt_satisfied(const Eigen::VectorXd& beta, const Eigen::VectorXd& resid,
                     double lambda, double tol) const;

  Eigen::MatrixXd xc_;        // centered features
  Eigen::VectorXd yc_;        // centered response
  Eigen::VectorXd col_means_;
  Eigen::VectorXd col_sqnorm_;  // x~_j^T x~_j / n
  double y_mean_ = 0.0;
  double lambda_max_ = 0.0;
  Eigen::Index n_ = 0;
  Eigen::Index p_ = 0;
};

/// One-shot convenience wrapper around LassoSolver.
LassoFit fit_lasso(const DataMatrix& train, double lambda,
                   const Eigen::VectorXd* warm_start = nullptr);

/// {j : |beta_j| > tol}. The intercept never appears.
FeatureSet selected_features(const LassoFit& fit, double tol = 1e-8);

Eigen::VectorXd predict(const LassoFit& fit, const Eigen::MatrixXd& x_new);

/// Mean squared error (1/n) sum (y_hat_i - y_i)^2.
double l2_error(const Eigen::VectorXd& y_hat, const Eigen::VectorXd& y);

}  // namespace pcs

#include "pcs/lasso.hpp"

#include <cassert>
#include <cmath>

#include "pcs/errors.hpp"

namespace pcs {

namespace {

constexpr double kCoordTol = 1e-7;  // max coefficient change per sweep
constexpr double kKktInnerTol = 5e-7;
constexpr int kMaxSweeps = 100000;
constexpr double kColNormFloor = 1e-14;

inline double soft_threshold(double z, double lambda) {
  if (z > lambda) return z - lambda;
  if (z < -lambda) return z + lambda;
  return 0.0;
}

#ifndef NDEBUG
double lasso_objective(const Eigen::VectorXd& resid,
                       const Eigen::VectorXd& beta, double lambda,
                       Eigen::Index n) {
  return 0.5 * resid.squaredNorm() / static_cast<double>(n) +
         lambda * beta.lpNorm<1>();
}
#endif

}  // namespace

LambdaPath compute_lambda_path(const DataMatrix& train, int nlambda,
                               double min_ratio) {
  if (nlambda < 1) throw BadConfig("nlambda must be >= 1");
  const auto n = static_cast<double>(train.n());
  const double y_mean = train.y.mean();
  const Eigen::VectorXd yc = train.y.array() - y_mean;
  const double y_sd = std::sqrt(yc.squaredNorm() / (n - 1.0));
  if (y_sd <= 1e-12) throw DegenerateResponse("response is constant");

  const double lambda_max = (train.x.transpose() * yc).cwiseAbs().maxCoeff() / n;
  if (lambda_max <= 1e-12)
    throw DegenerateResponse(
        "response is orthogonal to every feature; penalty path is undefined");

  if (min_ratio <= 0.0)
    min_ratio = train.n() > train.p() ? 1e-4 : 1e-2;
  if (min_ratio >= 1.0) throw BadConfig("min_ratio must be < 1");

  LambdaPath path;
  path.nlambda = nlambda;
  path.min_ratio = min_ratio;
  path.values.resize(static_cast<std::size_t>(nlambda));
  if (nlambda == 1) {
    path.values[0] = lambda_max;
    path.min_ratio = 1.0;
    return path;
  }
  const double log_max = std::log(lambda_max);
  const double log_ratio = std::log(min_ratio);
  for (int i = 0; i < nlambda; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(nlambda - 1);
    path.values[static_cast<std::size_t>(i)] = std::exp(log_max + t * log_ratio);
  }
  path.values.front() = lambda_max;
  path.values.back() = lambda_max * min_ratio;
  return path;
}

LassoSolver::LassoSolver(const DataMatrix& train)
    : xc_(train.x), n_(train.n()), p_(train.p()) {
  y_mean_ = train.y.mean();
  yc_ = train.y.array() - y_mean_;
  col_means_ = xc_.colwise().mean();
  xc_.rowwise() -= col_means_.transpose();
  col_sqnorm_ =
      xc_.colwise().squaredNorm().transpose() / static_cast<double>(n_);
  lambda_max_ =
      (xc_.transpose() * yc_).cwiseAbs().maxCoeff() / static_cast<double>(n_);
}

double LassoSolver::sweep(Eigen::VectorXd& beta, Eigen::VectorXd& resid,
                          double lambda, bool active_only) const {
  const auto n = static_cast<double>(n_);
  double max_delta = 0.0;
  for (Eigen::Index j = 0; j < p_; ++j) {
    const double bj = beta(j);
    if (active_only && bj == 0.0) continue;
    const double cj = col_sqnorm_(j);
    if (cj <= kColNormFloor) {
      // Degenerate (constant) column in this sample; its coefficient is 0.
      if (bj != 0.0) {
        resid += xc_.col(j) * bj;
        beta(j) = 0.0;
        max_delta = std::max(max_delta, std::abs(bj));
      }
      continue;
    }
    const double z = xc_.col(j).dot(resid) / n + cj * bj;
    const double nb = soft_threshold(z, lambda) / cj;
    const double delta = nb - bj;
    if (delta != 0.0) {
      resid -= xc_.col(j) * delta;
      beta(j) = nb;
      max_delta = std::max(max_delta, std::abs(delta));
    }
  }
  return max_delta;
}

bool LassoSolver::kkt_satisfied(const Eigen::VectorXd& beta,
                                const Eigen::VectorXd& resid, double lambda,
                                double tol) const {
  const auto n = static_cast<double>(n_);
  for (Eigen::Index j = 0; j < p_; ++j) {
    const double g = xc_.col(j).dot(resid) / n;
    if (beta(j) != 0.0) {
      if (std::abs(g - lambda * (beta(j) > 0.0 ? 1.0 : -1.0)) > tol)
        return false;
    } else if (std::abs(g) > lambda + tol) {
      return false;
    }
  }
  return true;
}

LassoFit LassoSolver::fit(double lambda, const Eigen::VectorXd* warm_start) {
  if (lambda < 0.0) throw BadConfig("lambda must be nonnegative");
  LassoFit out;
  out.lambda = lambda;

  if (lambda >= lambda_max_) {
    // Every coefficient is soft-thresholded away; solution is exactly 0.
    out.beta = Eigen::VectorXd::Zero(p_);
    out.intercept = y_mean_;
    out.converged = true;
    return out;
  }

  Eigen::VectorXd beta;
  if (warm_start) {
    if (warm_start->size() != p_)
      throw DimensionMismatch("warm start has wrong length");
    beta = *warm_start;
  } else {
    beta = Eigen::VectorXd::Zero(p_);
  }
  Eigen::VectorXd resid = yc_ - xc_ * beta;

#ifndef NDEBUG
  double prev_obj = lasso_objective(resid, beta, lambda, n_);
#endif

  int iters = 0;
  bool converged = false;
  while (iters < kMaxSweeps) {
    const double delta = sweep(beta, resid, lambda, /*active_only=*/false);
    ++iters;
#ifndef NDEBUG
    {
      const double obj = lasso_objective(resid, beta, lambda, n_);
      assert(obj <= prev_obj + 1e-9 * (1.0 + std::abs(prev_obj)));
      prev_obj = obj;
    }
#endif
    if (delta < kCoordTol) {
      if (kkt_satisfied(beta, resid, lambda, kKktInnerTol)) {
        converged = true;
        break;
      }
      continue;  // full sweeps until the KKT residual settles
    }
    // Iterate the current active set to convergence, then re-check all
    // coordinates with the outer full sweep.
    while (iters < kMaxSweeps) {
      const double inner = sweep(beta, resid, lambda, /*active_only=*/true);
      ++iters;
#ifndef NDEBUG
      {
        const double obj = lasso_objective(resid, beta, lambda, n_);
        assert(obj <= prev_obj + 1e-9 * (1.0 + std::abs(prev_obj)));
        prev_obj = obj;
      }
#endif
      if (inner < kCoordTol) break;
    }
  }

  out.beta = std::move(beta);
  out.intercept = y_mean_ - col_means_.dot(out.beta);
  out.converged = converged;
  out.iterations = iters;
  return out;
}

LassoFit fit_lasso(const DataMatrix& train, double lambda,
                   const Eigen::VectorXd* warm_start) {
  LassoSolver solver(train);
  return solver.fit(lambda, warm_start);
}

FeatureSet selected_features(const LassoFit& fit, double tol) {
  if (tol < 0.0) throw BadConfig("selection tolerance must be >= 0");
  FeatureSet out;
  for (Eigen::Index j = 0; j < fit.beta.size(); ++j)
    if (std::abs(fit.beta(j)) > tol) out.push_back(static_cast<int>(j));
  return out;
}

Eigen::VectorXd predict(const LassoFit& fit, const Eigen::MatrixXd& x_new) {
  if (x_new.cols() != fit.beta.size())
    throw DimensionMismatch("x_new has " + std::to_string(x_new.cols()) +
                            " columns, fit expects " +
                            std::to_string(fit.beta.size()));
  return (x_new * fit.beta).array() + fit.intercept;
}

double l2_error(const Eigen::VectorXd& y_hat, const Eigen::VectorXd& y) {
  if (y_hat.size() != y.size())
    throw DimensionMismatch("prediction/response length mismatch");
  return (y_hat - y).squaredNorm() / static_cast<double>(y.size());
}

}  // namespace pcs

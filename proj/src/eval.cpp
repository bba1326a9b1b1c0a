#include "pcs/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>

#include "pcs/errors.hpp"

namespace pcs {

namespace {

constexpr double kPvalueFloor = 1e-300;

double trapezoid_auc(const std::vector<std::pair<double, double>>& pts) {
  double auc = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i)
    auc += (pts[i].first - pts[i - 1].first) *
           (pts[i].second + pts[i - 1].second) * 0.5;
  return auc;
}

// Max tpr per unique fpr: the attainable operating point on a vertical
// segment, keeping interpolation single-valued.
std::vector<std::pair<double, double>> upper_envelope(const RocCurve& curve) {
  std::vector<std::pair<double, double>> env;
  for (const auto& pt : curve.points) {
    if (!env.empty() && env.back().first == pt.first)
      env.back().second = std::max(env.back().second, pt.second);
    else
      env.push_back(pt);
  }
  return env;
}

double interp_tpr(const std::vector<std::pair<double, double>>& env,
                  double fpr) {
  if (fpr <= env.front().first) return env.front().second;
  if (fpr >= env.back().first) return env.back().second;
  for (std::size_t i = 1; i < env.size(); ++i) {
    if (fpr <= env[i].first) {
      const double x0 = env[i - 1].first;
      const double x1 = env[i].first;
      const double y0 = env[i - 1].second;
      const double y1 = env[i].second;
      if (x1 == x0) return std::max(y0, y1);
      return y0 + (fpr - x0) / (x1 - x0) * (y1 - y0);
    }
  }
  return env.back().second;
}

}  // namespace

RocCurve roc_from_scores(std::span<const double> scores,
                         const std::vector<int>& truth,
                         bool higher_is_positive) {
  const auto p = scores.size();
  if (p < 1) throw DataError("empty score vector");
  std::set<int> positive(truth.begin(), truth.end());
  for (int j : positive)
    if (j < 0 || static_cast<std::size_t>(j) >= p)
      throw DataError("truth index out of range");
  const std::size_t n_pos = positive.size();
  const std::size_t n_neg = p - n_pos;
  if (n_pos == 0 || n_neg == 0)
    throw DegenerateTruth("truth set must be non-empty and not all features");

  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto key = [&](std::size_t j) {
    return higher_is_positive ? -scores[j] : scores[j];
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return key(a) < key(b); });

  RocCurve curve;
  curve.points.emplace_back(0.0, 0.0);
  std::size_t tp = 0, fp = 0, i = 0;
  while (i < p) {
    std::size_t k = i;
    // All features tied at this score move together.
    while (k < p && key(order[k]) == key(order[i])) {
      if (positive.count(static_cast<int>(order[k])))
        ++tp;
      else
        ++fp;
      ++k;
    }
    curve.points.emplace_back(static_cast<double>(fp) / static_cast<double>(n_neg),
                              static_cast<double>(tp) / static_cast<double>(n_pos));
    i = k;
  }
  curve.auc = trapezoid_auc(curve.points);
  return curve;
}

std::vector<double> BaselineScores::ranking_scores() const {
  std::vector<double> out(static_cast<std::size_t>(pvalues.size()));
  for (Eigen::Index j = 0; j < pvalues.size(); ++j)
    out[static_cast<std::size_t>(j)] = 1.0 - pvalues(j);
  return out;
}

BaselineScores baseline_ols_pvalues(const DataMatrix& train,
                                    const FeatureSet& selected) {
  const Eigen::Index n = train.n();
  const Eigen::Index p = train.p();

  BaselineScores out;
  out.pvalues = Eigen::VectorXd::Ones(p);

  FeatureSet sel = selected;
  std::sort(sel.begin(), sel.end());
  sel.erase(std::unique(sel.begin(), sel.end()), sel.end());
  for (int j : sel)
    if (j < 0 || j >= p) throw DataError("selected index out of range");
  if (sel.empty()) return out;
  if (static_cast<Eigen::Index>(sel.size()) >= n)
    throw DataError("more selected features than observations");

  const double y_mean = train.y.mean();
  const Eigen::VectorXd yc = train.y.array() - y_mean;

  // Deterministic collinearity handling: walk columns in index order,
  // dropping any whose residual against the accepted basis is negligible
  // (so the smallest index of a collinear group is kept).
  std::vector<int> kept;
  std::vector<Eigen::VectorXd> basis;  // orthonormal
  for (int j : sel) {
    Eigen::VectorXd col = train.x.col(j);
    col.array() -= col.mean();
    const double orig_norm = col.norm();
    for (const auto& q : basis) col -= q.dot(col) * q;
    if (orig_norm <= 0.0 || col.norm() <= 1e-8 * orig_norm) {
      out.dropped.push_back(j);
      continue;
    }
    basis.push_back(col / col.norm());
    kept.push_back(j);
  }
  if (kept.empty()) return out;

  const auto m = static_cast<Eigen::Index>(kept.size());
  const Eigen::Index df = n - m - 1;
  if (df < 1) throw DataError("not enough residual degrees of freedom");

  Eigen::MatrixXd xs(n, m);
  for (Eigen::Index c = 0; c < m; ++c) {
    xs.col(c) = train.x.col(kept[static_cast<std::size_t>(c)]);
    xs.col(c).array() -= xs.col(c).mean();
  }

  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(xs);
  const Eigen::VectorXd beta = qr.solve(yc);
  const double rss = (yc - xs * beta).squaredNorm();
  const double sigma2 = rss / static_cast<double>(df);

  const Eigen::MatrixXd r =
      qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r_inv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(m, m));
  const Eigen::VectorXd xtx_inv_diag = r_inv.rowwise().squaredNorm();

  const boost::math::students_t dist(static_cast<double>(df));
  for (Eigen::Index c = 0; c < m; ++c) {
    const double se = std::sqrt(sigma2 * xtx_inv_diag(c));
    double pv;
    if (se == 0.0 || !std::isfinite(se)) {
      pv = beta(c) == 0.0 ? 1.0 : 0.0;
    } else {
      const double t = beta(c) / se;
      pv = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
    }
    pv = std::min(1.0, std::max(kPvalueFloor, pv));
    out.pvalues(kept[static_cast<std::size_t>(c)]) = pv;
  }
  return out;
}

RocCurve average_roc(std::span<const RocCurve> curves,
                     std::span<const double> grid) {
  if (curves.empty()) throw DataError("no curves to average");

  std::vector<double> grid_points;
  if (grid.empty()) {
    grid_points.resize(101);
    for (std::size_t i = 0; i < grid_points.size(); ++i)
      grid_points[i] = static_cast<double>(i) / 100.0;
  } else {
    grid_points.assign(grid.begin(), grid.end());
    if (!std::is_sorted(grid_points.begin(), grid_points.end()))
      throw BadConfig("fpr grid must be sorted");
  }

  std::vector<std::vector<std::pair<double, double>>> envelopes;
  envelopes.reserve(curves.size());
  for (const RocCurve& c : curves) {
    if (c.points.size() < 2) throw DataError("curve with fewer than 2 points");
    envelopes.push_back(upper_envelope(c));
  }

  RocCurve out;
  out.points.reserve(grid_points.size() + 2);
  for (double g : grid_points) {
    double sum = 0.0;
    for (const auto& env : envelopes) sum += interp_tpr(env, g);
    out.points.emplace_back(g, sum / static_cast<double>(curves.size()));
  }
  // Anchor the endpoints.
  if (out.points.front().first > 0.0 || out.points.front().second > 0.0)
    out.points.insert(out.points.begin(), {0.0, 0.0});
  if (out.points.back().first < 1.0 || out.points.back().second < 1.0)
    out.points.emplace_back(1.0, 1.0);
  out.auc = trapezoid_auc(out.points);
  return out;
}

}  // namespace pcs

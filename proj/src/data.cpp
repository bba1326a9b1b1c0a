#include "pcs/data.hpp"

#include <algorithm>
#include <cmath>

#include "pcs/errors.hpp"

namespace pcs {

namespace {

constexpr double kSdFloor = 1e-12;
constexpr double kStandardizedTol = 1e-10;

void check_standardized_moments(const Eigen::MatrixXd& x) {
  const double n = static_cast<double>(x.rows());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double mean = x.col(j).mean();
    const double ss = (x.col(j).array() - mean).square().sum();
    const double sd = std::sqrt(ss / (n - 1.0));
    if (std::abs(mean) > kStandardizedTol ||
        std::abs(sd - 1.0) > kStandardizedTol) {
      throw DataError("matrix flagged standardized but column " +
                      std::to_string(j) + " has mean " + std::to_string(mean) +
                      ", sd " + std::to_string(sd));
    }
  }
}

void validate_split(const DataMatrix& data, const TrainTestSplit& s) {
  const Eigen::Index n = data.n();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  auto mark = [&](const std::vector<Eigen::Index>& idx) {
    for (Eigen::Index i : idx) {
      if (i < 0 || i >= n) throw DataError("split index out of range");
      if (seen[static_cast<std::size_t>(i)])
        throw DataError("split indices overlap");
      seen[static_cast<std::size_t>(i)] = 1;
    }
  };
  mark(s.train_indices);
  mark(s.test_indices);
  if (s.train_indices.size() + s.test_indices.size() !=
      static_cast<std::size_t>(n))
    throw DataError("split does not cover all observations");
}

}  // namespace

std::vector<std::string> default_feature_names(Eigen::Index p) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(p));
  for (Eigen::Index j = 0; j < p; ++j)
    names.push_back("x" + std::to_string(j + 1));
  return names;
}

DataMatrix make_data_matrix(Eigen::MatrixXd x, Eigen::VectorXd y,
                            std::vector<std::string> feature_names,
                            bool standardized) {
  if (x.rows() < 2) throw DataError("need at least 2 observations");
  if (x.cols() < 1) throw DataError("need at least 1 feature");
  if (y.size() != x.rows())
    throw DimensionMismatch("response length " + std::to_string(y.size()) +
                            " != row count " + std::to_string(x.rows()));
  if (static_cast<Eigen::Index>(feature_names.size()) != x.cols())
    throw DataError("feature name count does not match column count");
  if (!x.allFinite()) throw DataError("feature matrix contains NaN/Inf");
  if (!y.allFinite()) throw DataError("response contains NaN/Inf");
  if (standardized) check_standardized_moments(x);
  return DataMatrix{std::move(x), std::move(y), std::move(feature_names),
                    standardized};
}

DataMatrix standardize(const DataMatrix& data) {
  const double n = static_cast<double>(data.n());
  Eigen::MatrixXd x = data.x;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double mean = x.col(j).mean();
    x.col(j).array() -= mean;
    const double sd = std::sqrt(x.col(j).squaredNorm() / (n - 1.0));
    if (sd <= kSdFloor)
      throw ConstantColumn(static_cast<int>(j),
                           data.feature_names[static_cast<std::size_t>(j)]);
    x.col(j) /= sd;
  }
  return DataMatrix{std::move(x), data.y, data.feature_names, true};
}

TrainTestSplit split(const DataMatrix& data, double fraction,
                     const SeedSpec& seed) {
  if (!(fraction > 0.0 && fraction < 1.0))
    throw BadFraction("fraction must lie in (0, 1), got " +
                      std::to_string(fraction));
  const Eigen::Index n = data.n();
  // Round half up.
  const auto n_test = static_cast<Eigen::Index>(
      std::floor(fraction * static_cast<double>(n) + 0.5));
  if (n_test < 1 || n_test > n - 1)
    throw BadFraction("fraction " + std::to_string(fraction) +
                      " leaves an empty train or test set for n = " +
                      std::to_string(n));

  RngStream rng(seed.child("split"));
  const auto perm = rng.permutation(static_cast<std::size_t>(n));

  TrainTestSplit out;
  out.fraction = fraction;
  out.test_indices.reserve(static_cast<std::size_t>(n_test));
  out.train_indices.reserve(static_cast<std::size_t>(n - n_test));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto ix = static_cast<Eigen::Index>(perm[static_cast<std::size_t>(i)]);
    (i < n_test ? out.test_indices : out.train_indices).push_back(ix);
  }
  std::sort(out.test_indices.begin(), out.test_indices.end());
  std::sort(out.train_indices.begin(), out.train_indices.end());
  return out;
}

DataMatrix subset_rows(const DataMatrix& data,
                       std::span<const Eigen::Index> rows) {
  const auto m = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd x(m, data.p());
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index r = rows[static_cast<std::size_t>(i)];
    if (r < 0 || r >= data.n()) throw DataError("row index out of range");
    x.row(i) = data.x.row(r);
    y(i) = data.y(r);
  }
  // A row subset generally no longer has unit-variance columns.
  return DataMatrix{std::move(x), std::move(y), data.feature_names, false};
}

std::array<std::pair<DataMatrix, DataMatrix>, 2> swap_halves(
    const DataMatrix& data, const TrainTestSplit& s) {
  validate_split(data, s);
  DataMatrix train = subset_rows(data, s.train_indices);
  DataMatrix test = subset_rows(data, s.test_indices);
  return {std::make_pair(train, test), std::make_pair(test, train)};
}

}  // namespace pcs

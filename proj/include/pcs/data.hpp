#pragma once

#include <Eigen/Core>
#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pcs/random.hpp"

namespace pcs {

/// Feature matrix plus response. Rows are observations, columns features.
/// Treated as immutable after construction; operations return new matrices.
struct DataMatrix {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  std::vector<std::string> feature_names;
  bool standardized = false;

  Eigen::Index n() const { return x.rows(); }
  Eigen::Index p() const { return x.cols(); }
};

std::vector<std::string> default_feature_names(Eigen::Index p);

/// Validating factory: finite entries, n >= 2, p >= 1, name count = p.
/// When `standardized` is set, column moments are checked too.
DataMatrix make_data_matrix(Eigen::MatrixXd x, Eigen::VectorXd y,
                            std::vector<std::string> feature_names,
                            bool standardized = false);

/// Center each column to mean 0 and scale to sample sd 1 (n-1 denominator).
/// Throws ConstantColumn for zero-variance columns. y passes through.
DataMatrix standardize(const DataMatrix& data);

struct TrainTestSplit {
  std::vector<Eigen::Index> train_indices;  // sorted ascending
  std::vector<Eigen::Index> test_indices;   // sorted ascending
  double fraction = 0.0;
};

/// Uniformly random partition with |test| = round(fraction * n), rounding
/// half up. Deterministic given the seed.
TrainTestSplit split(const DataMatrix& data, double fraction,
                     const SeedSpec& seed);

DataMatrix subset_rows(const DataMatrix& data,
                       std::span<const Eigen::Index> rows);

/// Both half orderings for downstream averaging:
/// [0] = (train rows, test rows), [1] = (test rows, train rows).
std::array<std::pair<DataMatrix, DataMatrix>, 2> swap_halves(
    const DataMatrix& data, const TrainTestSplit& split);

}  // namespace pcs

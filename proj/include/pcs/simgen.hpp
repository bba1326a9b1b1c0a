#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pcs/data.hpp"

namespace pcs {

struct NoiseSpec {
  enum class Kind { gaussian, student_t, block_gaussian, heteroskedastic };
  Kind kind = Kind::gaussian;
  double sd = 1.0;      // gaussian / student_t multiplier / block marginal sd
  int df = 3;           // student_t
  int block_size = 25;  // block_gaussian
  double rho = 0.5;     // block_gaussian within-block correlation
  double c = 0.0;       // heteroskedastic; 0 = scale so mean variance is 1
};

/// Threshold rule on a pair of active features:
/// contributes coef * 1(x_a > t_a) * 1(x_b > t_b).
struct RulePair {
  int a = 0;
  int b = 0;
  double t_a = 0.0;
  double t_b = 0.0;
  double coef = 1.0;
};

using RuleSet = std::vector<RulePair>;

struct MisspecSpec {
  enum class Kind { none, drop_active, rule_response };
  Kind kind = Kind::none;
  int drop_k = 12;       // drop_active
  int rule_pairs = 0;    // rule_response; 0 = floor(s/2), at least 1
  double rule_coef = 1.0;
  double rule_noise_sd = 1.0;
  RuleSet rules;         // sampled by simulate() when empty
};

struct SimConfig {
  int n = 250;
  int p_base = 35;
  NoiseSpec noise;
  MisspecSpec misspec;
  std::uint64_t seed = 0;

  /// Feature count after pairwise-interaction augmentation.
  int p() const { return p_base + p_base * (p_base - 1) / 2; }
  /// Active-set size floor(sqrt(p)).
  int s() const;
};

/// Generating truth. `active_set` and `beta` index the generating matrix;
/// `fitted_visible_set` indexes the matrix handed to fitting, which differs
/// only under the drop_active misspecification.
struct GroundTruth {
  std::vector<int> active_set;
  Eigen::VectorXd beta;
  std::vector<int> fitted_visible_set;
};

/// Base columns are exp of Gaussians with exchangeable correlation 0.3
/// (a documented stand-in for skewed, positively correlated enrichment
/// measurements), standardized; then all C(p_base,2) pairwise products in
/// lexicographic order (x1:x2, x1:x3, ...), each standardized.
/// The response slot is zero-filled.
DataMatrix make_features(int n, int p_base, std::uint64_t seed);

/// Uniform floor(sqrt(p))-subset of features; beta is 1 on it, 0 elsewhere.
GroundTruth assign_active(int p, std::uint64_t seed);

/// Sample `count` distinct unordered pairs of distinct active features with
/// per-feature median thresholds.
RuleSet sample_rules(const DataMatrix& x, const GroundTruth& truth, int count,
                     double coef, std::uint64_t seed);

/// y = x beta + eps for the linear settings; the rule_response setting
/// replaces the linear signal with the threshold-rule sum in config.misspec.
Eigen::VectorXd gen_response(const DataMatrix& x, const GroundTruth& truth,
                             const SimConfig& config);

/// Delete k randomly chosen active columns before fitting. The returned
/// truth keeps the full generating active set and records the surviving
/// actives (re-indexed to the reduced matrix) as fitted_visible_set.
std::pair<DataMatrix, GroundTruth> apply_misspec_drop(const DataMatrix& data,
                                                      const GroundTruth& truth,
                                                      int k,
                                                      std::uint64_t seed);

struct SimulatedDataset {
  DataMatrix data;
  GroundTruth truth;
  RuleSet rules;  // non-empty only for rule_response
};

/// Deterministic end-to-end generation from a SimConfig.
SimulatedDataset simulate(const SimConfig& config);

/// The six named generative settings.
std::vector<std::string> setting_names();

/// Defaults for a named setting; n/p_base/seed are caller-supplied.
SimConfig setting_config(const std::string& name, int n, int p_base,
                         std::uint64_t seed);

}  // namespace pcs

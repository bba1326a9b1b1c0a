#include "pcs/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "pcs/errors.hpp"

namespace pcs {

namespace {

constexpr double kBaseCorrelation = 0.3;

Eigen::VectorXd standardize_column(Eigen::VectorXd col) {
  const double n = static_cast<double>(col.size());
  const double mean = col.mean();
  col.array() -= mean;
  const double sd = std::sqrt(col.squaredNorm() / (n - 1.0));
  if (sd <= 1e-12)
    throw DataError("degenerate simulated column (zero variance)");
  return col / sd;
}

double column_median(const Eigen::VectorXd& col) {
  std::vector<double> v(col.data(), col.data() + col.size());
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size();
  return m % 2 == 1 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

void validate_noise(const NoiseSpec& noise) {
  switch (noise.kind) {
    case NoiseSpec::Kind::gaussian:
      if (noise.sd < 0.0) throw BadConfig("gaussian noise sd must be >= 0");
      break;
    case NoiseSpec::Kind::student_t:
      if (noise.df < 1) throw BadConfig("student_t df must be >= 1");
      if (noise.sd < 0.0) throw BadConfig("student_t scale must be >= 0");
      break;
    case NoiseSpec::Kind::block_gaussian:
      if (noise.block_size < 1) throw BadConfig("block_size must be >= 1");
      if (!(noise.rho >= 0.0 && noise.rho < 1.0))
        throw BadConfig("block rho must lie in [0, 1)");
      if (noise.sd < 0.0) throw BadConfig("block noise sd must be >= 0");
      break;
    case NoiseSpec::Kind::heteroskedastic:
      if (noise.c < 0.0) throw BadConfig("heteroskedastic c must be >= 0");
      break;
  }
}

}  // namespace

int SimConfig::s() const {
  return static_cast<int>(std::floor(std::sqrt(static_cast<double>(p()))));
}

DataMatrix make_features(int n, int p_base, std::uint64_t seed) {
  if (p_base < 2) throw BadConfig("p_base must be >= 2");
  if (n < 2) throw BadConfig("n must be >= 2");

  RngStream rng(seed);
  Eigen::MatrixXd base(n, p_base);
  const double shared = std::sqrt(kBaseCorrelation);
  const double indep = std::sqrt(1.0 - kBaseCorrelation);
  for (int i = 0; i < n; ++i) {
    const double u = rng.normal();
    for (int j = 0; j < p_base; ++j)
      base(i, j) = std::exp(shared * u + indep * rng.normal());
  }
  for (int j = 0; j < p_base; ++j)
    base.col(j) = standardize_column(base.col(j));

  const int p = p_base + p_base * (p_base - 1) / 2;
  Eigen::MatrixXd x(n, p);
  x.leftCols(p_base) = base;
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(p));
  for (int j = 0; j < p_base; ++j) names.push_back("x" + std::to_string(j + 1));

  int col = p_base;
  for (int j = 0; j < p_base; ++j) {
    for (int k = j + 1; k < p_base; ++k) {
      x.col(col) =
          standardize_column(base.col(j).cwiseProduct(base.col(k)));
      names.push_back("x" + std::to_string(j + 1) + ":x" +
                      std::to_string(k + 1));
      ++col;
    }
  }
  return DataMatrix{std::move(x), Eigen::VectorXd::Zero(n), std::move(names),
                    true};
}

GroundTruth assign_active(int p, std::uint64_t seed) {
  if (p < 1) throw BadConfig("p must be >= 1");
  const int s = static_cast<int>(std::floor(std::sqrt(static_cast<double>(p))));
  RngStream rng(seed);
  const auto chosen = rng.sample_without_replacement(
      static_cast<std::size_t>(p), static_cast<std::size_t>(s));

  GroundTruth truth;
  truth.beta = Eigen::VectorXd::Zero(p);
  truth.active_set.reserve(chosen.size());
  for (std::size_t idx : chosen) {
    truth.active_set.push_back(static_cast<int>(idx));
    truth.beta(static_cast<Eigen::Index>(idx)) = 1.0;
  }
  truth.fitted_visible_set = truth.active_set;
  return truth;
}

RuleSet sample_rules(const DataMatrix& x, const GroundTruth& truth, int count,
                     double coef, std::uint64_t seed) {
  const auto s = truth.active_set.size();
  if (s < 2) throw BadConfig("rule sampling needs at least 2 active features");
  const std::size_t max_pairs = s * (s - 1) / 2;
  if (count < 1 || static_cast<std::size_t>(count) > max_pairs)
    throw BadConfig("rule pair count out of range");

  RngStream rng(seed);
  std::set<std::pair<int, int>> used;
  RuleSet rules;
  while (rules.size() < static_cast<std::size_t>(count)) {
    const auto i = rng.uniform_below(s);
    const auto j = rng.uniform_below(s);
    if (i == j) continue;
    int a = truth.active_set[i];
    int b = truth.active_set[j];
    if (a > b) std::swap(a, b);
    if (!used.insert({a, b}).second) continue;
    RulePair pair;
    pair.a = a;
    pair.b = b;
    pair.t_a = column_median(x.x.col(a));
    pair.t_b = column_median(x.x.col(b));
    pair.coef = coef;
    rules.push_back(pair);
  }
  return rules;
}

Eigen::VectorXd gen_response(const DataMatrix& x, const GroundTruth& truth,
                             const SimConfig& config) {
  validate_noise(config.noise);
  if (truth.beta.size() != x.p())
    throw DimensionMismatch("truth/beta length does not match feature count");

  const Eigen::Index n = x.n();
  Eigen::VectorXd signal;
  if (config.misspec.kind == MisspecSpec::Kind::rule_response) {
    if (config.misspec.rules.empty())
      throw BadConfig("rule_response needs a non-empty rule set");
    signal = Eigen::VectorXd::Zero(n);
    for (const RulePair& r : config.misspec.rules) {
      if (r.a < 0 || r.b < 0 || r.a >= x.p() || r.b >= x.p() || r.a == r.b)
        throw BadConfig("rule pair references invalid features");
      for (Eigen::Index i = 0; i < n; ++i)
        if (x.x(i, r.a) > r.t_a && x.x(i, r.b) > r.t_b) signal(i) += r.coef;
    }
  } else {
    signal = x.x * truth.beta;
  }

  RngStream rng(SeedSpec{config.seed}.child("noise"));
  Eigen::VectorXd eps(n);
  const NoiseSpec& noise = config.noise;
  NoiseSpec::Kind kind = noise.kind;
  double sd = noise.sd;
  if (config.misspec.kind == MisspecSpec::Kind::rule_response) {
    kind = NoiseSpec::Kind::gaussian;
    sd = config.misspec.rule_noise_sd;
  }
  switch (kind) {
    case NoiseSpec::Kind::gaussian:
      for (Eigen::Index i = 0; i < n; ++i) eps(i) = sd * rng.normal();
      break;
    case NoiseSpec::Kind::student_t:
      for (Eigen::Index i = 0; i < n; ++i)
        eps(i) = sd * rng.student_t(noise.df);
      break;
    case NoiseSpec::Kind::block_gaussian: {
      const double shared = std::sqrt(noise.rho);
      const double indep = std::sqrt(1.0 - noise.rho);
      for (Eigen::Index start = 0; start < n; start += noise.block_size) {
        const double u = rng.normal();
        const Eigen::Index end = std::min<Eigen::Index>(
            start + noise.block_size, n);
        for (Eigen::Index i = start; i < end; ++i)
          eps(i) = sd * (shared * u + indep * rng.normal());
      }
      break;
    }
    case NoiseSpec::Kind::heteroskedastic: {
      double c = noise.c;
      if (c == 0.0) {
        // Scale so the average noise variance is 1.
        const double mean_sq = x.x.rowwise().squaredNorm().mean();
        if (mean_sq <= 0.0) throw BadConfig("zero feature matrix");
        c = 1.0 / mean_sq;
      }
      for (Eigen::Index i = 0; i < n; ++i)
        eps(i) = std::sqrt(c * x.x.row(i).squaredNorm()) * rng.normal();
      break;
    }
  }
  return signal + eps;
}

std::pair<DataMatrix, GroundTruth> apply_misspec_drop(const DataMatrix& data,
                                                      const GroundTruth& truth,
                                                      int k,
                                                      std::uint64_t seed) {
  if (k < 0 || static_cast<std::size_t>(k) > truth.active_set.size())
    throw KTooLarge("cannot drop " + std::to_string(k) + " of " +
                    std::to_string(truth.active_set.size()) +
                    " active features");
  if (k == 0) return {data, truth};

  RngStream rng(seed);
  const auto pick = rng.sample_without_replacement(truth.active_set.size(),
                                                   static_cast<std::size_t>(k));
  std::set<int> dropped;
  for (std::size_t i : pick) dropped.insert(truth.active_set[i]);

  const Eigen::Index p_new = data.p() - k;
  Eigen::MatrixXd x(data.n(), p_new);
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(p_new));
  std::vector<int> new_index(static_cast<std::size_t>(data.p()), -1);
  Eigen::Index col = 0;
  for (Eigen::Index j = 0; j < data.p(); ++j) {
    if (dropped.count(static_cast<int>(j))) continue;
    x.col(col) = data.x.col(j);
    names.push_back(data.feature_names[static_cast<std::size_t>(j)]);
    new_index[static_cast<std::size_t>(j)] = static_cast<int>(col);
    ++col;
  }

  GroundTruth out = truth;
  out.fitted_visible_set.clear();
  for (int j : truth.active_set)
    if (!dropped.count(j))
      out.fitted_visible_set.push_back(new_index[static_cast<std::size_t>(j)]);

  DataMatrix reduced{std::move(x), data.y, std::move(names),
                     data.standardized};
  return {std::move(reduced), std::move(out)};
}

SimulatedDataset simulate(const SimConfig& config) {
  const SeedSpec seed{config.seed};
  DataMatrix features =
      make_features(config.n, config.p_base, seed.child("features"));
  GroundTruth truth = assign_active(config.p(), seed.child("active"));

  SimConfig effective = config;
  if (effective.misspec.kind == MisspecSpec::Kind::rule_response &&
      effective.misspec.rules.empty()) {
    int count = effective.misspec.rule_pairs;
    if (count <= 0) count = std::max(1, config.s() / 2);
    effective.misspec.rules =
        sample_rules(features, truth, count, effective.misspec.rule_coef,
                     seed.child("rules"));
  }

  features.y = gen_response(features, truth, effective);

  SimulatedDataset out;
  out.rules = effective.misspec.rules;
  if (effective.misspec.kind == MisspecSpec::Kind::drop_active) {
    auto [reduced, new_truth] = apply_misspec_drop(
        features, truth, effective.misspec.drop_k, seed.child("drop"));
    out.data = std::move(reduced);
    out.truth = std::move(new_truth);
  } else {
    out.data = std::move(features);
    out.truth = std::move(truth);
  }
  return out;
}

std::vector<std::string> setting_names() {
  return {"gaussian",        "student_t",   "block_gaussian",
          "heteroskedastic", "drop_active", "rule_response"};
}

SimConfig setting_config(const std::string& name, int n, int p_base,
                         std::uint64_t seed) {
  SimConfig config;
  config.n = n;
  config.p_base = p_base;
  config.seed = seed;
  if (name == "gaussian") {
    config.noise.kind = NoiseSpec::Kind::gaussian;
  } else if (name == "student_t") {
    config.noise.kind = NoiseSpec::Kind::student_t;
    config.noise.df = 3;
  } else if (name == "block_gaussian") {
    config.noise.kind = NoiseSpec::Kind::block_gaussian;
    config.noise.block_size = 25;
    config.noise.rho = 0.5;
    config.noise.sd = 1.0;
  } else if (name == "heteroskedastic") {
    config.noise.kind = NoiseSpec::Kind::heteroskedastic;
    config.noise.c = 0.0;  // auto-scale to unit mean variance
  } else if (name == "drop_active") {
    config.noise.kind = NoiseSpec::Kind::gaussian;
    config.misspec.kind = MisspecSpec::Kind::drop_active;
    config.misspec.drop_k = 12;
  } else if (name == "rule_response") {
    config.noise.kind = NoiseSpec::Kind::gaussian;
    config.misspec.kind = MisspecSpec::Kind::rule_response;
  } else {
    throw BadConfig("unknown setting '" + name + "'; available: " +
                    [] {
                      std::string all;
                      for (const auto& s : setting_names())
                        all += (all.empty() ? "" : ", ") + s;
                      return all;
                    }());
  }
  return config;
}

}  // namespace pcs

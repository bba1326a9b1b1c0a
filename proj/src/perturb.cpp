#include "pcs/perturb.hpp"

#include <algorithm>

#include "pcs/errors.hpp"

namespace pcs {

int PerturbationPlan::bootstrap_count() const {
  return static_cast<int>(
      std::count_if(data_perturbations.begin(), data_perturbations.end(),
                    [](const DataPerturbation& d) {
                      return d.kind == DataPerturbation::Kind::bootstrap;
                    }));
}

DataMatrix bootstrap_sample(const DataMatrix& data, std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(data.n());
  RngStream rng(seed);
  const auto rows = rng.sample_with_replacement(n, n);

  Eigen::MatrixXd x(data.n(), data.p());
  Eigen::VectorXd y(data.n());
  for (std::size_t i = 0; i < n; ++i) {
    x.row(static_cast<Eigen::Index>(i)) =
        data.x.row(static_cast<Eigen::Index>(rows[i]));
    y(static_cast<Eigen::Index>(i)) = data.y(static_cast<Eigen::Index>(rows[i]));
  }
  // Resampled columns are no longer exactly mean 0 / sd 1.
  return DataMatrix{std::move(x), std::move(y), data.feature_names, false};
}

DataMatrix generate_null_data(const DataMatrix& data, const NullSpec& spec) {
  RngStream rng(spec.seed);
  Eigen::VectorXd y(data.n());
  switch (spec.kind) {
    case NullSpec::Kind::permute_response: {
      const auto perm = rng.permutation(static_cast<std::size_t>(data.n()));
      for (Eigen::Index i = 0; i < data.n(); ++i)
        y(i) = data.y(static_cast<Eigen::Index>(
            perm[static_cast<std::size_t>(i)]));
      break;
    }
    case NullSpec::Kind::gaussian_parametric: {
      if (spec.sd <= 0.0)
        throw BadSd("gaussian null needs sd > 0, got " +
                    std::to_string(spec.sd));
      for (Eigen::Index i = 0; i < data.n(); ++i)
        y(i) = spec.mean + spec.sd * rng.normal();
      break;
    }
  }
  return DataMatrix{data.x, std::move(y), data.feature_names,
                    data.standardized};
}

DataMatrix apply_perturbation(const DataMatrix& data,
                              const DataPerturbation& pert) {
  switch (pert.kind) {
    case DataPerturbation::Kind::identity:
      return data;
    case DataPerturbation::Kind::bootstrap:
      if (pert.replicate_index < 1)
        throw BadConfig("bootstrap replicate_index must be >= 1");
      return bootstrap_sample(data, pert.seed);
    case DataPerturbation::Kind::null_constrained: {
      if (!pert.null)
        throw BadConfig("null_constrained perturbation lacks a NullSpec");
      NullSpec spec = *pert.null;
      if (spec.seed == 0) spec.seed = pert.seed;
      return generate_null_data(data, spec);
    }
  }
  throw BadConfig("unknown perturbation kind");
}

PerturbationPlan build_plan(const LambdaPath& path, int B,
                            const std::optional<NullSpec>& null,
                            const SeedSpec& seed) {
  if (B < 1) throw BadConfig("B must be >= 1");
  if (path.values.empty()) throw BadConfig("empty lambda path");

  PerturbationPlan plan;
  plan.data_perturbations.reserve(static_cast<std::size_t>(B) +
                                  (null ? 1 : 0));
  for (int b = 1; b <= B; ++b) {
    DataPerturbation d;
    d.kind = DataPerturbation::Kind::bootstrap;
    d.replicate_index = b;
    d.seed = seed.child("bootstrap", static_cast<std::uint64_t>(b));
    d.id = "boot:" + std::to_string(b);
    plan.data_perturbations.push_back(std::move(d));
  }
  if (null) {
    DataPerturbation d;
    d.kind = DataPerturbation::Kind::null_constrained;
    d.null = *null;
    d.seed = null->seed != 0 ? null->seed : seed.child("null");
    d.id = "null";
    plan.data_perturbations.push_back(std::move(d));
  }

  plan.model_perturbations.reserve(path.values.size());
  for (std::size_t i = 0; i < path.values.size(); ++i) {
    ModelPerturbation m;
    m.lambda = path.values[i];
    m.model_id = "lambda:" + std::to_string(i);
    plan.model_perturbations.push_back(std::move(m));
  }
  return plan;
}

}  // namespace pcs

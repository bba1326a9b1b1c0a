#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcs/data.hpp"
#include "pcs/lasso.hpp"

namespace pcs {

/// Constrained perturbation encoding a null hypothesis: either permute the
/// observed responses (keeps their multiset exactly) or redraw them from a
/// parametric Gaussian. Features pass through untouched.
struct NullSpec {
  enum class Kind { permute_response, gaussian_parametric };
  Kind kind = Kind::permute_response;
  double mean = 0.0;
  double sd = 1.0;
  std::uint64_t seed = 0;  // 0 = derive from the plan's master seed
};

struct DataPerturbation {
  enum class Kind { identity, bootstrap, null_constrained };
  Kind kind = Kind::identity;
  int replicate_index = 0;  // bootstrap only, in [1, B]
  std::optional<NullSpec> null;
  std::uint64_t seed = 0;
  std::string id;
};

struct ModelPerturbation {
  double lambda = 0.0;
  std::string model_id;
};

/// The pair (data perturbations, model perturbations) whose product grid
/// realizes the target distribution.
struct PerturbationPlan {
  std::vector<DataPerturbation> data_perturbations;
  std::vector<ModelPerturbation> model_perturbations;

  int bootstrap_count() const;
};

/// n rows drawn uniformly with replacement; each x row travels with its y
/// entry. Deterministic given the seed.
DataMatrix bootstrap_sample(const DataMatrix& data, std::uint64_t seed);

DataMatrix generate_null_data(const DataMatrix& data, const NullSpec& spec);

DataMatrix apply_perturbation(const DataMatrix& data,
                              const DataPerturbation& pert);

/// B bootstrap perturbations (child seed per replicate index) plus one model
/// perturbation per path value. A null spec, when given, is attached as one
/// additional constrained data perturbation.
PerturbationPlan build_plan(const LambdaPath& path, int B,
                            const std::optional<NullSpec>& null,
                            const SeedSpec& seed);

}  // namespace pcs

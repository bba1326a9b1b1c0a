#include "pcs/benchmark.hpp"

#include <cmath>

#include "pcs/errors.hpp"

namespace pcs {

RocBenchmarkResult run_roc_benchmark(const RocJob& job) {
  const SeedSpec seed{job.master_seed};

  std::vector<double> grid(static_cast<std::size_t>(job.grid_points));
  for (std::size_t i = 0; i < grid.size(); ++i)
    grid[i] = static_cast<double>(i) / static_cast<double>(job.grid_points - 1);

  std::vector<std::vector<RocCurve>> curves(job.methods.size());

  for (int r = 0; r < job.replicates; ++r) {
    SimConfig sim_config = job.sim.config;
    sim_config.seed = seed.child("replicate", static_cast<std::uint64_t>(r));
    const SimulatedDataset ds = simulate(sim_config);

    std::vector<int> positives = ds.truth.fitted_visible_set;
    const int dropped = static_cast<int>(ds.truth.active_set.size() -
                                         ds.truth.fitted_visible_set.size());
    const int p_fit = static_cast<int>(ds.data.p());
    if (job.count_dropped_positives) {
      // Deleted actives become never-findable positives: phantom slots
      // ranked below every real score.
      for (int d = 0; d < dropped; ++d) positives.push_back(p_fit + d);
    }
    auto score_vector = [&](std::vector<double> scores) {
      if (job.count_dropped_positives)
        scores.insert(scores.end(), static_cast<std::size_t>(dropped), -1.0);
      return scores;
    };

    // Both methods share the replicate's master seed, hence its split.
    PcsConfig run_config = job.pcs;
    run_config.master_seed = seed.child("pcs", static_cast<std::uint64_t>(r));

    for (std::size_t m = 0; m < job.methods.size(); ++m) {
      if (job.methods[m] == "pcs") {
        const StabilityReport report = run_pcs(ds.data, run_config);
        curves[m].push_back(
            roc_from_scores(score_vector(report.scores), positives));
      } else if (job.methods[m] == "ols_baseline") {
        const auto scores = run_ols_baseline(ds.data, run_config);
        curves[m].push_back(roc_from_scores(score_vector(scores), positives));
      } else {
        throw BadConfig("unknown method '" + job.methods[m] + "'");
      }
    }
  }

  RocBenchmarkResult result;
  result.replicates = job.replicates;
  for (std::size_t m = 0; m < job.methods.size(); ++m) {
    MethodRoc method;
    method.method = job.methods[m];
    method.averaged = average_roc(curves[m], grid);
    method.aucs.reserve(curves[m].size());
    for (const RocCurve& c : curves[m]) method.aucs.push_back(c.auc);

    double mean = 0.0;
    for (double a : method.aucs) mean += a;
    mean /= static_cast<double>(method.aucs.size());
    double var = 0.0;
    if (method.aucs.size() > 1) {
      for (double a : method.aucs) var += (a - mean) * (a - mean);
      var /= static_cast<double>(method.aucs.size() - 1);
    }
    method.auc_mean = mean;
    method.auc_sd = std::sqrt(var);
    result.methods.push_back(std::move(method));
  }
  return result;
}

}  // namespace pcs

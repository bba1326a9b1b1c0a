#pragma once

#include <string>
#include <vector>

#include "pcs/config.hpp"
#include "pcs/eval.hpp"

namespace pcs {

struct MethodRoc {
  std::string method;
  RocCurve averaged;
  std::vector<double> aucs;  // per replicate
  double auc_mean = 0.0;
  double auc_sd = 0.0;  // sample sd (n-1)
};

struct RocBenchmarkResult {
  std::vector<MethodRoc> methods;
  int replicates = 0;
};

/// Replicated feature-selection benchmark: simulate, run the stability
/// pipeline and/or the OLS baseline with a shared per-replicate split, score
/// each ranking against the generating truth, and vertically average the
/// per-replicate ROC curves.
RocBenchmarkResult run_roc_benchmark(const RocJob& job);

}  // namespace pcs

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "pcs/inference.hpp"
#include "pcs/simgen.hpp"

namespace pcs {

/// Fetch a required field; a missing field is a hard error naming the
/// field, so every analysis config states its choices explicitly.
const nlohmann::json& require_field(const nlohmann::json& j,
                                    const std::string& field);

struct AnalyzeJob {
  std::string data_csv;
  std::string response = "y";
  PcsConfig pcs;
  nlohmann::json effective;  // config with overrides applied; digest source
};

/// Validate and load an analysis config. Required fields: target, data,
/// perturbations (data + model), split, metric, screening, master_seed.
/// seed_override, when >= 0, replaces master_seed before the digest is
/// computed.
AnalyzeJob parse_analyze_config(nlohmann::json config,
                                long long seed_override = -1,
                                int threads = 1);

/// Engine-only variant of the analyze schema (no `data` section), for
/// callers that already hold the matrix in memory.
PcsConfig parse_engine_config(nlohmann::json config,
                              long long seed_override = -1, int threads = 1);

NullSpec parse_null_spec(const nlohmann::json& j);

struct SimulateJob {
  std::string setting;
  SimConfig config;
  nlohmann::json effective;
};

/// Simulation config: a named setting plus optional n/p_base/noise/misspec
/// overrides.
SimulateJob parse_simulate_config(nlohmann::json config,
                                  const std::string& setting_override = "",
                                  long long seed_override = -1);

struct RocJob {
  SimulateJob sim;
  int replicates = 0;
  std::vector<std::string> methods;
  PcsConfig pcs;
  int grid_points = 101;
  std::uint64_t master_seed = 0;
  // Under drop_active, deleted actives are excluded from the positives by
  // default; "count" scores them as never-findable positives instead.
  bool count_dropped_positives = false;
  nlohmann::json effective;
};

RocJob parse_roc_config(nlohmann::json config, long long seed_override = -1,
                        int threads = 1);

}  // namespace pcs

#include "pcs/report_io.hpp"

#include <cstdio>
#include <fstream>

#include "pcs/errors.hpp"

namespace pcs {

std::string canonical_digest(const nlohmann::json& config) {
  const std::string dump = config.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

nlohmann::json report_to_json(const StabilityReport& report) {
  nlohmann::json j;
  j["scores"] = report.scores;
  if (report.intervals) {
    nlohmann::json intervals = nlohmann::json::object();
    for (std::size_t k = 0; k < report.intervals->size(); ++k) {
      const auto& [lo, hi] = (*report.intervals)[k];
      intervals[report.feature_names[k]] = {lo, hi};
    }
    j["intervals"] = std::move(intervals);
  } else {
    j["intervals"] = nullptr;
  }
  j["config_digest"] = report.provenance;
  j["convergence_failures"] = report.convergence_failures;
  j["halves_averaged"] = report.halves_averaged;
  j["master_seed"] = report.master_seed;
  j["feature_names"] = report.feature_names;
  if (!report.per_model.empty()) {
    nlohmann::json models = nlohmann::json::array();
    for (const PerModelScores& pm : report.per_model) {
      models.push_back({{"model_id", pm.model_id},
                        {"lambda", pm.lambda},
                        {"screening_error", pm.screening_error},
                        {"scores", pm.scores}});
    }
    j["per_model"] = std::move(models);
  }
  return j;
}

nlohmann::json hypotest_to_json(const HypothesisTestResult& result) {
  nlohmann::json j;
  j["observed"] = report_to_json(result.observed);
  j["null"] = report_to_json(result.null_report);
  nlohmann::json divergence;
  divergence["score_diff"] = result.score_diff;
  if (result.interval_overlap) {
    divergence["interval_overlap"] = *result.interval_overlap;
  } else {
    divergence["interval_overlap"] = nullptr;
  }
  j["divergence"] = std::move(divergence);
  return j;
}

nlohmann::json truth_to_json(const SimulatedDataset& dataset,
                             const std::string& setting,
                             const std::string& digest,
                             std::uint64_t master_seed) {
  nlohmann::json j;
  j["setting"] = setting;
  j["n"] = dataset.data.n();
  j["p"] = dataset.data.p();
  j["active_set"] = dataset.truth.active_set;
  j["fitted_visible_set"] = dataset.truth.fitted_visible_set;
  j["feature_names"] = dataset.data.feature_names;
  if (!dataset.rules.empty()) {
    nlohmann::json rules = nlohmann::json::array();
    for (const RulePair& r : dataset.rules)
      rules.push_back({{"a", r.a},
                       {"b", r.b},
                       {"t_a", r.t_a},
                       {"t_b", r.t_b},
                       {"coef", r.coef}});
    j["rules"] = std::move(rules);
  }
  j["config_digest"] = digest;
  j["master_seed"] = master_seed;
  return j;
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("invalid JSON in " + path.string() + ": " + e.what());
  }
  return j;
}

void write_json_file(const std::filesystem::path& path,
                     const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw DataError("write failed for " + path.string());
}

void write_roc_csv(const std::filesystem::path& path, const RocCurve& curve) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "fpr,tpr\n";
  char buf[32];
  for (const auto& [fpr, tpr] : curve.points) {
    std::snprintf(buf, sizeof(buf), "%.17g", fpr);
    out << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", tpr);
    out << buf << '\n';
  }
  if (!out) throw DataError("write failed for " + path.string());
}

}  // namespace pcs

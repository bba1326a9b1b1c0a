#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "pcs/eval.hpp"
#include "pcs/inference.hpp"
#include "pcs/simgen.hpp"

namespace pcs {

/// 64-bit FNV-1a over the canonical (sorted-key, compact) dump, as a
/// 16-hex-digit string. Equal digests imply byte-identical effective
/// configs, which in turn imply byte-identical outputs.
std::string canonical_digest(const nlohmann::json& config);

nlohmann::json report_to_json(const StabilityReport& report);
nlohmann::json hypotest_to_json(const HypothesisTestResult& result);
nlohmann::json truth_to_json(const SimulatedDataset& dataset,
                             const std::string& setting,
                             const std::string& digest,
                             std::uint64_t master_seed);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path,
                     const nlohmann::json& j);

void write_roc_csv(const std::filesystem::path& path, const RocCurve& curve);

}  // namespace pcs

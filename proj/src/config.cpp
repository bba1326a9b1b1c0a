#include "pcs/config.hpp"

#include <algorithm>

#include "pcs/errors.hpp"
#include "pcs/report_io.hpp"

namespace pcs {

namespace {

double as_number(const nlohmann::json& j, const std::string& field) {
  const auto& v = require_field(j, field);
  if (!v.is_number())
    throw ConfigError("config field '" + field + "' must be a number");
  return v.get<double>();
}

long long as_integer(const nlohmann::json& j, const std::string& field) {
  const auto& v = require_field(j, field);
  if (!v.is_number_integer())
    throw ConfigError("config field '" + field + "' must be an integer");
  return v.get<long long>();
}

std::string as_string(const nlohmann::json& j, const std::string& field) {
  const auto& v = require_field(j, field);
  if (!v.is_string())
    throw ConfigError("config field '" + field + "' must be a string");
  return v.get<std::string>();
}

// Parse the shared engine section: perturbations, split, metric, screening,
// plus optional knobs. Fills everything except master_seed/digest/threads.
PcsConfig parse_pcs_section(const nlohmann::json& j, nlohmann::json& norm) {
  PcsConfig config;

  const std::string target = as_string(j, "target");
  if (target != "selected_features")
    throw ConfigError("unsupported target '" + target +
                      "'; this build implements 'selected_features'");
  norm["target"] = target;

  const auto& perturbations = require_field(j, "perturbations");
  const auto& data_pert = require_field(perturbations, "data");
  const std::string kind = as_string(data_pert, "kind");
  if (kind == "bootstrap") {
    config.data_perturbation = DataPerturbation::Kind::bootstrap;
    config.B = static_cast<int>(as_integer(data_pert, "B"));
    if (config.B < 1) throw ConfigError("perturbations.data.B must be >= 1");
    norm["perturbations"]["data"] = {{"kind", "bootstrap"}, {"B", config.B}};
  } else if (kind == "identity") {
    config.data_perturbation = DataPerturbation::Kind::identity;
    config.B = 1;
    norm["perturbations"]["data"] = {{"kind", "identity"}};
  } else {
    throw ConfigError("perturbations.data.kind must be 'bootstrap' or "
                      "'identity', got '" + kind + "'");
  }

  const auto& model_pert = require_field(perturbations, "model");
  config.nlambda = static_cast<int>(as_integer(model_pert, "nlambda"));
  if (config.nlambda < 1)
    throw ConfigError("perturbations.model.nlambda must be >= 1");
  norm["perturbations"]["model"]["nlambda"] = config.nlambda;
  const auto& ratio = require_field(model_pert, "min_ratio");
  if (ratio.is_string()) {
    if (ratio.get<std::string>() != "auto")
      throw ConfigError("perturbations.model.min_ratio must be a number or "
                        "'auto'");
    config.min_ratio = 0.0;
    norm["perturbations"]["model"]["min_ratio"] = "auto";
  } else if (ratio.is_number()) {
    config.min_ratio = ratio.get<double>();
    if (!(config.min_ratio > 0.0 && config.min_ratio < 1.0))
      throw ConfigError("perturbations.model.min_ratio must lie in (0, 1)");
    norm["perturbations"]["model"]["min_ratio"] = config.min_ratio;
  } else {
    throw ConfigError("perturbations.model.min_ratio must be a number or "
                      "'auto'");
  }

  const auto& split_obj = require_field(j, "split");
  config.split_fraction = as_number(split_obj, "fraction");
  if (!(config.split_fraction > 0.0 && config.split_fraction < 1.0))
    throw ConfigError("split.fraction must lie in (0, 1)");
  norm["split"]["fraction"] = config.split_fraction;

  const std::string metric = as_string(j, "metric");
  if (metric != "l2")
    throw ConfigError("unsupported metric '" + metric +
                      "'; this build implements 'l2'");
  norm["metric"] = metric;

  const auto& screening = require_field(j, "screening");
  const std::string rule = as_string(screening, "rule");
  if (rule == "top_k") {
    config.screening.kind = ScreeningRule::Kind::top_k;
    config.screening.k = static_cast<int>(as_integer(screening, "k"));
    if (config.screening.k < 1) throw ConfigError("screening.k must be >= 1");
    norm["screening"] = {{"rule", "top_k"}, {"k", config.screening.k}};
  } else if (rule == "threshold") {
    config.screening.kind = ScreeningRule::Kind::threshold;
    config.screening.tau = as_number(screening, "tau");
    norm["screening"] = {{"rule", "threshold"}, {"tau", config.screening.tau}};
  } else {
    throw ConfigError("screening.rule must be 'top_k' or 'threshold', got '" +
                      rule + "'");
  }
  if (screening.contains("evaluation")) {
    const auto& eval = screening.at("evaluation");
    if (eval.is_string() && eval.get<std::string>() == "holdout") {
      config.screen_with_cv = false;
    } else if (eval.is_object() && eval.contains("cv")) {
      config.screen_with_cv = true;
      config.cv_folds = eval.at("cv").get<int>();
      if (config.cv_folds < 2)
        throw ConfigError("screening.evaluation.cv must be >= 2 folds");
    } else {
      throw ConfigError(
          "screening.evaluation must be 'holdout' or {\"cv\": folds}");
    }
  }
  norm["screening"]["evaluation"] =
      config.screen_with_cv
          ? nlohmann::json{{"cv", config.cv_folds}}
          : nlohmann::json("holdout");

  if (j.contains("selection_tol")) {
    config.select_tol = j.at("selection_tol").get<double>();
    if (config.select_tol < 0.0)
      throw ConfigError("selection_tol must be >= 0");
  }
  norm["selection_tol"] = config.select_tol;

  if (j.contains("intervals")) {
    const auto& iv = j.at("intervals");
    if (iv.is_boolean() && !iv.get<bool>()) {
      config.with_intervals = false;
    } else if (iv.is_object()) {
      config.with_intervals = true;
      if (iv.contains("lo_pct"))
        config.interval_lo_pct = iv.at("lo_pct").get<double>();
      if (iv.contains("hi_pct"))
        config.interval_hi_pct = iv.at("hi_pct").get<double>();
      if (!(config.interval_lo_pct >= 0.0 &&
            config.interval_hi_pct <= 100.0 &&
            config.interval_lo_pct <= config.interval_hi_pct))
        throw ConfigError("intervals percentiles must satisfy "
                          "0 <= lo_pct <= hi_pct <= 100");
    } else {
      throw ConfigError("intervals must be false or {lo_pct, hi_pct}");
    }
  }
  norm["intervals"] =
      config.with_intervals
          ? nlohmann::json{{"lo_pct", config.interval_lo_pct},
                           {"hi_pct", config.interval_hi_pct}}
          : nlohmann::json(false);

  if (j.contains("per_model")) config.per_model = j.at("per_model").get<bool>();
  norm["per_model"] = config.per_model;

  if (j.contains("standardize"))
    config.standardize_first = j.at("standardize").get<bool>();
  norm["standardize"] = config.standardize_first;

  return config;
}

std::uint64_t resolve_seed(const nlohmann::json& j, long long seed_override,
                           nlohmann::json& norm, bool required) {
  std::uint64_t seed = 0;
  if (seed_override >= 0) {
    seed = static_cast<std::uint64_t>(seed_override);
  } else if (j.contains("master_seed")) {
    seed = j.at("master_seed").get<std::uint64_t>();
  } else if (required) {
    throw ConfigError("missing required config field: 'master_seed' "
                      "(or pass --seed)");
  }
  norm["master_seed"] = seed;
  return seed;
}

}  // namespace

const nlohmann::json& require_field(const nlohmann::json& j,
                                    const std::string& field) {
  if (!j.is_object() || !j.contains(field))
    throw ConfigError("missing required config field: '" + field + "'");
  return j.at(field);
}

AnalyzeJob parse_analyze_config(nlohmann::json config, long long seed_override,
                                int threads) {
  AnalyzeJob job;
  try {
    nlohmann::json norm;

    const auto& data = require_field(config, "data");
    job.data_csv = as_string(data, "csv");
    job.response = data.contains("response")
                       ? data.at("response").get<std::string>()
                       : "y";
    norm["data"] = {{"csv", job.data_csv}, {"response", job.response}};

    job.pcs = parse_pcs_section(config, norm);
    job.pcs.master_seed =
        resolve_seed(config, seed_override, norm, /*required=*/true);
    job.pcs.threads = threads;
    job.effective = std::move(norm);
    job.pcs.digest = canonical_digest(job.effective);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid analyze config: ") + e.what());
  }
  return job;
}

PcsConfig parse_engine_config(nlohmann::json config, long long seed_override,
                              int threads) {
  try {
    nlohmann::json norm;
    PcsConfig out = parse_pcs_section(config, norm);
    out.master_seed = resolve_seed(config, seed_override, norm, true);
    out.threads = threads;
    out.digest = canonical_digest(norm);
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid engine config: ") + e.what());
  }
}

NullSpec parse_null_spec(const nlohmann::json& j) {
  NullSpec spec;
  const std::string kind = as_string(j, "kind");
  if (kind == "permute_response") {
    spec.kind = NullSpec::Kind::permute_response;
  } else if (kind == "gaussian_parametric") {
    spec.kind = NullSpec::Kind::gaussian_parametric;
    if (j.contains("mean")) spec.mean = j.at("mean").get<double>();
    spec.sd = as_number(j, "sd");
    if (spec.sd <= 0.0) throw BadSd("null.sd must be > 0");
  } else {
    throw ConfigError("null.kind must be 'permute_response' or "
                      "'gaussian_parametric', got '" + kind + "'");
  }
  return spec;
}

SimulateJob parse_simulate_config(nlohmann::json config,
                                  const std::string& setting_override,
                                  long long seed_override) {
  SimulateJob job;
  try {
    if (!setting_override.empty()) {
      job.setting = setting_override;
    } else if (config.contains("setting")) {
      job.setting = config.at("setting").get<std::string>();
    } else {
      job.setting = "gaussian";
    }

    nlohmann::json norm;
    norm["setting"] = job.setting;
    const int n = config.contains("n") ? config.at("n").get<int>() : 250;
    const int p_base =
        config.contains("p_base") ? config.at("p_base").get<int>() : 35;
    const std::uint64_t seed =
        resolve_seed(config, seed_override, norm, /*required=*/false);

    job.config = setting_config(job.setting, n, p_base, seed);
    norm["n"] = n;
    norm["p_base"] = p_base;

    if (config.contains("noise")) {
      const auto& noise = config.at("noise");
      if (noise.contains("sd")) job.config.noise.sd = noise.at("sd").get<double>();
      if (noise.contains("df")) job.config.noise.df = noise.at("df").get<int>();
      if (noise.contains("block_size"))
        job.config.noise.block_size = noise.at("block_size").get<int>();
      if (noise.contains("rho"))
        job.config.noise.rho = noise.at("rho").get<double>();
      if (noise.contains("c")) job.config.noise.c = noise.at("c").get<double>();
    }
    norm["noise"] = {{"sd", job.config.noise.sd},
                     {"df", job.config.noise.df},
                     {"block_size", job.config.noise.block_size},
                     {"rho", job.config.noise.rho},
                     {"c", job.config.noise.c}};

    if (config.contains("misspec")) {
      const auto& mis = config.at("misspec");
      if (mis.contains("drop_k"))
        job.config.misspec.drop_k = mis.at("drop_k").get<int>();
      if (mis.contains("rule_pairs"))
        job.config.misspec.rule_pairs = mis.at("rule_pairs").get<int>();
      if (mis.contains("rule_coef"))
        job.config.misspec.rule_coef = mis.at("rule_coef").get<double>();
      if (mis.contains("rule_noise_sd"))
        job.config.misspec.rule_noise_sd = mis.at("rule_noise_sd").get<double>();
    }
    norm["misspec"] = {{"drop_k", job.config.misspec.drop_k},
                       {"rule_pairs", job.config.misspec.rule_pairs},
                       {"rule_coef", job.config.misspec.rule_coef},
                       {"rule_noise_sd", job.config.misspec.rule_noise_sd}};

    job.effective = std::move(norm);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid simulate config: ") + e.what());
  }
  return job;
}

RocJob parse_roc_config(nlohmann::json config, long long seed_override,
                        int threads) {
  RocJob job;
  try {
    nlohmann::json norm;
    job.master_seed =
        resolve_seed(config, seed_override, norm, /*required=*/true);

    job.replicates = static_cast<int>(as_integer(config, "replicates"));
    if (job.replicates < 1) throw ConfigError("replicates must be >= 1");
    norm["replicates"] = job.replicates;

    const auto& methods = require_field(config, "methods");
    if (!methods.is_array() || methods.empty())
      throw ConfigError("methods must be a non-empty array");
    for (const auto& m : methods) {
      const std::string name = m.get<std::string>();
      if (name != "pcs" && name != "ols_baseline")
        throw ConfigError("unknown method '" + name +
                          "'; available: pcs, ols_baseline");
      if (std::find(job.methods.begin(), job.methods.end(), name) ==
          job.methods.end())
        job.methods.push_back(name);
    }
    norm["methods"] = job.methods;

    if (config.contains("grid_points")) {
      job.grid_points = config.at("grid_points").get<int>();
      if (job.grid_points < 2) throw ConfigError("grid_points must be >= 2");
    }
    norm["grid_points"] = job.grid_points;

    if (config.contains("drop_positives")) {
      const std::string mode = config.at("drop_positives").get<std::string>();
      if (mode == "count") {
        job.count_dropped_positives = true;
      } else if (mode != "exclude") {
        throw ConfigError("drop_positives must be 'exclude' or 'count'");
      }
    }
    norm["drop_positives"] =
        job.count_dropped_positives ? "count" : "exclude";

    job.sim = parse_simulate_config(require_field(config, "sim"), "", -1);
    norm["sim"] = job.sim.effective;
    norm["sim"].erase("master_seed");  // replicate seeds derive from the run

    nlohmann::json pcs_norm;
    job.pcs = parse_pcs_section(require_field(config, "pcs"), pcs_norm);
    job.pcs.threads = threads;
    norm["pcs"] = std::move(pcs_norm);

    job.effective = std::move(norm);
    job.pcs.digest = canonical_digest(job.effective);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid roc config: ") + e.what());
  }
  return job;
}

}  // namespace pcs

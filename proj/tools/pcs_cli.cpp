#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pcs/benchmark.hpp"
#include "pcs/config.hpp"
#include "pcs/csv.hpp"
#include "pcs/docgen.hpp"
#include "pcs/errors.hpp"
#include "pcs/report_io.hpp"

namespace {

namespace fs = std::filesystem;

int log_level() {
  const char* env = std::getenv("PCS_LOG");
  if (!env) return 0;
  const std::string v(env);
  if (v == "debug") return 2;
  if (v == "info") return 1;
  return 0;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[pcs] " << msg << '\n';
}

struct CommonOpts {
  std::string config_path;
  long long seed = -1;
  std::string out_dir = ".";
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool config_required) {
  auto* config =
      cmd->add_option("--config", opts.config_path, "JSON config file");
  if (config_required) config->required();
  cmd->add_option("--seed", opts.seed,
                  "master seed (overrides the config value)");
  cmd->add_option("--out", opts.out_dir, "output directory");
  cmd->add_option("--threads", opts.threads, "worker threads for the grid")
      ->check(CLI::PositiveNumber);
}

nlohmann::json load_config(const CommonOpts& opts) {
  if (opts.config_path.empty()) return nlohmann::json::object();
  return pcs::read_json_file(opts.config_path);
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw pcs::DataError("cannot create output directory " + dir);
}

int cmd_simulate(const CommonOpts& opts, const std::string& setting_flag,
                 bool list_settings) {
  if (list_settings) {
    for (const auto& name : pcs::setting_names()) std::cout << name << '\n';
    return 0;
  }
  const auto job =
      pcs::parse_simulate_config(load_config(opts), setting_flag, opts.seed);
  const std::string digest = pcs::canonical_digest(job.effective);
  log_info("simulating setting '" + job.setting + "', n=" +
           std::to_string(job.config.n));

  const pcs::SimulatedDataset ds = pcs::simulate(job.config);
  ensure_out_dir(opts.out_dir);
  const fs::path csv_path = fs::path(opts.out_dir) / ("sim_" + job.setting + ".csv");
  const fs::path truth_path =
      fs::path(opts.out_dir) / ("sim_" + job.setting + "_truth.json");

  pcs::write_csv(csv_path, ds.data, "y",
                 "config_digest=" + digest +
                     " master_seed=" + std::to_string(job.config.seed));
  pcs::write_json_file(
      truth_path, pcs::truth_to_json(ds, job.setting, digest, job.config.seed));
  std::cout << csv_path.string() << '\n' << truth_path.string() << '\n';
  return 0;
}

int cmd_analyze(const CommonOpts& opts) {
  const auto job =
      pcs::parse_analyze_config(load_config(opts), opts.seed, opts.threads);
  log_info("analyzing " + job.data_csv);
  const pcs::DataMatrix data = pcs::read_csv(job.data_csv, job.response);
  const pcs::StabilityReport report = pcs::run_pcs(data, job.pcs);

  nlohmann::json j = pcs::report_to_json(report);
  j["config"] = job.effective;
  ensure_out_dir(opts.out_dir);
  const fs::path out_path = fs::path(opts.out_dir) / "report.json";
  pcs::write_json_file(out_path, j);
  std::cout << out_path.string() << '\n';
  return 0;
}

int cmd_hypotest(const CommonOpts& opts) {
  nlohmann::json config = load_config(opts);
  const pcs::NullSpec null_spec =
      pcs::parse_null_spec(pcs::require_field(config, "null"));
  const auto job = pcs::parse_analyze_config(config, opts.seed, opts.threads);
  log_info("hypothesis test on " + job.data_csv);

  const pcs::DataMatrix data = pcs::read_csv(job.data_csv, job.response);
  const pcs::HypothesisTestResult result =
      pcs::pcs_hypothesis_test(data, null_spec, job.pcs);

  nlohmann::json j = pcs::hypotest_to_json(result);
  j["config"] = job.effective;
  j["config_digest"] = job.pcs.digest;
  j["master_seed"] = job.pcs.master_seed;
  ensure_out_dir(opts.out_dir);
  const fs::path out_path = fs::path(opts.out_dir) / "hypotest.json";
  pcs::write_json_file(out_path, j);
  std::cout << out_path.string() << '\n';
  return 0;
}

int cmd_roc(const CommonOpts& opts) {
  const auto job =
      pcs::parse_roc_config(load_config(opts), opts.seed, opts.threads);
  log_info("roc benchmark: " + std::to_string(job.replicates) + " replicates");
  const pcs::RocBenchmarkResult result = pcs::run_roc_benchmark(job);

  ensure_out_dir(opts.out_dir);
  nlohmann::json summary;
  summary["replicates"] = result.replicates;
  summary["config_digest"] = job.pcs.digest;
  summary["master_seed"] = job.master_seed;
  nlohmann::json methods = nlohmann::json::object();
  for (const pcs::MethodRoc& m : result.methods) {
    const fs::path curve_path =
        fs::path(opts.out_dir) / ("roc_" + m.method + ".csv");
    pcs::write_roc_csv(curve_path, m.averaged);
    methods[m.method] = {{"auc_mean", m.auc_mean},
                         {"auc_sd", m.auc_sd},
                         {"aucs", m.aucs},
                         {"curve_csv", curve_path.filename().string()}};
    std::cout << curve_path.string() << '\n';
  }
  summary["methods"] = std::move(methods);
  const fs::path summary_path = fs::path(opts.out_dir) / "roc_summary.json";
  pcs::write_json_file(summary_path, summary);
  std::cout << summary_path.string() << '\n';
  return 0;
}

int cmd_docgen(const std::string& out_path) {
  pcs::write_doc_scaffold(out_path);
  std::cout << out_path << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PCS stability analysis toolkit"};
  app.require_subcommand(1);

  CommonOpts sim_opts, analyze_opts, hypo_opts, roc_opts;
  std::string setting_flag;
  bool list_settings = false;
  std::string doc_path = "pcs_documentation.md";

  auto* sim_cmd =
      app.add_subcommand("simulate", "generate a synthetic benchmark dataset");
  add_common(sim_cmd, sim_opts, /*config_required=*/false);
  sim_cmd->add_option("--setting", setting_flag,
                      "generative setting (see --list-settings)");
  sim_cmd->add_flag("--list-settings", list_settings,
                    "print the available settings and exit");

  auto* analyze_cmd =
      app.add_subcommand("analyze", "run the stability pipeline on a CSV");
  add_common(analyze_cmd, analyze_opts, /*config_required=*/true);

  auto* hypo_cmd = app.add_subcommand(
      "hypotest", "compare observed data against a constrained null");
  add_common(hypo_cmd, hypo_opts, /*config_required=*/true);

  auto* roc_cmd = app.add_subcommand(
      "roc", "replicated feature-selection ROC benchmark");
  add_common(roc_cmd, roc_opts, /*config_required=*/true);

  auto* doc_cmd =
      app.add_subcommand("docgen", "write the analysis documentation scaffold");
  doc_cmd->add_option("--out", doc_path, "output markdown path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(sim_cmd))
      return cmd_simulate(sim_opts, setting_flag, list_settings);
    if (app.got_subcommand(analyze_cmd)) return cmd_analyze(analyze_opts);
    if (app.got_subcommand(hypo_cmd)) return cmd_hypotest(hypo_opts);
    if (app.got_subcommand(roc_cmd)) return cmd_roc(roc_opts);
    if (app.got_subcommand(doc_cmd)) return cmd_docgen(doc_path);
  } catch (const pcs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const pcs::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const pcs::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

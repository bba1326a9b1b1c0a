#include <doctest.h>

#include <filesystem>

#include "pcs/config.hpp"
#include "pcs/docgen.hpp"
#include "pcs/errors.hpp"
#include "pcs/report_io.hpp"

using namespace pcs;

namespace {

nlohmann::json minimal_analyze_config() {
  return nlohmann::json{
      {"target", "selected_features"},
      {"data", {{"csv", "data.csv"}, {"response", "y"}}},
      {"perturbations",
       {{"data", {{"kind", "bootstrap"}, {"B", 20}}},
        {"model", {{"nlambda", 30}, {"min_ratio", "auto"}}}}},
      {"split", {{"fraction", 0.5}}},
      {"metric", "l2"},
      {"screening", {{"rule", "top_k"}, {"k", 5}}},
      {"master_seed", 11}};
}

}  // namespace

TEST_CASE("digest is stable and sensitive to content") {
  const auto j = minimal_analyze_config();
  CHECK(canonical_digest(j) == canonical_digest(j));
  auto j2 = j;
  j2["master_seed"] = 12;
  CHECK(canonical_digest(j) != canonical_digest(j2));
  CHECK(canonical_digest(j).size() == 16);
}

TEST_CASE("analyze config parses into engine settings") {
  const auto job = parse_analyze_config(minimal_analyze_config(), -1, 4);
  CHECK(job.data_csv == "data.csv");
  CHECK(job.pcs.B == 20);
  CHECK(job.pcs.nlambda == 30);
  CHECK(job.pcs.screening.k == 5);
  CHECK(job.pcs.master_seed == 11);
  CHECK(job.pcs.threads == 4);
  CHECK_FALSE(job.pcs.digest.empty());
}

TEST_CASE("a seed override lands in the digest") {
  const auto base = parse_analyze_config(minimal_analyze_config());
  const auto overridden = parse_analyze_config(minimal_analyze_config(), 999);
  CHECK(overridden.pcs.master_seed == 999);
  CHECK(base.pcs.digest != overridden.pcs.digest);

  // Threads never reach the digest.
  const auto threaded = parse_analyze_config(minimal_analyze_config(), -1, 8);
  CHECK(base.pcs.digest == threaded.pcs.digest);
}

TEST_CASE("every missing required field is named in the error") {
  for (const std::string field :
       {"target", "data", "perturbations", "split", "metric", "screening"}) {
    auto j = minimal_analyze_config();
    j.erase(field);
    try {
      parse_analyze_config(j);
      FAIL("expected ConfigError for ", field);
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("'" + field + "'") !=
            std::string::npos);
    }
  }

  auto no_seed = minimal_analyze_config();
  no_seed.erase("master_seed");
  CHECK_THROWS_AS(parse_analyze_config(no_seed), ConfigError);
  CHECK_NOTHROW(parse_analyze_config(no_seed, 5));  // --seed fills it
}

TEST_CASE("invalid enum values are rejected") {
  auto j = minimal_analyze_config();
  j["metric"] = "l1";
  CHECK_THROWS_AS(parse_analyze_config(j), ConfigError);

  j = minimal_analyze_config();
  j["screening"] = {{"rule", "best"}};
  CHECK_THROWS_AS(parse_analyze_config(j), ConfigError);

  j = minimal_analyze_config();
  j["perturbations"]["data"]["kind"] = "jackknife";
  CHECK_THROWS_AS(parse_analyze_config(j), ConfigError);

  j = minimal_analyze_config();
  j["screening"] = {{"rule", "threshold"}};  // tau missing
  try {
    parse_analyze_config(j);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("'tau'") != std::string::npos);
  }
}

TEST_CASE("cv evaluation mode round-trips") {
  auto j = minimal_analyze_config();
  j["screening"]["evaluation"] = {{"cv", 7}};
  const auto job = parse_analyze_config(j);
  CHECK(job.pcs.screen_with_cv);
  CHECK(job.pcs.cv_folds == 7);
}

TEST_CASE("report JSON carries the contract fields") {
  StabilityReport report;
  report.scores = {0.5, 0.25};
  report.intervals = std::vector<std::pair<double, double>>{{0.1, 0.9},
                                                            {0.0, 0.5}};
  report.halves_averaged = true;
  report.provenance = "abcd";
  report.master_seed = 3;
  report.convergence_failures = 1;
  report.feature_names = {"a", "b"};

  const auto j = report_to_json(report);
  CHECK(j.at("scores").size() == 2);
  CHECK(j.at("config_digest") == "abcd");
  CHECK(j.at("convergence_failures") == 1);
  CHECK(j.at("halves_averaged") == true);
  CHECK(j.at("master_seed") == 3);
  CHECK(j.at("intervals").at("a")[0] == 0.1);
  CHECK(j.at("intervals").at("b")[1] == 0.5);

  report.intervals.reset();
  CHECK(report_to_json(report).at("intervals").is_null());
}

TEST_CASE("simulate config applies overrides and defaults") {
  nlohmann::json j;
  j["setting"] = "student_t";
  j["n"] = 99;
  j["p_base"] = 5;
  j["noise"] = {{"df", 7}};
  const auto job = parse_simulate_config(j);
  CHECK(job.setting == "student_t");
  CHECK(job.config.n == 99);
  CHECK(job.config.p() == 15);
  CHECK(job.config.noise.df == 7);

  const auto flagged = parse_simulate_config(j, "gaussian", 42);
  CHECK(flagged.setting == "gaussian");
  CHECK(flagged.config.seed == 42);
}

TEST_CASE("roc config validates methods and nests the pcs block") {
  nlohmann::json j;
  j["replicates"] = 3;
  j["methods"] = {"pcs", "ols_baseline"};
  j["master_seed"] = 9;
  j["sim"] = {{"setting", "gaussian"}, {"n", 40}, {"p_base", 4}};
  auto pcs_block = minimal_analyze_config();
  pcs_block.erase("data");
  pcs_block.erase("master_seed");
  j["pcs"] = pcs_block;

  const auto job = parse_roc_config(j);
  CHECK(job.replicates == 3);
  CHECK(job.methods.size() == 2);
  CHECK(job.sim.config.n == 40);

  j["methods"] = {"who"};
  CHECK_THROWS_AS(parse_roc_config(j), ConfigError);
  j["methods"] = nlohmann::json::array();
  CHECK_THROWS_AS(parse_roc_config(j), ConfigError);
}

TEST_CASE("null spec parsing") {
  const auto permute = parse_null_spec({{"kind", "permute_response"}});
  CHECK(permute.kind == NullSpec::Kind::permute_response);

  const auto gauss = parse_null_spec(
      {{"kind", "gaussian_parametric"}, {"mean", 1.0}, {"sd", 2.0}});
  CHECK(gauss.kind == NullSpec::Kind::gaussian_parametric);
  CHECK(gauss.mean == 1.0);
  CHECK(gauss.sd == 2.0);

  CHECK_THROWS_AS(parse_null_spec({{"kind", "bogus"}}), ConfigError);
  CHECK_THROWS_AS(
      parse_null_spec({{"kind", "gaussian_parametric"}, {"sd", -1.0}}),
      BadSd);
}

TEST_CASE("doc scaffold has the six sections in order") {
  const auto text = doc_scaffold_text();
  std::vector<std::string> headings;
  std::size_t pos = 0;
  while ((pos = text.find("\n## ", pos)) != std::string::npos) {
    const auto end = text.find('\n', pos + 1);
    headings.push_back(text.substr(pos + 4, end - pos - 4));
    pos = end;
  }
  REQUIRE(headings.size() == 6);
  CHECK(headings[0] == "Domain problem formulation");
  CHECK(headings[1] == "Data collection and storage");
  CHECK(headings[2] == "Data cleaning and preprocessing");
  CHECK(headings[3] == "Exploratory data analysis");
  CHECK(headings[4] == "Modeling and post-hoc analysis");
  CHECK(headings[5] == "Interpretation of results");

  // Idempotent regeneration.
  const auto path = std::filesystem::temp_directory_path() / "pcs_doc.md";
  write_doc_scaffold(path);
  write_doc_scaffold(path);
  CHECK(doc_scaffold_text() == text);
  std::filesystem::remove(path);
}

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>
#include <optional>

#include "pcs/benchmark.hpp"
#include "pcs/config.hpp"
#include "pcs/docgen.hpp"
#include "pcs/errors.hpp"
#include "pcs/report_io.hpp"

namespace py = pybind11;

namespace {

pcs::DataMatrix build_data(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                           std::optional<std::vector<std::string>> names,
                           bool standardized) {
  auto resolved =
      names ? std::move(*names) : pcs::default_feature_names(x.cols());
  return pcs::make_data_matrix(x, y, std::move(resolved), standardized);
}

pcs::NullSpec make_null_spec(const std::string& kind, double mean, double sd,
                             std::uint64_t seed) {
  pcs::NullSpec spec;
  if (kind == "permute_response") {
    spec.kind = pcs::NullSpec::Kind::permute_response;
  } else if (kind == "gaussian_parametric") {
    spec.kind = pcs::NullSpec::Kind::gaussian_parametric;
  } else {
    throw pcs::BadConfig("unknown null kind '" + kind + "'");
  }
  spec.mean = mean;
  spec.sd = sd;
  spec.seed = seed;
  return spec;
}

}  // namespace

PYBIND11_MODULE(_pcscore, m) {
  m.doc() = "Perturbation-based stability analysis for sparse linear models";

  py::register_exception<pcs::ConfigError>(m, "ConfigError");
  py::register_exception<pcs::DataError>(m, "DataError");
  py::register_exception<pcs::NumericalError>(m, "NumericalError");

  py::class_<pcs::DataMatrix>(m, "DataMatrix")
      .def(py::init(&build_data), py::arg("x"), py::arg("y"),
           py::arg("feature_names") = std::nullopt,
           py::arg("standardized") = false)
      .def_readonly("x", &pcs::DataMatrix::x)
      .def_readonly("y", &pcs::DataMatrix::y)
      .def_readonly("feature_names", &pcs::DataMatrix::feature_names)
      .def_readonly("standardized", &pcs::DataMatrix::standardized)
      .def_property_readonly("n", &pcs::DataMatrix::n)
      .def_property_readonly("p", &pcs::DataMatrix::p);

  py::class_<pcs::LassoFit>(m, "LassoFit")
      .def_readonly("beta", &pcs::LassoFit::beta)
      .def_readonly("intercept", &pcs::LassoFit::intercept)
      .def_readonly("lambda_", &pcs::LassoFit::lambda)
      .def_readonly("converged", &pcs::LassoFit::converged)
      .def_readonly("iterations", &pcs::LassoFit::iterations);

  m.def("standardize", &pcs::standardize, py::arg("data"));

  m.def(
      "split",
      [](const pcs::DataMatrix& data, double fraction,
         std::uint64_t master_seed) {
        const auto s = pcs::split(data, fraction, pcs::SeedSpec{master_seed});
        return py::make_tuple(s.train_indices, s.test_indices);
      },
      py::arg("data"), py::arg("fraction"), py::arg("master_seed"),
      "Seeded train/test partition; returns (train_indices, test_indices).");

  m.def(
      "compute_lambda_path",
      [](const pcs::DataMatrix& train, int nlambda, double min_ratio) {
        return pcs::compute_lambda_path(train, nlambda, min_ratio).values;
      },
      py::arg("train"), py::arg("nlambda") = 100, py::arg("min_ratio") = 0.0);

  m.def(
      "fit_lasso",
      [](const pcs::DataMatrix& train, double lambda,
         std::optional<Eigen::VectorXd> warm) {
        return pcs::fit_lasso(train, lambda, warm ? &*warm : nullptr);
      },
      py::arg("train"), py::arg("lambda_"),
      py::arg("warm_start") = std::nullopt);

  m.def("selected_features", &pcs::selected_features, py::arg("fit"),
        py::arg("tol") = 1e-8);
  m.def("predict", &pcs::predict, py::arg("fit"), py::arg("x_new"));
  m.def("l2_error", &pcs::l2_error, py::arg("y_hat"), py::arg("y"));

  m.def("bootstrap_sample", &pcs::bootstrap_sample, py::arg("data"),
        py::arg("seed"));

  m.def(
      "generate_null_data",
      [](const pcs::DataMatrix& data, const std::string& kind, double mean,
         double sd, std::uint64_t seed) {
        return pcs::generate_null_data(data,
                                       make_null_spec(kind, mean, sd, seed));
      },
      py::arg("data"), py::arg("kind") = "permute_response",
      py::arg("mean") = 0.0, py::arg("sd") = 1.0, py::arg("seed") = 1);

  m.def(
      "perturbation_interval",
      [](std::vector<double> values, double lo_pct, double hi_pct) {
        return pcs::perturbation_interval(std::move(values), lo_pct, hi_pct);
      },
      py::arg("values"), py::arg("lo_pct") = 10.0, py::arg("hi_pct") = 90.0);

  m.def(
      "run_pcs_json",
      [](const pcs::DataMatrix& data, const std::string& config_json,
         int threads) {
        const auto config = pcs::parse_engine_config(
            nlohmann::json::parse(config_json), -1, threads);
        return pcs::report_to_json(pcs::run_pcs(data, config)).dump();
      },
      py::arg("data"), py::arg("config_json"), py::arg("threads") = 1);

  m.def(
      "hypothesis_test_json",
      [](const pcs::DataMatrix& data, const std::string& null_kind,
         double mean, double sd, const std::string& config_json,
         int threads) {
        const auto config = pcs::parse_engine_config(
            nlohmann::json::parse(config_json), -1, threads);
        const auto spec = make_null_spec(null_kind, mean, sd, 0);
        return pcs::hypotest_to_json(
                   pcs::pcs_hypothesis_test(data, spec, config))
            .dump();
      },
      py::arg("data"), py::arg("null_kind"), py::arg("mean"), py::arg("sd"),
      py::arg("config_json"), py::arg("threads") = 1);

  m.def(
      "ols_baseline_scores",
      [](const pcs::DataMatrix& data, const std::string& config_json,
         int threads) {
        const auto config = pcs::parse_engine_config(
            nlohmann::json::parse(config_json), -1, threads);
        return pcs::run_ols_baseline(data, config);
      },
      py::arg("data"), py::arg("config_json"), py::arg("threads") = 1);

  m.def(
      "baseline_ols_pvalues",
      [](const pcs::DataMatrix& train, const pcs::FeatureSet& selected) {
        const auto result = pcs::baseline_ols_pvalues(train, selected);
        return py::make_tuple(result.pvalues, result.dropped);
      },
      py::arg("train"), py::arg("selected"),
      "Returns (pvalues, dropped_collinear_indices).");

  m.def(
      "roc_from_scores",
      [](const std::vector<double>& scores, const std::vector<int>& truth,
         bool higher_is_positive) {
        const auto curve =
            pcs::roc_from_scores(scores, truth, higher_is_positive);
        return py::make_tuple(curve.points, curve.auc);
      },
      py::arg("scores"), py::arg("truth"),
      py::arg("higher_is_positive") = true,
      "Returns ([(fpr, tpr), ...], auc).");

  m.def(
      "simulate",
      [](const std::string& setting, int n, int p_base, std::uint64_t seed) {
        const auto ds =
            pcs::simulate(pcs::setting_config(setting, n, p_base, seed));
        py::dict truth;
        truth["active_set"] = ds.truth.active_set;
        truth["fitted_visible_set"] = ds.truth.fitted_visible_set;
        truth["beta"] = ds.truth.beta;
        return py::make_tuple(ds.data, truth);
      },
      py::arg("setting") = "gaussian", py::arg("n") = 250,
      py::arg("p_base") = 35, py::arg("seed") = 0,
      "Returns (DataMatrix, truth dict) for a named generative setting.");

  m.def("setting_names", &pcs::setting_names);
  m.def("doc_scaffold", &pcs::doc_scaffold_text);
}

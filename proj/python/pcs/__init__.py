"""Perturbation-based stability analysis for sparse linear models.

Thin wrappers over the compiled core: configs go in as dicts, reports come
back as dicts. See the project README for the config schema.
"""

import json as _json

from ._pcscore import (  # noqa: F401
    ConfigError,
    DataError,
    DataMatrix,
    LassoFit,
    NumericalError,
    baseline_ols_pvalues,
    bootstrap_sample,
    compute_lambda_path,
    doc_scaffold,
    fit_lasso,
    generate_null_data,
    hypothesis_test_json,
    l2_error,
    ols_baseline_scores,
    perturbation_interval,
    predict,
    roc_from_scores,
    run_pcs_json,
    selected_features,
    setting_names,
    simulate,
    split,
    standardize,
)


def run_pcs(data, config, threads=1):
    """Run the stability pipeline; returns the report as a dict."""
    return _json.loads(run_pcs_json(data, _json.dumps(config), threads))


def hypothesis_test(data, null, config, threads=1):
    """Compare observed data against a constrained null perturbation.

    `null` is a dict like {"kind": "permute_response"} or
    {"kind": "gaussian_parametric", "mean": 0.0, "sd": 1.0}.
    """
    kind = null["kind"]
    mean = null.get("mean", 0.0)
    sd = null.get("sd", 1.0)
    return _json.loads(
        hypothesis_test_json(data, kind, mean, sd, _json.dumps(config), threads)
    )

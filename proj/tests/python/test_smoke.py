"""Smoke tests for the compiled python module."""

import numpy as np
import pytest

import pcs


def make_data(n=60, p=6, active=2, sd=0.5, seed=0):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, p))
    y = x[:, :active].sum(axis=1) + sd * rng.standard_normal(n)
    return pcs.DataMatrix(x, y)


def engine_config(B=10, nlambda=20, k=5, seed=1):
    return {
        "target": "selected_features",
        "perturbations": {
            "data": {"kind": "bootstrap", "B": B},
            "model": {"nlambda": nlambda, "min_ratio": "auto"},
        },
        "split": {"fraction": 0.5},
        "metric": "l2",
        "screening": {"rule": "top_k", "k": k},
        "master_seed": seed,
    }


def test_standardize_moments():
    data = make_data(seed=3)
    out = pcs.standardize(data)
    assert out.standardized
    np.testing.assert_allclose(out.x.mean(axis=0), 0.0, atol=1e-10)
    np.testing.assert_allclose(out.x.std(axis=0, ddof=1), 1.0, atol=1e-10)


def test_lasso_shrinks_to_zero_at_lambda_max():
    data = pcs.standardize(make_data(seed=4))
    path = pcs.compute_lambda_path(data, nlambda=10)
    assert len(path) == 10
    fit = pcs.fit_lasso(data, path[0])
    assert fit.converged
    assert np.all(fit.beta == 0.0)
    assert pcs.selected_features(fit) == []

    fit_small = pcs.fit_lasso(data, path[-1])
    assert len(pcs.selected_features(fit_small)) >= 2


def test_predict_matches_numpy():
    data = pcs.standardize(make_data(seed=5))
    fit = pcs.fit_lasso(data, 0.05)
    manual = data.x @ fit.beta + fit.intercept
    np.testing.assert_allclose(pcs.predict(fit, data.x), manual, atol=1e-12)
    mse = pcs.l2_error(manual, np.asarray(data.y))
    assert mse == pytest.approx(float(np.mean((manual - data.y) ** 2)))


def test_run_pcs_report_shape_and_determinism():
    data = make_data(seed=6)
    report = pcs.run_pcs(data, engine_config(seed=7))
    assert len(report["scores"]) == 6
    assert report["halves_averaged"] is True
    assert all(0.0 <= s <= 1.0 for s in report["scores"])

    again = pcs.run_pcs(data, engine_config(seed=7), threads=4)
    assert report["scores"] == again["scores"]


def test_active_features_score_higher():
    data = make_data(n=120, p=8, active=2, sd=0.3, seed=8)
    report = pcs.run_pcs(data, engine_config(B=20, seed=9))
    scores = report["scores"]
    assert min(scores[:2]) > max(scores[2:])


def test_hypothesis_test_divergence():
    data = make_data(n=100, p=6, active=2, sd=0.25, seed=10)
    result = pcs.hypothesis_test(
        data, {"kind": "permute_response"}, engine_config(seed=11)
    )
    diff = result["divergence"]["score_diff"]
    assert len(diff) == 6
    assert max(diff[:2]) > 0.0


def test_roc_and_baseline():
    points, auc = pcs.roc_from_scores([1.0, 0.9, 0.1, 0.0], [0, 1])
    assert auc == 1.0
    assert points[0] == (0.0, 0.0)
    assert points[-1] == (1.0, 1.0)

    data = make_data(n=150, p=6, active=2, sd=0.3, seed=12)
    scores = pcs.ols_baseline_scores(data, __import__("json").dumps(engine_config()))
    assert len(scores) == 6
    assert min(scores[:2]) > max(scores[2:])


def test_simulate_default_scale_counts():
    data, truth = pcs.simulate("gaussian", n=50, p_base=35, seed=13)
    assert data.p == 630
    assert len(truth["active_set"]) == 25

    assert len(pcs.setting_names()) == 6


def test_missing_config_field_raises():
    data = make_data(seed=14)
    bad = engine_config()
    del bad["screening"]
    with pytest.raises(pcs.ConfigError):
        pcs.run_pcs(data, bad)


def test_doc_scaffold_sections():
    text = pcs.doc_scaffold()
    assert text.count("\n## ") == 6

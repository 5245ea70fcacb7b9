import numpy as np
import pytest

from mfbm import (
    SamplePath,
    SimulationConfig,
    build_plan,
    compare_report,
    dense_oracle_simulate,
    empirical_cross_cov,
    ensemble_from_paths,
    simulate,
)
from conftest import make_params


def iid_ensemble(reps=400, n=50, p=2, seed=0):
    rng = np.random.default_rng(seed)
    return rng.standard_normal((reps, n, p))


def test_empirical_cross_cov_on_white_noise():
    values = iid_ensemble()
    est0, se0 = empirical_cross_cov(values, 0, 0, 0)
    assert abs(est0 - 1.0) <= 4.0 * se0
    est1, se1 = empirical_cross_cov(values, 0, 0, 1)
    assert abs(est1) <= 4.0 * se1
    cross, se_cross = empirical_cross_cov(values, 0, 1, 0)
    assert abs(cross) <= 4.0 * se_cross


def test_empirical_cross_cov_lag_reflection():
    values = iid_ensemble(reps=60, n=20)
    fwd, _ = empirical_cross_cov(values, 0, 1, 3)
    rev, _ = empirical_cross_cov(values, 1, 0, -3)
    assert fwd == pytest.approx(rev, rel=1e-12)


def test_empirical_cross_cov_input_checks():
    values = iid_ensemble(reps=40, n=10)
    with pytest.raises(ValueError):
        empirical_cross_cov(values[:20], 0, 0, 0)
    with pytest.raises(ValueError):
        empirical_cross_cov(values, 0, 0, 10)
    with pytest.raises(ValueError):
        empirical_cross_cov(values, 0, 0, -10)
    with pytest.raises(ValueError):
        empirical_cross_cov(values[0], 0, 0, 0)


def test_empirical_cross_cov_replicate_order_invariant():
    values = iid_ensemble(reps=50, n=12)
    est, se = empirical_cross_cov(values, 0, 1, 2)
    shuffled = values[::-1].copy()
    est2, se2 = empirical_cross_cov(shuffled, 0, 1, 2)
    assert est == pytest.approx(est2, rel=1e-12)
    assert se == pytest.approx(se2, rel=1e-12)


def test_compare_report_accepts_matched_law():
    params = make_params([0.3, 0.7], rho01=0.3, eta01=0.1)
    config = SimulationConfig(n=32, replicates=400, seed=21)
    paths = simulate(build_plan(params, config), config)
    values = ensemble_from_paths(paths)
    cells, summary = compare_report(values, params, lags=range(0, 6))
    assert summary.n_cells == 6 * 4
    assert len(cells) == summary.n_cells
    assert summary.ok
    assert str(summary).startswith("24 cells")
    zero_lag = [c for c in cells if c.h == 0.0 and c.i == 0 and c.j == 1]
    assert zero_lag[0].theoretical == pytest.approx(0.3, rel=1e-12)


def test_compare_report_flags_wrong_law():
    params = make_params([0.3, 0.7], rho01=0.3)
    config = SimulationConfig(n=32, replicates=400, seed=22)
    paths = simulate(build_plan(params, config), config)
    values = ensemble_from_paths(paths)
    wrong = make_params([0.45, 0.55], rho01=0.3)
    _, summary = compare_report(values, wrong, lags=range(0, 6))
    assert not summary.ok
    assert summary.max_abs_z > 10.0


def test_compare_report_empty_lags():
    values = iid_ensemble(reps=40, n=10)
    cells, summary = compare_report(values, make_params([0.5, 0.5]), lags=[])
    assert cells == []
    assert summary.n_cells == 0
    assert summary.ok


def test_mean_free_estimator_is_unbiased():
    # long memory would bias a demeaned estimator at n = 16 well past
    # this band; the plain product estimator centers on zero. Cells of
    # one ensemble share paths, so average over independent ensembles.
    params = make_params([0.3, 0.7], rho01=0.3, eta01=0.1)
    zs = []
    for seed in range(4):
        paths = dense_oracle_simulate(params, n=16, seed=seed, replicates=5000)
        values = ensemble_from_paths(paths)
        cells, _ = compare_report(values, params, lags=range(0, 8))
        zs.extend(c.z for c in cells)
    assert -0.2 <= np.mean(zs) <= 0.2


def test_ensemble_from_paths_mixes_representations():
    inc = np.arange(12.0).reshape(6, 2)
    walk = np.vstack([np.zeros((1, 2)), np.cumsum(inc, axis=0)])
    paths = [
        SamplePath(values=inc.copy(), replicate=0, meta={"integrate": False}),
        SamplePath(values=walk, replicate=1, meta={"integrate": True}),
    ]
    out = ensemble_from_paths(paths)
    assert out.shape == (2, 6, 2)
    assert np.allclose(out[0], out[1], atol=1e-12)


def test_ensemble_from_paths_rejects_empty_and_ragged():
    with pytest.raises(ValueError):
        ensemble_from_paths([])
    with pytest.raises(ValueError):
        ensemble_from_paths(
            [SamplePath(values=np.zeros(4), replicate=0, meta={})]
        )

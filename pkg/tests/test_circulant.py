import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mfbm import (
    CirculantEmbeddingError,
    EigPolicy,
    SimulationConfig,
    build_plan,
    default_embedding_order,
    dense_oracle_simulate,
    lag_block,
    simulate,
    toeplitz_covariance,
)
from conftest import make_params, random_admissible

# Admissible pair whose circulant embedding is indefinite at every
# tried order; the negative mass grows with m instead of vanishing.
STUBBORN = make_params(
    [0.8552209546808407, 0.8902845959317469],
    rho01=-0.1350304501824543,
    eta01=-0.41199791578472383,
)


def test_default_embedding_order_values():
    assert default_embedding_order(1) == 2
    assert default_embedding_order(2) == 4
    assert default_embedding_order(33) == 128


@given(st.integers(min_value=1, max_value=5000))
def test_default_embedding_order_properties(n):
    m = default_embedding_order(n)
    assert m & (m - 1) == 0
    assert m > 2 * (n - 1)
    assert m == 2 or m // 2 <= 2 * (n - 1)


def test_config_validation():
    SimulationConfig(n=4, m=8)
    for bad in (
        dict(n=0),
        dict(n=4, replicates=0),
        dict(n=4, seed=-1),
        dict(n=4, max_doublings=-1),
        dict(n=4, imag_tol=-1e-9),
        dict(n=4, m=12),
        dict(n=10, m=16),
    ):
        with pytest.raises(ValueError):
            SimulationConfig(**bad)
    assert SimulationConfig(n=4, eig_policy="truncate").eig_policy is (
        EigPolicy.TRUNCATE
    )
    assert SimulationConfig(n=9).resolved_m() == 32


def test_build_plan_rejects_inadmissible():
    with pytest.raises(CirculantEmbeddingError):
        build_plan(make_params([0.1, 0.8], rho01=0.9), SimulationConfig(n=8))


def test_plan_blocks_match_lag_covariances(rng):
    params = random_admissible(rng, 3)
    plan = build_plan(params, SimulationConfig(n=8))
    m = plan.m
    for j in range(m // 2):
        assert np.allclose(
            plan.c_blocks[j], lag_block(params, j).block, rtol=0, atol=1e-13
        )
    for j in range(m // 2 + 1, m):
        assert np.array_equal(plan.c_blocks[j], plan.c_blocks[m - j].T)
    back = np.fft.ifft(plan.b_blocks, axis=0)
    assert np.allclose(back.real, plan.c_blocks, rtol=0, atol=1e-10)
    assert np.abs(back.imag).max() < 1e-10
    herm = plan.b_blocks - np.conj(np.transpose(plan.b_blocks, (0, 2, 1)))
    # cross entries are conjugate-paired exactly; diagonals keep FFT round-off
    assert np.abs(herm).max() <= 1e-14 * np.abs(plan.b_blocks).max()
    off = herm[:, ~np.eye(3, dtype=bool)]
    assert np.abs(off).max() == 0.0


def test_plan_eigen_mirror_and_exactness(rng):
    params = random_admissible(rng, 2)
    plan = build_plan(params, SimulationConfig(n=16, eig_policy="fail"))
    assert plan.exact
    assert plan.truncated_mass <= 1e-10 * plan.eigenvalues.max()
    half = plan.m // 2
    for k in range(1, half):
        assert np.array_equal(plan.eigenvalues[plan.m - k], plan.eigenvalues[k])
    rebuilt = np.einsum(
        "kuv,kvw->kuw", plan.sqrt_blocks, plan.sqrt_blocks, optimize=True
    )
    assert np.allclose(
        rebuilt, plan.b_blocks, rtol=0, atol=1e-9 * np.abs(plan.b_blocks).max()
    )


def test_simulate_shapes_and_integration(rng):
    params = random_admissible(rng, 2)
    config = SimulationConfig(n=10, replicates=3, seed=7)
    plan = build_plan(params, config)
    paths = simulate(plan, config)
    assert len(paths) == 3
    assert all(path.values.shape == (10, 2) for path in paths)
    walks = simulate(plan, config, integrate=True)
    assert all(path.values.shape == (11, 2) for path in walks)
    for inc, walk in zip(paths, walks):
        assert np.array_equal(walk.values[0], np.zeros(2))
        assert np.allclose(np.diff(walk.values, axis=0), inc.values, atol=1e-14)


def test_simulate_reproducible_per_replicate(rng):
    params = random_admissible(rng, 2)
    base = SimulationConfig(n=6, replicates=3, seed=11)
    plan = build_plan(params, base)
    first = simulate(plan, base)
    again = simulate(plan, base)
    for a, b in zip(first, again):
        assert np.array_equal(a.values, b.values)
    solo = simulate(plan, SimulationConfig(n=6, replicates=1, seed=11))
    assert np.array_equal(solo[0].values, first[0].values)
    other = simulate(plan, SimulationConfig(n=6, replicates=1, seed=12))
    assert not np.array_equal(other[0].values, first[0].values)


def test_simulate_meta_records_run(rng):
    params = random_admissible(rng, 2)
    config = SimulationConfig(n=5, replicates=2, seed=3)
    plan = build_plan(params, config)
    path = simulate(plan, config, integrate=True)[1]
    meta = path.meta
    assert meta["n"] == 5
    assert meta["m"] == plan.m
    assert meta["seed"] == 3
    assert meta["replicate"] == 1 and path.replicate == 1
    assert meta["eig_policy"] == "grow"
    assert meta["integrate"] is True
    assert meta["exact"] is True


def test_values_are_frozen(rng):
    params = random_admissible(rng, 1)
    config = SimulationConfig(n=4)
    path = simulate(build_plan(params, config), config)[0]
    with pytest.raises(ValueError):
        path.values[0, 0] = 0.0


def test_stubborn_embedding_fail_policy_raises():
    config = SimulationConfig(n=8, m=16, eig_policy="fail")
    with pytest.raises(CirculantEmbeddingError, match="negative eigenvalue"):
        build_plan(STUBBORN, config)


def test_stubborn_embedding_grow_policy_exhausts():
    config = SimulationConfig(n=8, m=16, eig_policy="grow", max_doublings=3)
    with pytest.raises(CirculantEmbeddingError):
        build_plan(STUBBORN, config)


def test_stubborn_embedding_truncate_policy_degrades():
    config = SimulationConfig(n=8, m=16, eig_policy="truncate", replicates=2)
    plan = build_plan(STUBBORN, config)
    assert not plan.exact
    assert plan.truncated_mass == pytest.approx(1.691172, rel=1e-5)
    paths = simulate(plan, config)
    for path in paths:
        assert np.all(np.isfinite(path.values))
        assert path.meta["exact"] is False
        assert path.meta["truncated_mass"] == plan.truncated_mass


def test_grow_policy_keeps_order_when_exact(rng):
    params = random_admissible(rng, 2)
    config = SimulationConfig(n=8, eig_policy="grow", max_doublings=6)
    plan = build_plan(params, config)
    assert plan.m == default_embedding_order(8)


def test_toeplitz_covariance_structure(rng):
    params = random_admissible(rng, 2)
    full = toeplitz_covariance(params, 6)
    assert full.shape == (12, 12)
    assert np.allclose(full, full.T, rtol=0, atol=1e-15)
    assert np.linalg.eigvalsh(full).min() > -1e-10 * full.max()
    assert np.allclose(full[0:2, 8:10], lag_block(params, 4).block, atol=1e-15)


def test_dense_oracle_caps_length_and_reproduces(rng):
    params = random_admissible(rng, 2)
    with pytest.raises(ValueError):
        dense_oracle_simulate(params, 65)
    first = dense_oracle_simulate(params, 12, seed=5, replicates=2)
    again = dense_oracle_simulate(params, 12, seed=5, replicates=2)
    assert len(first) == 2
    assert first[0].values.shape == (12, 2)
    for a, b in zip(first, again):
        assert np.array_equal(a.values, b.values)
    assert not np.array_equal(first[0].values, first[1].values)


def test_dense_oracle_stream_disjoint_from_circulant(rng):
    params = random_admissible(rng, 1)
    config = SimulationConfig(n=8, m=16, seed=9)
    circ = simulate(build_plan(params, config), config)[0]
    dense = dense_oracle_simulate(params, 8, seed=9)[0]
    assert not np.array_equal(circ.values, dense.values)


@settings(deadline=None, max_examples=20)
@given(st.integers(min_value=2, max_value=40))
def test_exact_plan_matches_dense_covariance(n):
    # the circulant construction is lossless below the fold, so the
    # implied covariance of the first n increments is the dense one
    params = make_params([0.3, 0.7], rho01=0.3, eta01=0.1)
    plan = build_plan(params, SimulationConfig(n=n, eig_policy="fail"))
    full = toeplitz_covariance(params, n)
    p = params.p
    for s in range(0, n, max(1, n // 4)):
        for t in range(0, n, max(1, n // 4)):
            j = t - s
            block = plan.c_blocks[j] if j >= 0 else plan.c_blocks[-j].T
            assert np.allclose(
                full[s * p : (s + 1) * p, t * p : (t + 1) * p],
                block,
                rtol=0,
                atol=1e-14,
            )

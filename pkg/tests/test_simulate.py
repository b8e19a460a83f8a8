"""Seeded simulation cross-checks.

The estimator is counter-based (Philox keyed by the seed), so every result
here is a deterministic function of (chain, nu, f, config) — tests can
assert exact equality across repeat runs and against a pure-Python replay.
"""

import math

import numpy as np
import pytest

import mcmc_certify as mc
from mcmc_certify.errors import BudgetOverflow


def test_config_validation():
    spec = mc.EstimatorSpec(n=2, n0=0)
    with pytest.raises(ValueError):
        mc.SimulationConfig(replications=1, seed=0, spec=spec)
    with pytest.raises(ValueError):
        mc.SimulationConfig(replications=100, seed=-1, spec=spec)


def test_estimate_is_deterministic(two_state):
    nu = np.array([1.0, 0.0])
    f = np.array([1.0, 0.0])
    config = mc.SimulationConfig(replications=4000, seed=42, spec=mc.EstimatorSpec(n=5, n0=1))
    a = mc.estimate_error(two_state, nu, f, config)
    b = mc.estimate_error(two_state, nu, f, config)
    assert a.mse_hat == b.mse_hat
    assert a.std_error == b.std_error
    assert a.replications == 4000 and a.seed == 42


def test_different_seeds_differ(two_state):
    nu = np.array([1.0, 0.0])
    f = np.array([1.0, 0.0])
    spec = mc.EstimatorSpec(n=5, n0=1)
    a = mc.estimate_error(two_state, nu, f, mc.SimulationConfig(replications=4000, seed=1, spec=spec))
    b = mc.estimate_error(two_state, nu, f, mc.SimulationConfig(replications=4000, seed=2, spec=spec))
    assert a.mse_hat != b.mse_hat


def test_constant_function_has_zero_error():
    # Exact pi avoids the last-ulp mean shift a recovered pi would carry.
    chain = mc.build_chain([[0.7, 0.3], [0.3, 0.7]], pi=[0.5, 0.5])
    config = mc.SimulationConfig(replications=500, seed=9, spec=mc.EstimatorSpec(n=3, n0=2))
    rep = mc.estimate_error(chain, chain.pi, np.array([2.5, 2.5]), config)
    assert rep.mse_hat == 0.0
    assert rep.std_error == 0.0


@pytest.mark.parametrize("n,n0,R,seed", [(4, 2, 20000, 7), (3, 1, 30000, 11)])
def test_simulation_agrees_with_exact_mse(two_state, n, n0, R, seed):
    nu = np.array([1.0, 0.0])
    f = np.array([1.0, 0.0])
    spec = mc.EstimatorSpec(n=n, n0=n0)
    emp = mc.estimate_error(
        two_state, nu, f, mc.SimulationConfig(replications=R, seed=seed, spec=spec)
    )
    exact = mc.exact_error(two_state, nu, f, spec).mse
    assert abs(emp.mse_hat - exact) <= 4.0 * emp.std_error
    assert emp.std_error > 0.0


def test_replay_matches_vectorized_batch(bd3):
    """Pure-Python lock-step replay reproduces the batch result bit for bit."""
    nu = np.array([1.0, 0.0, 0.0])
    f = np.array([0.0, 1.0, 3.0])
    R, seed = 300, 123
    spec = mc.EstimatorSpec(n=4, n0=3)
    rep = mc.estimate_error(bd3, nu, f, mc.SimulationConfig(replications=R, seed=seed, spec=spec))

    uniforms = np.random.Generator(np.random.Philox(key=seed)).random((R, spec.total))
    nu_cdf = np.cumsum(nu)
    nu_cdf[-1] = 1.0
    row_cdf = np.cumsum(bd3.P, axis=1)
    row_cdf[:, -1] = 1.0
    mean = mc.mean_value(f, bd3.pi)

    squared = np.empty(R)
    for r in range(R):
        x = int(np.searchsorted(nu_cdf, uniforms[r, 0], side="right"))
        wsum = f[x] if spec.n0 == 0 else 0.0
        for t in range(1, spec.total):
            x = int(np.searchsorted(row_cdf[x], uniforms[r, t], side="right"))
            if t >= spec.n0:
                wsum += f[x]
        squared[r] = (wsum / spec.n - mean) ** 2

    assert rep.mse_hat == float(squared.mean())
    assert rep.std_error == float(squared.std(ddof=1) / math.sqrt(R))


def test_sample_trajectory_consumes_one_uniform_per_state(bd3):
    nu = np.array([0.2, 0.5, 0.3])
    L = 37
    gen_a = np.random.Generator(np.random.Philox(key=5))
    gen_b = np.random.Generator(np.random.Philox(key=5))
    path = mc.sample_trajectory(bd3, nu, L, gen_a)
    gen_b.random(L)  # skip exactly L draws
    assert gen_a.random() == gen_b.random()
    assert path.shape == (L,)
    assert path.dtype == np.intp
    assert np.all((0 <= path) & (path < 3))


def test_sample_trajectory_visits_follow_nu(bd3):
    # First states across many short trajectories follow nu.
    nu = np.array([0.2, 0.5, 0.3])
    gen = np.random.Generator(np.random.Philox(key=77))
    firsts = np.array([mc.sample_trajectory(bd3, nu, 1, gen)[0] for _ in range(4000)])
    freq = np.bincount(firsts, minlength=3) / 4000
    assert freq == pytest.approx(nu, abs=0.03)


def test_sample_trajectory_validation(bd3):
    gen = np.random.Generator(np.random.Philox(key=1))
    with pytest.raises(ValueError):
        mc.sample_trajectory(bd3, [0.5, 0.5], 3, gen)
    with pytest.raises(ValueError):
        mc.sample_trajectory(bd3, [0.2, 0.5, 0.3], 0, gen)


def test_block_cap_trips(two_state):
    config = mc.SimulationConfig(
        replications=1 << 14, seed=0, spec=mc.EstimatorSpec(n=(1 << 14) - 1, n0=1)
    )
    with pytest.raises(BudgetOverflow):
        mc.estimate_error(two_state, [1.0, 0.0], [1.0, 0.0], config)

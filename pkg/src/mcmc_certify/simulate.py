"""Monte Carlo cross-check of the exact error formulas.

Replicates the burn-in estimator R times and reports the empirical MSE with
its standard error.  Reproducibility is taken seriously: all randomness comes
from one counter-based generator (Philox) keyed by the user seed, drawn as a
single (R x (n+n0)) uniform block in which row i drives replication i through
inverse-CDF transition steps.  The result is a pure function of
(chain, nu, f, config) — independent of evaluation order, BLAS threading, or
platform — which is what lets tests pin it to exact values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import ReversibleChain, as_distribution, as_state_function, mean_value
from .errors import BudgetOverflow
from .exact_error import EstimatorSpec

__all__ = [
    "SimulationConfig",
    "EmpiricalErrorReport",
    "sample_trajectory",
    "estimate_error",
]

# Upper limit on the uniform block (R * (n+n0) doubles, ~1 GiB).
_BLOCK_ELEMS_CAP = 1 << 27


@dataclass(frozen=True)
class SimulationConfig:
    """Replication count, seed, and the estimator window to replicate."""

    replications: int
    seed: int
    spec: EstimatorSpec

    def __post_init__(self) -> None:
        if not isinstance(self.replications, (int, np.integer)) or self.replications < 2:
            raise ValueError(
                f"replications must be an integer >= 2, got {self.replications!r}"
            )
        if not isinstance(self.seed, (int, np.integer)) or self.seed < 0:
            raise ValueError(f"seed must be a nonnegative integer, got {self.seed!r}")
        if not isinstance(self.spec, EstimatorSpec):
            raise ValueError("spec must be an EstimatorSpec")


@dataclass(frozen=True)
class EmpiricalErrorReport:
    """Empirical MSE over replications, with the standard error of that mean."""

    mse_hat: float
    std_error: float
    replications: int
    seed: int


def _cdf_rows(P: np.ndarray) -> np.ndarray:
    cdf = np.cumsum(P, axis=1)
    cdf[:, -1] = 1.0  # guard against cumulated rounding in the last column
    return cdf


def _cdf_vector(nu: np.ndarray) -> np.ndarray:
    cdf = np.cumsum(nu)
    cdf[-1] = 1.0
    return cdf


def sample_trajectory(chain: ReversibleChain, nu, length: int, rng_stream) -> np.ndarray:
    """Sample one trajectory of the given length, X_1 ~ nu.

    Consumes exactly ``length`` uniforms from ``rng_stream`` (a numpy
    Generator), one per state, mapped through the inverse CDF of the start
    distribution resp. the current transition row.
    """
    if not isinstance(length, (int, np.integer)) or length < 1:
        raise ValueError(f"length must be a positive integer, got {length!r}")
    nu = np.asarray(as_distribution(nu))
    if nu.shape[0] != chain.size:
        raise ValueError(
            f"start distribution has length {nu.shape[0]}, chain has {chain.size} states"
        )
    u = rng_stream.random(int(length))
    row_cdf = _cdf_rows(chain.P)
    states = np.empty(int(length), dtype=np.intp)
    x = int(np.searchsorted(_cdf_vector(nu), u[0], side="right"))
    states[0] = x
    for t in range(1, int(length)):
        x = int(np.searchsorted(row_cdf[x], u[t], side="right"))
        states[t] = x
    return states


def estimate_error(chain: ReversibleChain, nu, f, config: SimulationConfig) -> EmpiricalErrorReport:
    """Empirical MSE of the burn-in estimator over R seeded replications.

    All replications advance in lock-step, vectorized across the batch one
    time step at a time; replication i consumes row i of the Philox uniform
    block.  ``std_error`` is the sample standard deviation of the squared
    errors divided by sqrt(R).
    """
    nu = np.asarray(as_distribution(nu))
    f = np.asarray(as_state_function(f))
    if nu.shape[0] != chain.size or f.shape[0] != chain.size:
        raise ValueError("start distribution and function must match the chain size")

    spec = config.spec
    n, n0 = int(spec.n), int(spec.n0)
    length = spec.total
    R = int(config.replications)
    if R * length > _BLOCK_ELEMS_CAP:
        raise BudgetOverflow(
            f"uniform block would hold {R * length} doubles, cap is {_BLOCK_ELEMS_CAP}"
        )

    uniforms = np.random.Generator(np.random.Philox(key=int(config.seed))).random(
        (R, length)
    )
    row_cdf = _cdf_rows(chain.P)
    nu_cdf = _cdf_vector(nu)

    # state of every replication after the first draw
    states = (uniforms[:, 0][:, None] >= nu_cdf).sum(axis=1)
    window_sums = f[states] if n0 == 0 else np.zeros(R)
    for t in range(1, length):
        states = (uniforms[:, t][:, None] >= row_cdf[states]).sum(axis=1)
        if t >= n0:
            window_sums += f[states]

    averages = window_sums / n
    deviations = averages - mean_value(f, chain.pi)
    squared = deviations * deviations
    return EmpiricalErrorReport(
        mse_hat=float(squared.mean()),
        std_error=float(squared.std(ddof=1) / np.sqrt(R)),
        replications=R,
        seed=int(config.seed),
    )

"""Certified upper bounds for the MSE of burn-in time averages.

Two bound families are provided, both sound (never below the exact MSE) and
both reported with their leading/correction split:

* :func:`bound_general_start` — the sharp finite-n form: exact stationary MSE
  plus a start-penalty correction assembled from the geometric aggregates
  :func:`v_aggregate` / :func:`u_aggregate`.
* :func:`bound_theorem` — the closed-form relaxation with explicit constants;
  always at least as large as the general form, and cheap to evaluate for any
  window because the aggregates are replaced by their geometric-series caps
  ``V <= 2/(1-b)^2`` and ``U <= 4*sqrt(2)/((1-b)(1-sqrt(b)))``.

Index convention.  The first averaged state sits ``n0`` transitions after the
start, so the correction series begins with the *raw* start deviation: the
aggregate factors here are applied divided by one power of ``b`` (their sums
start at exponent zero).  This is what makes the general bound actually
dominate the exact MSE — the variant whose series starts at exponent one is
not an upper bound (it can undershoot at n0 = 0).  The shifted sums satisfy
the same caps, so the closed-form constants of :func:`bound_theorem` are
unaffected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath as mp
import numpy as np

from .chain import (
    ReversibleChain,
    as_distribution,
    as_state_function,
    mean_value,
    spectral_decompose,
    weighted_norm,
)
from .convergence import density_ratio_bound, mass_floor_bound
from .exact_error import EstimatorSpec, stationary_error

__all__ = [
    "POWER_FLOOR",
    "NORM_KINDS",
    "damped_power",
    "v_aggregate",
    "u_aggregate",
    "BoundConstants",
    "BoundReport",
    "bound_general_start",
    "bound_theorem",
]

# Smallest value damped_power may return: keeps the start penalty strictly
# positive in reports instead of silently vanishing into 0.0.
POWER_FLOOR = 1e-320

NORM_KINDS = ("l2", "l4", "linf")

# Same threshold as the exact-error window weight: direct summation below,
# high-precision closed forms above.
_DIRECT_N = 2_000_000

_SQRT2 = math.sqrt(2.0)


def damped_power(b: float, k: int) -> float:
    """``b ** k`` for ``b in [0,1)``, floored at :data:`POWER_FLOOR`.

    ``k = 0`` returns exactly 1 (also for ``b = 0``).
    """
    if not isinstance(k, (int, np.integer)) or k < 0:
        raise ValueError(f"exponent k must be a nonnegative integer, got {k!r}")
    if not (0.0 <= b < 1.0):
        raise ValueError(f"base b must lie in [0, 1), got {b!r}")
    if k == 0:
        return 1.0
    if b == 0.0:
        return POWER_FLOOR
    return max(math.pow(b, float(k)), POWER_FLOOR)


def _validate_bn(b, n) -> tuple[float, int]:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if not (0.0 <= b < 1.0):
        raise ValueError(f"b must lie in [0, 1), got {b!r}")
    return float(b), int(n)


def v_aggregate(b: float, n: int) -> float:
    """Geometric double-sum aggregate ``sum_{k=1..n} (2k - 1) b^k``.

    Equals ``sum_j b^j + 2 sum_{j<k<=n} b^k`` (the nested form collapses by
    counting how many j precede each k).  Monotone in both arguments and
    capped by ``2 / (1-b)^2`` for every n.
    """
    b, n = _validate_bn(b, n)
    if b == 0.0:
        return 0.0
    if n <= _DIRECT_N:
        k = np.arange(1, n + 1, dtype=np.float64)
        with np.errstate(under="ignore"):
            powers = b**k
        return float(np.dot(2.0 * k - 1.0, powers))
    # Huge windows: arithmetico-geometric closed form at 60 digits, immune to
    # the 1/(1-b)^2 cancellation.
    with mp.workdps(60):
        x = mp.mpf(b)
        xn = x**n
        geo = x * (1 - xn) / (1 - x)
        arith = x * (1 - (n + 1) * xn + n * xn * x) / (1 - x) ** 2
        return float(2 * arith - geo)


def u_aggregate(b: float, n: int) -> float:
    """Half-exponent aggregate ``sum_k b^k + 4*sqrt(2) sum_{j<k<=n} b^{(j+k)/2}``.

    The cross terms decay in ``sqrt(b)``, which is what the fourth-moment
    route pays for its weaker norm; capped by ``4*sqrt(2)/((1-b)(1-sqrt(b)))``.
    """
    b, n = _validate_bn(b, n)
    if b == 0.0:
        return 0.0
    if n <= _DIRECT_N:
        s = math.sqrt(b)
        k = np.arange(1, n + 1, dtype=np.float64)
        with np.errstate(under="ignore"):
            diag = b**k
            sp = s**k
        cross = float(np.dot(sp[1:], np.cumsum(sp)[:-1])) if n >= 2 else 0.0
        return float(np.sum(diag)) + 4.0 * _SQRT2 * cross
    with mp.workdps(60):
        x = mp.mpf(b)
        s = mp.sqrt(x)
        diag = x * (1 - x**n) / (1 - x)
        # sum_{j<k<=n} s^{j+k} = [s*G(s^2, n-1) - s^{n+1}*G(s, n-1)] / (1-s)
        geo_s = s * (1 - s ** (n - 1)) / (1 - s)
        geo_s2 = s * s * (1 - (s * s) ** (n - 1)) / (1 - s * s)
        cross = (s * geo_s2 - s ** (n + 1) * geo_s) / (1 - s)
        return float(diag + 4 * mp.sqrt(2) * cross)


def _v_from_start(b: float, n: int) -> float:
    """The v aggregate with exponents shifted to start at zero: ``V(b,n)/b``."""
    if b == 0.0:
        return 1.0
    return v_aggregate(b, n) / b


def _u_from_start(b: float, n: int) -> float:
    """The u aggregate with exponents shifted to start at zero: ``U(b,n)/b``."""
    if b == 0.0:
        return 1.0
    return u_aggregate(b, n) / b


@dataclass(frozen=True)
class BoundConstants:
    """Chain/start constants entering the bounds."""

    beta1: float
    beta: float
    C_density: float
    C_pi: float


@dataclass(frozen=True, eq=False)
class BoundReport:
    """An MSE upper bound split into leading and start-correction terms."""

    norm_kind: str
    leading_term: float
    correction_term: float
    total: float
    constants: BoundConstants


def _bound_inputs(chain: ReversibleChain, nu, f, spec: EstimatorSpec, norm_kind: str):
    if norm_kind not in NORM_KINDS:
        raise ValueError(f"norm_kind must be one of {NORM_KINDS}, got {norm_kind!r}")
    nu = np.asarray(as_distribution(nu))
    f = np.asarray(as_state_function(f))
    if nu.shape[0] != chain.size or f.shape[0] != chain.size:
        raise ValueError("start distribution and function must match the chain size")
    dec = spectral_decompose(chain)
    constants = BoundConstants(
        beta1=dec.beta1,
        beta=dec.beta,
        C_density=density_ratio_bound(nu, chain.pi),
        C_pi=mass_floor_bound(chain.pi),
    )
    return nu, f, dec, constants


def bound_general_start(
    chain: ReversibleChain, nu, f, spec: EstimatorSpec, norm_kind: str
) -> BoundReport:
    """Sharp finite-window MSE bound: exact stationary part + start penalty.

    The leading term is the *exact* stationary MSE, so for ``nu = pi`` the
    bound collapses to the truth.  The correction multiplies the shifted
    aggregate, ``beta^{n0}`` and the start constant by the norm factor of the
    chosen route:

    * ``"l2"``   — ``sqrt(C_pi) * sqrt(C_density) * ||g||_2^2`` with the v aggregate,
    * ``"l4"``   — ``sqrt(C_density) * ||g||_4^2`` with the u aggregate,
    * ``"linf"`` — ``sqrt(C_density) * ||g||_inf * ||g||_2`` with the v aggregate,

    where ``g`` is the centered function.  (The sup-norm route uses
    ``||g||_inf * ||g||_2`` rather than ``||g||_inf^2`` — valid since
    ``||g^2||_2 <= ||g||_inf ||g||_2`` — which keeps it below the closed-form
    variant's constant.)
    """
    nu, f, dec, constants = _bound_inputs(chain, nu, f, spec, norm_kind)
    n, n0 = int(spec.n), int(spec.n0)

    leading = stationary_error(chain, f, n)
    g = f - mean_value(f, chain.pi)
    beta = dec.beta
    penalty = damped_power(beta, n0)

    if norm_kind == "l2":
        aggregate = _v_from_start(beta, n)
        factor = math.sqrt(constants.C_pi) * math.sqrt(constants.C_density)
        norms = weighted_norm(g, chain.pi, 2) ** 2
    elif norm_kind == "l4":
        aggregate = _u_from_start(beta, n)
        factor = math.sqrt(constants.C_density)
        norms = weighted_norm(g, chain.pi, 4) ** 2
    else:
        aggregate = _v_from_start(beta, n)
        factor = math.sqrt(constants.C_density)
        norms = weighted_norm(g, chain.pi, np.inf) * weighted_norm(g, chain.pi, 2)

    correction = aggregate * penalty * factor * norms / (float(n) * float(n))
    return BoundReport(
        norm_kind=norm_kind,
        leading_term=leading,
        correction_term=correction,
        total=leading + correction,
        constants=constants,
    )


def bound_theorem(
    chain: ReversibleChain, nu, f, spec: EstimatorSpec, norm_kind: str
) -> BoundReport:
    """Closed-form MSE bound with explicit constants (uncentered norms).

    For window n, burn-in n0, gap constants ``beta1``/``beta`` and start
    constant ``C = C_density``::

        l2  :  2 ||f||_2^2 / (n (1-beta1))
               + 2 sqrt(C_pi) sqrt(C) beta^n0 ||f||_2^2 / (n^2 (1-beta)^2)
        l4  :  2 ||f||_4^2 / (n (1-beta1))
               + 16 sqrt(2) sqrt(C) beta^n0 ||f||_4^2 / (n^2 (1-beta) (1-sqrt(beta)))
        linf:  2 ||f||_inf^2 / (n (1-beta1))
               + 4 sqrt(C) beta^n0 ||f||_inf^2 / (n^2 (1-beta)^2)

    Dominates :func:`bound_general_start` term by term: the aggregates are
    replaced by their caps and the centered norms by uncentered ones
    (``||g||_2 <= ||f||_2``, ``||g||_p <= 2 ||f||_p`` otherwise).
    """
    nu, f, dec, constants = _bound_inputs(chain, nu, f, spec, norm_kind)
    n, n0 = int(spec.n), int(spec.n0)

    beta1, beta = dec.beta1, dec.beta
    penalty = damped_power(beta, n0)
    root_c = math.sqrt(constants.C_density)
    n_f = float(n)

    if norm_kind == "l2":
        norm_sq = weighted_norm(f, chain.pi, 2) ** 2
        corr_const = 2.0 * math.sqrt(constants.C_pi) * root_c / (1.0 - beta) ** 2
    elif norm_kind == "l4":
        norm_sq = weighted_norm(f, chain.pi, 4) ** 2
        corr_const = 16.0 * _SQRT2 * root_c / ((1.0 - beta) * (1.0 - math.sqrt(beta)))
    else:
        norm_sq = weighted_norm(f, chain.pi, np.inf) ** 2
        corr_const = 4.0 * root_c / (1.0 - beta) ** 2

    leading = 2.0 * norm_sq / (n_f * (1.0 - beta1))
    correction = corr_const * penalty * norm_sq / (n_f * n_f)
    return BoundReport(
        norm_kind=norm_kind,
        leading_term=leading,
        correction_term=correction,
        total=leading + correction,
        constants=constants,
    )

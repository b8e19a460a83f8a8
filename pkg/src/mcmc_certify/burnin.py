"""Burn-in planning under a fixed budget of chain steps.

Setting: ``N = n + n0`` total steps are affordable; every step spent on
burn-in (``n0``) is a step not spent averaging (``n``).  All planning here
works on the normalized worst-case bound family parameterized by the spectral
bound ``beta`` and a start-quality constant ``C``::

    binf(n, n0)^2 = 2/(n(1-beta)) + 2 C beta^n0 / (n^2 (1-beta)^2)
    b4(n, n0)^2   = 2/(n(1-beta)) +   C beta^n0 / (n^2 (1-beta)(1-sqrt(beta)))

i.e. the closed-form theorem bounds with the norm factors scaled out ("binf"
covers both the l2 and sup-norm routes, which share this shape; "b4" is the
fourth-moment route).  The correction decays one power of n faster than the
leading term, matching the closed-form error bounds; a looser variant with
the correction at the same 1/n scale appears in some presentations and is
available via ``loose=True``, but planning always uses the default family.

Three strategies are provided: a closed-form *suggested* burn-in
``ceil(log C / log(1/beta))`` (which makes ``C beta^n0 <= 1``), the exact
integer *optimized* argmin over all feasible splits, and the estimate-free
*half budget* rule ``n0 = N//2`` whose asymptotic price is a factor sqrt(2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath as mp
import numpy as np

from .bounds import POWER_FLOOR
from .exact_error import worst_case_mse

__all__ = [
    "BOUND_KINDS",
    "BudgetQuery",
    "BurninPlan",
    "BurninSuggestion",
    "FigureRow",
    "suggested_burnin",
    "suggested_burnin_detail",
    "bound_function",
    "optimize_burnin",
    "suggested_plan",
    "half_budget_plan",
    "figure_series",
]

BOUND_KINDS = ("b4", "binf")

_LOG_FLOOR = math.log(POWER_FLOOR)
_EXP_OVERFLOW = 709.0
_SCAN_CHUNK = 4_000_000


@dataclass(frozen=True)
class BudgetQuery:
    """A planning instance: total budget ``N``, spectral bound, start constant."""

    N: int
    beta: float
    C: float

    def __post_init__(self) -> None:
        if not isinstance(self.N, (int, np.integer)) or self.N < 2:
            raise ValueError(f"budget N must be an integer >= 2, got {self.N!r}")
        if not (0.0 <= self.beta < 1.0):
            raise ValueError(f"beta must lie in [0, 1), got {self.beta!r}")
        if not (isinstance(self.C, (int, float)) and math.isfinite(self.C) and self.C > 0):
            raise ValueError(f"C must be a positive finite number, got {self.C!r}")


@dataclass(frozen=True)
class BurninPlan:
    """A chosen split of the budget, with the certified bound it achieves.

    ``penalty_vs_stationary`` is only set by the half-budget strategy: the
    ratio of the achieved bound to the stationary yardstick
    ``sqrt(2 / (N (1-beta)))``.
    """

    n0: int
    n: int
    bound_value: float
    strategy: str
    penalty_vs_stationary: float | None = None


@dataclass(frozen=True)
class BurninSuggestion:
    """Closed-form suggestion with its raw ratio and a borderline flag.

    ``borderline`` is set when ``log C / log(1/beta)`` sits within 1e-9 of an
    integer — the ceiling is then sensitive to the precision of the inputs
    and neighbouring integers should be considered equivalent.
    """

    n0: int
    ratio: float
    borderline: bool


def suggested_burnin_detail(beta: float, C: float) -> BurninSuggestion:
    """Evaluate ``max(ceil(log C / log(1/beta)), 0)`` at 50-digit precision.

    Float64 cannot settle which side of an integer the ratio falls on when
    ``beta`` is close to 1 (the quotient amplifies the last-ulp error of
    ``log(beta)`` by ~1/(1-beta)), hence the high-precision evaluation.
    """
    if not (isinstance(beta, (int, float)) and 0.0 < beta < 1.0):
        raise ValueError(f"beta must lie in (0, 1), got {beta!r}")
    if not (isinstance(C, (int, float)) and math.isfinite(C) and C > 0):
        raise ValueError(f"C must be a positive finite number, got {C!r}")
    if C <= 1.0:
        # The clamp at 0 makes the outcome insensitive to the ratio here.
        return BurninSuggestion(n0=0, ratio=_ratio_float(beta, C), borderline=False)
    with mp.workdps(50):
        ratio = mp.log(mp.mpf(C)) / -mp.log(mp.mpf(beta))
        n0 = int(mp.ceil(ratio))
        borderline = bool(abs(ratio - mp.nint(ratio)) < mp.mpf("1e-9"))
    return BurninSuggestion(n0=max(n0, 0), ratio=float(ratio), borderline=borderline)


def _ratio_float(beta: float, C: float) -> float:
    with mp.workdps(50):
        return float(mp.log(mp.mpf(C)) / -mp.log(mp.mpf(beta)))


def suggested_burnin(beta: float, C: float) -> int:
    """Closed-form burn-in ``max(ceil(log C / log(1/beta)), 0)``."""
    return suggested_burnin_detail(beta, C).n0


def _squared_bounds(
    n: np.ndarray, n0: np.ndarray, beta: float, C: float, kind: str, power: int
) -> np.ndarray:
    """Squared bound values, evaluated in log space to dodge under/overflow."""
    one_minus = 1.0 - beta
    lead = 2.0 / (n * one_minus)
    if kind == "binf":
        log_k = math.log(2.0) - 2.0 * math.log(one_minus)
    else:
        # 1 - sqrt(beta) computed as (1-beta)/(1+sqrt(beta)) to avoid cancellation
        one_minus_root = one_minus / (1.0 + math.sqrt(beta))
        log_k = -math.log(one_minus) - math.log(one_minus_root)
    if beta > 0.0:
        damp = np.maximum(n0 * math.log(beta), _LOG_FLOOR)
    else:
        damp = np.where(n0 == 0, 0.0, _LOG_FLOOR)
    log_corr = math.log(C) + damp + log_k - power * np.log(n)
    corr = np.where(
        log_corr > _EXP_OVERFLOW,
        np.inf,
        np.exp(np.minimum(log_corr, _EXP_OVERFLOW)),
    )
    return lead + corr


def _check_kind(kind: str) -> None:
    if kind not in BOUND_KINDS:
        raise ValueError(f"kind must be one of {BOUND_KINDS}, got {kind!r}")


def bound_function(
    query: BudgetQuery, n: int, n0: int, kind: str, *, loose: bool = False
) -> float:
    """Evaluate the worst-case bound (not squared) at an explicit split.

    ``loose=True`` switches the correction to the 1/n-scale variant; the
    default 1/n^2 family is the one whose integer optimization reproduces the
    published burn-in choices, and is what all planners here minimize.
    """
    _check_kind(kind)
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"window length n must be a positive integer, got {n!r}")
    if not isinstance(n0, (int, np.integer)) or n0 < 0:
        raise ValueError(f"burn-in n0 must be a nonnegative integer, got {n0!r}")
    sq = _squared_bounds(
        np.array([float(n)]),
        np.array([int(n0)], dtype=np.int64),
        query.beta,
        query.C,
        kind,
        1 if loose else 2,
    )
    return float(np.sqrt(sq[0]))


def optimize_burnin(query: BudgetQuery, kind: str) -> BurninPlan:
    """Exact integer argmin of the bound over all splits ``n0 in [0, N-1]``.

    Scans every candidate in vectorized chunks; ties resolve to the smallest
    burn-in.  O(N) work, a few-million-wide chunk at a time.
    """
    _check_kind(kind)
    best_sq = math.inf
    best_n0 = 0
    for start in range(0, query.N, _SCAN_CHUNK):
        stop = min(start + _SCAN_CHUNK, query.N)
        n0s = np.arange(start, stop, dtype=np.int64)
        sq = _squared_bounds(
            (query.N - n0s).astype(np.float64), n0s, query.beta, query.C, kind, 2
        )
        i = int(np.argmin(sq))
        if sq[i] < best_sq:
            best_sq = float(sq[i])
            best_n0 = start + i
    return BurninPlan(
        n0=best_n0,
        n=query.N - best_n0,
        bound_value=math.sqrt(best_sq),
        strategy="optimized",
    )


def suggested_plan(query: BudgetQuery, kind: str) -> BurninPlan:
    """Plan using the closed-form suggestion; rejects an all-burn-in split."""
    _check_kind(kind)
    n0 = suggested_burnin(query.beta, query.C) if query.beta > 0.0 else 0
    if n0 >= query.N:
        raise ValueError(
            f"suggested burn-in {n0} consumes the whole budget N={query.N}; "
            "no steps would remain for averaging"
        )
    return BurninPlan(
        n0=n0,
        n=query.N - n0,
        bound_value=bound_function(query, query.N - n0, n0, kind),
        strategy="suggested",
    )


def half_budget_plan(query: BudgetQuery, kind: str) -> BurninPlan:
    """The estimate-free split ``n0 = N//2``.

    Needs no knowledge of ``C`` (the correction dies geometrically in N); the
    reported ``penalty_vs_stationary`` converges to sqrt(2) as N grows — the
    documented price of spending half the budget on burn-in forever.
    """
    _check_kind(kind)
    n0 = query.N // 2
    n = query.N - n0
    value = bound_function(query, n, n0, kind)
    yardstick = math.sqrt(2.0 / (query.N * (1.0 - query.beta)))
    return BurninPlan(
        n0=n0,
        n=n,
        bound_value=value,
        strategy="half_budget",
        penalty_vs_stationary=value / yardstick,
    )


@dataclass(frozen=True)
class FigureRow:
    """One CSV row of a bound-vs-budget curve family.

    ``kind`` carries the curve label (e.g. ``b4[n0=6000]``, ``b4[half]``,
    ``stationary``), so one list of rows holds a whole figure.
    """

    N: int
    n0: int
    kind: str
    value: float


def _budget_grid(n_max: int, points: int = 41) -> list[int]:
    lo = max(10, min(1000, n_max // 10))
    if lo >= n_max:
        return [n_max]
    raw = np.logspace(math.log10(lo), math.log10(n_max), points)
    return sorted({int(round(x)) for x in raw if round(x) >= 2})


def figure_series(query: BudgetQuery, n0_choices, kind: str) -> list[FigureRow]:
    """Bound-vs-budget curves over a log-spaced grid of budgets up to ``query.N``.

    Emits one curve per fixed burn-in in ``n0_choices`` (rows appear once the
    budget exceeds the choice), plus the suggested, half-budget and optimized
    strategies and the stationary worst-case reference
    ``sqrt(W(N, beta)/N^2)``.  Fixed choices below the suggested level stay
    visibly above the optimized curve until the leading term drowns the
    start penalty; oversized choices waste averaging steps instead, shifting
    their curve to larger budgets.
    """
    _check_kind(kind)
    choices = []
    for c in n0_choices:
        if not isinstance(c, (int, np.integer)) or c < 0:
            raise ValueError(f"burn-in choices must be nonnegative integers, got {c!r}")
        choices.append(int(c))

    suggested = suggested_burnin(query.beta, query.C) if query.beta > 0.0 else 0
    rows: list[FigureRow] = []
    for N in _budget_grid(query.N):
        sub = BudgetQuery(N=N, beta=query.beta, C=query.C)
        for c in choices:
            if c < N:
                rows.append(
                    FigureRow(N, c, f"{kind}[n0={c}]", bound_function(sub, N - c, c, kind))
                )
        if suggested < N:
            rows.append(
                FigureRow(
                    N,
                    suggested,
                    f"{kind}[suggested]",
                    bound_function(sub, N - suggested, suggested, kind),
                )
            )
        half = half_budget_plan(sub, kind)
        rows.append(FigureRow(N, half.n0, f"{kind}[half]", half.bound_value))
        opt = optimize_burnin(sub, kind)
        rows.append(FigureRow(N, opt.n0, f"{kind}[optimized]", opt.bound_value))
        rows.append(FigureRow(N, 0, "stationary", math.sqrt(worst_case_mse(N, query.beta))))
    return rows

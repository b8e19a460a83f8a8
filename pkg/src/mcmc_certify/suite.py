"""Six small reversible chains used for validation throughout.

These cover the qualitatively different regimes: a fast two-state chain, a
two-state chain with a negative eigenvalue (antithetic moves beat i.i.d.
sampling there), the zero-gap-free uniform chain (beta = 0), a lazy ring, and
two birth-death chains with constant resp. state-dependent rates.  All are
built through the validating constructor, so importing this module doubles as
a smoke test of the whole validation path.
"""

from __future__ import annotations

import numpy as np

from .chain import ReversibleChain, build_chain

__all__ = ["validation_suite", "birth_death_matrix"]


def birth_death_matrix(up, down) -> np.ndarray:
    """Tridiagonal transition matrix from up-rates and down-rates.

    ``up[i]`` is the probability of moving i -> i+1 (length d-1), ``down[i]``
    of moving i+1 -> i; the diagonal absorbs the rest.  Any such matrix is
    reversible (transitions only cross each edge of a path graph).
    """
    up = np.asarray(up, dtype=np.float64)
    down = np.asarray(down, dtype=np.float64)
    if up.ndim != 1 or up.shape != down.shape or up.size == 0:
        raise ValueError("up and down must be equal-length non-empty 1-D vectors")
    d = up.size + 1
    P = np.zeros((d, d))
    for i in range(d - 1):
        P[i, i + 1] = up[i]
        P[i + 1, i] = down[i]
    P[np.arange(d), np.arange(d)] = 1.0 - P.sum(axis=1)
    return P


def validation_suite() -> dict[str, ReversibleChain]:
    """The six named validation chains, in a stable order."""
    ring = np.full((5, 5), 0.0)
    for i in range(5):
        ring[i, i] = 0.5
        ring[i, (i + 1) % 5] = 0.25
        ring[i, (i - 1) % 5] = 0.25

    return {
        "two_state": build_chain([[0.7, 0.3], [0.6, 0.4]]),
        "two_state_antithetic": build_chain([[0.1, 0.9], [0.8, 0.2]]),
        "uniform_three": build_chain(np.full((3, 3), 1.0 / 3.0)),
        "ring_five_lazy": build_chain(ring),
        "birth_death_six": build_chain(
            birth_death_matrix([0.35] * 5, [0.15] * 5)
        ),
        "birth_death_ten": build_chain(
            birth_death_matrix(
                [0.25 + 0.02 * i for i in range(9)],
                [0.15] * 9,
            )
        ),
    }

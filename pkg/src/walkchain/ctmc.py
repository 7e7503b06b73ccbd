"""Continuous-time chains built from a jump chain and a Poisson event clock.

A uniformized chain moves according to a discrete jump matrix P at the ticks
of a rate-lambda Poisson process, giving transient law
P(t) = sum_n pmf(n; lambda t) P**n and generator Q = lambda (P - I).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chains import StochasticMatrix

DEFAULT_TAIL_TOL = 1e-9
# floats cannot certify tails below ~1e-16; keep a safe margin
MIN_TAIL_TOL = 1e-13
MAX_TAIL_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class GeneratorMatrix:
    """CTMC generator: non-negative off-diagonals, rows summing to zero."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.entries, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise ValueError(f"generator must be a square 2-D array, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("generator entries must be finite")
        off = arr.copy()
        np.fill_diagonal(off, 0.0)
        if np.any(off < 0):
            i, j = np.argwhere(off < 0)[0]
            raise ValueError(f"negative off-diagonal rate at ({i}, {j}): {arr[i, j]!r}")
        sums = arr.sum(axis=1)
        bad = np.flatnonzero(np.abs(sums) > 1e-12)
        if bad.size:
            raise ValueError(f"row {bad[0]} sums to {sums[bad[0]]!r}, expected 0")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class UniformizedChain:
    """Jump chain P paced by a Poisson clock of rate ``rate`` (events per second)."""

    jump_chain: StochasticMatrix
    rate: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.rate) and self.rate > 0):
            raise ValueError(f"rate must be finite and > 0, got {self.rate!r}")


def generator(chain: UniformizedChain) -> GeneratorMatrix:
    """Q = rate * (P - I); diagonal set to the negative off-diagonal row sum.

    The diagonal form is algebraically identical to rate * (P_ii - 1) and keeps
    row sums within one rounding of zero however the row is re-summed (exactly
    zero when the scaled entries are representable, e.g. two-state chains at
    integer rates); it never inherits a row-sum deviation from P itself.
    """
    Q = chain.rate * chain.jump_chain.entries.copy()
    np.fill_diagonal(Q, 0.0)
    np.fill_diagonal(Q, -Q.sum(axis=1))
    return GeneratorMatrix(Q)


def poisson_pmf(rate: float, t: float, n: int) -> float:
    """P[N(t) = n] for a Poisson process: exp(-rt) (rt)^n / n!, in log space."""
    if not (math.isfinite(rate) and rate > 0):
        raise ValueError(f"rate must be finite and > 0, got {rate!r}")
    if not (math.isfinite(t) and t >= 0):
        raise ValueError(f"time must be finite and >= 0, got {t!r}")
    if not isinstance(n, int) or n < 0:
        raise ValueError(f"count must be a non-negative integer, got {n!r}")
    mu = rate * t
    if mu == 0.0:
        return 1.0 if n == 0 else 0.0
    return math.exp(-mu + n * math.log(mu) - math.lgamma(n + 1))


def poisson_truncation(rate: float, t: float, tol: float) -> int:
    """Smallest N with cumulative Poisson mass >= 1 - tol (tail beyond N < tol)."""
    _check_tol(tol)
    mu = rate * t
    mass = 0.0
    cap = int(mu + 50.0 * math.sqrt(mu + 4.0)) + 64
    for n in range(cap + 1):
        mass += poisson_pmf(rate, t, n)
        if mass >= 1.0 - tol:
            return n
    raise ArithmeticError(f"Poisson mass failed to reach 1 - {tol} within {cap} terms")


def _check_tol(tol: float) -> None:
    if not (MIN_TAIL_TOL <= tol <= MAX_TAIL_TOL):
        raise ValueError(f"tail tolerance must lie in [{MIN_TAIL_TOL}, {MAX_TAIL_TOL}], got {tol!r}")


def transient(chain: UniformizedChain, t: float, tol: float = DEFAULT_TAIL_TOL) -> StochasticMatrix:
    """Transient law P(t) = sum_n pmf(n; rate*t) P**n, truncated to tail mass < tol.

    Rows sum to a value in [1 - tol, 1]; the deficit is left in place rather
    than renormalized, so the truncation error stays visible to callers.
    """
    if not (math.isfinite(t) and t >= 0):
        raise ValueError(f"time must be finite and >= 0, got {t!r}")
    _check_tol(tol)
    n_states = chain.jump_chain.n
    if t == 0.0:
        return StochasticMatrix(np.eye(n_states))
    N = poisson_truncation(chain.rate, t, tol)
    acc = np.zeros((n_states, n_states))
    term = np.eye(n_states)
    for n in range(N + 1):
        if n > 0:
            term = term @ chain.jump_chain.entries
        acc += poisson_pmf(chain.rate, t, n) * term
    return StochasticMatrix(acc, row_sum_tol=tol + 1e-12)


def sojourn_mean(chain: UniformizedChain) -> float:
    """Mean holding time between jump events: 1 / rate."""
    return 1.0 / chain.rate


def sample_arrivals(rate: float, horizon: float, seed: int) -> np.ndarray:
    """Poisson event times in (0, horizon], by inverse-CDF exponential gaps.

    Gaps are -log(1 - U) / rate with U drawn from numpy's seeded PCG64 stream,
    so equal seeds reproduce the sample exactly.
    """
    if not (math.isfinite(rate) and rate > 0):
        raise ValueError(f"rate must be finite and > 0, got {rate!r}")
    if not (math.isfinite(horizon) and horizon >= 0):
        raise ValueError(f"horizon must be finite and >= 0, got {horizon!r}")
    rng = np.random.default_rng(seed)
    times: list[float] = []
    t = 0.0
    while True:
        t += -math.log1p(-rng.random()) / rate
        if t > horizon:
            break
        times.append(t)
    return np.array(times, dtype=float)

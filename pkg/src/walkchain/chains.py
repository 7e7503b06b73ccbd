"""Finite discrete-time Markov chains: powers, structure, stationary behavior.

Everything operates on validated row-stochastic matrices. Structural notions
(accessibility, communicating classes, periodicity) are derived from the
positive-entry digraph; distributional notions (stationary vector, mixing)
come from direct linear algebra, never from iteration to convergence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

ROW_SUM_TOL = 1e-12
#: steps after which mixing-time search gives up (periodic chains never mix)
MIXING_TIME_CAP = 10_000


class UnreachableStateError(ValueError):
    """A mean first-passage time is infinite because the walk can strand."""

    def __init__(self, target: int, stranded: tuple[int, ...]):
        self.target = target
        self.stranded = tuple(stranded)
        super().__init__(
            f"state {target} is not accessible from states {list(self.stranded)}; "
            "mean hitting time is infinite"
        )


def _validated_square(entries, name: str) -> np.ndarray:
    arr = np.array(entries, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{name} must be a square 2-D array, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise ValueError(f"{name} must have at least one state")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} entries must be finite")
    return arr


@dataclass(frozen=True, eq=False)
class StochasticMatrix:
    """Row-stochastic transition matrix over states 0..n-1.

    ``row_sum_tol`` is the admissible deviation of each row sum from 1. The
    default is tight; operations that intentionally under-approximate rows
    (truncated series) construct instances with a looser bound.
    """

    entries: np.ndarray
    row_sum_tol: float = ROW_SUM_TOL

    def __post_init__(self) -> None:
        arr = _validated_square(self.entries, "transition matrix")
        if np.any(arr < 0):
            i, j = np.argwhere(arr < 0)[0]
            raise ValueError(f"negative transition probability at ({i}, {j}): {arr[i, j]!r}")
        sums = arr.sum(axis=1)
        bad = np.flatnonzero(np.abs(sums - 1.0) > self.row_sum_tol)
        if bad.size:
            raise ValueError(
                f"row {bad[0]} sums to {sums[bad[0]]!r}, outside 1 +/- {self.row_sum_tol}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True, eq=False)
class Distribution:
    """Probability vector over states 0..n-1."""

    probs: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.probs, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError(f"distribution must be a non-empty 1-D array, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("distribution entries must be finite")
        if np.any(arr < 0):
            raise ValueError(f"negative probability at index {int(np.flatnonzero(arr < 0)[0])}")
        total = arr.sum()
        if abs(total - 1.0) > ROW_SUM_TOL:
            raise ValueError(f"probabilities sum to {total!r}, outside 1 +/- {ROW_SUM_TOL}")
        arr.setflags(write=False)
        object.__setattr__(self, "probs", arr)

    @property
    def n(self) -> int:
        return self.probs.shape[0]


@dataclass(frozen=True)
class ChainAnalysis:
    """Structural and asymptotic summary of one chain.

    ``classes`` partitions the states into communicating classes (each sorted,
    classes ordered by smallest member). ``closed`` and ``periods`` align with
    ``classes``; a period of 0 marks a transient singleton with no return path.
    ``stationary``, ``mixing_rate`` and ``mixing_time`` are None unless the
    chain is irreducible (``mixing_time`` also None when it fails to mix within
    MIXING_TIME_CAP steps, e.g. for periodic chains).
    """

    classes: tuple[tuple[int, ...], ...]
    closed: tuple[bool, ...]
    periods: tuple[int, ...]
    irreducible: bool
    stationary: Distribution | None
    mixing_rate: float | None
    mixing_time: int | None


def n_step(P: StochasticMatrix, n: int) -> StochasticMatrix:
    """n-step transition matrix P**n (n = 0 gives the identity)."""
    if not isinstance(n, int) or n < 0:
        raise ValueError(f"step count must be a non-negative integer, got {n!r}")
    return StochasticMatrix(np.linalg.matrix_power(P.entries, n))


def evolve(d0: Distribution, P: StochasticMatrix, n: int) -> Distribution:
    """Marginal distribution after n steps from d0 (a row vector times P**n)."""
    if d0.n != P.n:
        raise ValueError(f"distribution has {d0.n} states but matrix has {P.n}")
    if not isinstance(n, int) or n < 0:
        raise ValueError(f"step count must be a non-negative integer, got {n!r}")
    return Distribution(d0.probs @ np.linalg.matrix_power(P.entries, n))


def _reachable(positive: np.ndarray, start: int) -> np.ndarray:
    """Boolean mask of states reachable from ``start`` in >= 0 steps."""
    n = positive.shape[0]
    seen = np.zeros(n, dtype=bool)
    seen[start] = True
    frontier = [start]
    while frontier:
        nxt: list[int] = []
        for u in frontier:
            for v in np.flatnonzero(positive[u]):
                if not seen[v]:
                    seen[v] = True
                    nxt.append(int(v))
        frontier = nxt
    return seen


def accessible(P: StochasticMatrix, i: int, j: int) -> bool:
    """True when j can be reached from i in zero or more positive-probability steps."""
    for s in (i, j):
        if not (0 <= s < P.n):
            raise ValueError(f"state {s} outside 0..{P.n - 1}")
    if i == j:
        return True
    return bool(_reachable(P.entries > 0, i)[j])


def _communicating_classes(positive: np.ndarray) -> list[list[int]]:
    n = positive.shape[0]
    reach = np.stack([_reachable(positive, i) for i in range(n)])
    assigned = np.full(n, -1, dtype=int)
    classes: list[list[int]] = []
    for i in range(n):
        if assigned[i] >= 0:
            continue
        members = [j for j in range(n) if reach[i, j] and reach[j, i]]
        idx = len(classes)
        for j in members:
            assigned[j] = idx
        classes.append(members)
    return classes


def _class_period(positive: np.ndarray, members: list[int]) -> int:
    """gcd of cycle lengths through the class, via BFS level differences.

    Returns 0 when the class supports no cycle at all (transient singleton).
    """
    inside = np.zeros(positive.shape[0], dtype=bool)
    inside[members] = True
    start = members[0]
    level = {start: 0}
    frontier = [start]
    while frontier:
        nxt: list[int] = []
        for u in frontier:
            for v in np.flatnonzero(positive[u]):
                v = int(v)
                if inside[v] and v not in level:
                    level[v] = level[u] + 1
                    nxt.append(v)
        frontier = nxt
    # every intra-class edge closes a (possibly trivial) cycle against the BFS tree
    g = 0
    for u in members:
        for v in np.flatnonzero(positive[u]):
            v = int(v)
            if inside[v]:
                g = math.gcd(g, level[u] + 1 - level[v])
    return g


def stationary_distribution(P: StochasticMatrix) -> Distribution:
    """Unique stationary vector of an irreducible chain, by direct linear solve.

    Solves (P^T - I) pi = 0 with one equation replaced by normalization
    sum(pi) = 1. Raises ValueError for reducible chains, where no unique
    stationary distribution exists.
    """
    positive = P.entries > 0
    classes = _communicating_classes(positive)
    if len(classes) != 1:
        raise ValueError(
            f"chain is reducible ({len(classes)} communicating classes); "
            "stationary distribution is not unique"
        )
    n = P.n
    A = P.entries.T - np.eye(n)
    A[-1, :] = 1.0
    b = np.zeros(n)
    b[-1] = 1.0
    pi = np.linalg.solve(A, b)
    # clamp solver dust; exact solution is non-negative
    pi[(pi < 0) & (pi > -1e-12)] = 0.0
    return Distribution(pi / pi.sum())


def mixing_rate(P: StochasticMatrix) -> float:
    """Second-largest eigenvalue modulus; the asymptotic per-step contraction."""
    if P.n == 1:
        return 0.0
    mods = np.sort(np.abs(np.linalg.eigvals(P.entries)))[::-1]
    return float(mods[1])


def total_variation(p: np.ndarray, q: np.ndarray) -> float:
    """Total-variation distance 0.5 * sum |p - q| between two probability vectors."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError(f"shape mismatch {p.shape} vs {q.shape}")
    return 0.5 * float(np.abs(p - q).sum())


def mixing_time(P: StochasticMatrix, eps: float = 0.25, cap: int = MIXING_TIME_CAP) -> int | None:
    """Smallest n with max_i TV(row i of P**n, stationary) <= eps, or None.

    None means the chain did not mix within ``cap`` steps, which is guaranteed
    for periodic chains. Requires irreducibility (via stationary_distribution).
    """
    pi = stationary_distribution(P).probs
    M = np.array(P.entries)
    for t in range(1, cap + 1):
        if t > 1:
            M = M @ P.entries
        if 0.5 * np.abs(M - pi[None, :]).sum(axis=1).max() <= eps:
            return t
    return None


def analyze(P: StochasticMatrix) -> ChainAnalysis:
    """Full structural report: classes, closure, periods, stationary behavior."""
    positive = P.entries > 0
    classes = _communicating_classes(positive)
    closed = []
    periods = []
    for members in classes:
        inside = np.zeros(P.n, dtype=bool)
        inside[members] = True
        leaves = positive[members][:, ~inside]
        closed.append(not bool(leaves.any()))
        periods.append(_class_period(positive, members))
    irreducible = len(classes) == 1
    stationary = stationary_distribution(P) if irreducible else None
    rate = mixing_rate(P) if irreducible else None
    t_mix = mixing_time(P) if irreducible else None
    return ChainAnalysis(
        classes=tuple(tuple(c) for c in classes),
        closed=tuple(closed),
        periods=tuple(periods),
        irreducible=irreducible,
        stationary=stationary,
        mixing_rate=rate,
        mixing_time=t_mix,
    )


def hitting_time(P: StochasticMatrix, u: int, v: int) -> float:
    """Mean first-passage time from u to v, by linear solve.

    With h(v) = 0 and h(i) = 1 + sum_j P[i][j] h(j) on the states the walk can
    visit, returns h(u). Raises UnreachableStateError when some state reachable
    from u cannot reach v (the expectation is then infinite).
    """
    for s in (u, v):
        if not (0 <= s < P.n):
            raise ValueError(f"state {s} outside 0..{P.n - 1}")
    if u == v:
        return 0.0
    positive = P.entries > 0
    visitable = _reachable(positive, u)
    stranded = [
        int(i) for i in np.flatnonzero(visitable)
        if i != v and not _reachable(positive, int(i))[v]
    ]
    if stranded:  # covers v not being visitable at all: u itself strands then
        raise UnreachableStateError(v, tuple(stranded))
    domain = [int(i) for i in np.flatnonzero(visitable) if i != v]
    idx = {s: k for k, s in enumerate(domain)}
    Q = P.entries[np.ix_(domain, domain)]
    h = np.linalg.solve(np.eye(len(domain)) - Q, np.ones(len(domain)))
    return float(h[idx[u]])


def commute_time(P: StochasticMatrix, u: int, v: int) -> float:
    """Mean round-trip time u -> v -> u; requires mutual accessibility."""
    return hitting_time(P, u, v) + hitting_time(P, v, u)


def sample_path(P: StochasticMatrix, start: int, n_steps: int, seed: int) -> np.ndarray:
    """Sample a state trajectory of ``n_steps`` transitions from ``start``.

    Deterministic in ``seed`` (numpy PCG64). Returns an int array of length
    n_steps + 1 beginning with ``start``.
    """
    if not (0 <= start < P.n):
        raise ValueError(f"start state {start} outside 0..{P.n - 1}")
    if n_steps < 0:
        raise ValueError(f"n_steps must be >= 0, got {n_steps}")
    rng = np.random.default_rng(seed)
    u = rng.random(n_steps)
    cum = np.cumsum(P.entries, axis=1)
    path = np.empty(n_steps + 1, dtype=int)
    path[0] = start
    state = start
    for k in range(n_steps):
        state = int(np.searchsorted(cum[state], u[k], side="right"))
        if state >= P.n:  # guard against cumulative rounding at the top end
            state = P.n - 1
        path[k + 1] = state
    return path


# ---------------------------------------------------------------------------
# plain-CSV serialization (row per state, full-precision decimals)

def array_to_csv(arr: np.ndarray) -> str:
    arr = np.atleast_2d(np.asarray(arr, dtype=float))
    lines = [",".join(repr(float(x)) for x in row) for row in arr]
    return "\n".join(lines) + "\n"


def array_from_csv(text: str) -> np.ndarray:
    rows = []
    for line in text.strip().splitlines():
        if line.strip():
            rows.append([float(tok) for tok in line.split(",")])
    return np.array(rows, dtype=float)


def matrix_to_csv(P: StochasticMatrix) -> str:
    return array_to_csv(P.entries)


def matrix_from_csv(text: str) -> StochasticMatrix:
    return StochasticMatrix(array_from_csv(text))


def distribution_to_csv(d: Distribution) -> str:
    return "\n".join(repr(float(x)) for x in d.probs) + "\n"


def distribution_from_csv(text: str) -> Distribution:
    values = [float(line) for line in text.strip().splitlines() if line.strip()]
    return Distribution(np.array(values))

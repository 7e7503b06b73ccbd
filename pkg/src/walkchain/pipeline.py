"""Trace simulation, noisy-fix smoothing, and obstacle-aware guidance alerts.

The pipeline mirrors a wearable tracker: a walker moves on the path graph
(simulate_walk), the position sensor corrupts the truth (add_noise), and the
tracker recovers the path either memorylessly (snap) or with the motion model
(smooth, an exact maximum a posteriori decode). Obstacle checks (detect) and
alert delivery (dispatch) sit on top of the recovered position.
"""

from __future__ import annotations

import json
import math
import urllib.error
import urllib.request
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .chains import StochasticMatrix
from .mapgraph import LocalPoint, PathGraph
from .profiles import WalkingProfile

#: localization error (m) of the GPS+compass prototype this simulation models
REFERENCE_FIELD_ERROR_M = 0.18

DEFAULT_SAFER_DISTANCE_M = 5.0

ALERT_KINDS = ("obstacle_warning", "hold_position", "destination_reached")
OBSTACLE_KINDS = ("stationary", "moving")


class TrellisError(ValueError):
    """Smoothing found no positive-probability state sequence."""


@dataclass(frozen=True)
class Fix:
    """One timestamped position observation; truth_state is the generating vertex."""

    t: float
    position: LocalPoint
    truth_state: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "t", float(self.t))
        if not (math.isfinite(self.t) and self.t >= 0):
            raise ValueError(f"fix time must be finite and >= 0, got {self.t!r}")


@dataclass(frozen=True)
class Trace:
    """Time-ordered sequence of fixes from one walk."""

    fixes: tuple[Fix, ...]
    profile_name: str = ""

    def __post_init__(self) -> None:
        if not self.fixes:
            raise ValueError("trace must contain at least one fix")
        ts = [f.t for f in self.fixes]
        for a, b in zip(ts, ts[1:]):
            if b <= a:
                raise ValueError(f"fix timestamps must strictly increase, got {a!r} then {b!r}")

    def __len__(self) -> int:
        return len(self.fixes)

    def has_truth(self) -> bool:
        return all(f.truth_state is not None for f in self.fixes)

    def positions(self) -> np.ndarray:
        return np.array([[f.position.x, f.position.y] for f in self.fixes], dtype=float)


@dataclass(frozen=True)
class Obstacle:
    """Point obstacle, stationary or in uniform linear motion."""

    id: int
    kind: str
    position: LocalPoint
    velocity: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "velocity", (float(self.velocity[0]), float(self.velocity[1])))
        if self.kind not in OBSTACLE_KINDS:
            raise ValueError(f"obstacle kind must be one of {OBSTACLE_KINDS}, got {self.kind!r}")
        vx, vy = self.velocity
        if not (math.isfinite(vx) and math.isfinite(vy)):
            raise ValueError(f"obstacle velocity must be finite, got {self.velocity!r}")
        if self.kind == "stationary" and (vx, vy) != (0.0, 0.0):
            raise ValueError(f"stationary obstacle {self.id} has non-zero velocity {self.velocity!r}")

    def position_at(self, t: float) -> LocalPoint:
        return LocalPoint(self.position.x + self.velocity[0] * t,
                          self.position.y + self.velocity[1] * t)


@dataclass(frozen=True)
class AlertEvent:
    t: float
    kind: str
    distance: float
    message: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "distance", float(self.distance))
        if self.kind not in ALERT_KINDS:
            raise ValueError(f"alert kind must be one of {ALERT_KINDS}, got {self.kind!r}")
        if not (math.isfinite(self.distance) and self.distance >= 0):
            raise ValueError(f"alert distance must be finite and >= 0, got {self.distance!r}")
        if "\t" in self.message or "\n" in self.message:
            raise ValueError("alert message must not contain tabs or newlines")


# ---------------------------------------------------------------------------
# walk simulation and sensor noise

def simulate_walk(
    g: PathGraph,
    P: StochasticMatrix,
    profile: WalkingProfile,
    start: int,
    n_steps: int,
    seed: int,
) -> Trace:
    """Walk ``n_steps`` transitions of P over the graph, recording truth and time.

    Each move from u to v advances time by edge length / profile speed. A
    self-transition (possible only in held chains) advances time by one step
    period, keeping timestamps strictly increasing.
    """
    if P.n != g.n:
        raise ValueError(f"matrix has {P.n} states but graph has {g.n} vertices")
    if not (0 <= start < g.n):
        raise ValueError(f"start vertex {start} outside 0..{g.n - 1}")
    if n_steps < 0:
        raise ValueError(f"n_steps must be >= 0, got {n_steps}")
    rng = np.random.default_rng(seed)
    u = rng.random(n_steps)
    cum = np.cumsum(P.entries, axis=1)
    pos = g.positions()
    fixes = [Fix(t=0.0, position=g.vertices[start].position, truth_state=start)]
    state = start
    t = 0.0
    for k in range(n_steps):
        nxt = int(np.searchsorted(cum[state], u[k], side="right"))
        if nxt >= P.n:
            nxt = P.n - 1
        if nxt == state:
            t += profile.step_period
        else:
            t += float(np.hypot(*(pos[nxt] - pos[state]))) / profile.speed
        state = nxt
        fixes.append(Fix(t=t, position=g.vertices[state].position, truth_state=state))
    return Trace(fixes=tuple(fixes), profile_name=profile.name)


def add_noise(tr: Trace, sigma: float, seed: int) -> Trace:
    """Add isotropic zero-mean Gaussian position noise; times and truth survive."""
    if not (math.isfinite(sigma) and sigma >= 0):
        raise ValueError(f"sigma must be finite and >= 0, got {sigma!r}")
    rng = np.random.default_rng(seed)
    noise = rng.normal(0.0, sigma, size=(len(tr), 2)) if sigma > 0 else np.zeros((len(tr), 2))
    fixes = [
        Fix(t=f.t,
            position=LocalPoint(f.position.x + noise[k, 0], f.position.y + noise[k, 1]),
            truth_state=f.truth_state)
        for k, f in enumerate(tr.fixes)
    ]
    return Trace(fixes=tuple(fixes), profile_name=tr.profile_name)


# ---------------------------------------------------------------------------
# localization

def snap(tr: Trace, g: PathGraph) -> list[int]:
    """Memoryless decode: nearest vertex per fix, ties to the lowest id."""
    if g.n == 0:
        raise ValueError("graph has no vertices to snap to")
    pos = g.positions()
    obs = tr.positions()
    d2 = ((obs[:, None, :] - pos[None, :, :]) ** 2).sum(axis=2)
    return [int(k) for k in np.argmin(d2, axis=1)]


def _log_emissions(tr: Trace, g: PathGraph, sigma: float) -> np.ndarray:
    pos = g.positions()
    obs = tr.positions()
    with np.errstate(over="ignore"):  # absurd fixes overflow to -inf and get caught
        d2 = ((obs[:, None, :] - pos[None, :, :]) ** 2).sum(axis=2)
        return -d2 / (2.0 * sigma * sigma)


def smooth(tr: Trace, g: PathGraph, P: StochasticMatrix, emission_sigma: float = 1.0) -> list[int]:
    """Exact MAP vertex sequence under the chain prior and Gaussian emissions.

    Runs max-product dynamic programming in log space with a uniform prior
    over the first state and emission density proportional to
    exp(-|fix - vertex|^2 / (2 sigma^2)). Stage-wise ties resolve to the lower
    vertex id. Raises TrellisError when every sequence has zero probability.
    """
    if P.n != g.n:
        raise ValueError(f"matrix has {P.n} states but graph has {g.n} vertices")
    if not (math.isfinite(emission_sigma) and emission_sigma > 0):
        raise ValueError(f"emission_sigma must be finite and > 0, got {emission_sigma!r}")
    m, n = len(tr), g.n
    log_em = _log_emissions(tr, g, emission_sigma)
    with np.errstate(divide="ignore"):
        log_P = np.log(P.entries)
    delta = log_em[0].copy()  # uniform prior contributes a constant; omitted
    back = np.zeros((m, n), dtype=int)
    if np.max(delta) == -np.inf:
        raise TrellisError(
            "no state has positive probability at fix 0; widen emission_sigma "
            "or augment the chain with self-loops"
        )
    for k in range(1, m):
        cand = delta[:, None] + log_P
        back[k] = np.argmax(cand, axis=0)  # first max index = lowest vertex id
        delta = cand[back[k], np.arange(n)] + log_em[k]
        if np.max(delta) == -np.inf:
            raise TrellisError(
                f"no positive-probability path survives to fix {k}; widen "
                "emission_sigma or augment the chain with self-loops"
            )
    seq = [int(np.argmax(delta))]
    for k in range(m - 1, 0, -1):
        seq.append(int(back[k][seq[-1]]))
    seq.reverse()
    return seq


def sequence_log_score(
    seq: Sequence[int], tr: Trace, g: PathGraph, P: StochasticMatrix, emission_sigma: float = 1.0
) -> float:
    """Joint log score (up to shared constants) of a state sequence for a trace."""
    if len(seq) != len(tr):
        raise ValueError(f"sequence length {len(seq)} != trace length {len(tr)}")
    log_em = _log_emissions(tr, g, emission_sigma)
    with np.errstate(divide="ignore"):
        log_P = np.log(P.entries)
    score = float(log_em[0, seq[0]])
    for k in range(1, len(seq)):
        score += float(log_P[seq[k - 1], seq[k]]) + float(log_em[k, seq[k]])
    return score


def localization_error(estimate: Sequence[int], tr: Trace, g: PathGraph) -> float:
    """Mean Euclidean distance between estimated and true vertex positions."""
    if len(estimate) != len(tr):
        raise ValueError(f"estimate length {len(estimate)} != trace length {len(tr)}")
    if not tr.has_truth():
        raise ValueError("trace carries no ground truth; localization error is undefined")
    pos = g.positions()
    est = pos[np.asarray(estimate, dtype=int)]
    truth = pos[np.array([f.truth_state for f in tr.fixes], dtype=int)]
    return float(np.hypot(*(est - truth).T).mean())


# ---------------------------------------------------------------------------
# obstacles

def hold_on_obstacle(P: StochasticMatrix, blocked: Iterable[int]) -> StochasticMatrix:
    """Replace each blocked state's row with a self-loop; other rows untouched."""
    blocked = sorted(set(int(b) for b in blocked))
    for b in blocked:
        if not (0 <= b < P.n):
            raise ValueError(f"blocked state {b} outside 0..{P.n - 1}")
    M = np.array(P.entries)
    for b in blocked:
        M[b, :] = 0.0
        M[b, b] = 1.0
    return StochasticMatrix(M, row_sum_tol=P.row_sum_tol)


def detect(
    user_position: LocalPoint,
    t: float,
    obstacles: Sequence[Obstacle],
    profile: WalkingProfile,
    safer_distance: float = DEFAULT_SAFER_DISTANCE_M,
) -> list[AlertEvent]:
    """Obstacle warnings for everything within ``safer_distance`` at time t.

    Stationary obstacles report the time the walker needs to reach them at
    profile speed. Moving obstacles that are closing report the time for the
    remaining gap to close at the current closing speed. Results are sorted
    by distance, nearest first.
    """
    if not (math.isfinite(t) and t >= 0):
        raise ValueError(f"time must be finite and >= 0, got {t!r}")
    if not (math.isfinite(safer_distance) and safer_distance > 0):
        raise ValueError(f"safer_distance must be finite and > 0, got {safer_distance!r}")
    events = []
    for obs in obstacles:
        at = obs.position_at(t)
        dx, dy = at.x - user_position.x, at.y - user_position.y
        dist = math.hypot(dx, dy)
        if dist > safer_distance:
            continue
        if obs.kind == "stationary":
            ttr = dist / profile.speed
            msg = (f"{obs.kind} obstacle {obs.id} at {dist:.2f} m; "
                   f"{ttr:.2f} s away at walking pace")
        else:
            # closing speed: negative radial velocity of the obstacle
            closing = -(dx * obs.velocity[0] + dy * obs.velocity[1]) / dist if dist > 0 else 0.0
            if closing > 0:
                msg = (f"{obs.kind} obstacle {obs.id} at {dist:.2f} m, closing; "
                       f"gap closes in {dist / closing:.2f} s")
            else:
                msg = f"{obs.kind} obstacle {obs.id} at {dist:.2f} m, not closing"
        events.append(AlertEvent(t=t, kind="obstacle_warning", distance=dist, message=msg))
    events.sort(key=lambda e: e.distance)
    return events


# ---------------------------------------------------------------------------
# alert delivery

def format_alert_line(ev: AlertEvent) -> str:
    """One alert as a tab-separated log line: t, kind, distance, message."""
    return f"{ev.t!r}\t{ev.kind}\t{ev.distance!r}\t{ev.message}"


class FileSink:
    """Append-only alert log: UTF-8, LF line endings, one TSV line per event."""

    def __init__(self, path):
        self.path = path
        self.name = f"file:{path}"

    def deliver(self, ev: AlertEvent) -> bool:
        try:
            with open(self.path, "a", encoding="utf-8", newline="\n") as fh:
                fh.write(format_alert_line(ev) + "\n")
            return True
        except OSError:
            return False


class WebhookSink:
    """HTTP POST sink: one flat JSON document per event, 2xx means delivered."""

    def __init__(self, url: str, timeout: float = 2.0):
        self.url = url
        self.timeout = timeout
        self.name = f"webhook:{url}"

    def deliver(self, ev: AlertEvent) -> bool:
        body = json.dumps(
            {"t_s": ev.t, "kind": ev.kind, "distance_m": ev.distance, "message": ev.message}
        ).encode("utf-8")
        req = urllib.request.Request(
            self.url, data=body, headers={"Content-Type": "application/json"}, method="POST"
        )
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                return 200 <= resp.status < 300
        except (urllib.error.URLError, OSError, ValueError):
            return False


@dataclass(frozen=True)
class SinkReport:
    sink: str
    delivered: int
    failed: int
    flags: tuple[bool, ...]  # per unique event, in delivery order


@dataclass(frozen=True)
class DeliveryReport:
    sinks: tuple[SinkReport, ...]

    def by_sink(self) -> dict[str, SinkReport]:
        return {s.sink: s for s in self.sinks}


def dispatch(events: Sequence[AlertEvent], sinks: Sequence) -> DeliveryReport:
    """Deliver events to every sink, at most once per (event, sink) per call.

    Duplicate events (same time, kind, distance and message) collapse to a
    single delivery. Sink failures are recorded, never raised, so one dead
    sink cannot block the others.
    """
    unique: list[AlertEvent] = []
    seen = set()
    for ev in events:
        key = (ev.t, ev.kind, ev.distance, ev.message)
        if key not in seen:
            seen.add(key)
            unique.append(ev)
    reports = []
    for sink in sinks:
        flags = tuple(bool(sink.deliver(ev)) for ev in unique)
        reports.append(SinkReport(
            sink=sink.name,
            delivered=sum(flags),
            failed=len(flags) - sum(flags),
            flags=flags,
        ))
    return DeliveryReport(sinks=tuple(reports))


# ---------------------------------------------------------------------------
# trace and obstacle serialization

def trace_to_csv(tr: Trace) -> str:
    """Trace as CSV: t_s,x_m,y_m plus truth_vertex when any fix carries truth."""
    with_truth = any(f.truth_state is not None for f in tr.fixes)
    header = "t_s,x_m,y_m" + (",truth_vertex" if with_truth else "")
    lines = [header]
    for f in tr.fixes:
        row = f"{f.t!r},{f.position.x!r},{f.position.y!r}"
        if with_truth:
            row += "," + ("" if f.truth_state is None else str(f.truth_state))
        lines.append(row)
    return "\n".join(lines) + "\n"


def trace_from_csv(text: str, profile_name: str = "") -> Trace:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise ValueError("trace file is empty")
    header = [h.strip() for h in lines[0].split(",")]
    if header[:3] != ["t_s", "x_m", "y_m"]:
        raise ValueError(f"trace header must start with t_s,x_m,y_m, got {lines[0]!r}")
    with_truth = len(header) > 3 and header[3] == "truth_vertex"
    fixes = []
    for k, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) < 3:
            raise ValueError(f"trace line {k}: expected at least 3 fields, got {line!r}")
        truth = None
        if with_truth and len(parts) > 3 and parts[3].strip():
            truth = int(parts[3])
        fixes.append(Fix(t=float(parts[0]), position=LocalPoint(float(parts[1]), float(parts[2])),
                         truth_state=truth))
    return Trace(fixes=tuple(fixes), profile_name=profile_name)


def obstacles_from_json(text: str) -> list[Obstacle]:
    """Parse an obstacle file: a JSON list of {id, kind, x, y, vx, vy}."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"obstacle file: not valid JSON ({exc})") from exc
    if not isinstance(doc, list):
        raise ValueError("obstacle file: top level must be a list")
    out = []
    for k, item in enumerate(doc):
        if not isinstance(item, dict):
            raise ValueError(f"obstacle[{k}]: expected an object, got {item!r}")
        for key in ("id", "kind", "x", "y"):
            if key not in item:
                raise ValueError(f"obstacle[{k}]: missing field {key!r}")
        out.append(Obstacle(
            id=int(item["id"]),
            kind=str(item["kind"]),
            position=LocalPoint(float(item["x"]), float(item["y"])),
            velocity=(float(item.get("vx", 0.0)), float(item.get("vy", 0.0))),
        ))
    return out

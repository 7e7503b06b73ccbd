"""Command-line front end: analyze, table, transient, simulate, track, report.

All subcommands are deterministic: a rerun with the same inputs, seed and
flags writes byte-identical artifacts. Exit codes: 0 success, 1 domain or
validation error, 2 I/O error (missing or unreadable files).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import chains, ctmc, mapgraph, pipeline, profiles, svgplot


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    print(f"wrote {path}")


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_graph(path: str) -> mapgraph.PathGraph:
    return mapgraph.load_map(_read(path))


def _resolve_profile(args: argparse.Namespace) -> profiles.WalkingProfile:
    if getattr(args, "profile_config", None):
        return profiles.load_profile(_read(args.profile_config))
    return profiles.get_profile(args.profile)


def _fmt_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return repr(v)
    return str(v)


def cmd_analyze(args: argparse.Namespace) -> int:
    g = _load_graph(args.map)
    P = mapgraph.random_walk_matrix(g)
    report = chains.analyze(P)
    out = Path(args.out_dir)

    if not report.irreducible:
        print("warning: walk chain is reducible; stationary and mixing fields omitted",
              file=sys.stderr)

    summary = [
        ("n_vertices", g.n),
        ("n_edges", len(g.edges)),
        ("degree_sum", mapgraph.degree_sum(g)),
        ("irreducible", report.irreducible),
        ("n_classes", len(report.classes)),
        ("mixing_rate", report.mixing_rate),
        ("mixing_time", report.mixing_time),
    ]
    lines = ["key,value"] + [f"{k},{_fmt_value(v)}" for k, v in summary]
    _write(out / "analysis_summary.csv", "\n".join(lines) + "\n")

    class_of = {}
    for cid, members in enumerate(report.classes):
        for v in members:
            class_of[v] = cid
    lines = ["vertex,class_id,closed,period"]
    for v in range(g.n):
        cid = class_of[v]
        lines.append(f"{v},{cid},{_fmt_value(report.closed[cid])},{report.periods[cid]}")
    _write(out / "classes.csv", "\n".join(lines) + "\n")

    _write(out / "transition.csv", chains.matrix_to_csv(P))

    if report.irreducible:
        lines = ["vertex,probability"]
        lines += [f"{v},{float(p)!r}" for v, p in enumerate(report.stationary.probs)]
        _write(out / "stationary.csv", "\n".join(lines) + "\n")
        if g.n <= 50:
            H = np.zeros((g.n, g.n))
            for v in range(g.n):
                for u in range(g.n):
                    H[u, v] = chains.hitting_time(P, u, v)
            _write(out / "hitting.csv", chains.array_to_csv(H))
            _write(out / "commute.csv", chains.array_to_csv(H + H.T))
    return 0


def _read_distances(path: str) -> list[float]:
    values = []
    for k, line in enumerate(_read(path).splitlines(), start=1):
        token = line.strip()
        if not token:
            continue
        try:
            values.append(float(token))
        except ValueError:
            raise ValueError(f"distances file line {k}: not a number: {token!r}") from None
    if not values:
        raise ValueError("distances file contains no values")
    return values


def _table_svg(rows: list[profiles.ComparisonRow]) -> str:
    ordered = sorted(rows, key=lambda r: r.distance)
    xs = [r.distance for r in ordered]
    return svgplot.line_plot(
        [("normal", xs, [r.normal_time for r in ordered]),
         ("blind", xs, [r.blind_time for r in ordered])],
        title="Walking time by segment length",
        xlabel="distance (m)",
        ylabel="time (s)",
    )


def cmd_table(args: argparse.Namespace) -> int:
    distances = _read_distances(args.distances)
    rows = profiles.comparison_table(distances, mode=args.mode)
    out = Path(args.out_dir)
    _write(out / "walking_table.csv", profiles.table_to_csv(rows))
    _write(out / "walking_table.svg", _table_svg(rows))
    return 0


def cmd_transient(args: argparse.Namespace) -> int:
    g = _load_graph(args.map)
    P = mapgraph.random_walk_matrix(g)
    chain = ctmc.UniformizedChain(jump_chain=P, rate=args.rate)
    out = Path(args.out_dir)
    _write(out / "generator.csv", chains.array_to_csv(ctmc.generator(chain).entries))
    Pt = ctmc.transient(chain, args.time, tol=args.tolerance)
    _write(out / "transient.csv", chains.matrix_to_csv(Pt))
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    g = _load_graph(args.map)
    P = mapgraph.random_walk_matrix(g)
    profile = _resolve_profile(args)
    trace = pipeline.simulate_walk(g, P, profile, start=args.start, n_steps=args.steps,
                                   seed=args.seed)
    if args.noise_sigma > 0:
        trace = pipeline.add_noise(trace, args.noise_sigma, seed=args.seed + 1)
    _write(Path(args.out_dir) / "trace.csv", pipeline.trace_to_csv(trace))
    return 0


def cmd_track(args: argparse.Namespace) -> int:
    g = _load_graph(args.map)
    P = mapgraph.random_walk_matrix(g)
    profile = _resolve_profile(args)
    out = Path(args.out_dir)

    if args.trace:
        trace = pipeline.trace_from_csv(_read(args.trace), profile_name=profile.name)
    else:
        trace = pipeline.simulate_walk(g, P, profile, start=args.start, n_steps=args.steps,
                                       seed=args.seed)
        if args.noise_sigma > 0:
            trace = pipeline.add_noise(trace, args.noise_sigma, seed=args.seed + 1)

    snapped = pipeline.snap(trace, g)
    smoothed = pipeline.smooth(trace, g, P, emission_sigma=args.emission_sigma)

    obstacles = pipeline.obstacles_from_json(_read(args.obstacles)) if args.obstacles else []

    pos = g.positions()
    events: list[pipeline.AlertEvent] = []
    blocked: set[int] = set()
    for k, fix in enumerate(trace.fixes):
        v = smoothed[k]
        here = mapgraph.LocalPoint(float(pos[v, 0]), float(pos[v, 1]))
        warnings = pipeline.detect(here, fix.t, obstacles, profile,
                                   safer_distance=args.safer_distance)
        if warnings:
            events.extend(warnings)
            events.append(pipeline.AlertEvent(
                t=fix.t, kind="hold_position", distance=warnings[0].distance,
                message=f"holding at vertex {v}; obstacle within {args.safer_distance:g} m",
            ))
            blocked.add(v)
    last = trace.fixes[-1]
    events.append(pipeline.AlertEvent(
        t=last.t, kind="destination_reached", distance=0.0,
        message=f"destination vertex {smoothed[-1]} reached",
    ))

    log_path = out / "alerts.log"
    log_path.parent.mkdir(parents=True, exist_ok=True)
    log_path.write_text("", encoding="utf-8")  # fresh log per run; sink appends
    sinks = [pipeline.FileSink(log_path)]
    if args.webhook:
        sinks.append(pipeline.WebhookSink(args.webhook))
    report = pipeline.dispatch(events, sinks)
    print(f"wrote {log_path}")

    lines = ["t_s,snap_vertex,smooth_vertex,x_m,y_m" + (",truth_vertex" if trace.has_truth() else "")]
    for k, fix in enumerate(trace.fixes):
        v = smoothed[k]
        row = f"{fix.t!r},{snapped[k]},{v},{float(pos[v, 0])!r},{float(pos[v, 1])!r}"
        if trace.has_truth():
            row += f",{fix.truth_state}"
        lines.append(row)
    _write(out / "path.csv", "\n".join(lines) + "\n")

    lines = ["method,mean_error_m"]
    if trace.has_truth():
        lines.append(f"snap,{pipeline.localization_error(snapped, trace, g)!r}")
        lines.append(f"smooth,{pipeline.localization_error(smoothed, trace, g)!r}")
    lines.append(f"reference_prototype,{pipeline.REFERENCE_FIELD_ERROR_M!r}")
    _write(out / "summary.csv", "\n".join(lines) + "\n")

    if blocked:
        held = pipeline.hold_on_obstacle(P, blocked)
        _write(out / "held_transition.csv", chains.matrix_to_csv(held))

    delivery = {
        s.sink: {"delivered": s.delivered, "failed": s.failed} for s in report.sinks
    }
    _write(out / "delivery.json", json.dumps(delivery, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    distances = (_read_distances(args.distances) if args.distances
                 else list(profiles.SURVEY_DISTANCES_M))
    rows = profiles.comparison_table(distances, mode=args.mode)
    out = Path(args.out_dir)
    _write(out / "walking_table.csv", profiles.table_to_csv(rows))

    idx = list(range(1, len(rows) + 1))
    _write(out / "segment_distances.svg", svgplot.line_plot(
        [("segment length", idx, [r.distance for r in rows])],
        title="Surveyed segment lengths",
        xlabel="segment",
        ylabel="distance (m)",
    ))
    _write(out / "travel_times.svg", _table_svg(rows))

    cum_d, cum_n, cum_b = [0.0], [0.0], [0.0]
    for r in rows:
        cum_d.append(cum_d[-1] + r.distance)
        cum_n.append(cum_n[-1] + r.normal_time)
        cum_b.append(cum_b[-1] + r.blind_time)
    _write(out / "walk_progress.svg", svgplot.line_plot(
        [("normal", cum_n, cum_d), ("blind", cum_b, cum_d)],
        title="Cumulative progress along the full route",
        xlabel="time (s)",
        ylabel="distance covered (m)",
    ))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=42, help="PRNG seed (default 42)")
    common.add_argument("--mode", choices=profiles.MODES, default=profiles.MODE_EXACT,
                        help="timing arithmetic mode (default exact)")
    common.add_argument("--out-dir", default=".", help="directory for written artifacts")
    common.add_argument("--tolerance", type=float, default=ctmc.DEFAULT_TAIL_TOL,
                        help="numerical tail tolerance where applicable")

    parser = argparse.ArgumentParser(
        prog="walkchain",
        description="Markov-chain walking simulation and localization toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common],
                       help="structural chain analysis of a map's random walk")
    p.add_argument("--map", required=True, help="path to a JSON map document")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("table", parents=[common],
                       help="normal-vs-blind walking time table and plot")
    p.add_argument("--distances", required=True, help="file with one distance (m) per line")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("transient", parents=[common],
                       help="continuous-time transient law of the walk chain")
    p.add_argument("--map", required=True)
    p.add_argument("--rate", type=float, required=True, help="Poisson event rate (1/s)")
    p.add_argument("--time", type=float, required=True, help="elapsed time t (s)")
    p.set_defaults(func=cmd_transient)

    p = sub.add_parser("simulate", parents=[common], help="simulate a walk trace")
    p.add_argument("--map", required=True)
    p.add_argument("--start", type=int, default=0)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--profile", default="normal", help="built-in profile name")
    p.add_argument("--profile-config", default=None, help="JSON profile config path")
    p.add_argument("--noise-sigma", type=float, default=0.0, help="Gaussian fix noise (m)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("track", parents=[common],
                       help="full pipeline: decode a trace, scan obstacles, send alerts")
    p.add_argument("--map", required=True)
    p.add_argument("--trace", default=None, help="trace CSV (otherwise simulate one)")
    p.add_argument("--start", type=int, default=0)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--profile", default="blind")
    p.add_argument("--profile-config", default=None)
    p.add_argument("--noise-sigma", type=float, default=0.0)
    p.add_argument("--emission-sigma", type=float, default=1.0,
                   help="smoothing emission scale (m)")
    p.add_argument("--safer-distance", type=float, default=pipeline.DEFAULT_SAFER_DISTANCE_M,
                   help="alerting radius around the walker (m)")
    p.add_argument("--obstacles", default=None, help="JSON obstacle file")
    p.add_argument("--webhook", default=None, help="optional alert webhook URL")
    p.set_defaults(func=cmd_track)

    p = sub.add_parser("report", parents=[common],
                       help="regenerate survey table and distance/time figures")
    p.add_argument("--distances", default=None,
                   help="file with one distance (m) per line (default: built-in survey)")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:  # schema, validation and domain errors
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()

"""Command-line entry point: ``polyvo run | bench | render``.

Exit codes: 0 success, 2 bad configuration or arguments, 3 I/O failure.
Set ``POLYVO_WORKERS`` to fan benchmark runs out over processes.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from . import engine, scenarios
from .config import SCHEMA_VERSION, ConfigError, load_scenario, scenario_to_dict
from .policy import Method
from .render import LogError, log_from_records, read_log, snapshot_ticks, write_svg

EXIT_OK, EXIT_CONFIG, EXIT_IO = 0, 2, 3

BENCH_COLUMNS = ("ratio", "method", "completion_rate", "deadlock_rate", "avg_travel_distance", "distance_std",
                 "trials", "seed")

log = logging.getLogger("polyvo")


def _dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), allow_nan=False)


def header_record(cfg) -> dict:
    return {"record": "header", "schema_version": SCHEMA_VERSION, "scenario": scenario_to_dict(cfg)}


def summary_record(cfg, result: engine.RunResult) -> dict:
    # wall-clock time is deliberately left out so repeated runs are byte-identical
    return {
        "record": "summary",
        "schema_version": SCHEMA_VERSION,
        "name": cfg.name,
        "method": cfg.params.method.value,
        "ticks": result.ticks,
        "time": round(result.time, 9),
        "counts": result.counts(),
        "robots": [
            {"id": rid, "outcome": result.outcomes[rid], "travel_distance": result.travel_distance[rid],
             "straight_distance": result.straight_distance[rid]}
            for rid in sorted(result.outcomes)
        ],
    }


def _cmd_run(args) -> int:
    try:
        cfg = load_scenario(args.config)
        ticks = snapshot_ticks(args.snapshot_ticks) if args.snapshot_ticks else []
    except (ConfigError, LogError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        result = engine.run(cfg, record=True)
    except engine.ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    header = header_record(cfg)
    records = [r.to_dict() for r in result.log]
    summary = summary_record(cfg, result)
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        if not args.no_log:
            with open(out / "trajectory.jsonl", "w", encoding="utf-8") as fh:
                fh.write(_dumps(header) + "\n")
                for rec in records:
                    fh.write(_dumps(rec) + "\n")
                fh.write(_dumps(summary) + "\n")
        (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
        if ticks:
            traj = log_from_records(header, records)
            for t in ticks:
                try:
                    write_svg(traj, t, out / f"snapshot_{t:05d}.svg")
                except LogError as exc:
                    print(f"error: {exc}", file=sys.stderr)
                    return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    c = result.counts()
    print(f"{cfg.name} [{cfg.params.method.value}] t={result.time:.1f}s completed={c['completed']} "
          f"deadlocked={c['deadlocked']} collided={c['collided']}")
    log.info("wall clock %.2f s", result.wall_clock)
    return EXIT_OK


def _fmt(x) -> str:
    return "" if x is None else f"{x:.6f}"


def bench_table(rows: Sequence[scenarios.BenchRow]) -> str:
    buf = io.StringIO()
    buf.write(f"# schema_version: {SCHEMA_VERSION}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BENCH_COLUMNS)
    for r in rows:
        w.writerow([f"{r.ratio:g}", r.method, _fmt(r.completion_rate), _fmt(r.deadlock_rate),
                    _fmt(r.avg_travel_distance), _fmt(r.distance_std), r.trials, r.seed])
    return buf.getvalue()


def _list(text: str, conv, what: str) -> List:
    try:
        items = [conv(s.strip()) for s in text.split(",") if s.strip()]
    except ValueError:
        raise ConfigError(f"--{what}: cannot parse {text!r}") from None
    if not items:
        raise ConfigError(f"--{what}: empty list")
    return items


def _cmd_bench(args) -> int:
    try:
        methods = [Method(m).value for m in _list(args.methods, str, "methods")]
    except ValueError as exc:
        print(f"error: --methods: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        ratios = _list(args.ratios, float, "ratios")
        if any(r <= 0 for r in ratios):
            raise ConfigError("--ratios: must be positive")
        if args.trials < 1:
            raise ConfigError("--trials: must be at least 1")
        if not 0 <= args.seed < 2**64 - args.trials:
            raise ConfigError("--seed: out of range")
        rows = scenarios.benchmark(methods, ratios, args.trials, args.seed)
    except (ConfigError, scenarios.GenerationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    table = bench_table(rows)
    try:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "bench.csv").write_text(table, encoding="utf-8")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    sys.stdout.write(table)
    return EXIT_OK


def _cmd_render(args) -> int:
    try:
        traj = read_log(args.log)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except LogError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        write_svg(traj, args.tick, args.out)
    except LogError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="polyvo", description="Velocity-obstacle navigation for polygonal robots.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate one scenario file")
    run.add_argument("config", help="scenario YAML file")
    run.add_argument("--out", default="polyvo_out", help="output directory (default: %(default)s)")
    run.add_argument("--snapshot-ticks", default="", metavar="LIST", help="comma-separated ticks to render as SVG")
    run.add_argument("--no-log", action="store_true", help="skip the trajectory log, keep the summary")
    run.set_defaults(func=_cmd_run)

    bench = sub.add_parser("bench", help="randomized benchmark sweep")
    bench.add_argument("--methods", default=",".join(scenarios.ALL_METHODS), metavar="LIST")
    bench.add_argument("--ratios", default=",".join(f"{r:g}" for r in scenarios.ALL_RATIOS), metavar="LIST")
    bench.add_argument("--trials", type=int, default=100)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--out", default=".", help="directory for bench.csv (default: %(default)s)")
    bench.set_defaults(func=_cmd_bench)

    render = sub.add_parser("render", help="draw one tick of a trajectory log as SVG")
    render.add_argument("log", help="trajectory.jsonl written by 'run'")
    render.add_argument("--tick", type=int, required=True)
    render.add_argument("--out", required=True, help="SVG file to write")
    render.set_defaults(func=_cmd_render)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

"""SVG snapshots of a trajectory log.

The picture covers the 10 x 10 m arena with y pointing up. Robots are filled
with a per-id colour, obstacles are black, goals are hollow circles in the
robot's colour, earlier poses are drawn faintly and moving obstacles leave a
dotted trail along their path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Tuple

from .config import SCHEMA_VERSION
from .geometry import ConvexPolygon, Pose, world_vertices

SCALE = 60.0  # px per metre
ARENA = 10.0
GHOST_EVERY = 10

PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf",
           "#bcbd22", "#7f7f7f")


class LogError(ValueError):
    """The log is malformed or does not cover the requested tick."""


@dataclass
class TrajectoryLog:
    header: dict
    states: Dict[int, List[dict]]

    @property
    def last_tick(self) -> int:
        return max(self.states) if self.states else -1


def read_log(path) -> TrajectoryLog:
    """Parse a line-delimited trajectory log. OSError propagates."""
    header = None
    states: Dict[int, List[dict]] = {}
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise LogError(f"line {n}: not valid JSON ({exc.msg})") from None
            kind = rec.get("record")
            if kind == "header":
                if rec.get("schema_version") != SCHEMA_VERSION:
                    raise LogError(f"line {n}: unsupported schema_version {rec.get('schema_version')!r}")
                header = rec
            elif kind == "state":
                states.setdefault(int(rec["tick"]), []).append(rec)
    if header is None:
        raise LogError("log has no header record")
    return TrajectoryLog(header, states)


def colour(rid: int) -> str:
    return PALETTE[rid % len(PALETTE)]


def _px(x: float, y: float) -> Tuple[float, float]:
    return x * SCALE, (ARENA - y) * SCALE


def _points(poly: ConvexPolygon) -> str:
    return " ".join("%.2f,%.2f" % _px(x, y) for x, y in poly.vertices)


def _shape(body: ConvexPolygon, rec: dict) -> ConvexPolygon:
    return world_vertices(body, Pose(tuple(rec["position"]), rec["heading"]))


def _bodies(items: Iterable[dict]) -> Dict[int, ConvexPolygon]:
    return {it["id"]: ConvexPolygon(tuple(tuple(v) for v in it["body"])) for it in items}


def render_svg(log: TrajectoryLog, tick: int) -> str:
    if tick < 0 or tick not in log.states:
        raise LogError(f"tick {tick} outside the logged range 0..{log.last_tick}")
    scen = log.header["scenario"]
    robot_body = _bodies(scen["robots"])
    obstacle_body = _bodies(scen["obstacles"])
    size = ARENA * SCALE
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size:.0f}" height="{size:.0f}" '
        f'viewBox="0 0 {size:.0f} {size:.0f}">',
        f'<rect x="0" y="0" width="{size:.0f}" height="{size:.0f}" fill="white" stroke="#cccccc"/>',
        f'<text x="8" y="20" font-family="sans-serif" font-size="14">{scen["name"]}  '
        f't = {log.states[tick][0]["time"]:.1f} s</text>',
    ]

    for o in scen["obstacles"]:
        if o.get("path"):
            (x0, y0), (x1, y1) = _px(*o["path"]["start"]), _px(*o["path"]["end"])
            out.append(f'<line x1="{x0:.2f}" y1="{y0:.2f}" x2="{x1:.2f}" y2="{y1:.2f}" stroke="black" '
                       f'stroke-width="1.5" stroke-dasharray="2,4"/>')

    for r in scen["robots"]:
        cx, cy = _px(*r["goal"])
        out.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{0.12 * SCALE:.2f}" fill="none" '
                   f'stroke="{colour(r["id"])}" stroke-width="2"/>')

    # faded history, then the current frame on top
    trail: Dict[int, List[Tuple[float, float]]] = {}
    for t in range(0, tick + 1):
        for rec in log.states.get(t, ()):
            if rec["kind"] == "robot":
                trail.setdefault(rec["id"], []).append(_px(*rec["position"]))
                if t % GHOST_EVERY == 0 and t != tick and rec["status"] != "arrived":
                    out.append(f'<polygon points="{_points(_shape(robot_body[rec["id"]], rec))}" '
                               f'fill="{colour(rec["id"])}" fill-opacity="0.12" stroke="none"/>')
    for rid, pts in sorted(trail.items()):
        path = " ".join("%.2f,%.2f" % p for p in pts)
        out.append(f'<polyline points="{path}" fill="none" stroke="{colour(rid)}" stroke-opacity="0.4" '
                   f'stroke-width="1.5"/>')

    for rec in log.states[tick]:
        if rec["kind"] == "obstacle":
            out.append(f'<polygon points="{_points(_shape(obstacle_body[rec["id"]], rec))}" fill="black"/>')
    for rec in log.states[tick]:
        if rec["kind"] == "robot":
            opacity = "0.35" if rec["status"] == "arrived" else "0.85"
            edge = ' stroke="red" stroke-width="2"' if rec["status"] == "stopped" else ' stroke="black"'
            out.append(f'<polygon points="{_points(_shape(robot_body[rec["id"]], rec))}" '
                       f'fill="{colour(rec["id"])}" fill-opacity="{opacity}"{edge}/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(log: TrajectoryLog, tick: int, path) -> None:
    Path(path).write_text(render_svg(log, tick), encoding="utf-8")


def snapshot_ticks(text: str) -> List[int]:
    """Parse ``"21,52"`` into ``[21, 52]``."""
    try:
        ticks = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise LogError(f"bad tick list {text!r}") from None
    if any(t < 0 for t in ticks):
        raise LogError("ticks must be non-negative")
    return ticks


def log_from_records(header: dict, records: Sequence[dict]) -> TrajectoryLog:
    states: Dict[int, List[dict]] = {}
    for rec in records:
        states.setdefault(rec["tick"], []).append(rec)
    return TrajectoryLog(header, states)


__all__ = ["LogError", "TrajectoryLog", "colour", "log_from_records", "read_log", "render_svg", "snapshot_ticks",
           "write_svg"]

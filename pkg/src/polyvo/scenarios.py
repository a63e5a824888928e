"""Scenario generators and the randomized benchmark sweep.

Random scenarios draw from ``numpy.random.Generator(Philox(seed))``. Philox is a
counter-based generator with a fixed, platform-independent stream, so a given
``(seed, ratio)`` produces the same scenario everywhere.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, List, Optional, Sequence

import numpy as np

from . import engine
from .config import RobotSpec, ScenarioConfig, load_scenario
from .geometry import ConvexPolygon, Pose, circumradius, rectangle, recenter, regular_polygon
from .policy import Method, PolicyParams

log = logging.getLogger(__name__)

ARENA = 10.0
CENTER = (5.0, 5.0)
RADIUS = 4.0
BASE_LENGTH, BASE_WIDTH = 1.0, 0.6
MAX_REJECTIONS = 10_000
RNG_NAME = "numpy.random.Philox"

ALL_METHODS = tuple(m.value for m in (Method.VO_c, Method.VO_p, Method.RVO_c, Method.RVO_p, Method.HRVO_c,
                                      Method.HRVO_p))
ALL_RATIOS = (0.4, 0.6, 0.8, 1.0, 1.1, 1.2, 1.3, 1.4)


class GenerationError(RuntimeError):
    """Random scenario generation exhausted its rejection budget."""


def _heterogeneous_bodies() -> List[ConvexPolygon]:
    # circumradius of every shape stays below 0.5 m so 16 robots fit on the circle
    return [
        rectangle(0.8, 0.5),
        regular_polygon(3, 0.45, math.pi / 2),
        regular_polygon(5, 0.42),
        regular_polygon(6, 0.4),
        recenter(ConvexPolygon(((-0.45, -0.25), (0.45, -0.25), (0.25, 0.25), (-0.25, 0.25)))),
        rectangle(0.6, 0.6),
        recenter(ConvexPolygon(((-0.4, 0.0), (0.0, -0.3), (0.4, 0.0), (0.0, 0.3)))),
        recenter(ConvexPolygon(((-0.35, -0.3), (0.4, -0.2), (0.35, 0.25), (-0.2, 0.35), (-0.42, 0.05)))),
    ]


def _facing(start, goal) -> float:
    return math.atan2(goal[1] - start[1], goal[0] - start[0])


def circle_scenario(n: int = 8, method=Method.HRVO_p, params: Optional[PolicyParams] = None) -> ScenarioConfig:
    """``n`` heterogeneous robots on a 4 m circle swapping to antipodal points."""
    if n < 1:
        raise ValueError("n must be positive")
    bodies = _heterogeneous_bodies()
    robots = []
    for k in range(n):
        a = 2.0 * math.pi * k / n
        start = (CENTER[0] + RADIUS * math.cos(a), CENTER[1] + RADIUS * math.sin(a))
        goal = (CENTER[0] - RADIUS * math.cos(a), CENTER[1] - RADIUS * math.sin(a))
        robots.append(RobotSpec(k, bodies[k % len(bodies)], Pose(start, _facing(start, goal)), goal))
    params = params or PolicyParams(method=Method(method))
    return ScenarioConfig(f"circle_{n}", tuple(robots), (), params)


def rng_for(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def _spaced_angles(rng: np.random.Generator, n: int, min_sep: float, budget: List[int]) -> np.ndarray:
    while True:
        a = rng.random(n) * 2.0 * math.pi
        s = np.sort(a)
        gaps = np.diff(np.append(s, s[0] + 2.0 * math.pi))
        if gaps.min() >= min_sep:
            return a
        budget[0] += 1
        if budget[0] >= MAX_REJECTIONS:
            raise GenerationError(f"no valid placement after {MAX_REJECTIONS} rejections")


def random_scenario(seed: int, ratio: float = 1.0, n: int = 8, method=Method.HRVO_p,
                    params: Optional[PolicyParams] = None) -> ScenarioConfig:
    """Eight ``ratio``-scaled 1.0 x 0.6 m rectangles with random starts and goals.

    Starts and goals are drawn independently on the 4 m circle. Any two starts
    (and any two goals) are separated by at least one circumscribed diameter
    along the chord, so the bodies are disjoint whatever their headings.
    """
    if ratio <= 0:
        raise ValueError("ratio must be positive")
    body = rectangle(BASE_LENGTH * ratio, BASE_WIDTH * ratio)
    chord = 2.0 * circumradius(body) * (1.0 + 1e-6)
    if chord >= 2.0 * RADIUS:
        raise GenerationError("robots too large for the circle")
    min_sep = 2.0 * math.asin(chord / (2.0 * RADIUS))
    rng = rng_for(seed)
    budget = [0]
    starts = _spaced_angles(rng, n, min_sep, budget)
    goals = _spaced_angles(rng, n, min_sep, budget)
    robots = []
    for k in range(n):
        s = (CENTER[0] + RADIUS * math.cos(starts[k]), CENTER[1] + RADIUS * math.sin(starts[k]))
        g = (CENTER[0] + RADIUS * math.cos(goals[k]), CENTER[1] + RADIUS * math.sin(goals[k]))
        robots.append(RobotSpec(k, body, Pose(s, _facing(s, g)), g))
    params = params or PolicyParams(method=Method(method))
    return ScenarioConfig(f"random_{ratio:g}_{seed}", tuple(robots), (), params, seed=seed)


def _packaged(name: str) -> ScenarioConfig:
    with resources.as_file(resources.files("polyvo") / "data" / name) as path:
        return load_scenario(path)


def obstacle_scenario(method=Method.RVO_p) -> ScenarioConfig:
    """Five robots, two static and two moving obstacles (layout reconstructed)."""
    return _packaged("obstacle_scenario.yaml").with_method(method)


def turnaround_scenario(method=Method.VO_p) -> ScenarioConfig:
    """One 0.8 x 0.5 m robot facing a narrow corridor between two obstacles."""
    return _packaged("turnaround_scenario.yaml").with_method(method)


@dataclass(frozen=True)
class BenchRow:
    ratio: float
    method: str
    completion_rate: float
    deadlock_rate: float
    avg_travel_distance: Optional[float]
    distance_std: Optional[float]
    trials: int
    seed: int


def _trial(job):
    method, ratio, seed = job
    cfg = random_scenario(seed, ratio, method=method)
    return engine.run(cfg, record=False)


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("POLYVO_WORKERS", "1")))
    except ValueError:
        return 1


def benchmark(methods: Sequence[str] = ALL_METHODS, ratios: Sequence[float] = ALL_RATIOS, trials: int = 100,
              base_seed: int = 0, workers: Optional[int] = None) -> List[BenchRow]:
    """Paired-seed sweep; trial ``i`` of every method uses seed ``base_seed + i``.

    Rows come back ordered by ratio then by the order of ``methods``.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    jobs = [(Method(m).value, float(r), base_seed + i) for r in ratios for m in methods for i in range(trials)]
    workers = workers or _workers()
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_trial, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        results = [_trial(j) for j in jobs]
    rows = []
    for k in range(0, len(jobs), trials):
        method, ratio, _ = jobs[k]
        m = engine.metrics(results[k:k + trials])
        rows.append(BenchRow(ratio, method, m.completion_rate, m.deadlock_rate, m.avg_travel_distance,
                             m.distance_std, trials, base_seed))
        log.info("ratio %.2f %-6s completion %5.1f%% deadlock %5.1f%%", ratio, method, m.completion_rate,
                 m.deadlock_rate)
    return rows


def table_by_ratio(rows: Iterable[BenchRow]) -> List[dict]:
    """Pivot rows into one record per ratio with every method's metrics."""
    out = {}
    for r in rows:
        out.setdefault(r.ratio, {"ratio": r.ratio})[r.method] = r
    return [out[k] for k in sorted(out)]

"""Synchronous multi-robot simulation loop.

Every tick has three phases. All active robots plan from the same start-of-tick
snapshot, then everything moves, then collisions are checked on the true
(uninflated) shapes at the end pose and at the midpoint of the step. Robots
that touch anything stop for good; robots within ``arrival_tol`` of their goal
leave the world.
"""

from __future__ import annotations

import dataclasses
import math
import statistics
import time as _time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .config import ScenarioConfig
from .dynamics import step, to_unicycle
from .geometry import Pose, intersects, wrap_angle, world_vertices
from .policy import ACTIVE, ARRIVED, STOPPED, ObstacleState, PolicyParams, RobotState, plan

COMPLETED = "completed"
DEADLOCKED = "deadlocked"
COLLIDED = "collided"


class ScenarioError(ValueError):
    """The scenario cannot be simulated (e.g. overlapping initial shapes)."""


@dataclass(frozen=True)
class TrajectoryRecord:
    tick: int
    time: float
    kind: str
    id: int
    position: Tuple[float, float]
    heading: float
    velocity: Tuple[float, float]
    status: str

    def to_dict(self) -> dict:
        return {"record": "state", "tick": self.tick, "time": self.time, "kind": self.kind, "id": self.id,
                "position": list(self.position), "heading": self.heading, "velocity": list(self.velocity),
                "status": self.status}


@dataclass(frozen=True)
class World:
    time: float
    robots: Tuple[RobotState, ...]
    obstacles: Tuple[ObstacleState, ...]
    params: PolicyParams
    dt: float = 0.1
    t_max: float = 30.0
    tick: int = 0
    distance: Tuple[float, ...] = ()

    def __post_init__(self):
        if not self.distance:
            object.__setattr__(self, "distance", (0.0,) * len(self.robots))


@dataclass
class RunResult:
    outcomes: Dict[int, str]
    travel_distance: Dict[int, float]
    straight_distance: Dict[int, float]
    log: List[TrajectoryRecord] = field(repr=False)
    ticks: int = 0
    time: float = 0.0
    wall_clock: float = 0.0

    def counts(self) -> Dict[str, int]:
        out = {COMPLETED: 0, DEADLOCKED: 0, COLLIDED: 0}
        for o in self.outcomes.values():
            out[o] += 1
        return out


def _obstacle_at(o: ObstacleState, t: float) -> ObstacleState:
    if o.path is None:
        return o
    pos, vel = o.path.at(t)
    return dataclasses.replace(o, pose=Pose(pos, o.pose.heading), velocity=vel)


def initial_world(cfg: ScenarioConfig) -> World:
    robots = tuple(RobotState(r.id, r.body, r.start, r.goal, (0.0, 0.0), r.v_max, r.w_max) for r in cfg.robots)
    obstacles = tuple(_obstacle_at(ObstacleState(o.id, o.body, o.pose, (0.0, 0.0), o.path), 0.0)
                      for o in cfg.obstacles)
    world = World(0.0, robots, obstacles, cfg.params, cfg.dt, cfg.t_max)
    validate(world)
    return world


def validate(world: World) -> None:
    """Reject worlds whose initial shapes overlap or touch."""
    shapes = [("robot", r.id, r.shape) for r in world.robots] + [("obstacle", o.id, o.shape) for o in world.obstacles]
    for i in range(len(shapes)):
        for j in range(i + 1, len(shapes)):
            if intersects(shapes[i][2], shapes[j][2]):
                a, b = shapes[i], shapes[j]
                raise ScenarioError(f"initial overlap between {a[0]} {a[1]} and {b[0]} {b[1]}")


def _midpose(a: Pose, b: Pose) -> Pose:
    return Pose((0.5 * (a.position[0] + b.position[0]), 0.5 * (a.position[1] + b.position[1])),
                a.heading + 0.5 * wrap_angle(b.heading - a.heading))


def tick(world: World) -> World:
    p, dt = world.params, world.dt
    robots = world.robots

    # phase 1: decisions from the start-of-tick snapshot
    commands = {}
    for r in robots:
        if r.status == ACTIVE:
            v_new = plan(r, robots, world.obstacles, p, dt).velocity
            commands[r.id] = to_unicycle(v_new, r.pose.heading, p.eta, r.v_max, r.w_max)

    # phase 2: integrate robots, advance obstacles
    t_next = (world.tick + 1) * dt
    moved = []
    distance = list(world.distance)
    for k, r in enumerate(robots):
        if r.id in commands:
            pose = step(r.pose, commands[r.id], dt)
            dx, dy = pose.position[0] - r.pose.position[0], pose.position[1] - r.pose.position[1]
            distance[k] += math.hypot(dx, dy)
            moved.append(dataclasses.replace(r, pose=pose, velocity=(dx / dt, dy / dt)))
        elif r.status == STOPPED:
            moved.append(dataclasses.replace(r, velocity=(0.0, 0.0)) if r.velocity != (0.0, 0.0) else r)
        else:
            moved.append(r)
    obstacles = tuple(_obstacle_at(o, t_next) for o in world.obstacles)

    # phase 3: collision and arrival checks
    present = [k for k, r in enumerate(moved) if r.status != ARRIVED]
    mid_r = {k: world_vertices(moved[k].body, _midpose(robots[k].pose, moved[k].pose)) for k in present}
    mid_o = [world_vertices(o.body, _midpose(o0.pose, o.pose)) for o0, o in zip(world.obstacles, obstacles)]
    hit = set()
    for a_i, a in enumerate(present):
        ra = moved[a]
        for b in present[a_i + 1:]:
            if ra.status != ACTIVE and moved[b].status != ACTIVE:
                continue
            if intersects(ra.shape, moved[b].shape) or intersects(mid_r[a], mid_r[b]):
                hit.update((a, b))
        if ra.status == ACTIVE:
            for j, o in enumerate(obstacles):
                if intersects(ra.shape, o.shape) or intersects(mid_r[a], mid_o[j]):
                    hit.add(a)
    final = []
    for k, r in enumerate(moved):
        if r.status == ACTIVE:
            if k in hit:
                r = dataclasses.replace(r, status=STOPPED, velocity=(0.0, 0.0))
            elif math.dist(r.position, r.goal) <= p.arrival_tol:
                r = dataclasses.replace(r, status=ARRIVED)
        final.append(r)
    return dataclasses.replace(world, time=t_next, robots=tuple(final), obstacles=obstacles,
                               tick=world.tick + 1, distance=tuple(distance))


def _records(world: World) -> List[TrajectoryRecord]:
    out = []
    for r in world.robots:
        out.append(TrajectoryRecord(world.tick, world.time, "robot", r.id, r.pose.position, r.pose.heading,
                                    tuple(r.velocity), r.status))
    for o in world.obstacles:
        status = "static" if o.path is None else "moving"
        out.append(TrajectoryRecord(world.tick, world.time, "obstacle", o.id, o.pose.position, o.pose.heading,
                                    tuple(o.velocity), status))
    return out


def run(cfg: ScenarioConfig, record: bool = True) -> RunResult:
    """Simulate until every robot has arrived or stopped, or ``t_max`` passes."""
    started = _time.perf_counter()
    world = initial_world(cfg)
    n_ticks = int(math.floor(cfg.t_max / cfg.dt + 1e-9))
    log = _records(world) if record else []
    while world.tick < n_ticks and any(r.status == ACTIVE for r in world.robots):
        world = tick(world)
        if record:
            log.extend(_records(world))
    outcomes = {}
    for r in world.robots:
        outcomes[r.id] = {ARRIVED: COMPLETED, STOPPED: COLLIDED, ACTIVE: DEADLOCKED}[r.status]
    by_id = {r.id: r for r in cfg.robots}
    return RunResult(
        outcomes=outcomes,
        travel_distance={r.id: d for r, d in zip(world.robots, world.distance)},
        straight_distance={i: math.dist(s.start.position, s.goal) for i, s in by_id.items()},
        log=log,
        ticks=world.tick,
        time=world.time,
        wall_clock=_time.perf_counter() - started,
    )


@dataclass(frozen=True)
class Metrics:
    completion_rate: float
    deadlock_rate: float
    avg_travel_distance: Optional[float]
    distance_std: Optional[float]
    robots: int


def metrics(results: Sequence[RunResult]) -> Metrics:
    """Pooled per-robot rates (percent) and distance stats over completed robots.

    Distance statistics are None when no robot completed.
    """
    total = completed = deadlocked = 0
    dists = []
    for res in results:
        for rid, outcome in res.outcomes.items():
            total += 1
            if outcome == COMPLETED:
                completed += 1
                dists.append(res.travel_distance[rid])
            elif outcome == DEADLOCKED:
                deadlocked += 1
    if total == 0:
        raise ValueError("no robots in results")
    avg = statistics.fmean(dists) if dists else None
    std = statistics.pstdev(dists) if dists else None
    return Metrics(100.0 * completed / total, 100.0 * deadlocked / total, avg, std, total)

"""Per-robot velocity selection over a combined velocity obstacle."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import List, Optional, Sequence, Set, Tuple

import numpy as np

from . import kernels
from .cones import (
    VelocityCone,
    build_hrvo,
    build_rvo,
    build_vo,
    cone_directions_circular,
    cone_directions_polytopic,
    set_mask,
)
from .geometry import (ConvexPolygon, Pose, centroid, circumradius, inflate, intersects, min_distance,
                       minkowski_diff, world_vertices)

ACTIVE = "active"
ARRIVED = "arrived"
STOPPED = "stopped"


class Method(str, enum.Enum):
    VO_c = "VO_c"
    VO_p = "VO_p"
    RVO_c = "RVO_c"
    RVO_p = "RVO_p"
    HRVO_c = "HRVO_c"
    HRVO_p = "HRVO_p"

    @property
    def circular(self) -> bool:
        return self.value.endswith("_c")

    @property
    def variant(self) -> str:
        return self.value.split("_")[0]


@dataclass(frozen=True)
class PolicyParams:
    """Planner settings. Defaults follow the reference simulation setup.

    ``neighbor_region`` is the sensing radius; see :func:`neighbor_region_length`
    for deriving it from speeds and a collision-free time window.
    """

    method: Method = Method.HRVO_p
    neighbor_region: float = 5.0
    phi: float = 4.0
    margin: float = 0.15
    eta: float = 0.2
    angle_padding: float = 0.0
    samples_angular: int = 36
    samples_radial: int = 10
    arrival_tol: float = 0.2

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        if self.neighbor_region <= 0:
            raise ValueError("neighbor_region must be positive")
        if self.phi < 0:
            raise ValueError("phi must be non-negative")
        if self.margin < 0:
            raise ValueError("margin must be non-negative")
        if self.eta <= 0:
            raise ValueError("eta must be positive")
        if self.samples_angular < 1 or self.samples_radial < 1:
            raise ValueError("sample counts must be at least 1")
        if self.arrival_tol < 0:
            raise ValueError("arrival_tol must be non-negative")


def neighbor_region_length(v_max_robot: float, v_max_obstacle: float, tau: float) -> float:
    """Sensing radius covering a collision-free window of ``tau`` seconds."""
    return (v_max_robot + v_max_obstacle) * tau


@dataclass(frozen=True)
class RobotState:
    id: int
    body: ConvexPolygon
    pose: Pose
    goal: Tuple[float, float]
    velocity: Tuple[float, float] = (0.0, 0.0)
    v_max: float = 1.5
    w_max: float = 1.0
    status: str = ACTIVE

    @cached_property
    def shape(self) -> ConvexPolygon:
        return world_vertices(self.body, self.pose)

    @cached_property
    def position(self) -> np.ndarray:
        return centroid(self.shape)

    def planning_shape(self, margin: float) -> ConvexPolygon:
        cache = self.__dict__.setdefault("_planning", {})
        if margin not in cache:
            cache[margin] = world_vertices(inflate(self.body, margin), self.pose)
        return cache[margin]


@dataclass(frozen=True)
class ObstaclePath:
    start: Tuple[float, float]
    end: Tuple[float, float]
    speed: float

    @property
    def length(self) -> float:
        return math.hypot(self.end[0] - self.start[0], self.end[1] - self.start[1])

    def direction(self) -> Tuple[float, float]:
        n = self.length
        if n == 0:
            return (0.0, 0.0)
        return ((self.end[0] - self.start[0]) / n, (self.end[1] - self.start[1]) / n)

    def at(self, t: float) -> Tuple[Tuple[float, float], Tuple[float, float]]:
        """Position and velocity at time ``t``; the obstacle halts at the end."""
        ux, uy = self.direction()
        s = self.speed * t
        if s >= self.length:
            return (self.end[0], self.end[1]), (0.0, 0.0)
        return (self.start[0] + s * ux, self.start[1] + s * uy), (self.speed * ux, self.speed * uy)


@dataclass(frozen=True)
class ObstacleState:
    id: int
    body: ConvexPolygon
    pose: Pose
    velocity: Tuple[float, float] = (0.0, 0.0)
    path: Optional[ObstaclePath] = None

    @property
    def static(self) -> bool:
        return self.path is None and self.velocity == (0.0, 0.0)

    @cached_property
    def shape(self) -> ConvexPolygon:
        return world_vertices(self.body, self.pose)

    @cached_property
    def position(self) -> np.ndarray:
        return centroid(self.shape)

    def planning_shape(self, margin: float) -> ConvexPolygon:
        # obstacles are never inflated; the margin belongs to the robots
        return self.shape


def neighbors(me: RobotState, robots: Sequence[RobotState], obstacles: Sequence[ObstacleState], l: float):
    """Ids of robots and obstacles whose centroid lies within ``l`` of mine.

    Arrived robots have left the world and are never neighbors.
    """
    x = me.position
    rob: Set[int] = set()
    obs: Set[int] = set()
    for r in robots:
        if r.id == me.id or r.status == ARRIVED:
            continue
        if math.hypot(*(r.position - x)) <= l:
            rob.add(r.id)
    for o in obstacles:
        if math.hypot(*(o.position - x)) <= l:
            obs.add(o.id)
    return rob, obs


@dataclass
class _Other:
    """What one robot sees of a neighbor while planning."""

    raw: ConvexPolygon
    shape: ConvexPolygon
    velocity: Tuple[float, float]
    reciprocal: bool
    center: np.ndarray
    radius: float


def _view(me: RobotState, robots, obstacles, params: PolicyParams) -> List[_Other]:
    out = []
    for r in robots:
        if r.id == me.id:
            continue
        rad = circumradius(r.body) + params.margin
        out.append(_Other(r.shape, r.planning_shape(params.margin), tuple(r.velocity),
                          r.status == ACTIVE, r.position, rad))
    for o in obstacles:
        out.append(_Other(o.shape, o.shape, tuple(o.velocity), False, o.position, circumradius(o.body)))
    return out


def _my_radius(me: RobotState, params: PolicyParams) -> float:
    return circumradius(me.body) + params.margin


def _cones_for(me: RobotState, others: List[_Other], params: PolicyParams) -> List[VelocityCone]:
    mine = me.planning_shape(params.margin)
    my_r = _my_radius(me, params)
    variant = params.method.variant
    cones = []
    for o in others:
        if params.method.circular:
            dirs = cone_directions_circular(me.position, my_r, o.center, o.radius)
        else:
            dirs = cone_directions_polytopic(mine, o.shape)
        dirs = dirs.padded(params.angle_padding)
        if not o.reciprocal or variant == "VO":
            cones.append(build_vo(dirs, o.velocity))
        elif variant == "RVO":
            cones.append(build_rvo(dirs, me.velocity, o.velocity))
        else:
            cones.append(build_hrvo(dirs, me.velocity, o.velocity))
    return cones


def combined_cones(me: RobotState, robots: Sequence[RobotState], obstacles: Sequence[ObstacleState],
                   params: PolicyParams) -> List[VelocityCone]:
    """One cone per neighbor, robots first then obstacles.

    Active robot neighbors get the method's VO/RVO/HRVO cone. Obstacles and
    stopped robots always get a plain VO with apex at their velocity.
    """
    return _cones_for(me, _view(me, robots, obstacles, params), params)


def preferred_velocity(me: RobotState, dt: float = 0.1, arrival_tol: float = 0.2) -> np.ndarray:
    """Full speed toward the goal, capped so one step does not overshoot it."""
    to_goal = np.asarray(me.goal, dtype=float) - me.position
    dist = math.hypot(*to_goal)
    if dist <= arrival_tol or dist == 0.0:
        return np.zeros(2)
    return to_goal / dist * min(me.v_max, dist / dt)


def candidate_velocities(v_max: float, params: PolicyParams, v_pref=(0.0, 0.0)) -> np.ndarray:
    """Polar grid of velocities plus zero and the preferred velocity.

    Ordering is direction-major (angles from +x counterclockwise, speeds
    increasing), then zero, then ``v_pref``.
    """
    na, nr = params.samples_angular, params.samples_radial
    ang = 2.0 * math.pi * np.arange(na) / na
    speeds = v_max * np.arange(1, nr + 1) / nr
    dirs = np.column_stack((np.cos(ang), np.sin(ang)))
    grid = (dirs[:, None, :] * speeds[None, :, None]).reshape(-1, 2)
    return np.vstack((grid, np.zeros((1, 2)), np.asarray(v_pref, dtype=float).reshape(1, 2)))


def time_to_collision(me_shape: ConvexPolygon, other_shape: ConvexPolygon, v_other, v_candidate) -> float:
    """Time until the shapes meet if both hold their velocities; inf if never."""
    return float(_ttc_polygon(me_shape, other_shape, v_other, np.asarray(v_candidate, dtype=float).reshape(1, 2))[0])


_ORIGIN = np.zeros(2)
_SHRINK = 0.9
_SHRINK_TRIES = 6


def _ttc_polygon(me_shape, other_shape, v_other, candidates):
    region = minkowski_diff(other_shape, me_shape)
    rel = candidates - np.asarray(v_other, dtype=float)
    return kernels.ray_entry_times(_ORIGIN, rel, region.array)


def _ttc_other(me: RobotState, o: _Other, candidates, params: PolicyParams) -> np.ndarray:
    rel = candidates - np.asarray(o.velocity, dtype=float)
    if params.method.circular:
        offset = o.center - me.position
        radius = _my_radius(me, params) + o.radius
        if math.hypot(*offset) > radius:
            return kernels.disc_entry_times(rel, offset, radius)
    mine = me.planning_shape(params.margin)
    if not intersects(mine, o.shape):
        return kernels.ray_entry_times(_ORIGIN, rel, minkowski_diff(o.shape, mine).array)
    # Already inside each other's margin: shrink the margin so the pair is just
    # apart. A grazing pass on the bare shapes would otherwise look safe.
    inflated = o.shape is not o.raw
    gap = min_distance(me.shape, o.raw)
    m = min(params.margin, _SHRINK * gap / (2.0 if inflated else 1.0))
    # miter corners reach past m, so halve until the pair really is apart
    for _ in range(_SHRINK_TRIES):
        if m <= 0.0:
            break
        other = inflate(o.raw, m) if inflated else o.raw
        grown = inflate(me.shape, m)
        if not intersects(grown, other):
            return kernels.ray_entry_times(_ORIGIN, rel, minkowski_diff(other, grown).array)
        m *= 0.5
    return kernels.ray_entry_times(_ORIGIN, rel, minkowski_diff(o.raw, me.shape).array)


def _ttc_all(me: RobotState, others: List[_Other], candidates, params: PolicyParams) -> np.ndarray:
    tc = np.full(len(candidates), np.inf)
    for o in others:
        np.minimum(tc, _ttc_other(me, o, candidates, params), out=tc)
    return tc


def expected_collision_time(me: RobotState, robots: Sequence[RobotState], obstacles: Sequence[ObstacleState],
                            v, params: PolicyParams) -> float:
    """Earliest collision over all neighbors for one candidate velocity."""
    others = _view(me, robots, obstacles, params)
    return float(_ttc_all(me, others, np.asarray(v, dtype=float).reshape(1, 2), params)[0])


@dataclass
class Selection:
    velocity: np.ndarray
    index: int
    penalty_branch: bool
    candidates: np.ndarray = field(repr=False)
    inside: np.ndarray = field(repr=False)
    v_pref: np.ndarray = field(repr=False)


def choose(candidates: np.ndarray, inside: np.ndarray, v_pref, phi: float, ttc=None):
    """Index of the chosen candidate and whether the penalty branch was used.

    ``ttc`` is a callable returning collision times for all candidates; it is
    only evaluated when every candidate is inside the combined obstacle.
    """
    dev = np.hypot(candidates[:, 0] - v_pref[0], candidates[:, 1] - v_pref[1])
    if not inside.all():
        return int(np.argmin(np.where(inside, np.inf, dev))), False
    tc = np.asarray(ttc() if callable(ttc) else ttc, dtype=float)
    with np.errstate(divide="ignore"):
        cost = np.where(np.isinf(tc), 0.0, phi / tc) + dev
    return int(np.argmin(cost)), True


def _select(me: RobotState, cones, others: List[_Other], params: PolicyParams, dt: float) -> Selection:
    v_pref = preferred_velocity(me, dt, params.arrival_tol)
    cands = candidate_velocities(me.v_max, params, v_pref)
    inside = set_mask(cones, cands)
    idx, penalty = choose(cands, inside, v_pref, params.phi, lambda: _ttc_all(me, others, cands, params))
    return Selection(cands[idx].copy(), idx, penalty, cands, inside, v_pref)


def select_velocity(me: RobotState, cones: Sequence[VelocityCone], robots: Sequence[RobotState],
                    obstacles: Sequence[ObstacleState], params: PolicyParams, dt: float = 0.1) -> np.ndarray:
    """Closest admissible candidate to the preferred velocity.

    When no candidate lies outside every cone, minimise
    ``phi / ttc(v) + |v - v_pref|`` over all candidates instead.
    """
    return _select(me, cones, _view(me, robots, obstacles, params), params, dt).velocity


def plan(me: RobotState, robots: Sequence[RobotState], obstacles: Sequence[ObstacleState],
         params: PolicyParams, dt: float = 0.1) -> Selection:
    """Full decision for one robot against a world snapshot."""
    rid, oid = neighbors(me, robots, obstacles, params.neighbor_region)
    nb_robots = [r for r in robots if r.id in rid]
    nb_obstacles = [o for o in obstacles if o.id in oid]
    others = _view(me, nb_robots, nb_obstacles, params)
    cones = _cones_for(me, others, params)
    return _select(me, cones, others, params, dt)

"""Scenario description and its YAML file format.

A scenario file is a YAML mapping::

    schema_version: 1
    name: circle_8
    dt: 0.1            # s
    t_max: 30.0        # s
    seed: 0
    params:            # every key optional, defaults shown
      method: HRVO_p   # VO_c VO_p RVO_c RVO_p HRVO_c HRVO_p
      neighbor_region: 5.0
      phi: 4.0
      margin: 0.15
      eta: 0.2
      angle_padding: 0.0
      samples_angular: 36
      samples_radial: 10
      arrival_tol: 0.2
    robots:
      - id: 0
        body: [[-0.5, -0.3], [0.5, -0.3], [0.5, 0.3], [-0.5, 0.3]]
        start: {position: [9.0, 5.0], heading: 3.14159}
        goal: [1.0, 5.0]
        v_max: 1.5     # optional
        w_max: 1.0     # optional
    obstacles:
      - id: 0
        body: [[...], ...]
        pose: {position: [3.0, 3.0], heading: 0.0}
        path: {start: [8.85, 2.35], end: [5.0, 2.35], speed: 1.0}   # optional

Bodies are given in the body frame, counterclockwise; they are recentered so
their vertex centroid is the body origin.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Tuple

import yaml

from .geometry import ConvexPolygon, GeometryError, Pose, recenter
from .policy import Method, ObstaclePath, PolicyParams

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    """Invalid scenario description; the message names the offending field."""


@dataclass(frozen=True)
class RobotSpec:
    id: int
    body: ConvexPolygon
    start: Pose
    goal: Tuple[float, float]
    v_max: float = 1.5
    w_max: float = 1.0


@dataclass(frozen=True)
class ObstacleSpec:
    id: int
    body: ConvexPolygon
    pose: Pose
    path: Optional[ObstaclePath] = None


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    robots: Tuple[RobotSpec, ...]
    obstacles: Tuple[ObstacleSpec, ...] = ()
    params: PolicyParams = field(default_factory=PolicyParams)
    dt: float = 0.1
    t_max: float = 30.0
    seed: int = 0

    def with_method(self, method) -> "ScenarioConfig":
        return dataclasses.replace(self, params=dataclasses.replace(self.params, method=Method(method)))


def _point(value, where: str) -> Tuple[float, float]:
    try:
        x, y = value
        x, y = float(x), float(y)
    except (TypeError, ValueError):
        raise ConfigError(f"{where}: expected a point [x, y], got {value!r}") from None
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ConfigError(f"{where}: coordinates must be finite")
    return (x, y)


def _number(value, where: str) -> float:
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{where}: expected a number, got {value!r}") from None
    if not math.isfinite(out):
        raise ConfigError(f"{where}: must be finite")
    return out


def _body(value, where: str) -> ConvexPolygon:
    if not isinstance(value, (list, tuple)):
        raise ConfigError(f"{where}: expected a list of vertices")
    pts = [_point(v, f"{where}[{i}]") for i, v in enumerate(value)]
    try:
        return recenter(ConvexPolygon(tuple(pts)))
    except GeometryError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def _pose(value, where: str) -> Pose:
    if not isinstance(value, dict) or "position" not in value:
        raise ConfigError(f"{where}: expected a mapping with 'position'")
    return Pose(_point(value["position"], f"{where}.position"), _number(value.get("heading", 0.0), f"{where}.heading"))


def _require(d: dict, key: str, where: str):
    if key not in d:
        raise ConfigError(f"{where}.{key}: missing required field")
    return d[key]


def _params(value, where: str) -> PolicyParams:
    if value is None:
        return PolicyParams()
    if not isinstance(value, dict):
        raise ConfigError(f"{where}: expected a mapping")
    known = {f.name for f in dataclasses.fields(PolicyParams)}
    kwargs = {}
    for key, raw in value.items():
        if key not in known:
            raise ConfigError(f"{where}.{key}: unknown parameter")
        if key == "method":
            try:
                kwargs[key] = Method(raw)
            except ValueError:
                raise ConfigError(f"{where}.method: unknown method {raw!r}") from None
        elif key in ("samples_angular", "samples_radial"):
            if not isinstance(raw, int) or isinstance(raw, bool):
                raise ConfigError(f"{where}.{key}: expected an integer")
            kwargs[key] = raw
        else:
            kwargs[key] = _number(raw, f"{where}.{key}")
    try:
        return PolicyParams(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def scenario_from_dict(data: Any) -> ScenarioConfig:
    if not isinstance(data, dict):
        raise ConfigError("scenario: expected a mapping at top level")
    version = data.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigError(f"schema_version: unsupported version {version!r}")
    robots = []
    raw_robots = _require(data, "robots", "scenario")
    if not isinstance(raw_robots, list) or not raw_robots:
        raise ConfigError("robots: expected a non-empty list")
    for i, r in enumerate(raw_robots):
        where = f"robots[{i}]"
        if not isinstance(r, dict):
            raise ConfigError(f"{where}: expected a mapping")
        v_max = _number(r.get("v_max", 1.5), f"{where}.v_max")
        w_max = _number(r.get("w_max", 1.0), f"{where}.w_max")
        if v_max <= 0 or w_max <= 0:
            raise ConfigError(f"{where}: v_max and w_max must be positive")
        robots.append(RobotSpec(
            id=int(r.get("id", i)),
            body=_body(_require(r, "body", where), f"{where}.body"),
            start=_pose(_require(r, "start", where), f"{where}.start"),
            goal=_point(_require(r, "goal", where), f"{where}.goal"),
            v_max=v_max,
            w_max=w_max,
        ))
    obstacles = []
    for i, o in enumerate(data.get("obstacles") or []):
        where = f"obstacles[{i}]"
        if not isinstance(o, dict):
            raise ConfigError(f"{where}: expected a mapping")
        path = None
        if o.get("path") is not None:
            p = o["path"]
            if not isinstance(p, dict):
                raise ConfigError(f"{where}.path: expected a mapping")
            speed = _number(_require(p, "speed", f"{where}.path"), f"{where}.path.speed")
            if speed < 0:
                raise ConfigError(f"{where}.path.speed: must be non-negative")
            path = ObstaclePath(_point(_require(p, "start", f"{where}.path"), f"{where}.path.start"),
                                _point(_require(p, "end", f"{where}.path"), f"{where}.path.end"), speed)
        if "pose" in o:
            pose = _pose(o["pose"], f"{where}.pose")
        elif path is not None:
            pose = Pose(path.start, 0.0)
        else:
            raise ConfigError(f"{where}.pose: missing required field")
        obstacles.append(ObstacleSpec(int(o.get("id", i)), _body(_require(o, "body", where), f"{where}.body"),
                                      pose, path))
    ids = [r.id for r in robots]
    if len(set(ids)) != len(ids):
        raise ConfigError("robots: duplicate robot id")
    oids = [o.id for o in obstacles]
    if len(set(oids)) != len(oids):
        raise ConfigError("obstacles: duplicate obstacle id")
    dt = _number(data.get("dt", 0.1), "dt")
    t_max = _number(data.get("t_max", 30.0), "t_max")
    if dt <= 0:
        raise ConfigError("dt: must be positive")
    if t_max < 0:
        raise ConfigError("t_max: must be non-negative")
    seed = data.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool) or not 0 <= seed < 2**64:
        raise ConfigError("seed: expected a 64-bit unsigned integer")
    return ScenarioConfig(
        name=str(data.get("name", "scenario")),
        robots=tuple(robots),
        obstacles=tuple(obstacles),
        params=_params(data.get("params"), "params"),
        dt=dt,
        t_max=t_max,
        seed=seed,
    )


def _pose_dict(p: Pose) -> dict:
    return {"position": list(p.position), "heading": p.heading}


def scenario_to_dict(cfg: ScenarioConfig) -> dict:
    params = dataclasses.asdict(cfg.params)
    params["method"] = cfg.params.method.value
    out = {
        "schema_version": SCHEMA_VERSION,
        "name": cfg.name,
        "dt": cfg.dt,
        "t_max": cfg.t_max,
        "seed": cfg.seed,
        "params": params,
        "robots": [
            {"id": r.id, "body": [list(v) for v in r.body.vertices], "start": _pose_dict(r.start),
             "goal": list(r.goal), "v_max": r.v_max, "w_max": r.w_max}
            for r in cfg.robots
        ],
        "obstacles": [],
    }
    for o in cfg.obstacles:
        item = {"id": o.id, "body": [list(v) for v in o.body.vertices], "pose": _pose_dict(o.pose)}
        if o.path is not None:
            item["path"] = {"start": list(o.path.start), "end": list(o.path.end), "speed": o.path.speed}
        out["obstacles"].append(item)
    return out


def load_scenario(path) -> ScenarioConfig:
    """Read a scenario file. Raises ConfigError on bad content, OSError on I/O."""
    text = Path(path).read_text()
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"scenario: not valid YAML ({exc})") from None
    return scenario_from_dict(data)


def dump_scenario(cfg: ScenarioConfig, path) -> None:
    Path(path).write_text(yaml.safe_dump(scenario_to_dict(cfg), sort_keys=False))

"""Unicycle model: conversion of a planar velocity into speed and turn rate."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .geometry import Pose, wrap_angle


@dataclass(frozen=True)
class UnicycleCommand:
    v: float
    w: float


def to_unicycle(v_new: Sequence[float], heading: float, eta: float = 0.2, v_max: float = 1.5,
                w_max: float = 1.0) -> UnicycleCommand:
    """Track ``v_new`` with forward speed and turn rate.

    The heading error is removed over ``eta`` seconds. Speed is never negative:
    a target behind the robot produces a turn in place.
    """
    if eta <= 0:
        raise ValueError("eta must be positive")
    speed = math.hypot(v_new[0], v_new[1])
    if speed == 0.0:
        return UnicycleCommand(0.0, 0.0)
    err = wrap_angle(heading - math.atan2(v_new[1], v_new[0]))
    v = min(max(speed * math.cos(err), 0.0), v_max)
    w = min(max(-err / eta, -w_max), w_max)
    return UnicycleCommand(v, w)


def step(pose: Pose, cmd: UnicycleCommand, dt: float) -> Pose:
    """Explicit Euler step; translation uses the heading at the start of the step."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    x, y = pose.position
    h = pose.heading
    return Pose((x + dt * cmd.v * math.cos(h), y + dt * cmd.v * math.sin(h)), h + dt * cmd.w)

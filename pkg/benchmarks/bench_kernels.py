"""Compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Each kernel is timed on identical inputs in both backends; the last column is
the speedup of the compiled one. A full simulation run is timed too, with the
backend picked in a fresh interpreter through POLYVO_PURE_PYTHON.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from polyvo import _kernels_py as py

try:
    from polyvo import _kernels_c as cy
except ImportError:
    sys.exit("compiled extension not built: pip install -e . --no-build-isolation")


def polygon(rng, k=6, center=(0.0, 0.0)):
    ang = np.sort(rng.uniform(0, 2 * np.pi, k))
    return np.column_stack((np.cos(ang), np.sin(ang))) * rng.uniform(0.3, 1.0) + center


def cases(rng):
    a = polygon(rng)
    b = polygon(rng, center=(3.0, 0.5))
    vs = rng.uniform(-2, 2, (362, 2))
    m = 8
    apex = rng.uniform(-1, 1, (m, 2))
    ang = rng.uniform(-np.pi, np.pi, m)
    vl = np.column_stack((np.cos(ang + 0.4), np.sin(ang + 0.4)))
    vr = np.column_stack((np.cos(ang - 0.4), np.sin(ang - 0.4)))
    full = np.zeros(m, dtype=np.uint8)
    region = np.ascontiguousarray(py.convex_hull((b[:, None, :] - a[None, :, :]).reshape(-1, 2)))
    pts = rng.uniform(-1, 1, (36, 2))
    return {
        "sat_overlap": lambda k: k.sat_overlap(a, b),
        "polygon_distance": lambda k: k.polygon_distance(a, b),
        "convex_hull(36)": lambda k: k.convex_hull(pts),
        "angle_extremes": lambda k: k.angle_extremes(a, b, 3.0, 0.5),
        "ray_entry_times(362)": lambda k: k.ray_entry_times(np.zeros(2), vs, region),
        "disc_entry_times(362)": lambda k: k.disc_entry_times(vs, np.array([3.0, 0.5]), 1.2),
        "cone_mask(362x8)": lambda k: k.cone_mask(vs, apex, vl, vr, full),
    }


def best(fn, repeat, number):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


SIM = ("import time; from polyvo import engine, scenarios, kernels; "
       "cfg = scenarios.circle_scenario(8).with_method('HRVO_p'); t = time.perf_counter(); "
       "engine.run(cfg, record=False); print(kernels.BACKEND, time.perf_counter() - t)")


def simulation(pure):
    env = dict(os.environ, POLYVO_PURE_PYTHON="1" if pure else "0")
    out = subprocess.run([sys.executable, "-c", SIM], env=env, capture_output=True, text=True, check=True)
    name, secs = out.stdout.split()
    return name, float(secs)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--number", type=int, default=2000)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(0)
    print(f"{'kernel':<24}{'numpy us':>12}{'cython us':>12}{'speedup':>10}")
    for name, fn in cases(rng).items():
        t_py = best(lambda: fn(py), args.repeat, args.number)
        t_cy = best(lambda: fn(cy), args.repeat, args.number)
        print(f"{name:<24}{t_py * 1e6:>12.2f}{t_cy * 1e6:>12.2f}{t_py / t_cy:>10.1f}x")

    (_, slow), (_, fast) = simulation(True), simulation(False)
    print(f"{'circle n=8 HRVO_p run':<24}{slow * 1e6:>12.0f}{fast * 1e6:>12.0f}{slow / fast:>10.1f}x")


if __name__ == "__main__":
    main()

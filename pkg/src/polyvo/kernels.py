"""Kernel backend selection.

The compiled extension is used when it imports cleanly; otherwise the numpy
fallback is loaded. Set ``POLYVO_PURE_PYTHON=1`` to force the fallback.
"""

import logging
import os

log = logging.getLogger(__name__)

if os.environ.get("POLYVO_PURE_PYTHON", "") not in ("", "0"):
    from ._kernels_py import *  # noqa: F401,F403
    from ._kernels_py import BACKEND
else:
    try:
        from ._kernels_c import *  # noqa: F401,F403
        from ._kernels_c import BACKEND
    except ImportError:  # extension not built
        log.debug("compiled kernels unavailable, using numpy fallback")
        from ._kernels_py import *  # noqa: F401,F403
        from ._kernels_py import BACKEND

__all__ = [
    "BACKEND",
    "angle_extremes",
    "cone_mask",
    "convex_hull",
    "disc_entry_times",
    "polygon_distance",
    "ray_entry_times",
    "sat_overlap",
    "wrap_angle",
]

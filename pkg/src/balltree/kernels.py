"""Backend selection for the hot loops.

Set ``BALLTREE_NUMBA=0`` before import to force the pure-numpy path. The numba
path is used by default when numba imports cleanly.
"""
import logging
import os

from . import _kernels_np

log = logging.getLogger(__name__)

NAMES = (
    "nearest_volume",
    "points_collide", "first_point_hit", "point_clearance", "points_clearance",
    "rects_collide", "first_rect_hit", "rect_clearance", "rects_clearance",
    "arm_joints", "arms_collide", "first_arm_hit", "arm_clearance", "arms_clearance",
    "grid_collide", "first_grid_hit",
)


def _want_numba():
    return os.environ.get("BALLTREE_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")


def load_backend(name):
    """Return the kernel module for ``"numba"`` or ``"numpy"``."""
    if name == "numpy":
        return _kernels_np
    if name == "numba":
        from . import _kernels_nb
        return _kernels_nb
    raise ValueError(f"unknown backend {name!r}")


BACKEND = "numpy"
_impl = _kernels_np
if _want_numba():
    try:
        _impl = load_backend("numba")
        BACKEND = "numba"
    except ImportError:  # pragma: no cover
        log.warning("numba unavailable, using numpy kernels")

for _n in NAMES:
    globals()[_n] = getattr(_impl, _n)
del _n

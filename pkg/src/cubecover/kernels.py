"""Kernel dispatch: compiled Cython core when built, pure Python otherwise.

All kernels take ``int32`` arrays and return numpy arrays or plain tuples, so
the two backends are interchangeable and can be benchmarked side by side.
"""
import numpy as np

from . import _pykernels

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKENDS = {"python": _pykernels}
if _compiled is not None:
    BACKENDS["cython"] = _compiled

BACKEND = "cython" if _compiled is not None else "python"
_impl = BACKENDS[BACKEND]


def _as_dist(dist):
    return np.ascontiguousarray(dist, dtype=np.int32)


def all_pairs_bfs(n, indptr, indices):
    """Edge-metric distance table; ``-1`` marks unreachable pairs."""
    return _impl.all_pairs_bfs(
        n,
        np.ascontiguousarray(indptr, dtype=np.int32),
        np.ascontiguousarray(indices, dtype=np.int32),
    )


def median_violation(dist):
    """Return ``(x, y, z, size)`` for the first triple violating uniqueness of medians."""
    return _impl.median_violation(_as_dist(dist))


def median_table(dist):
    return _impl.median_table(_as_dist(dist))

"""Distance-scan kernels with a numba fast path and a numpy fallback.

The empirical checks (pigeonhole sampling, witness windows, brute-force
net searches) are dominated by pairwise-distance scans over point
clouds.  Those scans are jitted with numba when available; setting
``FEJERCERT_BACKEND=numpy`` (or ``numba``) forces a backend.  Both
implementations are importable directly for the equivalence tests and
the benchmark script.
"""

from __future__ import annotations

import os

import numpy as np

_ENV_FLAG = "FEJERCERT_BACKEND"


def _requested_backend() -> str:
    value = os.environ.get(_ENV_FLAG, "").strip().lower()
    if value in ("", "auto"):
        return "auto"
    if value in ("numba", "numpy"):
        return value
    raise RuntimeError(f"{_ENV_FLAG} must be 'numba' or 'numpy', got {value!r}")


# ---------------------------------------------------------------------------
# numpy reference implementations
# ---------------------------------------------------------------------------

_BLOCK = 64  # row block size; keeps the fallback's pairwise slabs small


def close_pair_numpy(pts: np.ndarray, thresh: float) -> tuple[int, int]:
    """First (i, j), i<j, with ||pts[i]-pts[j]|| <= thresh, else (-1, -1)."""
    n = pts.shape[0]
    t2 = thresh * thresh
    for start in range(0, n - 1, _BLOCK):
        stop = min(start + _BLOCK, n - 1)
        block = pts[start:stop]  # (B, d)
        rest = pts[start + 1 :]  # everything that can sit right of the block
        diff = block[:, None, :] - rest[None, :, :]
        d2 = np.einsum("ijk,ijk->ij", diff, diff)
        # mask out j <= i (column c corresponds to global index start+1+c)
        rows = np.arange(start, stop)[:, None]
        cols = np.arange(start + 1, n)[None, :]
        hit = (d2 <= t2) & (cols > rows)
        if hit.any():
            # argwhere is row-major, so [0] is the (i, j)-lexicographic first
            # hit, matching the loop order of the numba kernel.
            r, c = np.argwhere(hit)[0]
            return (start + int(r), start + 1 + int(c))
    return (-1, -1)


def min_pairwise_sq_numpy(pts: np.ndarray) -> float:
    n = pts.shape[0]
    if n < 2:
        return np.inf
    best = np.inf
    for start in range(0, n - 1, _BLOCK):
        stop = min(start + _BLOCK, n - 1)
        block = pts[start:stop]
        rest = pts[start + 1 :]
        diff = block[:, None, :] - rest[None, :, :]
        d2 = np.einsum("ijk,ijk->ij", diff, diff)
        rows = np.arange(start, stop)[:, None]
        cols = np.arange(start + 1, n)[None, :]
        valid = cols > rows
        if valid.any():
            best = min(best, float(d2[valid].min()))
    return best


def max_pairwise_sq_numpy(pts: np.ndarray) -> float:
    n = pts.shape[0]
    if n < 2:
        return 0.0
    best = 0.0
    for start in range(0, n - 1, _BLOCK):
        stop = min(start + _BLOCK, n - 1)
        block = pts[start:stop]
        rest = pts[start + 1 :]
        diff = block[:, None, :] - rest[None, :, :]
        d2 = np.einsum("ijk,ijk->ij", diff, diff)
        rows = np.arange(start, stop)[:, None]
        cols = np.arange(start + 1, n)[None, :]
        valid = cols > rows
        if valid.any():
            best = max(best, float(d2[valid].max()))
    return best


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

_HAVE_NUMBA = False
close_pair_numba = None
min_pairwise_sq_numba = None
max_pairwise_sq_numba = None

if _requested_backend() in ("auto", "numba"):
    try:
        from numba import njit

        @njit(cache=True)
        def _close_pair_nb(pts, t2):  # pragma: no cover - jitted
            n = pts.shape[0]
            d = pts.shape[1]
            for i in range(n):
                for j in range(i + 1, n):
                    s = 0.0
                    for t in range(d):
                        diff = pts[i, t] - pts[j, t]
                        s += diff * diff
                    if s <= t2:
                        return i, j
            return -1, -1

        @njit(cache=True)
        def _min_pairwise_sq_nb(pts):  # pragma: no cover - jitted
            n = pts.shape[0]
            d = pts.shape[1]
            best = np.inf
            for i in range(n):
                for j in range(i + 1, n):
                    s = 0.0
                    for t in range(d):
                        diff = pts[i, t] - pts[j, t]
                        s += diff * diff
                    if s < best:
                        best = s
            return best

        @njit(cache=True)
        def _max_pairwise_sq_nb(pts):  # pragma: no cover - jitted
            n = pts.shape[0]
            d = pts.shape[1]
            best = 0.0
            for i in range(n):
                for j in range(i + 1, n):
                    s = 0.0
                    for t in range(d):
                        diff = pts[i, t] - pts[j, t]
                        s += diff * diff
                    if s > best:
                        best = s
            return best

        def close_pair_numba(pts, thresh):
            i, j = _close_pair_nb(np.ascontiguousarray(pts, dtype=np.float64), thresh * thresh)
            return (int(i), int(j))

        def min_pairwise_sq_numba(pts):
            return float(_min_pairwise_sq_nb(np.ascontiguousarray(pts, dtype=np.float64)))

        def max_pairwise_sq_numba(pts):
            return float(_max_pairwise_sq_nb(np.ascontiguousarray(pts, dtype=np.float64)))

        _HAVE_NUMBA = True
    except ImportError:  # pragma: no cover - exercised only without numba
        _HAVE_NUMBA = False

if _requested_backend() == "numba" and not _HAVE_NUMBA:
    raise RuntimeError(f"{_ENV_FLAG}=numba requested but numba is not importable")

ACTIVE_BACKEND = "numba" if (_requested_backend() != "numpy" and _HAVE_NUMBA) else "numpy"

if ACTIVE_BACKEND == "numba":
    close_pair = close_pair_numba
    min_pairwise_sq = min_pairwise_sq_numba
    max_pairwise_sq = max_pairwise_sq_numba
else:
    close_pair = close_pair_numpy
    min_pairwise_sq = min_pairwise_sq_numpy
    max_pairwise_sq = max_pairwise_sq_numpy


def warm_up() -> None:
    """Trigger jit compilation so timed code paths see warm kernels."""
    pts = np.zeros((3, 2))
    pts[1, 0] = 1.0
    pts[2, 1] = 2.0
    close_pair(pts, 0.5)
    min_pairwise_sq(pts)
    max_pairwise_sq(pts)

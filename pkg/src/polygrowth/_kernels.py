"""Integer kernels behind window scans and pattern-mask probes.

Every kernel exists twice: a numba ``@njit`` version and a pure-numpy
version with identical results.  Setting ``POLYGROWTH_NO_NUMBA=1`` (or not
having numba installed) selects the numpy path at import time.  Both sets
stay reachable as ``numba_impl`` / ``numpy_impl`` for tests and benchmarks.
"""

from __future__ import annotations

import os
from types import SimpleNamespace

import numpy as np

_MAX_K = 63  # coordinates are int64, so 2**k > any coordinate for k >= 63


def _power_limits(n: int) -> np.ndarray:
    """k**(n+1) for k < 63, saturated at 2**62."""
    cap = 1 << 62
    return np.array([min(k ** (n + 1), cap) for k in range(_MAX_K)], dtype=np.int64)


def _crosspolytope_count(dim: int, radius: int) -> int:
    from math import comb

    return sum(2**k * comb(dim, k) * comb(radius, k) for k in range(min(dim, radius) + 1))


# ---------------------------------------------------------------- numpy path


def _np_ball(dim: int, radius: int) -> np.ndarray:
    if dim == 1:
        return np.arange(-radius, radius + 1, dtype=np.int64)[:, None]
    blocks = []
    for x in range(-radius, radius + 1):
        sub = _np_ball(dim - 1, radius - abs(x))
        head = np.full((sub.shape[0], 1), x, dtype=np.int64)
        blocks.append(np.hstack([head, sub]))
    return np.vstack(blocks)


def np_window_points(dim: int, radius: int) -> np.ndarray:
    pts = _np_ball(dim, radius)
    norms = np.abs(pts).sum(axis=1)
    keys = [pts[:, i] for i in range(dim - 1, -1, -1)] + [norms]
    return np.ascontiguousarray(pts[np.lexsort(keys)])


def np_mask_zeros(points: np.ndarray, n: int) -> np.ndarray:
    points = np.asarray(points, dtype=np.int64)
    lims = _power_limits(n)
    x1 = points[:, 0]
    others = points[:, 1:]
    nz = (others != 0).sum(axis=1)
    y = others.sum(axis=1)
    out = np.zeros(points.shape[0], dtype=bool)
    on_axis = nz == 0
    off_axis = (nz == 1) & (y > 0)
    for k in range(_MAX_K):
        p = np.int64(1) << np.int64(k)
        out |= on_axis & (x1 >= p) & (x1 - p <= lims[k])
        out |= off_axis & (x1 == p) & (y <= lims[k])
    return out


def np_match_rows(points: np.ndarray, targets: np.ndarray) -> np.ndarray:
    points = np.asarray(points, dtype=np.int64)
    idx = np.full(points.shape[0], -1, dtype=np.int64)
    for j, t in enumerate(np.asarray(targets, dtype=np.int64)):
        hit = (points == t).all(axis=1) & (idx < 0)
        idx[hit] = j
    return idx


def np_mask_runs(start: np.ndarray, n: int, cap: int) -> np.ndarray:
    start = np.asarray(start, dtype=np.int64)
    dim = start.shape[0]
    steps = np.arange(cap, dtype=np.int64)
    runs = np.empty(dim, dtype=np.int64)
    for i in range(dim):
        pts = np.tile(start, (cap, 1))
        pts[:, i] += steps
        zeros = np_mask_zeros(pts, n)
        runs[i] = cap if zeros.all() else int(np.argmin(zeros))
    return runs


numpy_impl = SimpleNamespace(
    window_points=np_window_points,
    mask_zeros=np_mask_zeros,
    match_rows=np_match_rows,
    mask_runs=np_mask_runs,
)

# ---------------------------------------------------------------- numba path

numba_impl = None
try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    njit = None

if njit is not None:

    @njit(cache=True)
    def _nb_fill_shell(out, row, dim, s):
        # lexicographic enumeration of {x : ||x||_1 == s} via an odometer
        x = np.zeros(dim, dtype=np.int64)
        rem = np.zeros(dim, dtype=np.int64)
        rem[0] = s
        for i in range(dim - 1):
            x[i] = -rem[i]
            rem[i + 1] = rem[i] - abs(x[i])
        while True:
            r = rem[dim - 1]
            if r == 0:
                for i in range(dim - 1):
                    out[row, i] = x[i]
                out[row, dim - 1] = 0
                row += 1
            else:
                for sign in (-1, 1):
                    for i in range(dim - 1):
                        out[row, i] = x[i]
                    out[row, dim - 1] = sign * r
                    row += 1
            i = dim - 2
            while i >= 0 and x[i] >= rem[i]:
                i -= 1
            if i < 0:
                return row
            x[i] += 1
            for j in range(i, dim - 1):
                if j > i:
                    x[j] = -rem[j]
                rem[j + 1] = rem[j] - abs(x[j])

    @njit(cache=True)
    def _nb_window_points(dim, radius, count):
        out = np.empty((count, dim), dtype=np.int64)
        row = 0
        for s in range(radius + 1):
            row = _nb_fill_shell(out, row, dim, s)
        return out

    @njit(cache=True)
    def _nb_mask_zero_row(row, lims):
        x1 = row[0]
        cnt = 0
        y = 0
        for i in range(1, row.shape[0]):
            if row[i] != 0:
                cnt += 1
                y = row[i]
        if cnt > 1 or x1 <= 0:
            return False
        if cnt == 1:
            if y < 0 or (x1 & (x1 - 1)) != 0:
                return False
            k = 0
            while (np.int64(1) << k) < x1:
                k += 1
            return y <= lims[k]
        for k in range(62 + 1):
            p = np.int64(1) << k
            if p > x1:
                break
            if x1 - p <= lims[k]:
                return True
        return False

    @njit(cache=True)
    def _nb_mask_zeros(points, lims):
        out = np.zeros(points.shape[0], dtype=np.bool_)
        for r in range(points.shape[0]):
            out[r] = _nb_mask_zero_row(points[r], lims)
        return out

    @njit(cache=True)
    def _nb_match_rows(points, targets):
        idx = np.full(points.shape[0], -1, dtype=np.int64)
        dim = points.shape[1]
        for r in range(points.shape[0]):
            for t in range(targets.shape[0]):
                same = True
                for c in range(dim):
                    if points[r, c] != targets[t, c]:
                        same = False
                        break
                if same:
                    idx[r] = t
                    break
        return idx

    @njit(cache=True)
    def _nb_mask_runs(start, lims, cap):
        dim = start.shape[0]
        runs = np.empty(dim, dtype=np.int64)
        p = start.copy()
        for i in range(dim):
            j = 0
            while j < cap:
                p[i] = start[i] + j
                if not _nb_mask_zero_row(p, lims):
                    break
                j += 1
            p[i] = start[i]
            runs[i] = j
        return runs

    def nb_window_points(dim: int, radius: int) -> np.ndarray:
        return _nb_window_points(dim, radius, _crosspolytope_count(dim, radius))

    def nb_mask_zeros(points: np.ndarray, n: int) -> np.ndarray:
        pts = np.ascontiguousarray(points, dtype=np.int64)
        if pts.shape[0] == 0:
            return np.zeros(0, dtype=bool)
        return _nb_mask_zeros(pts, _power_limits(n))

    def nb_match_rows(points: np.ndarray, targets: np.ndarray) -> np.ndarray:
        pts = np.ascontiguousarray(points, dtype=np.int64)
        tg = np.ascontiguousarray(targets, dtype=np.int64).reshape(-1, pts.shape[1])
        return _nb_match_rows(pts, tg)

    def nb_mask_runs(start: np.ndarray, n: int, cap: int) -> np.ndarray:
        return _nb_mask_runs(np.ascontiguousarray(start, dtype=np.int64), _power_limits(n), cap)

    numba_impl = SimpleNamespace(
        window_points=nb_window_points,
        mask_zeros=nb_mask_zeros,
        match_rows=nb_match_rows,
        mask_runs=nb_mask_runs,
    )


USE_NUMBA = numba_impl is not None and os.environ.get("POLYGROWTH_NO_NUMBA", "") not in ("1", "true", "yes")
BACKEND = "numba" if USE_NUMBA else "numpy"
_impl = numba_impl if USE_NUMBA else numpy_impl

window_points = _impl.window_points
mask_zeros = _impl.mask_zeros
match_rows = _impl.match_rows
mask_runs = _impl.mask_runs

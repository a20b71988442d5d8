"""Hot integer loops, in a numba flavour and a vectorised numpy flavour.

Both flavours take int64 arrays of equal length, one entry per independent
walk, and return identical results. ``walk`` and ``td_bound_scan`` dispatch on
``_backend.BACKEND``; the explicit ``*_numba`` / ``*_numpy`` names stay
importable for benchmarking.
"""

import numpy as np

from ._backend import BACKEND, HAVE_NUMBA, njit


def _walk_loop(y0, td0, steps, da, db):
    n = y0.shape[0]
    y_out = np.empty(n, dtype=np.int64)
    td_out = np.empty(n, dtype=np.int64)
    for idx in range(n):
        y = y0[idx]
        td = td0[idx]
        diag = 2 * db[idx] - 2 * da[idx]
        horiz = 2 * db[idx]
        for _ in range(steps[idx]):
            m2 = np.int64(td >= 0)
            y += m2
            td += horiz - m2 * (horiz - diag)
        y_out[idx] = y
        td_out[idx] = td
    return y_out, td_out


def _td_bound_loop(da, db, steps):
    n = da.shape[0]
    out = np.full(n, -1, dtype=np.int64)
    for idx in range(n):
        a = da[idx]
        td = 2 * db[idx] - a
        diag = 2 * db[idx] - 2 * a
        horiz = 2 * db[idx]
        bound = 2 * a
        for x in range(steps[idx] + 1):
            if td <= -bound or td >= bound:
                out[idx] = x
                break
            td += horiz - np.int64(td >= 0) * (horiz - diag)
    return out


def walk_numpy(y0, td0, steps, da, db):
    """Advance every walk ``steps`` movements; returns final ``(y, td)``."""
    y = np.array(y0, dtype=np.int64, copy=True)
    td = np.array(td0, dtype=np.int64, copy=True)
    da = np.asarray(da, dtype=np.int64)
    db = np.asarray(db, dtype=np.int64)
    remaining = np.array(steps, dtype=np.int64, copy=True)
    diag = 2 * db - 2 * da
    horiz = 2 * db
    active = np.flatnonzero(remaining > 0)
    while active.size:
        t = td[active]
        m2 = t >= 0
        y[active] += m2
        td[active] = t + np.where(m2, diag[active], horiz[active])
        remaining[active] -= 1
        active = active[remaining[active] > 0]
    return y, td


def td_bound_scan_numpy(da, db, steps):
    """First x at which ``|td| < 2*da`` fails on the walk from the origin, or -1."""
    da = np.asarray(da, dtype=np.int64)
    db = np.asarray(db, dtype=np.int64)
    steps = np.asarray(steps, dtype=np.int64)
    out = np.full(da.shape[0], -1, dtype=np.int64)
    td = 2 * db - da
    diag = 2 * db - 2 * da
    horiz = 2 * db
    bound = 2 * da
    active = np.arange(da.shape[0])
    x = 0
    while active.size:
        t = td[active]
        bad = (t <= -bound[active]) | (t >= bound[active])
        out[active[bad]] = x
        keep = ~bad & (steps[active] > x)
        active = active[keep]
        t = t[keep]
        td[active] = t + np.where(t >= 0, diag[active], horiz[active])
        x += 1
    return out


# below this many total movements the JIT load costs more than it saves
SMALL_WORK = 200_000


def walk_numba(y0, td0, steps, da, db):
    if not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    return njit(_walk_loop)(
        np.ascontiguousarray(y0, dtype=np.int64),
        np.ascontiguousarray(td0, dtype=np.int64),
        np.ascontiguousarray(steps, dtype=np.int64),
        np.ascontiguousarray(da, dtype=np.int64),
        np.ascontiguousarray(db, dtype=np.int64),
    )


def td_bound_scan_numba(da, db, steps):
    if not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    return njit(_td_bound_loop)(
        np.ascontiguousarray(da, dtype=np.int64),
        np.ascontiguousarray(db, dtype=np.int64),
        np.ascontiguousarray(steps, dtype=np.int64),
    )


def walk(y0, td0, steps, da, db):
    """Backend-dispatched walk; see :func:`walk_numpy` for the contract."""
    if BACKEND == "numba" and int(np.sum(steps)) >= SMALL_WORK:
        return walk_numba(y0, td0, steps, da, db)
    return walk_numpy(y0, td0, steps, da, db)


def td_bound_scan(da, db, steps):
    """Backend-dispatched decision-variable bound scan; see :func:`td_bound_scan_numpy`."""
    if BACKEND == "numba":
        return td_bound_scan_numba(da, db, steps)
    return td_bound_scan_numpy(da, db, steps)

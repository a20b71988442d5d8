"""Skew compensation of integer hardware-clock readings.

Given the inverse frequency ratio as an integer pair ``D/A``, the compensated
clock for hardware reading ``i`` is the y coordinate of the lattice line
through ``(0, 0)`` and ``(A, D)`` at ``x = i``. Instead of walking from the
origin, a floating-point estimate of ``i*D/A`` (however imprecise) brackets the
answer in a short candidate window ``[k, k+l]``; a Bresenham walk of ``l``
steps from ``(i-l, k)`` then lands on the exact answer using integers only.

Ratios above one are split as ``i*D/A = q*i + i*(D - q*A)/A`` with
``q = D // A`` so the walk always runs on a slope below one.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import kernels
from .core import (
    Convention,
    DecisionVar,
    InputMagnitudeError,
    LatticePoint,
    Slope,
    on_path,
    otd,
    walk_from,
)
from .oracles import FpFormat, QuotientOrder, fp_quotient, fp_quotient_batch, quotient_error_bound

_WIDE_LIMIT = 2**62


class CompensationError(ArithmeticError):
    """The candidate window was empty or the walk failed to reach the path."""


class ClockRollbackError(ValueError):
    """A hardware reading earlier than the current anchor."""


class Case(Enum):
    LT_ONE = "lt_one"
    EQ_ONE = "eq_one"
    GT_ONE = "gt_one"


@dataclass(frozen=True)
class RatioEstimate:
    """Inverse frequency ratio ``D/A`` of the sensor clock."""

    D: int
    A: int

    def __post_init__(self):
        if self.D <= 0 or self.A <= 0:
            raise ValueError(f"D and A must be positive, got D={self.D}, A={self.A}")


@dataclass(frozen=True)
class WindowParams:
    epsilon: float = 1e-7
    fp_mode: FpFormat = FpFormat.BINARY64
    order: QuotientOrder = QuotientOrder.DIV_FIRST

    def __post_init__(self):
        if not self.epsilon >= 0:
            raise ValueError(f"epsilon must be non-negative, got {self.epsilon}")

    @property
    def effective_epsilon(self) -> float:
        # never narrower than what fp_mode can provably be off by
        return max(self.epsilon, quotient_error_bound(self.fp_mode))

    def margin(self, i):
        """Half-width of the candidate window at ``i`` (scalar or array)."""
        # precision loss is relative, so the allowance scales with i
        return 1.0 + self.effective_epsilon * np.maximum(1, i)


@dataclass(frozen=True)
class CompensationOutcome:
    j: int
    candidate_lo: int
    candidate_count: int
    walk_steps: int
    case_used: Case
    start: LatticePoint | None = None
    final_td: DecisionVar | None = None


def _window(i: int, db: int, da: int, params: WindowParams) -> tuple[int, int, float]:
    q = float(fp_quotient(i, db, da, params.fp_mode, params.order))
    m = float(params.margin(i))
    k = max(0, math.ceil(q - m))
    top = min(i, math.floor(q + m))
    if top < k:
        raise CompensationError(f"empty candidate window for i={i}, ratio={db}/{da}")
    return k, top - k, q


def candidate_window(i: int, ratio: RatioEstimate, params: WindowParams = WindowParams()):
    """Integer range ``[k, k+l]`` guaranteed to contain the compensated clock.

    Returns ``(k, l, q)`` where ``q`` is the floating-point estimate used.
    """
    if i < 0:
        raise ValueError("i must be non-negative")
    if ratio.D >= ratio.A:
        raise ValueError("candidate_window expects D < A")
    return _window(i, ratio.D, ratio.A, params)


def _walk_residual(i, db, da, params, convention, overshoot):
    k, l, _ = _window(i, db, da, params)
    slope = Slope(da, db)
    start = LatticePoint(i - l, k)
    # l == 0 is a zero-step walk: (i, k) is the only candidate
    end, td = walk_from(start, slope, l + overshoot, convention)
    # the origin is on every path whatever value the seed holds there
    if end != LatticePoint(0, 0) and not on_path(td, slope):
        raise CompensationError(
            f"walk from ({start.x}, {start.y}) did not reach the path "
            f"(i={i}, ratio={db}/{da}, td={td.value})"
        )
    return end.y, k, l, start, td


def compensate_case1(
    i: int,
    ratio: RatioEstimate,
    params: WindowParams = WindowParams(),
    convention: Convention = Convention.TD_CONSISTENT,
    *,
    overshoot: int = 0,
) -> CompensationOutcome:
    """Compensate for a ratio below one.

    ``overshoot`` walks that many extra movements past ``x = i``; it exists only
    to replicate published numbers and should be left at zero otherwise.
    """
    if i < 0:
        raise ValueError("i must be non-negative")
    if ratio.D >= ratio.A:
        raise ValueError("compensate_case1 expects D < A")
    j, k, l, start, td = _walk_residual(i, ratio.D, ratio.A, params, convention, overshoot)
    return CompensationOutcome(j, k, l + 1, l + overshoot, Case.LT_ONE, start, td)


def compensate(
    i: int,
    ratio: RatioEstimate,
    params: WindowParams = WindowParams(),
    convention: Convention = Convention.TD_CONSISTENT,
    *,
    overshoot: int = 0,
    unit_shortcut: bool = True,
) -> CompensationOutcome:
    """Skew-compensated clock for hardware reading ``i``.

    With ``unit_shortcut=False`` an integral ratio is still pushed through the
    walk on a horizontal residual slope instead of returning ``q*i`` directly.
    """
    if i < 0:
        raise ValueError("i must be non-negative")
    D, A = ratio.D, ratio.A
    if D < A:
        return compensate_case1(i, ratio, params, convention, overshoot=overshoot)
    q, db = divmod(D, A)
    case = Case.EQ_ONE if D == A else Case.GT_ONE
    if db == 0 and unit_shortcut:
        return CompensationOutcome(q * i, q * i, 1, 0, case)
    jbar, k, l, start, td = _walk_residual(i, db, A, params, convention, overshoot)
    return CompensationOutcome(q * i + jbar, k, l + 1, l + overshoot, case, start, td)


def compensate_batch(
    i,
    D,
    A,
    params: WindowParams = WindowParams(),
    convention: Convention = Convention.TD_CONSISTENT,
    *,
    overshoot: int = 0,
    unit_shortcut: bool = True,
):
    """Vectorised :func:`compensate`; returns ``(j, k, l)`` int64 arrays.

    The walk runs in :mod:`bresenham_skew.kernels` on the selected backend.
    """
    i, D, A = np.broadcast_arrays(*(np.asarray(v, dtype=np.int64) for v in (i, D, A)))
    if np.any(i < 0):
        raise ValueError("i must be non-negative")
    if np.any(D <= 0) or np.any(A <= 0):
        raise ValueError("D and A must be positive")
    q = D // A
    db = D - q * A
    qt = fp_quotient_batch(i, db, A, params.fp_mode, params.order).astype(np.float64)
    m = np.asarray(params.margin(i.astype(np.float64)), dtype=np.float64)
    k = np.maximum(0, np.ceil(qt - m)).astype(np.int64)
    top = np.minimum(i, np.floor(qt + m).astype(np.int64))
    if np.any(top < k):
        bad = int(np.flatnonzero(top < k)[0])
        raise CompensationError(
            f"empty candidate window for i={i[bad]}, ratio={db[bad]}/{A[bad]}"
        )
    l = top - k
    x0 = i - l
    if i.size:
        peak = max(
            float(np.max(x0.astype(np.float64) * db)),
            float(np.max(k.astype(np.float64) * A)),
        )
        if 2 * peak + 2 * float(np.max(A)) >= _WIDE_LIMIT:
            raise InputMagnitudeError("decision variable would overflow int64")
    td0 = 2 * (x0 * db - k * A)
    if convention is Convention.TD_CONSISTENT:
        td0 = td0 + 2 * db - A
    direct = (db == 0) & unit_shortcut
    steps = np.where(direct, 0, l + overshoot)
    y, td = kernels.walk(k, td0, steps, A, db)
    ok = direct | (i + overshoot == 0) | ((2 * db - 2 * A <= td) & (td < 2 * db))
    if not np.all(ok):
        bad = int(np.flatnonzero(~ok)[0])
        raise CompensationError(
            f"walk did not reach the path (i={i[bad]}, D={D[bad]}, A={A[bad]})"
        )
    j = q * i + np.where(direct, 0, y)
    return j, k, l


# -- logical clock --------------------------------------------------------------


@dataclass(frozen=True)
class ClockState:
    """Logical-clock anchor from the most recent synchronisation."""

    logical_anchor: int
    hardware_anchor: int
    ratio: RatioEstimate

    def __post_init__(self):
        if self.logical_anchor < 0 or self.hardware_anchor < 0:
            raise ValueError("anchors must be non-negative")


def logical_clock_update(
    state: ClockState,
    T: int,
    params: WindowParams = WindowParams(),
    convention: Convention = Convention.TD_CONSISTENT,
) -> int:
    """Logical clock at hardware reading ``T``; never mutates ``state``."""
    elapsed = T - state.hardware_anchor
    if elapsed < 0:
        raise ClockRollbackError(
            f"hardware reading {T} precedes anchor {state.hardware_anchor}"
        )
    return state.logical_anchor + compensate(elapsed, state.ratio, params, convention).j


def resync(
    state: ClockState,
    T: int,
    ratio: RatioEstimate,
    params: WindowParams = WindowParams(),
    convention: Convention = Convention.TD_CONSISTENT,
) -> ClockState:
    """Re-anchor at hardware reading ``T`` with a freshly estimated ratio."""
    return ClockState(logical_clock_update(state, T, params, convention), T, ratio)

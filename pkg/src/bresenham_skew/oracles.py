"""Ground truth for ``i*D/A``: exact integer rounding and IEEE-754 emulation.

Binary32/binary64 arithmetic goes through numpy's native float32/float64
scalars, which round to nearest-even after every operation. Integer inputs are
limited to ``|n| < 2**53`` so the int-to-float conversion rounds once.
"""

import math
from enum import Enum

import numpy as np

from .core import InputMagnitudeError

_EXACT_FLOAT_INT = 2**53


class RoundingMode(Enum):
    FLOOR = "floor"
    NEAREST_HALF_UP = "nearest"
    CEIL = "ceil"


class FpFormat(Enum):
    BINARY32 = "binary32"
    BINARY64 = "binary64"

    @property
    def dtype(self):
        return np.float32 if self is FpFormat.BINARY32 else np.float64


class QuotientOrder(Enum):
    """Expression tree for ``i*D/A`` in floating point."""

    DIV_FIRST = "div-first"  # i * (D / A)
    MUL_FIRST = "mul-first"  # (i * D) / A


def quotient_error_bound(fmt: FpFormat) -> float:
    """Relative error bound of :func:`fp_quotient` in ``fmt``.

    Five roundings (three conversions, one division, one product), each within
    the unit roundoff ``u``, compose to at most ``5u / (1 - 5u)``.
    """
    u = 2.0**-24 if fmt is FpFormat.BINARY32 else 2.0**-53
    return 5 * u / (1 - 5 * u)


def exact_quotient(i: int, D: int, A: int, rounding: RoundingMode = RoundingMode.FLOOR) -> int:
    if A <= 0:
        raise ValueError(f"A must be positive, got {A}")
    num = i * D
    if rounding is RoundingMode.FLOOR:
        return num // A
    if rounding is RoundingMode.CEIL:
        return -((-num) // A)
    return (2 * num + A) // (2 * A)


def to_format(n: int, fmt: FpFormat):
    if abs(n) >= _EXACT_FLOAT_INT:
        raise InputMagnitudeError(f"{n} is too large for single-rounding conversion")
    return fmt.dtype(float(n))


def fp_quotient(
    i: int,
    D: int,
    A: int,
    fmt: FpFormat = FpFormat.BINARY64,
    order: QuotientOrder = QuotientOrder.DIV_FIRST,
):
    """``i*D/A`` evaluated in ``fmt`` with per-operation rounding."""
    if A <= 0:
        raise ValueError(f"A must be positive, got {A}")
    fi, fd, fa = (to_format(v, fmt) for v in (i, D, A))
    if order is QuotientOrder.DIV_FIRST:
        return fi * (fd / fa)
    return (fi * fd) / fa


def round_float(value, rounding: RoundingMode) -> int:
    value = float(value)
    if rounding is RoundingMode.FLOOR:
        return math.floor(value)
    if rounding is RoundingMode.CEIL:
        return math.ceil(value)
    base = math.floor(value)
    # value - base is exact for |value| < 2**53
    return base + 1 if value - base >= 0.5 else base


def float_compensate(
    i: int,
    D: int,
    A: int,
    fmt: FpFormat,
    rounding: RoundingMode = RoundingMode.FLOOR,
    order: QuotientOrder = QuotientOrder.DIV_FIRST,
) -> int:
    """The floating-point baseline: round the emulated quotient to an integer."""
    return round_float(fp_quotient(i, D, A, fmt, order), rounding)


# -- vectorised forms used by the experiment -------------------------------------


def fp_quotient_batch(i, D, A, fmt: FpFormat, order: QuotientOrder = QuotientOrder.DIV_FIRST):
    i, D, A = (np.asarray(v, dtype=np.int64) for v in (i, D, A))
    for arr in (i, D, A):
        if arr.size and np.abs(arr).max() >= _EXACT_FLOAT_INT:
            raise InputMagnitudeError("batch input too large for single-rounding conversion")
    if np.any(A <= 0):
        raise ValueError("A must be positive")
    # int64 -> float64 is exact below 2**53, then one rounding to float32
    fi = i.astype(np.float64).astype(fmt.dtype)
    fd = D.astype(np.float64).astype(fmt.dtype)
    fa = A.astype(np.float64).astype(fmt.dtype)
    if order is QuotientOrder.DIV_FIRST:
        return fi * (fd / fa)
    return (fi * fd) / fa


def round_float_batch(values, rounding: RoundingMode):
    values = np.asarray(values, dtype=np.float64)
    if rounding is RoundingMode.FLOOR:
        out = np.floor(values)
    elif rounding is RoundingMode.CEIL:
        out = np.ceil(values)
    else:
        base = np.floor(values)
        out = np.where(values - base >= 0.5, base + 1.0, base)
    return out.astype(np.int64)


def float_compensate_batch(
    i,
    D,
    A,
    fmt: FpFormat,
    rounding: RoundingMode = RoundingMode.FLOOR,
    order: QuotientOrder = QuotientOrder.DIV_FIRST,
):
    return round_float_batch(fp_quotient_batch(i, D, A, fmt, order), rounding)


def exact_quotient_batch(i, D, A, rounding: RoundingMode = RoundingMode.FLOOR):
    """int64 version of :func:`exact_quotient`; ``2*i*D`` must stay below 2**63."""
    i, D, A = np.broadcast_arrays(*(np.asarray(v, dtype=np.int64) for v in (i, D, A)))
    if np.any(A <= 0):
        raise ValueError("A must be positive")
    if i.size:
        # float estimate with generous headroom against 2**63
        peak = float(np.max(np.abs(i).astype(np.float64) * np.abs(D).astype(np.float64)))
        if 2 * peak + float(np.max(A)) >= 2.0**62:
            raise InputMagnitudeError("i*D too large for int64 oracle")
    num = i * D
    if rounding is RoundingMode.FLOOR:
        return num // A
    if rounding is RoundingMode.CEIL:
        return -((-num) // A)
    return (2 * num + A) // (2 * A)

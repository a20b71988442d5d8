"""Integer Bresenham recursion for lines of slope below one.

The decision variable of the classic algorithm starts at ``2*db - da`` for the
origin and moves by ``2*db - 2*da`` on a diagonal step (taken when it is
non-negative) or by ``2*db`` on a horizontal step.

Its closed form at an arbitrary lattice point comes in two flavours:

* ``Convention.PAPER_DEF3``: ``2*(x*db - y*da)``, which is zero at the origin.
* ``Convention.TD_CONSISTENT``: the same plus ``2*db - da``, which coincides
  with the recursive value at every point of the canonical path.

A walk seeded with the first one settles on ``y = floor((x-1)*db/da) + 1``
rather than on the nearest lattice point, so the second is the default.
"""

from dataclasses import dataclass
from enum import Enum

INT64_LIMIT = 2**63
UINT32_LIMIT = 2**32


class InputMagnitudeError(ValueError):
    """An input would overflow the 64-bit decision arithmetic."""


class Convention(Enum):
    PAPER_DEF3 = "def3"
    TD_CONSISTENT = "td"


class Movement(Enum):
    M1 = "horizontal"
    M2 = "diagonal"

    @property
    def dy(self) -> int:
        return 1 if self is Movement.M2 else 0


@dataclass(frozen=True)
class Slope:
    """Lattice line through the origin and ``(delta_a, delta_b)``.

    ``delta_b`` may be zero: that is the residual slope of a unit ratio, on
    which every movement is horizontal.
    """

    delta_a: int
    delta_b: int

    def __post_init__(self):
        if not (0 <= self.delta_b < self.delta_a):
            raise ValueError(
                f"slope needs 0 <= delta_b < delta_a, got ({self.delta_a}, {self.delta_b})"
            )
        if self.delta_a >= UINT32_LIMIT:
            raise InputMagnitudeError(f"delta_a={self.delta_a} exceeds 32 bits")


@dataclass(frozen=True)
class LatticePoint:
    x: int
    y: int

    def __post_init__(self):
        if self.x < 0 or self.y < 0 or self.y > self.x:
            raise ValueError(f"lattice point needs 0 <= y <= x, got ({self.x}, {self.y})")


@dataclass(frozen=True)
class DecisionVar:
    value: int
    convention: Convention = Convention.TD_CONSISTENT


def initial_td(slope: Slope) -> DecisionVar:
    return DecisionVar(2 * slope.delta_b - slope.delta_a, Convention.TD_CONSISTENT)


def step(td: DecisionVar, slope: Slope) -> tuple[Movement, DecisionVar]:
    """One Bresenham movement; ``td == 0`` takes the diagonal."""
    if td.value >= 0:
        nxt = td.value + 2 * slope.delta_b - 2 * slope.delta_a
        return Movement.M2, DecisionVar(nxt, td.convention)
    return Movement.M1, DecisionVar(td.value + 2 * slope.delta_b, td.convention)


def otd(
    point: LatticePoint,
    slope: Slope,
    convention: Convention = Convention.TD_CONSISTENT,
) -> DecisionVar:
    """Closed-form decision variable at any lattice point."""
    lhs = point.x * slope.delta_b
    rhs = point.y * slope.delta_a
    if 2 * max(lhs, rhs) + 2 * slope.delta_a >= INT64_LIMIT:
        raise InputMagnitudeError(
            f"decision variable at ({point.x}, {point.y}) overflows 64 bits"
        )
    value = 2 * (lhs - rhs)
    if convention is Convention.TD_CONSISTENT:
        value += 2 * slope.delta_b - slope.delta_a
    return DecisionVar(value, convention)


def on_path(td: DecisionVar, slope: Slope) -> bool:
    """True when ``td`` is a value the recursion holds on its own path.

    The range is ``[2*db - 2*da, 2*db)`` for either convention, so this doubles
    as a division-free certificate that a walk has merged with the path.
    """
    return 2 * slope.delta_b - 2 * slope.delta_a <= td.value < 2 * slope.delta_b


def reference_walk(slope: Slope, x_max: int) -> list[int]:
    """y coordinates of the canonical path for ``x = 0 .. x_max``.

    The path is periodic with period ``delta_a``, so ``x_max`` may run past the
    destination point.
    """
    if x_max < 0:
        raise ValueError("x_max must be non-negative")
    ys = [0]
    td = initial_td(slope)
    y = 0
    for _ in range(x_max):
        move, td = step(td, slope)
        y += move.dy
        ys.append(y)
    return ys


def walk_from(
    start: LatticePoint,
    slope: Slope,
    steps: int,
    convention: Convention = Convention.TD_CONSISTENT,
) -> tuple[LatticePoint, DecisionVar]:
    """Walk ``steps`` movements from ``start`` seeded with its closed-form td."""
    td = otd(start, slope, convention)
    y = start.y
    for _ in range(steps):
        move, td = step(td, slope)
        y += move.dy
    return LatticePoint(start.x + steps, y), td

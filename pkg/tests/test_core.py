from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bresenham_skew.core import (
    Convention,
    DecisionVar,
    InputMagnitudeError,
    LatticePoint,
    Movement,
    Slope,
    initial_td,
    on_path,
    otd,
    reference_walk,
    step,
    walk_from,
)


@st.composite
def slopes(draw, max_a=200):
    a = draw(st.integers(2, max_a))
    b = draw(st.integers(0, a - 1))
    return Slope(a, b)


def nearest(x, slope):
    # round-half-up of x*db/da, computed with rationals rather than integers
    v = Fraction(x * slope.delta_b, slope.delta_a) + Fraction(1, 2)
    return v.numerator // v.denominator


def test_initial_td_values():
    assert initial_td(Slope(6, 4)).value == 2
    assert initial_td(Slope(2, 1)).value == 0


def test_step_threshold_zero_goes_diagonal():
    move, nxt = step(DecisionVar(0), Slope(2, 1))
    assert move is Movement.M2
    assert nxt.value == -2


def test_step_negative_goes_horizontal():
    move, nxt = step(DecisionVar(-2), Slope(2, 1))
    assert move is Movement.M1
    assert nxt.value == 0


@pytest.mark.parametrize(
    "slope, expected",
    [
        (Slope(6, 4), [0, 1, 1, 2, 3, 3, 4]),
        (Slope(2, 1), [0, 1, 1, 2, 2]),
        (Slope(7, 0), [0] * 8),
    ],
)
def test_reference_walk_examples(slope, expected):
    assert reference_walk(slope, len(expected) - 1) == expected


def test_reference_walk_zero_length():
    assert reference_walk(Slope(6, 4), 0) == [0]
    with pytest.raises(ValueError):
        reference_walk(Slope(6, 4), -1)


def test_otd_examples():
    s = Slope(6, 4)
    assert otd(LatticePoint(0, 0), s, Convention.TD_CONSISTENT).value == 2
    assert otd(LatticePoint(0, 0), s, Convention.PAPER_DEF3).value == 0
    assert otd(LatticePoint(4, 3), s, Convention.PAPER_DEF3).value == 2 * (16 - 18)


def test_otd_overflow_is_reported():
    with pytest.raises(InputMagnitudeError):
        otd(LatticePoint(2**62, 0), Slope(2**31, 2**30))


@pytest.mark.parametrize("a, b", [(0, 0), (3, 3), (3, 4), (3, -1), (2**32, 1)])
def test_slope_rejects_invalid(a, b):
    with pytest.raises(ValueError):
        Slope(a, b)


def test_lattice_point_rejects_above_diagonal():
    with pytest.raises(ValueError):
        LatticePoint(2, 3)
    with pytest.raises(ValueError):
        LatticePoint(-1, 0)


def test_walk_from_matches_reference_tail():
    s = Slope(6, 4)
    end, td = walk_from(LatticePoint(4, 3), s, 1)
    assert end == LatticePoint(5, 3)
    assert on_path(td, s)


@settings(max_examples=300, deadline=None)
@given(slopes())
def test_decision_variable_bound_holds(slope):
    td = initial_td(slope)
    for _ in range(3 * slope.delta_a + 1):
        assert -2 * slope.delta_a < td.value < 2 * slope.delta_a
        _, td = step(td, slope)


@settings(max_examples=300, deadline=None)
@given(slopes(), st.integers(0, 400))
def test_periodicity(slope, x):
    ys = reference_walk(slope, x + slope.delta_a)
    assert ys[x + slope.delta_a] == ys[x] + slope.delta_b


@settings(max_examples=300, deadline=None)
@given(slopes())
def test_path_is_nearest_lattice_and_monotone(slope):
    ys = reference_walk(slope, 2 * slope.delta_a)
    for x, y in enumerate(ys):
        assert y == nearest(x, slope)
    assert all(b - a in (0, 1) for a, b in zip(ys, ys[1:]))


@settings(max_examples=300, deadline=None)
@given(slopes())
def test_closed_form_equals_recursion(slope):
    td = initial_td(slope)
    y = 0
    for x in range(2 * slope.delta_a):
        assert otd(LatticePoint(x, y), slope, Convention.TD_CONSISTENT) == td
        assert on_path(td, slope)
        move, td = step(td, slope)
        y += move.dy


@settings(max_examples=200, deadline=None)
@given(slopes(), st.integers(0, 300))
def test_conventions_differ_by_constant(slope, x):
    y = nearest(x, slope)
    p = LatticePoint(x, y)
    diff = otd(p, slope, Convention.TD_CONSISTENT).value - otd(p, slope, Convention.PAPER_DEF3).value
    assert diff == 2 * slope.delta_b - slope.delta_a


@settings(max_examples=200, deadline=None)
@given(slopes(), st.integers(0, 300), st.integers(0, 300))
def test_on_path_certificate_is_exact(slope, x, y):
    y = min(x, y)
    td = otd(LatticePoint(x, y), slope)
    assert on_path(td, slope) == (y == nearest(x, slope))

"""Exhaustive and randomised property suites behind ``bresenham-skew verify``.

Each suite returns a :class:`SuiteResult`; a failure carries the first
counterexample found as an ``(i, D, A)`` tuple.
"""

import contextlib
import math
import time
from dataclasses import dataclass

import numpy as np

from . import core, kernels
from .compensator import CompensationError, RatioEstimate, WindowParams, compensate_batch, compensate_case1
from .core import Convention, LatticePoint, Slope
from .oracles import FpFormat, RoundingMode, exact_quotient, exact_quotient_batch


@dataclass
class SuiteResult:
    name: str
    passed: bool
    checks: int
    seconds: float
    counterexample: tuple | None = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status} {self.name}: {self.checks} checks in {self.seconds:.2f}s"
        if self.counterexample is not None:
            i, D, A = self.counterexample
            text += f" counterexample (i={i}, D={D}, A={A})"
        return text


def _slopes(max_a: int):
    for a in range(2, max_a + 1):
        for b in range(1, a):
            yield a, b


def _timed(name, body):
    t0 = time.perf_counter()
    checks, bad = body()
    return SuiteResult(name, bad is None, checks, time.perf_counter() - t0, bad)


def td_bound_exhaustive(max_a: int = 64) -> SuiteResult:
    """Decision variable stays inside (-2*da, 2*da) over 3*da steps, every small slope."""

    def body():
        pairs = np.array(list(_slopes(max_a)), dtype=np.int64).reshape(-1, 2)
        da, db = pairs[:, 0], pairs[:, 1]
        viol = kernels.td_bound_scan(da, db, 3 * da)
        bad = np.flatnonzero(viol >= 0)
        if bad.size:
            n = bad[0]
            return int(viol.size), (int(viol[n]), int(db[n]), int(da[n]))
        return int(viol.size), None

    return _timed("td-bound-exhaustive", body)


def random_slopes(trials: int, seed: int, a_max: int = 10**6):
    """Log-uniform ``da`` in ``[2, a_max]`` and uniform ``db`` in ``[1, da)``."""
    rng = np.random.default_rng(seed)
    da = np.exp(rng.uniform(math.log(2), math.log(a_max), trials)).astype(np.int64)
    da = np.clip(da, 2, a_max)
    db = 1 + (rng.random(trials) * (da - 1)).astype(np.int64)
    return da, np.minimum(db, da - 1)


def td_bound_random(trials: int = 100_000, seed: int = 0, a_max: int = 10**6) -> SuiteResult:
    def body():
        da, db = random_slopes(trials, seed, a_max)
        viol = kernels.td_bound_scan(da, db, 3 * da)
        bad = np.flatnonzero(viol >= 0)
        if bad.size:
            n = bad[0]
            return trials, (int(viol[n]), int(db[n]), int(da[n]))
        return trials, None

    return _timed("td-bound-random", body)


def periodicity(max_a: int = 64) -> SuiteResult:
    """``y[x + da] == y[x] + db`` along the canonical path."""

    def body():
        checks = 0
        for a, b in _slopes(max_a):
            ys = core.reference_walk(Slope(a, b), 3 * a)
            for x in range(2 * a + 1):
                checks += 1
                if ys[x + a] != ys[x] + b:
                    return checks, (x, b, a)
        return checks, None

    return _timed("periodicity", body)


def valid_path(max_a: int = 64) -> SuiteResult:
    """Monotone unit steps, nearest-lattice rounding, closed form equals recursion."""

    def body():
        checks = 0
        for a, b in _slopes(max_a):
            slope = Slope(a, b)
            td = core.initial_td(slope)
            y = 0
            for x in range(3 * a + 1):
                checks += 1
                err = 2 * (x * b - y * a)
                closed = core.otd(LatticePoint(x, y), slope, Convention.TD_CONSISTENT)
                if not (-a <= err < a) or closed != td or not core.on_path(td, slope):
                    return checks, (x, b, a)
                move, td = core.step(td, slope)
                y += move.dy
        return checks, None

    return _timed("valid-path", body)


def oracle_equivalence(max_a: int = 64) -> SuiteResult:
    """Windowed walk == walk from the origin == exact round-half-up, for i <= 4A."""

    def body():
        checks = 0
        for a, b in _slopes(max_a):
            ys = core.reference_walk(Slope(a, b), 4 * a)
            ratio = RatioEstimate(b, a)
            for i in range(4 * a + 1):
                checks += 1
                try:
                    j = compensate_case1(i, ratio).j
                except CompensationError:
                    return checks, (i, b, a)
                if not (j == ys[i] == exact_quotient(i, b, a, RoundingMode.NEAREST_HALF_UP)):
                    return checks, (i, b, a)
        return checks, None

    return _timed("oracle-equivalence", body)


def backward_region(i: int, j: int, slope: Slope, printed: bool = False):
    """Points from which ``(i, j)`` can be reached with unit moves.

    ``printed=True`` uses the lower bound ``k - da + db`` as written for the
    segment's destination; it only coincides with the true region when
    ``(i, j) == (da, db)``.
    """
    for k in range(i):
        lo = k - slope.delta_a + slope.delta_b if printed else k - i + j
        for l in range(max(0, lo), min(k, j) + 1):
            yield LatticePoint(k, l)


def backward_reachability(max_a: int = 16) -> SuiteResult:
    """Every start in the backward region of a valid point walks onto it."""

    def body():
        checks = 0
        for a, b in _slopes(max_a):
            slope = Slope(a, b)
            ys = core.reference_walk(slope, a)
            for i in range(1, a + 1):
                for start in backward_region(i, ys[i], slope):
                    checks += 1
                    end, _ = core.walk_from(start, slope, i - start.x)
                    if end.y != ys[i]:
                        return checks, (i, b, a)
            for start in backward_region(a, b, slope, printed=True):
                checks += 1
                end, _ = core.walk_from(start, slope, a - start.x)
                if end.y != b:
                    return checks, (a, b, a)
        return checks, None

    return _timed("backward-reachability", body)


def error_bound_samples(trials: int, seed: int):
    """Half drawn like the benchmark (D = 1e6, +-100 ppm), half generic ratios on both sides of one."""
    rng = np.random.default_rng(seed)
    half = trials // 2
    rest = trials - half
    i = np.exp(rng.uniform(0, math.log(1e9), trials)).astype(np.int64)
    D = np.empty(trials, dtype=np.int64)
    A = np.empty(trials, dtype=np.int64)
    D[:half] = 1_000_000
    A[:half] = np.rint(1e6 * (1 + rng.uniform(-1e-4, 1e-4, half))).astype(np.int64)
    A[half:] = rng.integers(1, 2**20, rest)
    D[half:] = rng.integers(1, 2 * A[half:] + 1)
    return i, D, A


def error_bound(trials: int = 1_000_000, seed: int = 0) -> SuiteResult:
    """``2|iD - jA| <= A`` and ``|j - floor(iD/A)| <= 1`` for both window precisions."""

    def body():
        i, D, A = error_bound_samples(trials, seed)
        floor = exact_quotient_batch(i, D, A, RoundingMode.FLOOR)
        for fmt, sl in ((FpFormat.BINARY64, slice(0, None, 2)), (FpFormat.BINARY32, slice(1, None, 2))):
            j, _, _ = compensate_batch(i[sl], D[sl], A[sl], WindowParams(fp_mode=fmt))
            resid = 2 * (i[sl] * D[sl] - j * A[sl])
            ok = (np.abs(j - floor[sl]) <= 1) & (-A[sl] <= resid) & (resid < A[sl])
            if not ok.all():
                n = np.flatnonzero(~ok)[0]
                return trials, (int(i[sl][n]), int(D[sl][n]), int(A[sl][n]))
        return trials, None

    return _timed("error-bound", body)


def run_all(max_a: int = 64, random_trials: int = 100_000, seed: int = 0) -> list[SuiteResult]:
    return [
        td_bound_exhaustive(max_a),
        td_bound_random(random_trials, seed),
        periodicity(max_a),
        valid_path(max_a),
        oracle_equivalence(max_a),
        backward_reachability(min(max_a, 16)),
        error_bound(random_trials, seed),
    ]


# -- mutation self-check --------------------------------------------------------


def _strict_step(td, slope):
    if td.value > 0:
        return core.Movement.M2, core.DecisionVar(td.value + 2 * slope.delta_b - 2 * slope.delta_a, td.convention)
    return core.Movement.M1, core.DecisionVar(td.value + 2 * slope.delta_b, td.convention)


MUTANTS = {"strict-threshold": _strict_step}


@contextlib.contextmanager
def inject_mutant(name: str):
    """Temporarily replace :func:`core.step` to check the suites can fail."""
    original = core.step
    core.step = MUTANTS[name]
    try:
        yield
    finally:
        core.step = original

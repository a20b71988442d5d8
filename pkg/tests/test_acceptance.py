"""Acceptance criteria 1-8, one recorded PASS/FAIL line each.

Reference values for the binary32 rows are the published table entries; the
tolerances are the ones the criteria pin.
"""

import time

import numpy as np
import pytest

from bresenham_skew import verify
from bresenham_skew.cli import main
from bresenham_skew.compensator import compensate_batch
from bresenham_skew.experiment import (
    Algorithm,
    ExperimentConfig,
    cell_errors,
    generate_samples,
    run_drift,
    run_table,
)
from bresenham_skew.oracles import RoundingMode, exact_quotient_batch

PUBLISHED_BINARY32 = {10**8: (1, -4, -2.0004), 10**9: (44, -19, 12.382)}
MAGNITUDE_TOLERANCE = 0.5

pytestmark = pytest.mark.acceptance


@pytest.fixture(scope="module")
def default_run():
    cfg = ExperimentConfig()
    t0 = time.perf_counter()
    samples = generate_samples(cfg)
    table = run_table(cfg, samples)
    return cfg, samples, table, time.perf_counter() - t0


def test_c1_oracle_equivalence(acceptance_record):
    r = verify.oracle_equivalence(64)
    ok = r.passed and r.seconds < 60
    acceptance_record("C1 oracle equivalence A<=64, i<=4A", ok, r.line())
    assert ok, r.line()


def test_c2_decision_variable_bound(acceptance_record):
    ex = verify.td_bound_exhaustive(64)
    rnd = verify.td_bound_random(100_000, seed=0, a_max=10**6)
    ok = ex.passed and rnd.passed and rnd.checks >= 100_000
    acceptance_record("C2 decision variable bound", ok, f"{ex.line()} | {rnd.line()}")
    assert ok


def test_c3_error_bound(acceptance_record):
    r = verify.error_bound(1_000_000, seed=0)
    ok = r.passed and r.checks >= 10**6 and r.seconds < 60
    acceptance_record("C3 |j - floor(iD/A)| <= 1 over 1e6 draws", ok, r.line())
    assert ok, r.line()


def test_c4_proposed_rows(acceptance_record, default_run):
    cfg, samples, table, seconds = default_run
    preset = ExperimentConfig.published_table()
    constant = []
    for clock in cfg.clocks:
        err = cell_errors(clock, samples, preset, Algorithm.PROPOSED)
        constant.append(bool(np.all(err == -1)))
    bounded = []
    for rounding in RoundingMode:
        for variant in (cfg, preset):
            c = ExperimentConfig(
                rounding=rounding,
                convention=variant.convention,
                overshoot=variant.overshoot,
                unit_shortcut=variant.unit_shortcut,
            )
            for clock in cfg.clocks:
                bounded.append(int(np.abs(cell_errors(clock, samples, c, Algorithm.PROPOSED)).max()) <= 1)
    # against exact integers too, not only the binary64 reference
    exact_ok = True
    for clock in cfg.clocks:
        j, _, _ = compensate_batch(clock, cfg.D, samples, cfg.window)
        exact_ok &= bool(np.isin(j - exact_quotient_batch(clock, cfg.D, samples), (-1, 0, 1)).all())
    rows = [table.cell(Algorithm.PROPOSED, c) for c in cfg.clocks]
    ok = all(constant) and all(bounded) and exact_ok and seconds < 120
    detail = (
        f"matching preset constant -1: {constant}; "
        f"bounded +-1 over {len(bounded)} (rounding, variant, clock) cells: {all(bounded)}; "
        f"default rows {[(s.max, s.min, round(s.avg, 4)) for s in rows]}; table {seconds:.1f}s"
    )
    acceptance_record("C4 proposed rows", ok, detail)
    assert ok, detail


def _within(ours, published):
    return abs(abs(ours) - abs(published)) <= MAGNITUDE_TOLERANCE * abs(published)


def test_c5_binary32_rows(acceptance_record, default_run):
    cfg, _, table, _ = default_run
    cells = {c: table.cell(Algorithm.FLOAT_BASELINE, c) for c in cfg.clocks}
    exact_rows = all((cells[c].max, cells[c].min, cells[c].avg) == (0, 0, 0.0) for c in (10**6, 10**7))
    close = {}
    for clock, (mx, mn, avg) in PUBLISHED_BINARY32.items():
        s = cells[clock]
        close[clock] = _within(s.max, mx) and _within(s.min, mn) and _within(s.avg, avg)
    spread = {c: cells[c].max - cells[c].min for c in cfg.clocks}
    blowup = spread[10**7] == 0 < spread[10**8] < spread[10**9]
    ok = exact_rows and all(close.values()) and blowup
    detail = ", ".join(f"{c:.0e}: ({s.max}, {s.min}, {s.avg:.4f})" for c, s in cells.items())
    acceptance_record("C5 binary32 rows", ok, detail)
    assert ok, detail


def test_c6_periodicity(acceptance_record):
    r = verify.periodicity(64)
    acceptance_record("C6 periodicity y[x+da] = y[x]+db", r.passed, r.line())
    assert r.passed, r.line()


def test_c7_drift(acceptance_record):
    finals = []
    bounded = True
    for seed in range(8):
        rows = run_drift(ExperimentConfig(seed=seed), 1000, 10**6)
        bounded &= all(abs(r.proposed_drift) <= r.round for r in rows)
        last = rows[-1]
        finals.append((seed, last.proposed_drift, last.binary32_drift))
    ratio_ok = all(abs(b) >= 10 * max(abs(p), 1) for _, p, b in finals)
    ok = bounded and ratio_ok
    detail = f"after 1000 rounds of 1e6 ticks (seed, proposed, binary32): {finals}"
    acceptance_record("C7 drift", ok, detail)
    assert ok, detail


def test_c8_determinism(acceptance_record, tmp_path, capsys):
    outs = []
    for n, threads in enumerate(("1", "1", "4")):
        path = tmp_path / f"run{n}.csv"
        assert main(["-q", "bench", "--seed", "11", "--threads", threads, "--out", str(path)]) == 0
        outs.append(path.read_bytes())
    ok = outs[0] == outs[1] == outs[2] and outs[0].count(b"\n") == 9
    acceptance_record("C8 byte-identical bench CSV across runs and threads", ok, f"{len(outs[0])} bytes")
    assert ok

from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bresenham_skew.core import Convention
from bresenham_skew.experiment import (
    Algorithm,
    CellResult,
    ErrorSign,
    ErrorStats,
    ExperimentConfig,
    ResultTable,
    cell_errors,
    emit,
    emit_drift,
    generate_samples,
    run_cell,
    run_drift,
    run_table,
    sweep,
)
from bresenham_skew.oracles import RoundingMode

SMALL = ExperimentConfig(sample_count=2000)


def test_extreme_skew_maps_to_expected_A():
    # the sampled skew never exceeds the span, so force it through u in {0, 1}
    D = 10**6
    assert int(np.rint(D * (1.0 + 100e-6))) == 1_000_100
    assert int(np.rint(D * 1.0)) == D


def test_samples_span_and_determinism():
    a = generate_samples(SMALL)
    b = generate_samples(SMALL)
    assert np.array_equal(a, b)
    assert a.min() >= 999_900 and a.max() <= 1_000_100
    assert not np.array_equal(a, generate_samples(replace(SMALL, seed=1)))


def test_samples_are_prefix_stable():
    # sample n depends only on (seed, n)
    long = generate_samples(replace(SMALL, sample_count=5000))
    assert np.array_equal(long[:2000], generate_samples(SMALL))


def test_config_validation():
    for bad in (dict(D=0), dict(sample_count=0), dict(skew_ppm=0), dict(skew_ppm=1e6),
                dict(clocks=()), dict(clocks=(0,)), dict(seed=-1), dict(overshoot=-1)):
        with pytest.raises(ValueError):
            ExperimentConfig(**bad)


def test_single_sample_stats_are_degenerate():
    cfg = replace(SMALL, sample_count=1)
    s = run_cell(10**9, generate_samples(cfg), cfg, Algorithm.FLOAT_BASELINE)
    assert s.max == s.min == s.avg
    assert s.count == 1


def test_table_shape():
    cfg = replace(SMALL, sample_count=100)
    assert len(run_table(cfg).rows) == 8
    table = run_table(replace(cfg, clocks=(10**6,)))
    assert [(r.algorithm, r.clock) for r in table.rows] == [
        (Algorithm.FLOAT_BASELINE, 10**6),
        (Algorithm.PROPOSED, 10**6),
    ]


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-50, 50), min_size=1, max_size=100))
def test_error_stats_invariants(errors):
    s = ErrorStats.from_errors(errors)
    assert s.min <= s.avg <= s.max
    assert s.count == len(errors)
    assert s.avg == pytest.approx(sum(errors) / len(errors))


def test_error_sign_flips():
    samples = generate_samples(SMALL)
    a = cell_errors(10**9, samples, SMALL, Algorithm.FLOAT_BASELINE)
    b = cell_errors(10**9, samples, replace(SMALL, error_sign=ErrorSign.ALGORITHM_MINUS_REFERENCE),
                    Algorithm.FLOAT_BASELINE)
    assert np.array_equal(a, -b)


def test_workers_do_not_change_results():
    samples = generate_samples(SMALL)
    one = run_table(SMALL, samples)
    four = run_table(replace(SMALL, workers=4), samples)
    assert emit(one) == emit(four)


@pytest.mark.parametrize("rounding", list(RoundingMode))
def test_proposed_within_one_of_reference(rounding):
    cfg = replace(SMALL, rounding=rounding)
    samples = generate_samples(cfg)
    for clock in cfg.clocks:
        err = cell_errors(clock, samples, cfg, Algorithm.PROPOSED)
        assert np.abs(err).max() <= 1


def test_matching_preset_is_constant():
    cfg = ExperimentConfig.published_table(sample_count=2000)
    assert cfg.convention is Convention.PAPER_DEF3
    table = run_table(cfg)
    for clock in cfg.clocks:
        s = table.cell(Algorithm.PROPOSED, clock)
        assert (s.max, s.min, s.avg) == (-1, -1, -1.0)


def test_emit_csv_row_format():
    table = ResultTable([CellResult(Algorithm.PROPOSED, 10**6, ErrorStats(-1, -1, -1.0))])
    assert emit(table) == "algorithm,clock,max,min,avg\nproposed,1000000,-1,-1,-1.00000\n"


def test_emit_empty_table_is_header_only():
    assert emit(ResultTable()) == "algorithm,clock,max,min,avg\n"


def test_emit_markdown():
    table = ResultTable([
        CellResult(Algorithm.FLOAT_BASELINE, 10**9, ErrorStats(44, -19, 12.382)),
        CellResult(Algorithm.PROPOSED, 10**9, ErrorStats(-1, -1, -1.0)),
    ])
    md = emit(table, "markdown")
    assert "| Single precision | 1e9 | 44 | -19 | 12.3820 |" in md
    assert "| Proposed | 1e9 | -1 | -1 | -1.00000 |" in md
    with pytest.raises(ValueError):
        emit(table, "xml")


def test_sweep_covers_variants():
    cfg = replace(SMALL, sample_count=50, clocks=(10**8,))
    labels = {label for label, _ in sweep(cfg)}
    assert "published-table/ref-minus-alg" in labels
    assert "div-first/alg-minus-ref" in labels
    assert len(labels) == 12


def test_drift_zero_interval():
    rows = run_drift(SMALL, 1, 0)
    assert [(r.round, r.proposed_drift, r.binary32_drift) for r in rows] == [(1, 0, 0)]


def test_drift_unit_ratio_is_zero():
    cfg = replace(SMALL, skew_ppm=1e-6)
    rows = run_drift(cfg, 50, 10**6)
    assert all(r.proposed_drift == r.binary32_drift == 0 for r in rows)


def test_drift_proposed_bounded():
    rows = run_drift(SMALL, 100, 10**6)
    assert all(abs(r.proposed_drift) <= r.round for r in rows)
    assert emit_drift(rows).splitlines()[0] == "round,proposed_drift,binary32_drift"


def test_drift_rejects_bad_arguments():
    with pytest.raises(ValueError):
        run_drift(SMALL, 0, 10)
    with pytest.raises(ValueError):
        run_drift(SMALL, 1, -1)

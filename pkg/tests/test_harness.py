import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aquascale import (SweepSpec, SweepTable, fit_exponent, order_ratio_check,
                       run_sweep)
from aquascale.harness import CheckResult, _sweep_point
import aquascale.harness as harness


def _table(rows):
    return SweepTable(rows=list(rows))


def test_fit_exponent_recovers_an_exact_power_law():
    xs = np.array([2.0, 4.0, 8.0, 16.0, 32.0])
    fit = fit_exponent(xs, 3.0 * xs ** 2)
    assert fit.slope == pytest.approx(2.0, abs=1e-9)
    assert fit.intercept == pytest.approx(math.log2(3.0), abs=1e-9)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
    assert fit.residual_max < 1e-9


def test_fit_exponent_constant_series_has_zero_slope():
    fit = fit_exponent([1.0, 2.0, 4.0], [5.0, 5.0, 5.0])
    assert fit.slope == pytest.approx(0.0, abs=1e-12)
    assert fit.r_squared == 1.0   # degenerate total variance counts as exact


@given(st.floats(min_value=-3.0, max_value=3.0),
       st.floats(min_value=0.1, max_value=10.0))
@settings(max_examples=30, deadline=None)
def test_fit_exponent_recovers_random_power_laws(slope, scale):
    xs = np.array([1.0, 2.0, 4.0, 8.0, 16.0, 32.0])
    fit = fit_exponent(xs, scale * xs ** slope)
    assert fit.slope == pytest.approx(slope, abs=1e-8)


def test_fit_exponent_linear_abscissa_mode():
    xs = np.array([1.0, 2.0, 3.0, 4.0])
    fit = fit_exponent(xs, np.exp(-2.0 * xs), log_x=False)
    assert fit.slope == pytest.approx(-2.0 / math.log(2.0), rel=1e-9)


def test_fit_exponent_input_validation():
    with pytest.raises(ValueError):
        fit_exponent([1.0, 2.0], [1.0, 2.0])
    with pytest.raises(ValueError):
        fit_exponent([3.0, 3.0, 3.0], [1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        fit_exponent([1.0, 2.0, 4.0], [1.0, -2.0, 3.0])


def _ratio_rows(kind, values):
    return [{"n": 4 ** (i + 3), "beta": None, "f_khz": 10.0, "alpha": 1.5,
             "kind": kind, "value": v, "regime": "Power", "seed": 0}
            for i, v in enumerate(values)]


def test_order_ratio_check_band_semantics():
    t = _table(_ratio_rows("A", [10.0, 20.0, 40.0])
               + _ratio_rows("B", [1.0, 1.0, 1.0]))
    res = order_ratio_check(t, "A", "B", threshold=4.0)
    assert res.bounded and res.band == pytest.approx(4.0)
    assert res.ratios == (10.0, 20.0, 40.0)
    res = order_ratio_check(t, "A", "B", threshold=3.9)
    assert not res.bounded
    # the band is symmetric under swapping numerator and denominator
    swapped = order_ratio_check(t, "B", "A", threshold=4.0)
    assert swapped.band == pytest.approx(res.band)


def test_order_ratio_check_requires_matching_points():
    t = _table(_ratio_rows("A", [1.0, 2.0]) + _ratio_rows("B", [1.0]))
    with pytest.raises(ValueError):
        order_ratio_check(t, "A", "B")
    with pytest.raises(ValueError):
        order_ratio_check(_table([]), "A", "B")


def test_sweep_spec_validation():
    with pytest.raises(ValueError):
        SweepSpec(family="bogus", n_list=(64,))
    with pytest.raises(ValueError):
        SweepSpec(family="cutset-extended", n_list=())
    with pytest.raises(ValueError):
        SweepSpec(family="cutset-extended", n_list=(64,), alpha_list=())
    with pytest.raises(ValueError):
        SweepSpec(family="cutset-extended", n_list=(15,))
    with pytest.raises(ValueError):
        SweepSpec(family="mh-dense", n_list=(9,))   # odd-root square
    # random layouts take any n >= 4
    SweepSpec(family="mh-random", n_list=(37,))


def test_run_sweep_is_deterministic_and_complete():
    spec = SweepSpec(family="mh-extended", n_list=(64, 256), a_value=2.0,
                     seeds=(0, 1))
    t1, t2 = run_sweep(spec), run_sweep(spec)
    assert t1.rows == t2.rows
    assert not t1.failures
    # one MhLower and one ClosedFormUpper row per (n, seed)
    assert len(t1.rows) == 2 * 2 * 2
    kinds = {r["kind"] for r in t1.rows}
    assert kinds == {"MhLower", "ClosedFormUpper"}


def test_run_sweep_single_point_emits_each_kind_once():
    spec = SweepSpec(family="cutset-extended", n_list=(64,))
    t = run_sweep(spec)
    assert [r["kind"] for r in t.rows] == ["ExactSnrSum", "ClosedFormUpper"]


def test_run_sweep_threads_match_serial():
    spec = SweepSpec(family="cutset-dense", n_list=(64, 256),
                     beta_list=(0.0, 0.25), seeds=(0,))
    assert run_sweep(spec, threads=4).rows == run_sweep(spec).rows


def test_run_sweep_covers_alpha_grid():
    spec = SweepSpec(family="cutset-dense", n_list=(64,),
                     alpha_list=(1.0, 2.0), beta_list=(0.25,))
    t = run_sweep(spec)
    assert sorted({r["alpha"] for r in t.rows}) == [1.0, 2.0]
    xs, ys1 = t.xy("HybridDenseUpper", beta=0.25, alpha=1.0)
    _, ys2 = t.xy("HybridDenseUpper", beta=0.25, alpha=2.0)
    assert len(xs) == 1 and ys1[0] != ys2[0]


def test_run_sweep_records_point_failures(monkeypatch):
    calls = {"n": 0}
    real = _sweep_point

    def flaky(spec, p, n, beta, seed):
        calls["n"] += 1
        if n == 256:
            raise RuntimeError("boom")
        return real(spec, p, n, beta, seed)

    monkeypatch.setattr(harness, "_sweep_point", flaky)
    spec = SweepSpec(family="cutset-extended", n_list=(64, 256, 1024))
    t = run_sweep(spec)
    assert len(t.failures) == 1
    assert t.failures[0]["n"] == 256
    assert "RuntimeError: boom" == t.failures[0]["error"]
    assert {r["n"] for r in t.rows} == {64, 1024}


def test_table_csv_has_schema_and_full_precision():
    spec = SweepSpec(family="cutset-extended", n_list=(64,))
    t = run_sweep(spec)
    buf = io.StringIO()
    t.to_csv(buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "n,beta,f_khz,alpha,kind,value,regime"
    assert len(lines) == 3
    first = lines[1].split(",")
    assert first[0] == "64" and first[1] == ""      # beta empty outside dense
    assert float(first[5]) == t.rows[0]["value"]    # repr round-trips


def test_table_xy_averages_over_seeds():
    rows = _ratio_rows("A", [2.0]) + _ratio_rows("A", [4.0])
    rows[1]["seed"] = 1
    t = _table(rows)
    xs, ys = t.xy("A")
    assert list(xs) == [64.0]
    assert ys[0] == pytest.approx(3.0)


def test_check_result_line_format():
    c = CheckResult(name="demo", passed=True, measured={}, detail="ok")
    assert c.line() == "PASS demo: ok"
    c = CheckResult(name="demo", passed=False, measured={}, detail="bad")
    assert c.line().startswith("FAIL demo")

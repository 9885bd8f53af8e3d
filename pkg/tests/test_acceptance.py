"""End-to-end acceptance checks for the scaling-law suite.

Each test exercises one advertised property at its acceptance sweep size,
prints a single PASS/FAIL line with the measured values, and then asserts.
Two checks document known desk-scale limits of the asymptotic statements
(see notes in the verification-harness docstrings): the middle-regime slope
of the dense hybrid bound, and consequently the exit status of the full
verify run.  They fail honestly rather than being loosened.
"""

import subprocess
import sys
import time

from aquascale import harness


def _run(check, *args, **kwargs):
    t0 = time.perf_counter()
    result = check(*args, **kwargs)
    return result, time.perf_counter() - t0


def _report(tag, result, elapsed, limit=None):
    state = "PASS" if result.passed else "FAIL"
    budget = f" [{elapsed:.1f}s" + (f" < {limit:.0f}s]" if limit else "]")
    print(f"{tag}: {state}{budget} {result.detail}")


def test_acceptance_01_channel_gain_is_proper():
    result, dt = _run(harness.check_gain_propriety)
    _report("01 gain propriety", result, dt, 1.0)
    assert result.passed
    assert result.measured["scaled_pseudocovariance"] <= 0.01
    assert dt < 1.0


def test_acceptance_02_diagonal_covariance_is_unbeaten():
    result, dt = _run(harness.check_diagonal_covariance)
    _report("02 diagonal covariance", result, dt, 120.0)
    assert result.passed
    assert dt < 120.0


def test_acceptance_03_extended_power_bound_dominates():
    result, dt = _run(harness.check_extended_power_bound)
    _report("03 extended power bound", result, dt, 60.0)
    assert result.passed
    assert result.measured["max_exact_over_bound"] <= 1.0
    assert dt < 60.0


def test_acceptance_04_dense_power_sandwich_holds():
    result, dt = _run(harness.check_dense_power_sandwich)
    _report("04 dense power sandwich", result, dt, 120.0)
    assert result.passed
    assert result.measured["max_exact_over_upper"] <= 1.0
    assert result.measured["min_exact_over_lower"] >= 1.0
    assert dt < 120.0


def test_acceptance_05_extended_cutset_tracks_closed_form():
    result, dt = _run(harness.check_extended_cutset_band)
    _report("05 extended cut-set band", result, dt)
    assert result.passed
    assert result.measured["band"] <= 4.0


def test_acceptance_06_dense_upper_bound_slopes():
    result, dt = _run(harness.check_dense_upper_slopes)
    _report("06 dense upper slopes", result, dt)
    assert abs(result.measured["slope_beta0"] - 1.0) <= 0.15
    assert result.measured["exp_slope_beta75"] < 0.0
    assert result.measured["exp_r2_beta75"] >= 0.95
    # Known desk-scale limit: the far-slab power term decays only like
    # (1+eps0)^(-n^eps) against polynomial growth, so the measured hybrid
    # slope at beta = 1/4 sits near the far-slab exponent instead of
    # 1 - beta.  Kept strict deliberately; fails until n ~ 1e6 is feasible.
    assert abs(result.measured["slope_beta25"] - 0.75) <= 0.15
    assert result.passed


def test_acceptance_07_interference_bounds_dominate():
    res_ext, dt_ext = _run(harness.check_extended_interference)
    _report("07a extended interference", res_ext, dt_ext)
    res_dns, dt_dns = _run(harness.check_dense_interference)
    _report("07b dense interference", res_dns, dt_dns)
    assert res_ext.passed
    assert res_ext.measured["max_exact_over_bound"] <= 1.0
    assert res_dns.passed
    assert res_dns.measured["max_exact_over_bound"] <= 1.0


def test_acceptance_08_extended_multihop_is_order_optimal():
    result, dt = _run(harness.check_extended_order_optimality)
    _report("08 extended order optimality", result, dt)
    assert result.passed
    assert result.measured["band"] <= 10.0


def test_acceptance_09_dense_regime_laws():
    result, dt = _run(harness.check_dense_regime_laws)
    _report("09 dense regime laws", result, dt)
    assert result.passed
    assert abs(result.measured["slope_beta_half"] - 0.5) <= 0.15
    gaps = result.measured["gap_beta_quarter"]
    assert all(b > a for a, b in zip(gaps, gaps[1:]))


def test_acceptance_10_random_layouts_lose_polynomially():
    result, dt = _run(harness.check_random_network)
    _report("10 random network gap", result, dt)
    assert result.passed
    ratios = result.measured["random_over_regular"]
    assert all(b < a for a, b in zip(ratios, ratios[1:]))
    assert result.measured["occupancy_passes"] >= 95


def test_acceptance_11_full_verify_run():
    t0 = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "aquascale.cli", "verify"],
                          capture_output=True, text=True)
    dt = time.perf_counter() - t0
    state = "PASS" if proc.returncode == 0 and dt < 600.0 else "FAIL"
    print(f"11 full verify: {state} [{dt:.1f}s < 600s] exit={proc.returncode}")
    assert dt < 600.0
    # Inherits the one honestly-failing slope check above, so the verify
    # exit status is 3 until that regime is reachable at desk scale.
    assert proc.returncode == 0

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aquascale import (PhysicalParams, absorption_coeff, absorption_db_per_km,
                       attenuation, frequency_for_regime,
                       log_absorption_coeff, log_attenuation, make_rng,
                       noise_psd, params_for_absorption,
                       pseudocovariance_estimate, regime_params, sample_gain,
                       with_params)


def test_absorption_matches_hand_computed_values(thorp):
    # hand sum of the four Thorp terms at 1 kHz and 10 kHz
    assert absorption_db_per_km(1.0, thorp) == pytest.approx(
        0.06900409046574006, rel=1e-12)
    assert absorption_db_per_km(10.0, thorp) == pytest.approx(
        1.1870299387081567, rel=1e-12)


def test_log_absorption_is_log_of_linear_coefficient(thorp):
    for f in (0.5, 1.0, 10.0, 25.0):
        assert math.log(absorption_coeff(f, thorp)) == pytest.approx(
            log_absorption_coeff(f, thorp), rel=1e-12)
    # dB form and natural-log form agree through the ln(10)/10 conversion
    assert log_absorption_coeff(10.0, thorp) == pytest.approx(
        math.log(10.0) / 10.0 * 1.1870299387081567, rel=1e-12)


@given(st.floats(min_value=0.1, max_value=80.0),
       st.floats(min_value=0.1, max_value=80.0))
@settings(max_examples=40, deadline=None)
def test_absorption_monotone_in_frequency(f1, f2):
    p = PhysicalParams()
    lo, hi = sorted((f1, f2))
    assert absorption_db_per_km(lo, p) <= absorption_db_per_km(hi, p)


def test_noise_psd_power_law(thorp):
    assert noise_psd(1.0, thorp) == pytest.approx(1.0e5, rel=1e-12)
    assert noise_psd(10.0, thorp) == pytest.approx(1584.8931924611136, rel=1e-12)
    # slope of the power law is exactly -a5 in log-log
    ratio = noise_psd(20.0, thorp) / noise_psd(10.0, thorp)
    assert math.log2(ratio) == pytest.approx(-1.8, rel=1e-12)


def test_attenuation_combines_spreading_and_absorption(thorp):
    # A(r, f) = c0 * r^alpha * a(f)^r, assembled here from its two factors
    a10 = absorption_coeff(10.0, thorp)
    assert attenuation(2.0, 10.0, thorp) == pytest.approx(
        2.0 ** 1.5 * a10 ** 2, rel=1e-12)
    assert attenuation(1.0, 10.0, thorp) == pytest.approx(a10, rel=1e-12)


def test_log_attenuation_stays_finite_where_linear_overflows(thorp):
    # a(64 kHz)^3000 overflows float; the log form is the safe route
    val = log_attenuation(3000.0, 64.0, thorp)
    assert math.isfinite(val)
    assert val == pytest.approx(
        1.5 * math.log(3000.0) + 3000.0 * log_absorption_coeff(64.0, thorp))
    with pytest.raises(OverflowError):
        attenuation(3000.0, 64.0, thorp)


def test_distance_and_frequency_validation(thorp):
    with pytest.raises(ValueError):
        attenuation(0.0, 10.0, thorp)
    with pytest.raises(ValueError):
        noise_psd(-1.0, thorp)
    with pytest.raises(ValueError):
        absorption_db_per_km(0.0, thorp)
    with pytest.raises(ValueError):
        PhysicalParams(alpha=2.5)
    with pytest.raises(ValueError):
        PhysicalParams(a4=-3.0)


def test_sample_gain_magnitude_is_deterministic(thorp):
    rng = make_rng(7)
    g = sample_gain(2.0, 10.0, rng, thorp)
    assert abs(g.value) ** 2 == pytest.approx(1.0 / attenuation(2.0, 10.0, thorp))
    # same seed, same draw
    g2 = sample_gain(2.0, 10.0, make_rng(7), thorp)
    assert g2.value == g.value


def test_pseudocovariance_vanishes_for_circular_phase(thorp):
    est = pseudocovariance_estimate(1.0, 10.0, 20_000, make_rng(0), thorp)
    assert abs(est) * attenuation(1.0, 10.0, thorp) < 0.05
    # a single sample is its own mean, so the estimate is exactly zero
    assert pseudocovariance_estimate(1.0, 10.0, 1, make_rng(0), thorp) == 0.0


def test_noise_tracks_absorption_at_matched_frequencies(thorp):
    # N(f) against (log2 a(f))^(-a5/2): the ratio stays inside a fixed band
    vals = []
    for f in range(1, 65):
        ln_a = log_absorption_coeff(float(f), thorp)
        vals.append(noise_psd(float(f), thorp)
                    * (ln_a / math.log(2.0)) ** (thorp.a5 / 2.0))
    band = max(vals) / min(vals)
    assert band <= 10.0


def test_regime_frequency_solves_the_absorption_equation():
    # c1 = 1 and eps0 = e - 1 make the target frequency exactly 2
    p = PhysicalParams(c1=1.0)
    f = frequency_for_regime(16, 0.5, math.e - 1.0, p)
    assert f == pytest.approx(2.0, rel=1e-12)
    # and the construction is self-consistent for the default params
    p = regime_params(0.5)
    for n, beta in ((64, 0.25), (1024, 0.75)):
        f = frequency_for_regime(n, beta, 0.5, p)
        assert log_absorption_coeff(f, p) == pytest.approx(
            n ** beta * math.log1p(0.5), rel=1e-6)
    assert frequency_for_regime(64, 0.0, 0.5, p) == p.f_ref


def test_regime_params_pin_noise_level_exactly():
    p = regime_params(0.5)
    for n, beta in ((64, 0.5), (256, 0.25), (4096, 0.75)):
        f = frequency_for_regime(n, beta, 0.5, p)
        assert noise_psd(f, p) == pytest.approx(
            n ** (-beta * p.a5 / 2.0), rel=1e-12)


def test_params_for_absorption_pins_the_coefficient():
    for a in (1.2, 2.0, 4.0):
        p = params_for_absorption(a)
        assert absorption_coeff(p.f_ref, p) == pytest.approx(a, rel=1e-9)
        # still strictly increasing away from the pinned point
        assert absorption_coeff(2.0 * p.f_ref, p) > a
    with pytest.raises(ValueError):
        params_for_absorption(0.9)


def test_with_params_revalidates():
    p = PhysicalParams()
    q = with_params(p, alpha=2.0)
    assert q.alpha == 2.0 and p.alpha == 1.5
    with pytest.raises(ValueError):
        with_params(p, alpha=0.5)


def test_rng_is_seed_stable():
    a = make_rng(123).random(4)
    b = make_rng(123).random(4)
    assert np.array_equal(a, b)

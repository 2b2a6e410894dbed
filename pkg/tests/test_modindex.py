import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial import chebyshev

from nfam.modindex import (
    AmplitudeLaw,
    FrequencyLaw,
    Tone,
    beta_indexes,
    central_frequency,
    gamma_indexes,
    modulation_indexes,
    power_reduction,
)


def closed_form_beta(k, Am, fm):
    """Explicit order-4 closed forms, written out term by term."""
    k1, k2, k3, k4 = k[1:]
    return [
        0.0,
        (k1 * Am + 3 * k3 * Am**3 / 4) / fm,
        (k2 * Am**2 + k4 * Am**4) / (4 * fm),
        k3 * Am**3 / (12 * fm),
        k4 * Am**4 / (32 * fm),
    ]


def closed_form_gamma(lam, Am):
    l0, l1, l2, l3 = lam
    return [
        l0 + l2 * Am**2 / 2,
        l1 * Am + 3 * l3 * Am**3 / 4,
        l2 * Am**2 / 2,
        l3 * Am**3 / 4,
    ]


@pytest.mark.parametrize(
    "h, expected",
    [(0, [1.0]), (2, [0.5, 0.0, 0.5]), (4, [3 / 8, 0.0, 0.5, 0.0, 1 / 8])],
)
def test_power_reduction_examples(h, expected):
    np.testing.assert_allclose(power_reduction(h), expected, rtol=0, atol=1e-15)


@pytest.mark.parametrize("h", range(0, 13))
def test_power_reduction_matches_chebyshev(h):
    # cos(x)**h = T-series of x**h evaluated at x = cos(theta)
    oracle = chebyshev.poly2cheb([0.0] * h + [1.0])
    np.testing.assert_allclose(power_reduction(h), oracle, atol=1e-14)
    assert power_reduction(h).sum() == pytest.approx(1.0, abs=1e-14)


def test_power_reduction_rejects_negative():
    with pytest.raises(ValueError):
        power_reduction(-1)


def test_beta_examples(flaw):
    np.testing.assert_allclose(beta_indexes(flaw, Tone(0.0, 0.5)), 0.0, atol=0)
    np.testing.assert_allclose(
        beta_indexes(flaw, Tone(1.0, 0.5)), [0, 0.323245, -0.0073, 0.00147167, -0.0001], atol=5e-9
    )
    np.testing.assert_allclose(
        beta_indexes(flaw, Tone(1.5, 0.5)),
        [0, 0.509702, -0.018675, 0.00496688, -0.00050625],
        atol=5e-7,
    )


def test_gamma_examples(alaw):
    np.testing.assert_array_equal(gamma_indexes(alaw, Tone(0.0, 0.5)), [0.34341, 0, 0, 0])
    np.testing.assert_allclose(
        gamma_indexes(alaw, Tone(1.0, 0.5)), [0.33641, 0.054025, -0.007, 0.000175], atol=1e-12
    )
    np.testing.assert_allclose(
        gamma_indexes(alaw, Tone(1.5, 0.5)), [0.32766, 0.08202188, -0.01575, 0.00059063], atol=5e-9
    )


@pytest.mark.parametrize("Am, expected", [(0.0, 17.725), (1.0, 17.7179), (1.5, 17.7073375)])
def test_central_frequency_examples(flaw, Am, expected):
    assert central_frequency(flaw, Am) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("fm", [0.1, 0.5, 2.0])
@pytest.mark.parametrize("Am", np.round(np.arange(0, 1.51, 0.1), 10))
def test_general_order_matches_closed_forms(flaw, alaw, Am, fm):
    tone = Tone(Am, fm)
    np.testing.assert_allclose(beta_indexes(flaw, tone), closed_form_beta(flaw.coeffs, Am, fm), rtol=1e-14, atol=1e-16)
    np.testing.assert_allclose(gamma_indexes(alaw, tone), closed_form_gamma(alaw.coeffs, Am), rtol=1e-14, atol=1e-16)


def test_zero_tone_invariants(flaw, alaw):
    idx = modulation_indexes(flaw, Tone(0.0, 0.5), alaw)
    assert idx.beta[0] == 0.0
    assert all(b == 0 for b in idx.beta)
    assert idx.gamma == (alaw.Ac, 0.0, 0.0, 0.0)
    assert idx.fcI == flaw.fc


@settings(max_examples=60, deadline=None)
@given(
    k1=st.floats(-1, 1),
    k3=st.floats(-1, 1),
    Am=st.floats(0, 1.5),
)
def test_central_frequency_ignores_odd_coefficients(flaw, k1, k3, Am):
    k = list(flaw.coeffs)
    k[1], k[3] = k1, k3
    assert central_frequency(FrequencyLaw(18.0, tuple(k)), Am) == central_frequency(flaw, Am)


@settings(max_examples=60, deadline=None)
@given(Am=st.floats(0.01, 1.5), fm=st.floats(0.05, 5.0))
def test_doubling_fm_halves_beta(flaw, alaw, Am, fm):
    a = modulation_indexes(flaw, Tone(Am, fm), alaw)
    b = modulation_indexes(flaw, Tone(Am, 2 * fm), alaw)
    np.testing.assert_allclose(np.array(b.beta[1:]) * 2, a.beta[1:], rtol=1e-14)
    assert a.gamma == b.gamma
    assert a.fcI == b.fcI


@pytest.mark.parametrize("k2, sign", [(-0.013, -1), (0.02, 1)])
def test_red_blue_shift_follows_k2(k2, sign):
    law = FrequencyLaw(0.0, (10.0, 0.1, k2, 0.0, -0.0016))
    assert np.sign(central_frequency(law, 0.05) - 10.0) == sign


def test_law_validation():
    with pytest.raises(ValueError):
        FrequencyLaw(18.0, (0.0, 1.0))
    with pytest.raises(ValueError):
        AmplitudeLaw(18.0, (-0.1,))
    with pytest.raises(ValueError):
        FrequencyLaw(18.0, ())
    with pytest.raises(ValueError):
        Tone(-1.0, 0.5)
    with pytest.raises(ValueError):
        Tone(1.0, 0.0)


def test_json_round_trip(flaw, alaw):
    assert FrequencyLaw.from_json(flaw.to_json()) == flaw
    assert AmplitudeLaw.from_dict(json.loads(alaw.to_json())) == alaw
    assert json.loads(flaw.to_json()) == {"bias_mA": 18.0, "coeffs": [17.725, 0.155, -0.013, 0.00883, -0.0016]}
    tone = Tone(1.5, 0.5)
    assert tone.to_dict() == {"Am_mA": 1.5, "fm_GHz": 0.5}
    assert Tone.from_dict(tone.to_dict()) == tone


def test_law_horner_evaluation(flaw):
    assert flaw(0.0) == 17.725
    assert flaw(1.0) == pytest.approx(17.87423, abs=1e-12)
    np.testing.assert_allclose(flaw(np.array([0.0, 1.0])), [17.725, 17.87423])

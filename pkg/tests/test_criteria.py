import json
import math

import mpmath
import pytest

from bifcascade.criteria import (SATISFIED, UNDECIDABLE, VIOLATED, h_eval, h_upper_bound,
                                 lemma_quantities, log_h_eval, log_theta, milnor_series,
                                 milnor_terms, mlc_rates, theorem2_condition, theorem5_conditions,
                                 trend)
from bifcascade.errors import DomainError
from bifcascade.rotation import IntPower, RotationNumber as R

HALVES = [R(1, 2)] * 6


def test_h_at_zero_and_domain():
    assert h_eval(0) == 0
    with pytest.raises(DomainError):
        h_eval(1.0)
    with pytest.raises(DomainError):
        h_eval(-0.1)


def test_h_spot_value_and_bound():
    h = h_eval(0.1)
    assert h == pytest.approx(4.060813216918, abs=1e-9)
    assert h <= h_upper_bound(0.1) == pytest.approx(4.5436, abs=1e-3)


def test_h_overflow_is_inf():
    assert h_eval(0.999) == math.inf
    assert log_h_eval(0.999) > 709


def test_h_upper_bound_sharp_near_one():
    # the bound is asymptotically exact; at u = 0.91 it exceeds H by ~3e-45 relative
    with mpmath.workdps(80):
        u = mpmath.mpf("0.91")
        prod = 16 * u
        for j in range(1, 2000):
            prod *= ((1 + u ** (2 * j)) / (1 - u ** (2 * j - 1))) ** 8
        bound = mpmath.exp(-mpmath.pi ** 2 / mpmath.log(u)) / 16
        assert 0 < (bound - prod) / bound < 1e-40


def test_trend():
    assert trend([1, 0.5, 0.25, 0.1, 0.01, 0.001]) == "decaying"
    assert trend([1, 1, 1, 1, 1, 1]) == "persistent"
    assert trend([1, 0.9, 0.8, 0.7, 0.6, 0.45]) == "unclear"


def test_milnor_constant_halves():
    r = milnor_series(HALVES)
    assert r.verdict == "diverging"
    assert all(x == pytest.approx(math.sqrt(0.5)) for x in milnor_terms(HALVES))


def test_milnor_powers_of_four():
    # |t_m| = 4^-q_{m-1}: terms exactly 1/4
    ts = [R(1, 2), R(1, 16), R(1, IntPower(2, 32)), R(1, IntPower(2, 2 ** 33))]
    assert all(x == mpmath.mpf(1) / 4 for x in milnor_terms(ts))
    assert milnor_series(ts).verdict == "diverging"


def test_milnor_self_power_tower_decays():
    # |t_m| = q_{m-1}^-q_{m-1}: terms 1/q_{m-1}, which fall superexponentially
    ts = [R(1, 2), R(1, 4), R(1, 256), R(1, IntPower(2, 2048))]
    terms = milnor_terms(ts)
    assert [float(x) for x in terms] == [0.5, 0.25, 1 / 256]
    assert milnor_series(ts).verdict == "converging"


def test_second_condition_constant_halves():
    r = theorem2_condition(HALVES, 0.6)
    assert r.verdict == VIOLATED
    assert 0.6 - r.margin == pytest.approx(math.sqrt(0.5))
    assert theorem2_condition(HALVES, 0.75).verdict == SATISFIED


def test_second_condition_single_element_undecidable():
    assert theorem2_condition([R(1, 2)], 0.6).verdict == UNDECIDABLE


def test_second_condition_rejects_bad_a():
    with pytest.raises(ValueError):
        theorem2_condition(HALVES, 1.5)


def test_three_part_halves():
    r = theorem5_conditions([R(1, 2)] * 8, 0)
    e0 = r.subconditions["E0"]
    vals = [float(q["value"]) for q in e0.quantities]
    # log 2 / 2^m
    assert vals == pytest.approx([math.log(2) / 2 ** m for m in range(7)])
    assert e0.verdict == VIOLATED
    assert r.verdict == VIOLATED


def test_theta_arithmetic():
    ts = [R(1, 3), R(1, 2 ** 20)]
    expected = math.log(12800 * 2.0 ** -20 * max(3, 4 / 3))
    assert float(log_theta(ts, 0, 0, 12800)) == pytest.approx(expected, rel=1e-14)


def test_three_part_bad_k():
    with pytest.raises(ValueError):
        theorem5_conditions(HALVES, 6)


def test_level_quantities_small_second_angle():
    r = lemma_quantities([R(1, 3), R(1, IntPower(2, 40))])
    row = r.quantities[0]
    assert float(row["d"]) == pytest.approx(320 * 32000 / 9 * 2.0 ** -40, rel=1e-12)
    assert float(row["d_tilde"]) == pytest.approx(1 / 108, rel=1e-12)
    assert r.subconditions["Y"].verdict == SATISFIED


def test_level_quantities_large_second_angle():
    r = lemma_quantities([R(1, 3), R(1, 8)])
    assert float(r.quantities[0]["d"]) == pytest.approx(320 * 32000 / 72, rel=1e-12)
    assert r.subconditions["Y"].verdict == VIOLATED
    assert r.verdict == VIOLATED


def test_level_quantities_needs_two():
    with pytest.raises(ValueError):
        lemma_quantities([R(1, 3)])


def test_mlc_rates():
    assert all(x == 0 for x in mlc_rates(HALVES))
    ts = [R(1, 3), R(2, 7), R(4, 9)]
    rates = mlc_rates(ts)
    assert float(rates[1]) == pytest.approx(math.log(2) / 3)
    assert float(rates[2]) == pytest.approx(math.log(4) / 21)


def test_reports_are_json():
    for r in (milnor_series(HALVES), theorem2_condition(HALVES, 0.6),
              theorem5_conditions(HALVES, 1), lemma_quantities(HALVES)):
        json.dumps(r.to_json(), allow_nan=False)

import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from convseq.errors import RangeError
from convseq.numeric import (
    default_tolerances,
    format_coeff,
    from_json,
    is_exact,
    log_abs,
    magnitude,
    near_equal,
    promote_to_complex,
    to_coeff,
    to_json,
)


@pytest.mark.parametrize(
    "raw, expected",
    [
        (3, Fraction(3)),
        (Fraction(2, 6), Fraction(1, 3)),
        ("7/21", Fraction(1, 3)),
        ("-4", Fraction(-4)),
        ({"num": 3, "den": 9}, Fraction(1, 3)),
        (0.5, 0.5 + 0j),
        (1 + 2j, 1 + 2j),
        ({"re": 1.5, "im": -2.0}, 1.5 - 2j),
    ],
)
def test_to_coeff_accepts_every_input_form(raw, expected):
    value = from_json(raw) if isinstance(raw, dict) else to_coeff(raw)
    assert value == expected
    assert type(value) is type(expected)


def test_booleans_and_garbage_are_rejected():
    with pytest.raises((TypeError, ValueError)):
        to_coeff("not a number")


@pytest.mark.parametrize("bad", [math.inf, -math.inf, math.nan, complex(math.nan, 0)])
def test_non_finite_floats_raise_range_error(bad):
    with pytest.raises(RangeError):
        to_coeff(bad)


def test_promotion_of_huge_rational_overflows_cleanly():
    with pytest.raises(RangeError):
        promote_to_complex(Fraction(10**400))


def test_log_abs_and_magnitude_survive_huge_integers():
    x = Fraction(10**400, 3)
    assert log_abs(x) == pytest.approx(400 * math.log(10) - math.log(3))
    assert magnitude(Fraction(-3, 4)) == 0.75


def test_near_equal_is_exact_for_rationals_and_tolerant_for_floats():
    assert near_equal(Fraction(1, 3), Fraction(1, 3))
    assert not near_equal(Fraction(1, 3), Fraction(1, 3) + Fraction(1, 10**30))
    assert near_equal(1.0, 1.0 + 1e-12)
    assert not near_equal(1.0, 1.0 + 1e-6)
    assert near_equal(Fraction(1, 3), 1 / 3)


def test_tolerance_env_override(monkeypatch):
    monkeypatch.setenv("CONVSEQ_TOL", "1e-3,1e-5")
    assert default_tolerances() == (1e-3, 1e-5)
    monkeypatch.setenv("CONVSEQ_TOL", "1e-4")
    assert default_tolerances()[0] == 1e-4
    monkeypatch.delenv("CONVSEQ_TOL")
    assert default_tolerances() == (1e-9, 1e-12)


def test_canonical_formatting():
    assert format_coeff(Fraction(6, 4)) == "3/2"
    assert format_coeff(Fraction(-2)) == "-2"
    assert format_coeff(0.1 + 0j) == "0.1"
    assert format_coeff(1 - 2.5j) == "1.0-2.5j"
    assert is_exact(Fraction(1)) and not is_exact(1j)


@given(st.fractions(max_denominator=10**6))
def test_json_round_trip_rationals(x):
    assert from_json(to_json(x)) == x


@given(st.complex_numbers(allow_nan=False, allow_infinity=False, max_magnitude=1e300))
def test_json_round_trip_complex(z):
    assert from_json(to_json(complex(z))) == complex(z)


@given(st.floats(-1e6, 1e6), st.floats(-1e6, 1e6))
def test_shortest_repr_round_trips(re, im):
    z = complex(re, im)
    text = format_coeff(z)
    assert complex(text.replace("+-", "-")) == z or cmath.isclose(complex(text), z, rel_tol=0, abs_tol=0)

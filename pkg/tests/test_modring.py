"""Ring of integers mod a pretender prime, witnesses, quotient polynomials."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vfactor.errors import ArityError
from vfactor.modring import (
    DivisionWitness,
    Factor,
    Modulus,
    QuotientPolyElement,
    TrivialAll,
    Unit,
    WitnessContext,
    gcd_extract,
    mod_div,
    quotient_add,
    quotient_div,
    quotient_mul,
    quotient_neg,
    quotient_poly_gcd,
    reduce_rational_mod,
)

C = 667  # 23 * 29
M667 = Modulus(C)


def test_modulus_validation():
    with pytest.raises(ValueError):
        Modulus(1)
    with pytest.raises(ValueError):
        Modulus(1 << 129)


def test_element_arithmetic_matches_ints():
    a, b = M667.element(600), M667.element(100)
    assert (a + b).value == 33
    assert (a - b).value == 500
    assert (a * b).value == 600 * 100 % C
    assert (a**3).value == pow(600, 3, C)
    assert (5 + a).value == 605
    assert bool(M667.element(0)) is False


def test_mixed_moduli_rejected():
    with pytest.raises(ArityError):
        M667.element(1) + Modulus(5).element(1)


def test_mod_div_unit_and_witness():
    ok = mod_div(10, 3, M667)
    assert ok.value * 3 % C == 10
    w = mod_div(1, 23, M667)
    assert isinstance(w, DivisionWitness)
    assert w.divisor == 23
    assert math.gcd(w.divisor, C) == 23


def test_gcd_extract_trichotomy():
    assert gcd_extract(5, C) == Unit()
    assert gcd_extract(0, C) == TrivialAll()
    assert gcd_extract(C, C) == TrivialAll()
    assert gcd_extract(46, C) == Factor(23)
    assert gcd_extract(M667.element(58), C) == Factor(29)


@given(st.integers(min_value=-10**6, max_value=10**6))
def test_gcd_extract_sound(v):
    cls = gcd_extract(v, C)
    g = math.gcd(abs(v) % C, C)
    if g == 1:
        assert cls == Unit()
    elif g == C:
        assert cls == TrivialAll()
    else:
        assert isinstance(cls, Factor)
        assert cls.f == g and 1 < cls.f < C and C % cls.f == 0


def test_reduce_rational_mod():
    e = reduce_rational_mod(Fraction(1, 3), M667)
    assert e.value * 3 % C == 1
    w = reduce_rational_mod(Fraction(5, 29), M667)
    assert isinstance(w, DivisionWitness)
    assert w.divisor == 29
    assert w.context is WitnessContext.RationalReduction


# ---------------------------------------------------------------------------
# quotient-ring polynomials mod X^2 + 1


PI = (1, 0, 1)  # X^2 + 1


def _q(coeffs, m=M667):
    return QuotientPolyElement(coeffs, m)


def test_quotient_element_normalization():
    e = _q([C + 3, 0, 0])
    assert e.coeffs == [3] and e.degree == 0
    assert _q([0]).is_zero


def test_gaussian_multiplication():
    # (a + bX)(c + dX) mod X^2+1 = (ac - bd) + (ad + bc) X
    a = _q([3, 4])
    b = _q([5, 6])
    prod = quotient_mul(a, b, PI)
    assert prod.coeffs == [(15 - 24) % C, (18 + 20) % C]


def test_quotient_add_neg():
    a = _q([1, 2])
    assert quotient_add(a, quotient_neg(a)).is_zero


def test_quotient_div_round_trip():
    a = _q([7, 11])
    b = _q([2, 3])  # norm 4 + 9 = 13, a unit mod 667
    q = quotient_div(a, b, PI)
    assert isinstance(q, QuotientPolyElement)
    assert quotient_mul(q, b, PI) == a


def test_quotient_div_witness_on_norm_factor():
    # 2 + 5X has norm 29, so division by it must surface a 29-witness
    out = quotient_div(_q([7, 11]), _q([2, 5]), PI)
    assert isinstance(out, DivisionWitness)
    assert math.gcd(out.divisor, C) == 29


def test_quotient_div_witness():
    # dividing by X - 230 fails: norm 230^2 + 1 = 52901 = 23 * 2300.04...
    # pick a divisor whose norm shares a factor with 667 instead
    b = _q([667 - 41, 1])  # X - 41; 41^2 + 1 = 1682 = 2 * 29^2
    out = quotient_div(_q([1]), b, PI)
    assert isinstance(out, DivisionWitness)
    assert math.gcd(out.divisor, C) > 1


@settings(max_examples=40)
@given(
    st.tuples(st.integers(0, C - 1), st.integers(0, C - 1)),
    st.tuples(st.integers(0, C - 1), st.integers(0, C - 1)),
)
def test_quotient_ring_commutes(u, v):
    a, b = _q(list(u)), _q(list(v))
    assert quotient_mul(a, b, PI) == quotient_mul(b, a, PI)
    assert quotient_add(a, b) == quotient_add(b, a)


def test_quotient_poly_gcd_zero_is_trivial():
    assert quotient_poly_gcd(_q([0, 0]), PI, M667) == TrivialAll()


def test_quotient_poly_gcd_euclid_factor():
    # m = tau - X with tau = 41: gcd(41^2 + 1, 667) = 29 surfaces on the
    # Euclid path (coefficients 41 and -1 are units mod 667)
    m = _q([41, C - 1])
    cls = quotient_poly_gcd(m, PI, M667)
    assert cls == Factor(29) or (
        isinstance(cls, DivisionWitness) and math.gcd(cls.divisor, C) == 29
    )


def test_quotient_poly_gcd_unit():
    m = _q([1, 1])  # norm 2, coprime to 667
    assert quotient_poly_gcd(m, PI, M667) == Unit()


@settings(max_examples=60)
@given(st.integers(0, 90))
def test_quotient_gcd_matches_direct_norm_gcd(tau):
    """Against Z_91 and m = tau - X: the Euclid remainder chain bottoms out
    at the constant tau^2 + 1, so the classification must match gcd
    arithmetic done directly on integers."""
    m91 = Modulus(91)
    m = QuotientPolyElement([tau, 90], m91)
    out = quotient_poly_gcd(m, PI, m91)
    norm_g = math.gcd(tau * tau + 1, 91)
    coef_g = [g for g in (math.gcd(tau, 91),) if g > 1]
    if isinstance(out, DivisionWitness):
        assert math.gcd(out.divisor, 91) > 1
    elif isinstance(out, Factor):
        assert out.f in (7, 13)
        assert norm_g > 1 or coef_g
    elif isinstance(out, TrivialAll):
        assert norm_g == 91 or tau % 91 == 0
    else:
        assert norm_g == 1

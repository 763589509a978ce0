"""Triangular maps: evaluation, membership, Gaussian form, enumeration."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import run_stages_mod
from vfactor.errors import ArityError, IndependenceViolation, ZeroPivot
from vfactor.exact_arith import SparsePoly, make_vector
from vfactor.modring import Modulus
from vfactor.variety import (
    PointSet,
    TriangularMap,
    enumerate_quadratic_zeros,
    eval_triangular,
    verify_gaussian_form,
    verify_membership,
)


def _identity_map():
    """n=2, M=1: P1 = x1 - x2 (N1 = x2, D1 = 1), P0 = x1."""
    n1 = SparsePoly(2, {(0, 1): 1})
    d1 = SparsePoly(2, {(0, 0): 1})
    p0 = SparsePoly(2, {(1, 0): 1})
    return TriangularMap(n=2, M=1, order=(1, 2), stages=[(n1, d1)], P0=p0)


def test_map_validation():
    n1 = SparsePoly(2, {(0, 1): 1})
    d1 = SparsePoly(2, {(0, 0): 1})
    p0 = SparsePoly(2, {(1, 0): 1})
    with pytest.raises(ArityError):
        TriangularMap(n=2, M=2, order=(1, 2), stages=[(n1, d1)], P0=p0)
    with pytest.raises(ArityError):
        TriangularMap(n=2, M=1, order=(1, 1), stages=[(n1, d1)], P0=p0)
    with pytest.raises(ZeroPivot):
        TriangularMap(
            n=2, M=1, order=(1, 2), stages=[(n1, SparsePoly(2))], P0=p0
        )


def test_identity_chain_value():
    out = eval_triangular(_identity_map(), [Fraction(5)])
    assert out.kind == "RationalValue" and out.value == 5


def test_eval_arity_error():
    with pytest.raises(ArityError):
        eval_triangular(_identity_map(), [Fraction(1), Fraction(2)])


def test_n4_root_gives_zero(n4_bundle):
    _, tmap, closed = n4_bundle
    out = eval_triangular(tmap, [closed.taus[0]])
    assert out.kind == "RationalValue" and out.value == 0


def test_n4_witness_path_mod_667(n4_bundle):
    """tau with Q1(tau) = 8427 tau + 9430 divisible by 23 must witness at
    the x3 stage over Z_667."""
    _, tmap, _ = n4_bundle
    tau = next(
        t for t in range(667) if (8427 * t + 9430) % 23 == 0 and (8427 * t + 9430) % 29
    )
    out = eval_triangular(tmap, [tau], Modulus(667))
    assert out.kind == "Witness"
    assert out.trace_stage == 3
    assert math.gcd(out.witness.divisor, 667) == 23


def test_map_json_round_trip(n4_bundle):
    _, tmap, _ = n4_bundle
    back = TriangularMap.from_json(tmap.to_json())
    assert back.n == tmap.n and back.M == tmap.M and back.order == tmap.order
    assert back.P0 == tmap.P0
    assert back.stages == tmap.stages


@settings(max_examples=50)
@given(st.integers(0, 666))
def test_eval_matches_plain_integer_oracle(n4_bundle, tau):
    """Modular evaluation against the Fermat-inverse reimplementation, per
    prime."""
    _, tmap, _ = n4_bundle
    for p in (23, 29):
        expected = run_stages_mod(tmap, [tau], p)
        got = eval_triangular(tmap, [tau], Modulus(p))
        if expected[0] == "witness":
            assert got.kind == "Witness" and got.trace_stage == expected[1]
        else:
            assert got.kind == "Value" and got.value.value == expected[1]


@settings(max_examples=30)
@given(st.fractions(min_value=-50, max_value=50, max_denominator=20))
def test_ring_homomorphism_consistency(n4_bundle, tau):
    """Evaluate over Q then reduce mod p == evaluate the reduced map,
    whenever no denominator (stage or rational) vanishes."""
    _, tmap, _ = n4_bundle
    p = 1009
    rational = eval_triangular(tmap, [tau])
    if rational.kind != "RationalValue":
        return
    if tau.denominator % p == 0 or rational.value.denominator % p == 0:
        return
    modular = eval_triangular(
        tmap, [tau.numerator * pow(tau.denominator, p - 2, p) % p], Modulus(p)
    )
    if modular.kind == "Witness":
        return  # a stage denominator vanished only in reduction
    v = rational.value
    assert modular.value.value == v.numerator * pow(v.denominator, p - 2, p) % p


@settings(max_examples=25)
@given(st.integers(2, 10**6))
def test_witness_soundness(n4_bundle, c):
    """Any witness surfaced over Z_c shares a factor with c (or is zero)."""
    if c in (0, 1):
        return
    _, tmap, _ = n4_bundle
    for tau in range(0, min(c, 40)):
        out = eval_triangular(tmap, [tau], Modulus(c))
        if out.kind == "Witness":
            d = out.witness.divisor % c
            assert d == 0 or math.gcd(d, c) > 1


# ---------------------------------------------------------------------------
# Gaussian form


def test_gaussian_form_flags_quadratic_pivot():
    p1 = SparsePoly(2, {(1, 1): 1, (0, 0): -1})  # x1 x2 - 1
    p2 = SparsePoly(2, {(0, 2): 1})  # x2^2: nonlinear pivot
    rep = verify_gaussian_form([p1, p2])
    assert not rep.ok
    assert (2, 2) in rep.violations


def test_gaussian_form_flags_early_variable():
    p1 = SparsePoly(2, {(1, 0): 1})
    p2 = SparsePoly(2, {(1, 0): 1, (0, 1): 1})  # sees x1
    rep = verify_gaussian_form([p1, p2])
    assert not rep.ok and (2, 1) in rep.violations


def test_gaussian_form_passes_n4(n4_bundle):
    model, _, _ = n4_bundle
    polys = [model.reconstruct_poly(l) for l in range(1, 4)]
    rep = verify_gaussian_form(polys)
    assert rep.ok and rep.pairs is not None and len(rep.pairs) == 3


# ---------------------------------------------------------------------------
# enumeration and membership


def test_enumerate_unit_square():
    class Toy:
        n = 2
        a_forms = [make_vector([1, 0, 0]), make_vector([0, 1, 0])]
        b_forms = [make_vector([1, 0, -1]), make_vector([0, 1, -1])]

    pts = enumerate_quadratic_zeros(Toy())
    got = {p[:2] for p in pts.points}
    f = Fraction
    assert got == {(f(0), f(0)), (f(0), f(1)), (f(1), f(0)), (f(1), f(1))}


def test_enumerate_duplicate_form_violation():
    class Bad:
        n = 2
        a_forms = [make_vector([1, 0, 0]), make_vector([1, 0, 0])]
        b_forms = [make_vector([1, 0, 0]), make_vector([0, 1, -1])]

    with pytest.raises(IndependenceViolation):
        enumerate_quadratic_zeros(Bad())


def test_n4_points_x4_are_roots(n4_bundle):
    model, tmap, closed = n4_bundle
    pts = enumerate_quadratic_zeros(model)
    assert len(pts) == 16
    assert {p[3] for p in pts.points} == set(closed.taus)
    rep = verify_membership(tmap, pts)
    assert rep.ok and rep.checked == 16


def test_membership_catches_off_point(n4_bundle):
    model, tmap, _ = n4_bundle
    pts = enumerate_quadratic_zeros(model)
    moved = list(pts.points[0])
    moved[0] += 1
    rep = verify_membership(tmap, PointSet(points=[tuple(moved)]))
    assert not rep.ok
    assert rep.failures and rep.failures[0][0] == 0


def test_pointset_json_round_trip(n4_bundle):
    model, _, _ = n4_bundle
    pts = enumerate_quadratic_zeros(model)
    back = PointSet.from_json(pts.to_json())
    assert back.points == pts.points

"""Exact arithmetic: rationals, sparse polynomials, linear algebra."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import barycentric_weights
from vfactor.errors import ArityError, DegenerateNodes
from vfactor.exact_arith import (
    SparsePoly,
    form_eval,
    format_rational,
    make_vector,
    matrix_rank,
    nullspace_basis,
    parse_rational,
    poly_from_form,
    rref,
    solve_square,
    vandermonde_nullspace,
)

rationals = st.fractions(
    min_value=-100, max_value=100, max_denominator=50
)


def test_parse_format_round_trip():
    for text in ("3", "-7/2", "0", "22/7"):
        assert format_rational(parse_rational(text)) == text


def test_parse_rejects_junk():
    with pytest.raises(ValueError):
        parse_rational("two thirds")


@given(rationals)
def test_format_parse_inverse(q):
    assert parse_rational(format_rational(q)) == q


def test_form_eval_constant_last():
    v = make_vector([1, 2, 5])  # x1 + 2 x2 + 5
    assert form_eval(v, [Fraction(1), Fraction(-3)]) == 0


def test_form_eval_arity():
    with pytest.raises(ArityError):
        form_eval(make_vector([1, 2]), [Fraction(0), Fraction(0)])


# ---------------------------------------------------------------------------
# sparse polynomials


def _xy_poly():
    # x1^2 x2 - 3 x2 + 1/2
    return SparsePoly(
        2, {(2, 1): Fraction(1), (0, 1): Fraction(-3), (0, 0): Fraction(1, 2)}
    )


def test_poly_evaluate():
    p = _xy_poly()
    assert p.evaluate([Fraction(2), Fraction(3)]) == 12 - 9 + Fraction(1, 2)


def test_poly_degree_in_is_one_based():
    p = _xy_poly()
    assert p.degree_in(1) == 2
    assert p.degree_in(2) == 1


def test_poly_partial_derivative():
    p = _xy_poly()
    dp = p.partial(1)  # 2 x1 x2
    assert dp.evaluate([Fraction(5), Fraction(7)]) == 70


def test_poly_set_var_substitution():
    p = _xy_poly()
    q = p.set_var(1, Fraction(0))
    assert q.evaluate([Fraction(99), Fraction(4)]) == -12 + Fraction(1, 2)


def test_poly_from_form_matches_form_eval():
    v = make_vector([2, -1, 7])
    p = poly_from_form(v, 2)
    pt = [Fraction(3), Fraction(5)]
    assert p.evaluate(pt) == form_eval(v, pt)


def test_poly_json_round_trip():
    p = _xy_poly()
    assert SparsePoly.from_json(p.to_json()) == p


@st.composite
def sparse_polys(draw, nvars=2, max_terms=4):
    entries = []
    for _ in range(draw(st.integers(0, max_terms))):
        exp = tuple(draw(st.integers(0, 3)) for _ in range(nvars))
        entries.append((exp, draw(rationals)))
    return SparsePoly(nvars, entries)


@settings(max_examples=60)
@given(sparse_polys(), sparse_polys(), sparse_polys())
def test_poly_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c


@settings(max_examples=40)
@given(sparse_polys(), sparse_polys())
def test_poly_eval_is_homomorphism(a, b):
    pt = [Fraction(2, 3), Fraction(-5)]
    assert (a * b).evaluate(pt) == a.evaluate(pt) * b.evaluate(pt)
    assert (a + b).evaluate(pt) == a.evaluate(pt) + b.evaluate(pt)


# ---------------------------------------------------------------------------
# linear algebra


def test_rref_hand_case():
    rows = [
        [Fraction(2), Fraction(4), Fraction(6)],
        [Fraction(1), Fraction(3), Fraction(5)],
    ]
    red, piv = rref(rows)
    assert piv == [0, 1]
    assert red[0] == [Fraction(1), Fraction(0), Fraction(-1)]
    assert red[1] == [Fraction(0), Fraction(1), Fraction(2)]


def test_rref_idempotent():
    rows = [
        [Fraction(1), Fraction(2), Fraction(0)],
        [Fraction(0), Fraction(0), Fraction(3)],
        [Fraction(2), Fraction(4), Fraction(3)],
    ]
    once, piv1 = rref(rows)
    twice, piv2 = rref(once)
    assert once == twice and piv1 == piv2


def test_solve_square_and_singular():
    rows = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(1)]]
    sol = solve_square(rows, [Fraction(5), Fraction(3)])
    assert sol == [Fraction(2), Fraction(1)]
    singular = [[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]
    assert solve_square(singular, [Fraction(1), Fraction(1)]) is None


def test_nullspace_is_annihilated():
    rows = [[Fraction(1), Fraction(2), Fraction(3)]]
    basis = nullspace_basis(rows, 3)
    assert len(basis) == 2
    for v in basis:
        assert sum(a * b for a, b in zip(rows[0], v)) == 0


def test_matrix_rank():
    assert matrix_rank([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]) == 1
    assert matrix_rank([]) == 0


# ---------------------------------------------------------------------------
# Vandermonde nullspace vs the closed form


def test_vandermonde_weights_match_closed_form():
    nodes = [Fraction(1, 3), Fraction(1, 9), Fraction(-1, 19), Fraction(-5, 33)]
    vec = vandermonde_nullspace(nodes)
    ws = barycentric_weights(nodes)
    ratio = vec[0] / ws[0]
    assert ratio != 0
    assert all(vec[i] == ratio * ws[i] for i in range(len(nodes)))


@settings(max_examples=30)
@given(st.lists(rationals, min_size=2, max_size=6, unique=True))
def test_vandermonde_annihilates_powers(nodes):
    vec = vandermonde_nullspace(nodes)
    for k in range(len(nodes) - 1):
        assert sum(w * c**k for w, c in zip(vec, nodes)) == 0


def test_vandermonde_rejects_collisions():
    with pytest.raises(DegenerateNodes):
        vandermonde_nullspace([Fraction(1), Fraction(1), Fraction(2)])

"""Constructors for the concrete variety families.

Three builders live here. build_example_n4 transcribes the printed
4-variable example literally (every coefficient as published) and recovers
its quadratic model from the 16 points. build_half_family realizes the
even-dimension family with M = n/2 - 1 parameters from structure
constants; build_third_family realizes the n = 3*n1 + 1 family with
M = n1. Both randomized builders verify their output exhaustively before
returning it and resample the free choices on any degeneracy.

Everything is exact. Randomness only enters through the completion of
unconstrained columns, driven by random.Random(seed), so identical inputs
and seed give bit-identical results.
"""

from __future__ import annotations

import functools
import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    ArityError,
    DegenerateNodes,
    IndependenceViolation,
    NondegeneracyExhausted,
    ZeroPivot,
)
from .exact_arith import (
    SparsePoly,
    as_rational,
    format_rational,
    make_vector,
    nullspace_basis,
    parse_rational,
    poly_from_form,
    rref,
    vandermonde_nullspace,
)
from .variety import (
    PointSet,
    TriangularMap,
    enumerate_quadratic_zeros,
    verify_membership,
)

COMPLETION_BOUND = 20  # |entry| cap for random completions
MAX_ATTEMPTS = 50


# ---------------------------------------------------------------------------
# model and structure-constant records


@dataclass
class QuadraticModel:
    """A family of quadrics P_l = sum_i coef[l][i] * a_i * b_i.

    Forms live in the original variable frame; row 0 of coef_matrix belongs
    to P0 and row l >= 1 to stage l of the companion triangular map.
    """

    n: int
    M: int
    a_forms: list  # n Vectors of length n+1
    b_forms: list
    coef_matrix: list  # (n - M + 1) rows of n rationals

    def reconstruct_poly(self, l: int) -> SparsePoly:
        """P_l in the original frame, straight from forms and row l."""
        acc = SparsePoly(self.n)
        row = self.coef_matrix[l]
        for i in range(self.n):
            if not row[i]:
                continue
            prod = poly_from_form(self.a_forms[i], self.n) * poly_from_form(
                self.b_forms[i], self.n
            )
            acc = acc + prod.scale(row[i])
        return acc

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "M": self.M,
            "aForms": [[format_rational(c) for c in f] for f in self.a_forms],
            "bForms": [[format_rational(c) for c in f] for f in self.b_forms],
            "coefMatrix": [
                [format_rational(c) for c in row] for row in self.coef_matrix
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "QuadraticModel":
        return cls(
            n=data["n"],
            M=data["M"],
            a_forms=[make_vector(f) for f in data["aForms"]],
            b_forms=[make_vector(f) for f in data["bForms"]],
            coef_matrix=[
                [parse_rational(c) for c in row] for row in data["coefMatrix"]
            ],
        )


@dataclass
class StructureConstants:
    """Solution of the boxed product system.

    Identities (all exact, all i):
        Aprime_i * Bprime_i = (k0 + k1 c_i) W_i
        Adbl_i * Bdbl_i = (r0 + r1 c_i) W_i
        Aprime_i * Bdbl_i + Adbl_i * Bprime_i = s0 W_i
    with s1 fixed to 0, plus sum_i c_i^(k-1) W_i = 0 for k = 1..n-1.
    """

    cs: list
    ws: list
    a_prime: list
    a_dbl: list
    b_prime: list
    b_dbl: list
    params: tuple  # (k0, k1, r0, r1, s0)

    def verify(self) -> None:
        k0, k1, r0, r1, s0 = self.params
        n = len(self.cs)
        for i in range(n):
            assert self.a_prime[i] * self.b_prime[i] == (k0 + k1 * self.cs[i]) * self.ws[i]
            assert self.a_dbl[i] * self.b_dbl[i] == (r0 + r1 * self.cs[i]) * self.ws[i]
            assert (
                self.a_prime[i] * self.b_dbl[i] + self.a_dbl[i] * self.b_prime[i]
                == s0 * self.ws[i]
            )
        for k in range(1, n):
            assert sum(self.cs[i] ** (k - 1) * self.ws[i] for i in range(n)) == 0

    def to_json(self) -> dict:
        fmt = lambda xs: [format_rational(x) for x in xs]
        return {
            "cs": fmt(self.cs),
            "Ws": fmt(self.ws),
            "Aprime": fmt(self.a_prime),
            "Adbl": fmt(self.a_dbl),
            "Bprime": fmt(self.b_prime),
            "Bdbl": fmt(self.b_dbl),
            "params": fmt(list(self.params)),
        }


def solve_structure_constants(
    n: int,
    a_prime: Sequence,
    a_dbl: Sequence,
    params: Sequence,
) -> StructureConstants:
    """Solve the three product equations for c, W, B', B''.

    Eliminating B' and B'' from the system leaves a condition linear in
    c_i whose solution is

        c_i = (s0 A'_i A''_i - r0 A'_i^2 - k0 A''_i^2)
              / (r1 A'_i^2 + k1 A''_i^2 - s1 A'_i A''_i),   s1 = 0.

    The returned record satisfies all three identities exactly; W comes
    from the Vandermonde nullspace of the c_i.
    """
    if n % 2 or n < 4:
        raise ArityError(f"n must be even and at least 4, got {n}")
    ap = [as_rational(x) for x in a_prime]
    ad = [as_rational(x) for x in a_dbl]
    if len(ap) != n or len(ad) != n:
        raise ArityError("A' and A'' must both have length n")
    k0, k1, r0, r1, s0 = (as_rational(x) for x in params)
    if not k1:
        raise ZeroPivot("k1 must be nonzero")
    for i in range(n):
        if not ap[i] or not ad[i]:
            raise ZeroPivot(f"A entries must be nonzero (index {i + 1})")
    cs = []
    for i in range(n):
        den = r1 * ap[i] ** 2 + k1 * ad[i] ** 2
        if not den:
            raise ZeroPivot(f"degenerate parameter combination at index {i + 1}")
        cs.append((s0 * ap[i] * ad[i] - r0 * ap[i] ** 2 - k0 * ad[i] ** 2) / den)
    ws = vandermonde_nullspace(cs)  # raises DegenerateNodes on collision
    bp = [(k0 + k1 * cs[i]) * ws[i] / ap[i] for i in range(n)]
    bd = [(r0 + r1 * cs[i]) * ws[i] / ad[i] for i in range(n)]
    out = StructureConstants(
        cs=cs, ws=ws, a_prime=ap, a_dbl=ad, b_prime=bp, b_dbl=bd,
        params=(k0, k1, r0, r1, s0),
    )
    out.verify()
    return out


# ---------------------------------------------------------------------------
# the printed 4-variable example


@dataclass
class ClosedFormN4:
    """The closed-form data for the 4-variable example: the 16 parameter
    roots and the three stage-denominator polynomials Q1, Q2, Q3 (univariate
    in the parameter)."""

    taus: tuple
    q_polys: tuple  # three univariate SparsePoly

    def ratio(self, tau: Fraction) -> Optional[Fraction]:
        """prod_k (tau - tau_k) / (Q1 Q2 Q3)^2, or None at a pole."""
        qs = [q.evaluate([tau]) for q in self.q_polys]
        if any(v == 0 for v in qs):
            return None
        num = Fraction(1)
        for tk in self.taus:
            num *= tau - tk
        den = Fraction(1)
        for v in qs:
            den *= v * v
        return num / den


def _n4_polys() -> tuple:
    """The four published polynomials, composed exactly as printed."""
    x1, x2, x3, x4 = (
        SparsePoly(4, {tuple(1 if j == i else 0 for j in range(4)): 1})
        for i in range(4)
    )
    const = lambda v: SparsePoly(4, {(0, 0, 0, 0): v})

    p3 = (x3 * (x4.scale(8427) + const(9430))).scale(5) - (
        x4.scale(3) * (x4.scale(393) + const(880)) + const(1478)
    ).scale(209)

    p2 = (
        (x3 * x3).scale(5538425)
        + ((x2.scale(1445) + x4.scale(5718) + const(6421)) * x3).scale(18810)
        - (x4.scale(3) * (x4.scale(267) + const(598)) + const(1004)).scale(786258)
    )

    p1 = (
        x3.scale(205346285) - (x4.scale(63526809) + const(35594957)).scale(38)
    ).scale(2299) - (
        (x2 * x2).scale(-2045057058)
        + (x2.scale(1630827) * (x3.scale(1813) + x4.scale(1254)))
        + (x3 * x3).scale(2891872832)
        + (x4 * x4).scale(495958966272)
        + (x1 * (x2.scale(1254) - x3.scale(1429) - const(418))).scale(4892481)
        + (x3 * x4).scale(-87093628743)
    ).scale(5)

    a_form = x1.scale(627) + x2.scale(627) - x3.scale(46) + x4.scale(1881) + const(1881)
    b_form = (
        x1.scale(5016)
        + x2.scale(6270)
        + x3.scale(2555)
        - x4.scale(15048)
        - const(18810)
    )
    p0 = a_form * b_form
    return p0, p1, p2, p3


_N4_TAUS = tuple(
    Fraction(a, b)
    for a, b in [
        (-86, 69), (-800, 681), (-122, 105), (-3166, 2775),
        (-140, 123), (-718, 633), (-2452, 2163), (-5558, 4929),
        (-2578, 2289), (-152, 135), (-1070, 951), (-3932, 3507),
        (-158, 141), (-2072, 1851), (-1142, 1023), (-218, 201),
    ]
)


def _n4_q_polys() -> tuple:
    t = SparsePoly(1, {(1,): 1})
    one = lambda v: SparsePoly(1, {(0,): v})
    q1 = t.scale(8427) + one(9430)
    q2 = t.scale(3) * (t.scale(393) + one(880)) + one(1478)
    q3 = (
        t.scale(3)
        * (
            t.scale(9)
            * (t.scale(7) * (t.scale(5367293625) + one(24273841402)) + one(288165964484))
            + one(1954792734568)
        )
        + one(1657527934720)
    )
    return q1, q2, q3


def _stage_split(p: SparsePoly, k: int) -> tuple:
    """P = x_k * D - N with both parts free of x_k; returns (N, D)."""
    if p.degree_in(k) != 1:
        raise ZeroPivot(f"polynomial is not linear in x{k}")
    d = p.partial(k)
    n = p.set_var(k, 0).scale(-1)
    return n, d


def _primitive_form(v: Sequence[Fraction]) -> tuple:
    """Scale a rational vector to a primitive integer vector, first nonzero
    entry positive. Canonical representative of the hyperplane."""
    den_lcm = 1
    for x in v:
        den_lcm = den_lcm * x.denominator // _gcd(den_lcm, x.denominator)
    ints = [int(x * den_lcm) for x in v]
    g = 0
    for x in ints:
        g = _gcd(g, abs(x))
    if g:
        ints = [x // g for x in ints]
    lead = next((x for x in ints if x), 0)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(Fraction(x) for x in ints)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _recover_n4_model(tmap: TriangularMap, polys: tuple) -> QuadraticModel:
    """Reconstruct the quadratic model behind the printed polynomials.

    The 16 points split across hyperplanes: each of the 8 linear forms
    vanishes on exactly 8 points, and the forms pair up so that each pair
    covers all 16 between them. Scanning 4-point subsets finds all 8
    planes; solving P_l = sum_i u_i (a_i b_i) afterwards gives the exact
    coefficient rows. Deterministic: forms are content-normalized and
    sorted, so repeat calls agree bit for bit.
    """
    p0 = polys[0]
    points = []
    for t in _N4_TAUS:
        xs = [Fraction(0)] * 4
        xs[3] = t
        for k in (3, 2, 1):
            nk, dk = tmap.stages[k - 1]
            xs[k - 1] = nk.evaluate(xs) / dk.evaluate(xs)
        assert p0.evaluate(xs) == 0, f"parameter {t} misses the zero set"
        points.append(tuple(xs) + (Fraction(1),))
    assert len(set(points)) == 16

    planes = {}
    for quad in itertools.combinations(range(16), 4):
        basis = nullspace_basis([points[i] for i in quad], 5)
        if len(basis) != 1:
            continue
        v = _primitive_form(basis[0])
        if v in planes:
            continue
        incident = frozenset(
            i
            for i in range(16)
            if sum(a * b for a, b in zip(v, points[i])) == 0
        )
        if len(incident) == 8:
            planes[v] = incident
    assert len(planes) == 8, f"expected 8 planes, found {len(planes)}"

    ordered = sorted(planes)
    paired = []
    used = set()
    full = frozenset(range(16))
    for v in ordered:
        if v in used:
            continue
        mate = next(
            w for w in ordered if w not in used and w != v and planes[w] == full - planes[v]
        )
        used.add(v)
        used.add(mate)
        paired.append((v, mate) if v < mate else (mate, v))
    assert len(paired) == 4
    paired.sort()

    a_forms = [make_vector(p[0]) for p in paired]
    b_forms = [make_vector(p[1]) for p in paired]
    prods = [
        poly_from_form(a, 4) * poly_from_form(b, 4)
        for a, b in zip(a_forms, b_forms)
    ]

    def solve_row(target: SparsePoly) -> list:
        monos = sorted(
            set(e for p in prods for e, _ in p.terms())
            | set(e for e, _ in target.terms())
        )
        rows = [
            [p.coefficient(m) for p in prods] + [target.coefficient(m)]
            for m in monos
        ]
        red, piv = rref(rows)
        u = [Fraction(0)] * 4
        for r, pc in zip(red, piv):
            assert pc < 4, "inconsistent hyperplane decomposition"
            u[pc] = r[4]
        rec = SparsePoly(4)
        for i in range(4):
            rec = rec + prods[i].scale(u[i])
        assert rec == target
        return u

    coef_matrix = [solve_row(p) for p in polys]
    return QuadraticModel(
        n=4, M=1, a_forms=a_forms, b_forms=b_forms, coef_matrix=coef_matrix
    )


@functools.lru_cache(maxsize=1)
def build_example_n4() -> tuple:
    """The published 4-variable fixture: (QuadraticModel, TriangularMap,
    ClosedFormN4). Transcribed coefficients, recovered model, cached."""
    p0, p1, p2, p3 = _n4_polys()
    stages = [_stage_split(p, k) for k, p in ((1, p1), (2, p2), (3, p3))]
    tmap = TriangularMap(n=4, M=1, order=(1, 2, 3, 4), stages=stages, P0=p0)
    model = _recover_n4_model(tmap, (p0, p1, p2, p3))
    closed = ClosedFormN4(taus=_N4_TAUS, q_polys=_n4_q_polys())
    return model, tmap, closed


# ---------------------------------------------------------------------------
# randomized family builders


def _permute_poly(p: SparsePoly, order: Sequence[int]) -> SparsePoly:
    """Rename variables so frame position j holds original variable
    order[j-1]."""
    terms = {}
    for exp, c in p.terms():
        terms[tuple(exp[order[j] - 1] for j in range(len(order)))] = c
    return SparsePoly(p.nvars, terms)


def _weight_rows(weight_pairs: Sequence, n: int) -> list:
    """Constraint rows acting on stacked columns (a | b): each pair of
    weights (wa, wb) contributes the row [wb | wa], so that
    row . (a, b) = sum_i wb_i a_i + wa_i b_i."""
    return [list(wb) + list(wa) for wa, wb in weight_pairs]


def _rand_combo(rng: random.Random, basis: list) -> list:
    ncols = len(basis[0])
    while True:
        ks = [rng.randint(-COMPLETION_BOUND, COMPLETION_BOUND) for _ in basis]
        v = [sum(k * b[j] for k, b in zip(ks, basis)) for j in range(ncols)]
        if any(v):
            return v


def _assemble_forms(n: int, cols: list) -> tuple:
    """Columns j = 0..n hold the coefficient pairs (a-part, b-part) of
    variable x_{j+1} (column n is the affine constant). Returns the 2n
    forms as Vectors."""
    a_forms = [make_vector(cols[j][0][i] for j in range(n + 1)) for i in range(n)]
    b_forms = [make_vector(cols[j][1][i] for j in range(n + 1)) for i in range(n)]
    return a_forms, b_forms


def _stage_polys_from_rows(
    model: QuadraticModel, nrows: int
) -> list:
    return [model.reconstruct_poly(l) for l in range(1, nrows + 1)]


def _verify_and_pack(
    n: int,
    M: int,
    order: Sequence[int],
    model: QuadraticModel,
) -> tuple:
    """Shared verification: triangular shape, 2^n distinct points, exact
    membership. Returns (points, TriangularMap) or raises ValueError with
    the failure reason (caller resamples)."""
    order = tuple(order)
    stage_polys = _stage_polys_from_rows(model, n - M)
    stages = []
    for j, poly in enumerate(stage_polys, start=1):
        permuted = _permute_poly(poly, order)
        if permuted.degree_in(j) != 1:
            raise ValueError(f"stage {j} not linear in its pivot")
        early = permuted.variables_used() & set(range(1, j))
        if early:
            raise ValueError(f"stage {j} touches earlier pivots {sorted(early)}")
        stages.append(_stage_split(permuted, j))
    p0 = _permute_poly(model.reconstruct_poly(0), order)
    tmap = TriangularMap(n=n, M=M, order=order, stages=stages, P0=p0)

    pts = enumerate_quadratic_zeros(model)  # IndependenceViolation on failure
    report = verify_membership(tmap, pts)
    if not report.ok:
        idx, reason = report.failures[0]
        raise ValueError(f"membership failed at point {idx}: {reason}")
    return pts, tmap


def build_half_family(
    n: int,
    seed: int = 0,
    a_prime: Optional[Sequence] = None,
    a_dbl: Optional[Sequence] = None,
    params: Optional[Sequence] = None,
) -> tuple:
    """Even-dimension family with M = n/2 - 1 parameters.

    Derivative prescriptions: the first h-1 variables carry powers of c on
    the primed block, the next h-1 on the double-primed block; one column
    is forced to satisfy the quadratic constraint q = 0 exactly, the
    variable x_n is the prescribed c^(h-1) double-primed column, and the
    affine column is a random nullspace completion. n = 4 is refused: the
    M = 1 slot of this family provably has no member beyond the published
    4-variable example, which build_example_n4 serves.
    """
    if n == 4:
        raise ArityError(
            "n = 4 has no half-family member; the fixture covers M = 1"
        )
    if n < 6 or n % 2:
        raise ArityError(f"n must be even and at least 6, got {n}")
    h = n // 2
    sc = solve_structure_constants(
        n,
        a_prime if a_prime is not None else list(range(1, n + 1)),
        a_dbl if a_dbl is not None else [1] * n,
        params if params is not None else (1, 1, 1, 2, 3),
    )
    cs, ws = sc.cs, sc.ws
    ap, bp, ad, bd = sc.a_prime, sc.b_prime, sc.a_dbl, sc.b_dbl
    for c in cs:
        if c == -1:
            raise DegenerateNodes(0, 0, c)  # e-row 1/(1+c) undefined

    col_p = lambda k: (
        [cs[i] ** (k - 1) * ap[i] for i in range(n)],
        [cs[i] ** (k - 1) * bp[i] for i in range(n)],
    )
    col_d = lambda k: (
        [cs[i] ** (k - 1) * ad[i] for i in range(n)],
        [cs[i] ** (k - 1) * bd[i] for i in range(n)],
    )

    weight_pairs = [
        ([cs[i] ** m * ap[i] for i in range(n)], [cs[i] ** m * bp[i] for i in range(n)])
        for m in range(h)
    ] + [
        ([cs[i] ** m * ad[i] for i in range(n)], [cs[i] ** m * bd[i] for i in range(n)])
        for m in range(h - 1)
    ]
    rows = _weight_rows(weight_pairs, n)
    basis = nullspace_basis(rows, 2 * n)
    assert len(basis) == n + 1, f"nullspace dimension {len(basis)}, expected {n + 1}"
    za_basis = nullspace_basis([r[:n] for r in rows], n)
    assert len(za_basis) == 1
    za = za_basis[0]

    e_row = [1 / (1 + cs[i]) for i in range(n)]
    coef_rows = (
        [e_row]
        + [[cs[i] ** (h - s) for i in range(n)] for s in range(1, h)]
        + [[Fraction(1)] * n]
    )
    order = [1] + list(range(h, n - 1)) + [n - 1] + list(range(2, h)) + [n]
    M = h - 1

    rng = random.Random(seed)
    last_reason = "no attempt made"
    for attempt in range(MAX_ATTEMPTS):
        w = _rand_combo(rng, basis)
        wa, wb = w[:n], w[n:]
        dot = sum(za[i] * wb[i] for i in range(n))
        if dot == 0:
            last_reason = "forced column direction degenerate"
            continue
        t = -sum(wa[i] * wb[i] for i in range(n)) / dot
        forced = ([wa[i] + t * za[i] for i in range(n)], wb)
        aff = _rand_combo(rng, basis)

        cols = [None] * (n + 1)
        for k in range(1, h):
            cols[k - 1] = col_p(k)
        for k in range(1, h):
            cols[h - 2 + k] = col_d(k)
        cols[n - 2] = forced
        cols[n - 1] = col_d(h)
        cols[n] = (aff[:n], aff[n:])

        a_forms, b_forms = _assemble_forms(n, cols)
        model = QuadraticModel(
            n=n,
            M=M,
            a_forms=a_forms,
            b_forms=b_forms,
            coef_matrix=[_indicator_row(n)] + coef_rows,
        )
        try:
            pts, tmap = _verify_and_pack(n, M, order, model)
        except (ValueError, IndependenceViolation) as exc:
            last_reason = str(exc)
            continue
        return model, tmap
    raise NondegeneracyExhausted(MAX_ATTEMPTS, last_reason)


def _indicator_row(n: int) -> list:
    return [Fraction(1)] + [Fraction(0)] * (n - 1)


def build_third_family(
    n: int,
    seed: int = 0,
    a_vals: Optional[Sequence] = None,
    abar_vals: Optional[Sequence] = None,
) -> tuple:
    """Family with M = n1 = (n-1)/3 parameters, n = 3*n1 + 1.

    The product system A B = W, Abar Bbar = W, A Bbar + Abar B = 2 c W
    fixes c_i = (A_i^2 + Abar_i^2) / (2 A_i Abar_i); the constraint rows
    mix n1 unbarred and 2*n1 barred power blocks, summed over all n
    indices. The first 2*n1 + 1 stage polynomials come out triangular in
    the natural variable order.
    """
    if n < 7 or n % 3 != 1:
        raise ArityError(f"n must be 1 mod 3 and at least 7, got {n}")
    n1 = (n - 1) // 3
    avals = [as_rational(x) for x in (a_vals if a_vals is not None else range(1, n + 1))]
    abars = [as_rational(x) for x in (abar_vals if abar_vals is not None else [1] * n)]
    if len(avals) != n or len(abars) != n:
        raise ArityError("A and Abar must both have length n")
    for i in range(n):
        if not avals[i] or not abars[i]:
            raise ZeroPivot(f"A entries must be nonzero (index {i + 1})")
    cs = [
        (avals[i] ** 2 + abars[i] ** 2) / (2 * avals[i] * abars[i]) for i in range(n)
    ]
    ws = vandermonde_nullspace(cs)
    b = [ws[i] / avals[i] for i in range(n)]
    bb = [ws[i] / abars[i] for i in range(n)]
    for i in range(n):
        assert avals[i] * b[i] == ws[i] and abars[i] * bb[i] == ws[i]
        assert avals[i] * bb[i] + abars[i] * b[i] == 2 * cs[i] * ws[i]

    weight_pairs = [
        (
            [cs[i] ** m * avals[i] for i in range(n)],
            [cs[i] ** m * b[i] for i in range(n)],
        )
        for m in range(n1)
    ] + [
        (
            [cs[i] ** m * abars[i] for i in range(n)],
            [cs[i] ** m * bb[i] for i in range(n)],
        )
        for m in range(2 * n1)
    ]
    rows = _weight_rows(weight_pairs, n)
    basis = nullspace_basis(rows, 2 * n)
    assert len(basis) == n + 1, f"nullspace dimension {len(basis)}, expected {n + 1}"
    za_basis = nullspace_basis([r[:n] for r in rows], n)
    assert len(za_basis) == 1
    za = za_basis[0]

    coef_rows = [
        [cs[i] ** (2 * n1 + 1 - j) for i in range(n)] for j in range(1, 2 * n1 + 2)
    ]
    order = list(range(1, n + 1))
    M = n1

    rng = random.Random(seed)
    last_reason = "no attempt made"
    for attempt in range(MAX_ATTEMPTS):
        w = _rand_combo(rng, basis)
        wa, wb = w[:n], w[n:]
        dot = sum(za[i] * wb[i] for i in range(n))
        if dot == 0:
            last_reason = "forced column direction degenerate"
            continue
        t = -sum(wa[i] * wb[i] for i in range(n)) / dot
        forced = ([wa[i] + t * za[i] for i in range(n)], wb)

        cols = [None] * (n + 1)
        for k in range(1, n1 + 1):
            cols[k - 1] = (
                [cs[i] ** (k - 1) * abars[i] for i in range(n)],
                [cs[i] ** (k - 1) * bb[i] for i in range(n)],
            )
        for k in range(1, n1 + 1):
            cols[n1 + k - 1] = (
                [cs[i] ** (k - 1) * avals[i] for i in range(n)],
                [cs[i] ** (k - 1) * b[i] for i in range(n)],
            )
        cols[2 * n1] = forced
        for j in range(2 * n1 + 1, n + 1):
            v = _rand_combo(rng, basis)
            cols[j] = (v[:n], v[n:])

        a_forms, b_forms = _assemble_forms(n, cols)
        model = QuadraticModel(
            n=n,
            M=M,
            a_forms=a_forms,
            b_forms=b_forms,
            coef_matrix=[_indicator_row(n)] + coef_rows,
        )
        try:
            pts, tmap = _verify_and_pack(n, M, order, model)
        except (ValueError, IndependenceViolation) as exc:
            last_reason = str(exc)
            continue
        return model, tmap
    raise NondegeneracyExhausted(MAX_ATTEMPTS, last_reason)


# ---------------------------------------------------------------------------
# nondegeneracy diagnostics


@dataclass
class NondegeneracyReport:
    ok: bool
    m: int
    matrix_violations: list  # (sign string, column tuple)
    coef_violations: list  # column tuples


def _det(rows: list) -> Fraction:
    """Determinant by fraction-free-ish elimination (small matrices)."""
    m = [list(r) for r in rows]
    size = len(m)
    det = Fraction(1)
    for col in range(size):
        pivot = next((i for i in range(col, size) if m[i][col]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for i in range(col + 1, size):
            if m[i][col]:
                f = m[i][col] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    return det


def check_nondegeneracy(model: QuadraticModel, m: int) -> NondegeneracyReport:
    """Determinant diagnostics for the reduction step.

    The derivative matrix at sign string s has entry (k, i) equal to the
    x_k coefficient of form i's chosen side; deleting the last m-1 rows
    and columns j_1..j_m must leave a nonsingular square matrix for every
    s and every column choice. The companion check keeps the last m rows
    of the coefficient matrix at those columns.

    Exhaustive over sign strings for n <= 12.
    """
    if m not in (1, 2):
        raise ArityError("m must be 1 or 2")
    n = model.n
    if n > 12:
        raise ArityError("exhaustive sweep capped at n = 12")
    matrix_violations = []
    coef_violations = []
    col_choices = list(itertools.combinations(range(n), m))

    for svec in itertools.product((0, 1), repeat=n):
        chosen = [
            (model.a_forms[i] if s == 0 else model.b_forms[i]) for i, s in enumerate(svec)
        ]
        # rows k = 1..n-1 of the derivative matrix, entry = coefficient on x_k
        full = [[chosen[i][k] for i in range(n)] for k in range(n - 1)]
        kept_rows = full[: n - m]
        for js in col_choices:
            sub = [
                [row[i] for i in range(n) if i not in js] for row in kept_rows
            ]
            if _det(sub) == 0:
                matrix_violations.append((svec, tuple(j + 1 for j in js)))

    last_rows = model.coef_matrix[-m:]
    for js in col_choices:
        sub = [[row[j] for j in js] for row in last_rows]
        if _det(sub) == 0:
            coef_violations.append(tuple(j + 1 for j in js))

    return NondegeneracyReport(
        ok=not matrix_violations and not coef_violations,
        m=m,
        matrix_violations=matrix_violations,
        coef_violations=coef_violations,
    )


# ---------------------------------------------------------------------------
# parameter-file entry point (shared with the CLI)


def build_from_params(config: dict) -> tuple:
    """Build from a JSON-style parameter dict
    {family, n, A, Abar, params, seed}. Returns (model, map)."""
    family = config.get("family")
    seed = int(config.get("seed", 0))
    if family == "n4":
        model, tmap, _ = build_example_n4()
        return model, tmap
    n = int(config["n"])
    if family == "half":
        return build_half_family(
            n,
            seed=seed,
            a_prime=config.get("A"),
            a_dbl=config.get("Abar"),
            params=config.get("params"),
        )
    if family == "third":
        return build_third_family(
            n, seed=seed, a_vals=config.get("A"), abar_vals=config.get("Abar")
        )
    raise ArityError(f"unknown family {family!r}")

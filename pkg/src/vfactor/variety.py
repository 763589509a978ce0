"""Triangular rational parametrizations and their exhaustive verification.

A TriangularMap holds stage pairs (N_k, D_k) in a permuted coordinate
frame: position i of the frame is original variable order[i-1], stage k
depends only on frame variables k+1..n, and the last M frame variables are
the parameters. Back-substitution is therefore always straight-line:
set the parameters, then walk stages from k = n-M down to 1 computing
x_k = N_k / D_k, and finish by evaluating P0.

Over Z/cZ a failed stage division is returned as a witness carrying the
denominator; callers in the factor module turn it into a gcd probe. Over Q
the only failure is an exact zero denominator.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import ArityError, BudgetExceeded, IndependenceViolation, ZeroPivot
from .exact_arith import (
    SparsePoly,
    Vector,
    as_rational,
    format_rational,
    make_vector,
    solve_square,
    vector_to_json,
)
from .modring import DivisionWitness, Modulus, WitnessContext, mod_div, reduce_rational_mod

ENUMERATION_CAP = 14  # 2^n exhaustive sweeps stay under a minute up to here


@dataclass
class TriangularMap:
    n: int
    M: int
    order: tuple
    stages: list  # stage k at index k-1, entries (N_k, D_k) as SparsePoly
    P0: SparsePoly
    _mod_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not 1 <= self.M < self.n:
            raise ArityError(f"need 1 <= M < n, got M={self.M}, n={self.n}")
        if sorted(self.order) != list(range(1, self.n + 1)):
            raise ArityError(f"order {self.order} is not a permutation of 1..{self.n}")
        if len(self.stages) != self.n - self.M:
            raise ArityError(
                f"expected {self.n - self.M} stages, got {len(self.stages)}"
            )
        for k, (nk, dk) in enumerate(self.stages, start=1):
            if dk.is_zero:
                raise ZeroPivot(f"stage {k} has zero denominator polynomial")
            for poly, name in ((nk, "N"), (dk, "D")):
                early = poly.variables_used() & set(range(1, k + 1))
                if early:
                    raise ArityError(
                        f"stage {k} {name} touches variables {sorted(early)}"
                    )

    # -- serialization

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "M": self.M,
            "order": list(self.order),
            "stages": [
                {"N": nk.to_json(), "D": dk.to_json()} for nk, dk in self.stages
            ],
            "P0": self.P0.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "TriangularMap":
        return cls(
            n=data["n"],
            M=data["M"],
            order=tuple(data["order"]),
            stages=[
                (SparsePoly.from_json(s["N"]), SparsePoly.from_json(s["D"]))
                for s in data["stages"]
            ],
            P0=SparsePoly.from_json(data["P0"]),
        )

    # -- modular reduction, cached per modulus

    def reduced_mod(self, m: Modulus):
        """Reduce every coefficient mod c once. Returns
        ("ok", stage_terms, p0_terms) or ("witness", w, stage_index) where
        stage_index 0 marks the P0 reduction."""
        hit = self._mod_cache.get(m.c)
        if hit is not None:
            return hit
        out = None
        stage_terms = []
        for k, (nk, dk) in enumerate(self.stages, start=1):
            pair = []
            for poly in (nk, dk):
                terms = []
                for exp, coef in poly.terms():
                    r = reduce_rational_mod(coef, m)
                    if isinstance(r, DivisionWitness):
                        out = ("witness", r, k)
                        break
                    if r.value:
                        terms.append((exp, r.value))
                if out:
                    break
                pair.append(terms)
            if out:
                break
            stage_terms.append(pair)
        if out is None:
            p0_terms = []
            for exp, coef in self.P0.terms():
                r = reduce_rational_mod(coef, m)
                if isinstance(r, DivisionWitness):
                    out = ("witness", r, 0)
                    break
                if r.value:
                    p0_terms.append((exp, r.value))
            if out is None:
                out = ("ok", stage_terms, p0_terms)
        self._mod_cache[m.c] = out
        return out


@dataclass(frozen=True)
class EvalOutcome:
    """Result of one triangular evaluation.

    kind is "Value" (modular), "RationalValue" (over Q), or "Witness".
    trace_stage records the stage where a witness arose; 0 marks the
    coefficient-reduction step for P0.
    """

    kind: str
    value: object = None
    witness: Optional[DivisionWitness] = None
    trace_stage: Optional[int] = None

    def to_json(self) -> dict:
        if self.kind == "Witness":
            return {
                "kind": "Witness",
                "witness": self.witness.to_json(),
                "traceStage": self.trace_stage,
            }
        if self.kind == "RationalValue":
            return {"kind": "RationalValue", "value": format_rational(self.value)}
        return {"kind": "Value", "value": str(self.value.value)}


def _eval_terms_mod(terms, xs: list, c: int) -> int:
    total = 0
    for exp, coef in terms:
        t = coef
        for e, x in zip(exp, xs):
            if e:
                if e == 1:
                    t = t * x % c
                else:
                    t = t * pow(x, e, c) % c
        total = (total + t) % c
    return total


def eval_triangular(
    tmap: TriangularMap,
    tau: Sequence,
    modulus: Optional[Modulus] = None,
) -> EvalOutcome:
    """Algorithm: set the M parameters, back-substitute stages n-M .. 1,
    then evaluate P0. Failed division returns the denominator as a witness.
    """
    n, M = tmap.n, tmap.M
    if len(tau) != M:
        raise ArityError(f"expected {M} parameters, got {len(tau)}")

    if modulus is None:
        xs = [Fraction(0)] * n
        for j, t in enumerate(tau):
            xs[n - M + j] = as_rational(t)
        for k in range(n - M, 0, -1):
            nk, dk = tmap.stages[k - 1]
            d = dk.evaluate(xs)
            if d == 0:
                return EvalOutcome(
                    kind="Witness",
                    witness=DivisionWitness(0, WitnessContext.RingDivision),
                    trace_stage=k,
                )
            xs[k - 1] = nk.evaluate(xs) / d
        return EvalOutcome(kind="RationalValue", value=tmap.P0.evaluate(xs))

    reduced = tmap.reduced_mod(modulus)
    if reduced[0] == "witness":
        return EvalOutcome(kind="Witness", witness=reduced[1], trace_stage=reduced[2])
    _, stage_terms, p0_terms = reduced
    c = modulus.c
    xs = [0] * n
    for j, t in enumerate(tau):
        xs[n - M + j] = int(t) % c
    for k in range(n - M, 0, -1):
        n_terms, d_terms = stage_terms[k - 1]
        d = _eval_terms_mod(d_terms, xs, c)
        q = mod_div(_eval_terms_mod(n_terms, xs, c), d, modulus)
        if isinstance(q, DivisionWitness):
            return EvalOutcome(kind="Witness", witness=q, trace_stage=k)
        xs[k - 1] = q.value
    return EvalOutcome(
        kind="Value", value=modulus.element(_eval_terms_mod(p0_terms, xs, c))
    )


# ---------------------------------------------------------------------------
# Gaussian-form verification


@dataclass
class GaussianFormReport:
    ok: bool
    pairs: Optional[list]  # (N_s, D_s) per stage on success
    violations: list  # (s, k) pairs; k == s flags a nonlinear pivot


def verify_gaussian_form(polys: Sequence[SparsePoly]) -> GaussianFormReport:
    """Check the triangular shape: P_s free of x_1..x_{s-1} and at most
    linear in its pivot x_s. Returns the (N_s, D_s) splits on success.

    N_s is the negated constant part, so that P_s = x_s * D_s - N_s and the
    stage solution is x_s = N_s / D_s.
    """
    violations = []
    pairs = []
    for s, p in enumerate(polys, start=1):
        for k in range(1, s):
            if p.degree_in(k) > 0:
                violations.append((s, k))
        if p.degree_in(s) > 1:
            violations.append((s, s))
            continue
        d = p.partial(s)
        n = p.set_var(s, 0).scale(-1)
        pairs.append((n, d))
    if violations:
        return GaussianFormReport(ok=False, pairs=None, violations=violations)
    return GaussianFormReport(ok=True, pairs=pairs, violations=[])


# ---------------------------------------------------------------------------
# point sets


@dataclass
class PointSet:
    points: list  # Vectors of length n+1, last entry 1
    signs: Optional[list] = None  # defining sign strings when applicable

    def __len__(self) -> int:
        return len(self.points)

    def to_json(self) -> list:
        return [vector_to_json(p) for p in self.points]

    @classmethod
    def from_json(cls, data) -> "PointSet":
        return cls(points=[make_vector(row) for row in data])


def enumerate_quadratic_zeros(model) -> PointSet:
    """Solve the 2^n sign systems a-hat_{s_i, i} = 0 of a quadratic model.

    model provides n, a_forms, b_forms (each n Vectors of length n+1).
    Every system must be uniquely solvable; a singular one is an
    independence violation. Points come back pairwise distinct.
    """
    n = model.n
    if n > ENUMERATION_CAP:
        raise BudgetExceeded(2**n, 2**ENUMERATION_CAP)
    points = []
    signs = []
    seen = set()
    for svec in itertools.product((0, 1), repeat=n):
        rows = []
        rhs = []
        for i, s in enumerate(svec):
            form = model.a_forms[i] if s == 0 else model.b_forms[i]
            rows.append(list(form[:n]))
            rhs.append(-form[n])
        sol = solve_square(rows, rhs)
        if sol is None:
            raise IndependenceViolation(svec)
        pt = tuple(sol) + (Fraction(1),)
        if pt in seen:
            raise IndependenceViolation(svec)
        seen.add(pt)
        points.append(pt)
        signs.append(svec)
    return PointSet(points=points, signs=signs)


# ---------------------------------------------------------------------------
# membership verification


@dataclass
class MembershipReport:
    ok: bool
    failures: list  # (point index, first failing condition) pairs
    checked: int


def verify_membership(tmap: TriangularMap, pts: PointSet) -> MembershipReport:
    """Exact check that each point lies on the parametrized variety:
    P0 vanishes, every stage residual x_k*D_k - N_k vanishes, and every
    stage denominator is nonzero at the point.

    Points are given in original coordinates; the map's stored permutation
    is applied on the way in.
    """
    failures = []
    for idx, pt in enumerate(pts.points):
        if len(pt) != tmap.n + 1:
            failures.append((idx, "arity"))
            continue
        xs = [pt[tmap.order[j] - 1] for j in range(tmap.n)]
        first = None
        if tmap.P0.evaluate(xs) != 0:
            first = "P0 != 0"
        else:
            for k, (nk, dk) in enumerate(tmap.stages, start=1):
                d = dk.evaluate(xs)
                if d == 0:
                    first = f"D{k} = 0"
                    break
                if xs[k - 1] * d - nk.evaluate(xs) != 0:
                    first = f"stage {k} residual != 0"
                    break
        if first is not None:
            failures.append((idx, first))
    return MembershipReport(ok=not failures, failures=failures, checked=len(pts.points))

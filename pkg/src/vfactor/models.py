"""Linear models of Boolean formulas and their isolated points.

A ModelSpec bundles a configuration of affine forms with clause index
tuples. Forms come in pairs: pair i owns form 2i-1 (its 0 side) and form
2i (its 1 side). A clause is a tuple of form indices; its generator is
the product of those forms, which vanishes exactly when at least one
listed form vanishes. Points of the common zero locus that are certified
by a zero-dimensional minimal satisfying flat are the isolated points.

Truth convention used throughout: the 1-side form vanishing at a point
means the Boolean variable is true, so a positive literal on variable p
maps to form index 2p and a negated literal to 2p-1.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    ArityError,
    BudgetExceeded,
    CorrespondenceViolation,
    EmptyModel,
    IndependenceViolation,
)
from .exact_arith import (
    Vector,
    form_eval,
    make_vector,
    matrix_rank,
    parse_rational,
    format_rational,
    rref,
)
from .variety import PointSet

SWEEP_CAP = 12  # sign sweeps stop at 2^12 assignments
HITTING_BUDGET = 2**20  # product cap for one-form-per-clause enumeration
FORM_BOUND = 20
RESAMPLE_CAP = 50


# ---------------------------------------------------------------------------
# the spec type


@dataclass
class ModelSpec:
    nbar: int
    forms: list  # nbar Vectors of length n+1, constant last
    clauses2: list  # sorted 2-tuples of form indices, 1-based
    clauses3: list  # sorted 3-tuples
    blocks: Optional[list] = None  # partition of pair indices 1..n

    def __post_init__(self):
        if self.nbar != len(self.forms):
            raise ArityError("nbar must match the number of forms")
        for cl in list(self.clauses2) + list(self.clauses3):
            if list(cl) != sorted(set(cl)):
                raise ArityError(f"clause {cl} is not strictly increasing")
            if not all(1 <= i <= self.nbar for i in cl):
                raise ArityError(f"clause {cl} indexes outside 1..{self.nbar}")
        if self.blocks is not None:
            flat = sorted(i for b in self.blocks for i in b)
            if flat != list(range(1, self.npairs + 1)):
                raise ArityError("blocks must partition the pair indices")

    @property
    def nvars(self) -> int:
        return len(self.forms[0]) - 1 if self.forms else 0

    @property
    def npairs(self) -> int:
        if self.nbar % 2:
            raise ArityError("paired access on an odd number of forms")
        return self.nbar // 2

    def form(self, idx: int) -> Vector:
        return self.forms[idx - 1]

    def pair_form(self, side: int, pair: int) -> Vector:
        """The side-s form of pair i, s in {0, 1}."""
        return self.forms[2 * (pair - 1) + side]

    def all_clauses(self) -> list:
        return list(self.clauses2) + list(self.clauses3)

    def to_json(self) -> dict:
        return {
            "nbar": self.nbar,
            "forms": [[format_rational(c) for c in f] for f in self.forms],
            "clauses2": [list(c) for c in self.clauses2],
            "clauses3": [list(c) for c in self.clauses3],
            "blocks": [list(b) for b in self.blocks] if self.blocks else None,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ModelSpec":
        return cls(
            nbar=data["nbar"],
            forms=[make_vector(parse_rational(c) for c in f) for f in data["forms"]],
            clauses2=[tuple(c) for c in data["clauses2"]],
            clauses3=[tuple(c) for c in data["clauses3"]],
            blocks=[tuple(b) for b in data["blocks"]] if data.get("blocks") else None,
        )


@dataclass
class IsolatedPointSet:
    points: PointSet
    witness_flats: list  # per point: sorted tuple of form indices
    multiplicities: list  # distinct certifying flats per point

    def __len__(self) -> int:
        return len(self.points)

    def to_json(self) -> dict:
        return {
            "points": self.points.to_json(),
            "witnessFlats": [list(f) for f in self.witness_flats],
            "multiplicities": list(self.multiplicities),
        }


# ---------------------------------------------------------------------------
# flat machinery


def _flat_satisfies(flat: frozenset, clauses: Sequence) -> bool:
    return all(any(i in flat for i in cl) for cl in clauses)


def _flat_minimal(flat: frozenset, clauses: Sequence) -> bool:
    """Minimality via single removals: satisfaction is monotone, so a flat
    is minimal iff dropping any one form breaks some clause."""
    for f in flat:
        if _flat_satisfies(flat - {f}, clauses):
            return False
    return True


def _solve_flat(spec: ModelSpec, flat) -> Optional[tuple]:
    """Unique common zero of the flat's forms, or None if the flat is not
    zero-dimensional. Inconsistent overdetermined systems also give None
    (the flat is empty, so it certifies nothing)."""
    n = spec.nvars
    rows = [list(spec.form(i)[:n]) for i in sorted(flat)]
    rhs = [-spec.form(i)[n] for i in sorted(flat)]
    aug = [r + [b] for r, b in zip(rows, rhs)]
    red, piv = rref(aug)
    if any(p == n for p in piv):
        return None  # inconsistent: pivot in the constant column
    if len(piv) < n:
        return None  # positive-dimensional
    xs = [Fraction(0)] * n
    for r, p in zip(red, piv):
        xs[p] = r[n]
    return tuple(xs) + (Fraction(1),)


def _candidate_flats(spec: ModelSpec):
    """Yield (flat, sign_or_None) candidates.

    Block specs sweep the 2^m per-block sign assignments. Otherwise the
    minimal satisfying flats are hitting sets of the clause list, built by
    choosing one form per clause.
    """
    clauses = spec.all_clauses()
    if spec.blocks is not None:
        m = len(spec.blocks)
        if m > SWEEP_CAP:
            raise BudgetExceeded(2**m, 2**SWEEP_CAP)
        for signs in itertools.product((0, 1), repeat=m):
            flat = frozenset(
                2 * (i - 1) + s + 1
                for b, s in zip(spec.blocks, signs)
                for i in b
            )
            yield flat, signs
        return
    if not clauses:
        return
    total = 1
    for cl in clauses:
        total *= len(cl)
        if total > HITTING_BUDGET:
            raise BudgetExceeded(total, HITTING_BUDGET)
    seen = set()
    for choice in itertools.product(*clauses):
        flat = frozenset(choice)
        if flat in seen:
            continue
        seen.add(flat)
        yield flat, None


def enumerate_isolated_points(spec: ModelSpec) -> IsolatedPointSet:
    """All points certified by a zero-dimensional minimal satisfying flat.

    Dedupes by coordinates, recording how many distinct flats certify each
    point. Asserts the counting bounds: never more than 3^n points, and
    never more than 2^n when no 3-clauses are present.
    """
    clauses = spec.all_clauses()
    by_point = {}
    for flat, signs in _candidate_flats(spec):
        if not _flat_satisfies(flat, clauses):
            continue
        if not _flat_minimal(flat, clauses):
            continue
        pt = _solve_flat(spec, flat)
        if pt is None:
            if signs is not None:
                # block flats are forced square; a singular one breaks
                # the independence property the construction relies on
                raise IndependenceViolation(signs)
            continue
        entry = by_point.setdefault(pt, [])
        entry.append(tuple(sorted(flat)))

    points = sorted(by_point)
    n = spec.nvars
    count = len(points)
    assert count <= 3**n, f"{count} isolated points exceed 3^{n}"
    if not spec.clauses3:
        assert count <= 2**n, f"{count} isolated points exceed 2^{n}"
    return IsolatedPointSet(
        points=PointSet(points=list(points)),
        witness_flats=[by_point[p][0] for p in points],
        multiplicities=[len(by_point[p]) for p in points],
    )


# ---------------------------------------------------------------------------
# independence properties


@dataclass
class IndependenceReport:
    ok: bool
    checked: int
    violation: Optional[dict] = None

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "checked": self.checked,
            "violation": self.violation,
        }


def verify_independence_property(spec: ModelSpec) -> IndependenceReport:
    """Exact rank checks over every sign string.

    Forms are read as full affine vectors in n + 1 coordinates (constant
    included): one per pair is chosen by the string (block strings pick a
    side per block). The chosen n vectors must be independent, their
    linear parts must already have rank n (otherwise the common zero
    escapes to infinity), and every unchosen vector must stay outside the
    chosen span, which is the same as not vanishing at the flat's point.
    Violations are reported, not raised.
    """
    n = spec.nvars
    npairs = spec.npairs
    groups = spec.blocks if spec.blocks is not None else [(i,) for i in range(1, npairs + 1)]
    if len(groups) > SWEEP_CAP:
        raise BudgetExceeded(2 ** len(groups), 2**SWEEP_CAP)
    checked = 0
    for signs in itertools.product((0, 1), repeat=len(groups)):
        chosen_idx = [
            2 * (i - 1) + s + 1 for b, s in zip(groups, signs) for i in b
        ]
        chosen = [list(spec.form(i)) for i in chosen_idx]
        checked += 1
        base_rank = matrix_rank(chosen)
        if base_rank < len(chosen):
            return IndependenceReport(
                ok=False,
                checked=checked,
                violation={"signs": list(signs), "kind": "dependent-set"},
            )
        if matrix_rank([row[:n] for row in chosen]) < n:
            return IndependenceReport(
                ok=False,
                checked=checked,
                violation={"signs": list(signs), "kind": "at-infinity"},
            )
        for other in range(1, spec.nbar + 1):
            if other in chosen_idx:
                continue
            ext = chosen + [list(spec.form(other))]
            if matrix_rank(ext) == base_rank:
                return IndependenceReport(
                    ok=False,
                    checked=checked,
                    violation={"signs": list(signs), "kind": "in-span", "form": other},
                )
    return IndependenceReport(ok=True, checked=checked)


# ---------------------------------------------------------------------------
# SAT correspondence


def _clause_satisfied_by_signs(cl, signs, block_of) -> bool:
    """A clause holds under a block sign assignment when some listed form
    is on its pair's chosen side."""
    for idx in cl:
        pair = (idx - 1) // 2 + 1
        side = (idx - 1) % 2
        if signs[block_of[pair]] == side:
            return True
    return False


@dataclass
class CorrespondenceReport:
    ok: bool
    solutions: int
    points: int
    pairs: list  # (sign assignment, point)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "solutions": self.solutions,
            "points": self.points,
            "pairs": [
                {"signs": list(s), "point": [format_rational(c) for c in p]}
                for s, p in self.pairs
            ],
        }


def sat_correspondence(spec: ModelSpec) -> CorrespondenceReport:
    """Match Boolean solutions with isolated points, both ways.

    Block sign assignments play the role of truth assignments (side 1
    chosen = true). Every satisfying assignment must solve to an isolated
    point and every isolated point must arise from exactly one satisfying
    assignment; any mismatch raises CorrespondenceViolation.
    """
    if spec.blocks is None:
        raise ArityError("sat_correspondence needs a block structure")
    clauses = spec.all_clauses()
    block_of = {}
    for k, b in enumerate(spec.blocks):
        for i in b:
            block_of[i] = k

    sat_pairs = []
    point_map = {}
    for signs in itertools.product((0, 1), repeat=len(spec.blocks)):
        if not all(_clause_satisfied_by_signs(cl, signs, block_of) for cl in clauses):
            continue
        flat = frozenset(
            2 * (i - 1) + s + 1 for b, s in zip(spec.blocks, signs) for i in b
        )
        pt = _solve_flat(spec, flat)
        if pt is None:
            raise CorrespondenceViolation(
                "assignment-to-point", {"signs": list(signs)}
            )
        sat_pairs.append((signs, pt))
        if pt in point_map:
            raise CorrespondenceViolation(
                "assignment-to-point",
                {"signs": list(signs), "collidesWith": list(point_map[pt])},
            )
        point_map[pt] = signs

    iso = enumerate_isolated_points(spec)
    iso_points = set(iso.points.points)
    if iso_points != set(point_map):
        missing = iso_points.symmetric_difference(point_map)
        raise CorrespondenceViolation(
            "point-to-assignment", {"points": sorted(map(str, missing))}
        )
    return CorrespondenceReport(
        ok=True,
        solutions=len(sat_pairs),
        points=len(iso_points),
        pairs=sat_pairs,
    )


# ---------------------------------------------------------------------------
# constructors


def _random_paired_forms(n: int, rng: random.Random) -> list:
    return [
        make_vector(
            Fraction(rng.randint(-FORM_BOUND, FORM_BOUND)) for _ in range(n + 1)
        )
        for _ in range(2 * n)
    ]


def diagonal_model(n: int, seed: int = 0, forms: Optional[list] = None) -> ModelSpec:
    """n pairs, the n diagonal clauses (2i-1, 2i), singleton blocks.

    Random integer forms are resampled until the independence property
    holds, so the 2^n flats are all zero-dimensional.
    """
    rng = random.Random(seed)
    diag = [(2 * i - 1, 2 * i) for i in range(1, n + 1)]
    blocks = [(i,) for i in range(1, n + 1)]
    for _ in range(RESAMPLE_CAP):
        candidate = ModelSpec(
            nbar=2 * n,
            forms=forms if forms is not None else _random_paired_forms(n, rng),
            clauses2=diag,
            clauses3=[],
            blocks=blocks,
        )
        report = verify_independence_property(candidate)
        if report.ok:
            return candidate
        if forms is not None:
            raise IndependenceViolation(report.violation.get("signs"))
    raise IndependenceViolation(())


def model_a(n: int, gamma: Sequence, seed: int = 0, forms: Optional[list] = None) -> ModelSpec:
    """Diagonal clauses plus one 0-side/0-side clause (2i-1, 2j-1) per
    (i, j) in gamma."""
    base = diagonal_model(n, seed=seed, forms=forms)
    extra = []
    for i, j in gamma:
        if not (1 <= i < j <= n):
            raise ArityError(f"gamma pair {(i, j)} must satisfy 1 <= i < j <= n")
        extra.append((2 * i - 1, 2 * j - 1))
    return ModelSpec(
        nbar=base.nbar,
        forms=base.forms,
        clauses2=base.clauses2 + extra,
        clauses3=[],
        blocks=base.blocks,
    )


def model_from_cnf(nvars: int, cnf: Sequence, seed: int = 0, forms: Optional[list] = None) -> ModelSpec:
    """Paired model of a CNF given as signed-integer clauses (DIMACS
    sign convention). Literal p maps to form 2p, -p to 2p-1.

    Clauses of size one are forced through a companion variable: (s) on
    variable p becomes (s or a_q) and (s or not a_q), which needs at
    least two variables.
    """
    base = diagonal_model(nvars, seed=seed, forms=forms)
    c2 = list(base.clauses2)
    c3 = []

    def form_index(lit: int) -> int:
        p = abs(lit)
        if not 1 <= p <= nvars:
            raise ArityError(f"literal {lit} outside 1..{nvars}")
        return 2 * p if lit > 0 else 2 * p - 1

    for cl in cnf:
        idxs = sorted({form_index(l) for l in cl})
        if len(idxs) == 1:
            if nvars < 2:
                raise ArityError("singleton clauses need a companion variable")
            p = (idxs[0] - 1) // 2 + 1
            q = 1 if p != 1 else 2
            c2.append(tuple(sorted((idxs[0], 2 * q - 1))))
            c2.append(tuple(sorted((idxs[0], 2 * q))))
        elif len(idxs) == 2:
            c2.append(tuple(idxs))
        elif len(idxs) == 3:
            c3.append(tuple(idxs))
        else:
            raise ArityError("clauses longer than 3 need cnf_to_3sat first")
    # dedupe, stable order
    c2 = list(dict.fromkeys(c2))
    c3 = list(dict.fromkeys(c3))
    return ModelSpec(
        nbar=base.nbar, forms=base.forms, clauses2=c2, clauses3=c3, blocks=base.blocks
    )


# ---------------------------------------------------------------------------
# Model A -> diagonal reduction


@dataclass
class ReducedModel:
    """A diagonal model on m variables plus the affine embedding that
    carries its points back into the original spec's space.

    substitution has n rows of length m + 1: original coordinate r equals
    sum_j substitution[r][j] * y_j + substitution[r][m].
    """

    spec: ModelSpec
    m: int
    witness_point: tuple
    kept_pairs: list  # original pair indices, in output order
    substitution: list

    def embed(self, ypoint: Sequence) -> tuple:
        ys = list(ypoint[: self.m])
        out = []
        for row in self.substitution:
            out.append(sum(a * y for a, y in zip(row[: self.m], ys)) + row[self.m])
        return tuple(out) + (Fraction(1),)

    def to_json(self) -> dict:
        return {
            "model": self.spec.to_json(),
            "m": self.m,
            "witnessPoint": [format_rational(c) for c in self.witness_point],
            "keptPairs": list(self.kept_pairs),
            "substitution": [
                [format_rational(c) for c in row] for row in self.substitution
            ],
        }


def reduce_model(spec: ModelSpec, pts: IsolatedPointSet) -> ReducedModel:
    """Collapse a Model-A spec onto the pairs that stay active.

    m is the largest number of 0-side forms simultaneously nonzero at an
    isolated point; at a point attaining it, the other pairs' 0-side
    forms vanish, and substituting those n - m independent linear
    conditions eliminates as many variables. Every clause between kept
    pairs evaporates (its generator would be nonzero at the witness), so
    the result is a plain diagonal model on m variables.
    """
    if not len(pts):
        raise EmptyModel("no isolated points to reduce against")
    n = spec.nvars
    npairs = spec.npairs

    def weight(pt) -> int:
        return sum(
            1
            for i in range(1, npairs + 1)
            if form_eval(spec.pair_form(0, i), pt[:n]) != 0
        )

    weights = [weight(p) for p in pts.points.points]
    m = max(weights)
    if m == 0:
        raise EmptyModel("the 0-side forms vanish everywhere; nothing survives")
    witness = pts.points.points[weights.index(m)]

    kept = [
        i
        for i in range(1, npairs + 1)
        if form_eval(spec.pair_form(0, i), witness[:n]) != 0
    ]
    dropped = [i for i in range(1, npairs + 1) if i not in kept]

    # solve the dropped 0-side constraints for n - m of the variables
    rows = [list(spec.pair_form(0, i)) for i in dropped]  # length n + 1
    red, piv = rref(rows)
    if len(piv) != len(dropped) or any(p == n for p in piv):
        raise IndependenceViolation(tuple(dropped))
    free = [j for j in range(n) if j not in piv]
    assert len(free) == m
    # substitution x_free = y, x_piv expressed from the reduced rows
    sub = []
    for r in range(n):
        if r in free:
            row = [Fraction(0)] * (m + 1)
            row[free.index(r)] = Fraction(1)
        else:
            rrow = red[piv.index(r)]
            # x_r + sum_{f free} c_f x_f + const = 0
            row = [-rrow[f] for f in free] + [-rrow[n]]
        sub.append(row)

    def substitute(formvec) -> Vector:
        out = [Fraction(0)] * (m + 1)
        for j in range(n):
            coef = formvec[j]
            if not coef:
                continue
            for t in range(m + 1):
                out[t] += coef * sub[j][t]
        out[m] += formvec[n]
        return make_vector(out)

    new_forms = []
    for i in kept:
        new_forms.append(substitute(spec.pair_form(0, i)))
        new_forms.append(substitute(spec.pair_form(1, i)))
    out_spec = ModelSpec(
        nbar=2 * m,
        forms=new_forms,
        clauses2=[(2 * i - 1, 2 * i) for i in range(1, m + 1)],
        clauses3=[],
        blocks=[(i,) for i in range(1, m + 1)],
    )
    return ReducedModel(
        spec=out_spec,
        m=m,
        witness_point=witness,
        kept_pairs=kept,
        substitution=sub,
    )


# ---------------------------------------------------------------------------
# CNF utilities


def cnf_to_3sat(nvars: int, cnf: Sequence) -> tuple:
    """Split long clauses with chained auxiliary variables.

    (l1 ... lk) becomes (l1 l2 y1), (-y1 l3 y2), ..., (-y_{k-3} l_{k-1} lk).
    Returns (new_nvars, clauses, aux_vars); aux_vars lists the introduced
    variable numbers so downstream constructions can keep their
    polynomials independent of them.
    """
    out = []
    aux = []
    nxt = nvars
    for cl in cnf:
        cl = list(cl)
        if any(abs(l) < 1 or abs(l) > nvars for l in cl):
            raise ArityError(f"clause {cl} has a literal outside 1..{nvars}")
        if len(cl) <= 3:
            out.append(tuple(cl))
            continue
        nxt += 1
        aux.append(nxt)
        out.append((cl[0], cl[1], nxt))
        prev = nxt
        for lit in cl[2:-2]:
            nxt += 1
            aux.append(nxt)
            out.append((-prev, lit, nxt))
            prev = nxt
        out.append((-prev, cl[-2], cl[-1]))
    return nxt, out, aux


def parse_dimacs(text: str) -> tuple:
    """Minimal DIMACS CNF reader: returns (nvars, clauses)."""
    nvars = None
    clauses = []
    current = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ArityError(f"bad problem line {line!r}")
            nvars = int(parts[2])
            continue
        for tok in line.split():
            v = int(tok)
            if v == 0:
                if current:
                    clauses.append(tuple(current))
                    current = []
            else:
                current.append(v)
    if current:
        clauses.append(tuple(current))
    if nvars is None:
        raise ArityError("missing problem line")
    return nvars, clauses


def to_dimacs(nvars: int, clauses: Sequence) -> str:
    lines = [f"p cnf {nvars} {len(clauses)}"]
    for cl in clauses:
        lines.append(" ".join(str(l) for l in cl) + " 0")
    return "\n".join(lines) + "\n"

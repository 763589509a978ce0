"""Exact rational arithmetic: rationals, sparse polynomials, vectors,
and the small amount of exact linear algebra the rest of the package needs.

Rationals are fractions.Fraction throughout. The helpers here pin down the
canonical text form ("num/den", denominator omitted when it is 1) and the
error behavior (ZeroDenominator instead of Fraction's ZeroDivisionError).

Polynomials are sparse: a mapping from exponent tuples to nonzero rational
coefficients. The affine coordinate is never a polynomial variable; linear
forms carry their constant as the last component of a Vector and products
fold it in at construction time.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import ArityError, DegenerateNodes, ZeroDenominator

RationalLike = Union[int, str, Fraction]

# ---------------------------------------------------------------------------
# rationals


def rational_normalize(num: int, den: int = 1) -> Fraction:
    """Return num/den in lowest terms with a positive denominator.

    Raises ZeroDenominator when den is 0.
    """
    if den == 0:
        raise ZeroDenominator(f"{num}/0")
    return Fraction(num, den)


def parse_rational(text: str) -> Fraction:
    """Parse the canonical text form: "num" or "num/den"."""
    s = text.strip()
    if "/" in s:
        a, b = s.split("/", 1)
        return rational_normalize(int(a), int(b))
    return Fraction(int(s))


def format_rational(q: Fraction) -> str:
    """Canonical text form, denominator omitted when 1."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def as_rational(value: RationalLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"not a rational: {value!r}")


# ---------------------------------------------------------------------------
# vectors (linear forms). A Vector of length n+1 represents
# v[0]*x_1 + ... + v[n-1]*x_n + v[n]; the affine constant is always last.

Vector = tuple  # of Fraction


def make_vector(components: Iterable[RationalLike]) -> Vector:
    return tuple(as_rational(c) for c in components)


def vector_to_json(v: Vector) -> list:
    return [format_rational(c) for c in v]


def vector_from_json(data: Sequence[str]) -> Vector:
    return make_vector(data)


def form_eval(v: Vector, point: Sequence[Fraction]) -> Fraction:
    """Evaluate an affine-linear form at a point of length len(v) - 1."""
    n = len(v) - 1
    if len(point) != n:
        raise ArityError(f"form has {n} variables, point has {len(point)}")
    total = v[n]
    for c, x in zip(v, point):
        if c:
            total += c * x
    return total


# ---------------------------------------------------------------------------
# sparse polynomials


def _grlex_key(exp: tuple) -> tuple:
    return (sum(exp), exp)


class SparsePoly:
    """Multivariate polynomial over Q, stored sparsely.

    terms maps exponent tuples (length nvars) to nonzero Fractions. Zero
    coefficients are never stored; the zero polynomial has no terms.
    """

    __slots__ = ("nvars", "_terms")

    def __init__(
        self,
        nvars: int,
        terms: Union[Mapping[tuple, RationalLike], Iterable] = (),
    ) -> None:
        self.nvars = int(nvars)
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exp, coef in items:
            exp = tuple(int(e) for e in exp)
            if len(exp) != self.nvars:
                raise ArityError(
                    f"exponent {exp} has length {len(exp)}, expected {self.nvars}"
                )
            if any(e < 0 for e in exp):
                raise ArityError(f"negative exponent in {exp}")
            c = acc.get(exp, _ZERO) + as_rational(coef)
            if c:
                acc[exp] = c
            elif exp in acc:
                del acc[exp]
        self._terms = acc

    # -- inspection

    def terms(self) -> Iterator:
        """Yield (exponent, coefficient) pairs in graded-lex order."""
        for exp in sorted(self._terms, key=_grlex_key):
            yield exp, self._terms[exp]

    def coefficient(self, exp: tuple) -> Fraction:
        return self._terms.get(tuple(exp), _ZERO)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def total_degree(self) -> int:
        """Total degree; the zero polynomial reports -1."""
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def degree_in(self, k: int) -> int:
        """Degree in variable k (1-based); -1 for the zero polynomial."""
        self._check_var(k)
        if not self._terms:
            return -1
        return max(e[k - 1] for e in self._terms)

    def variables_used(self) -> set:
        """1-based indices of variables appearing with positive exponent."""
        used = set()
        for exp in self._terms:
            for j, e in enumerate(exp):
                if e:
                    used.add(j + 1)
        return used

    def _check_var(self, k: int) -> None:
        if not 1 <= k <= self.nvars:
            raise ArityError(f"variable index {k} out of range 1..{self.nvars}")

    # -- arithmetic

    def __add__(self, other: "SparsePoly") -> "SparsePoly":
        self._check_same_arity(other)
        acc = dict(self._terms)
        for exp, c in other._terms.items():
            s = acc.get(exp, _ZERO) + c
            if s:
                acc[exp] = s
            elif exp in acc:
                del acc[exp]
        return SparsePoly(self.nvars, acc)

    def __sub__(self, other: "SparsePoly") -> "SparsePoly":
        return self + other.scale(-1)

    def __mul__(self, other: "SparsePoly") -> "SparsePoly":
        self._check_same_arity(other)
        acc: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                s = acc.get(exp, _ZERO) + c1 * c2
                if s:
                    acc[exp] = s
                elif exp in acc:
                    del acc[exp]
        return SparsePoly(self.nvars, acc)

    def scale(self, factor: RationalLike) -> "SparsePoly":
        f = as_rational(factor)
        if not f:
            return SparsePoly(self.nvars)
        return SparsePoly(self.nvars, {e: c * f for e, c in self._terms.items()})

    def _check_same_arity(self, other: "SparsePoly") -> None:
        if self.nvars != other.nvars:
            raise ArityError(
                f"mixed arities {self.nvars} and {other.nvars}"
            )

    # -- substitution

    def set_var(self, k: int, value: RationalLike) -> "SparsePoly":
        """Substitute x_k = value (k is 1-based)."""
        self._check_var(k)
        v = as_rational(value)
        acc: dict = {}
        for exp, c in self._terms.items():
            e = exp[k - 1]
            coef = c * v**e if e else c
            if not coef:
                continue
            new = exp[: k - 1] + (0,) + exp[k:]
            s = acc.get(new, _ZERO) + coef
            if s:
                acc[new] = s
            elif new in acc:
                del acc[new]
        return SparsePoly(self.nvars, acc)

    def evaluate(self, point: Sequence[Fraction]) -> Fraction:
        if len(point) != self.nvars:
            raise ArityError(
                f"point has {len(point)} coordinates, expected {self.nvars}"
            )
        total = _ZERO
        for exp, c in self._terms.items():
            t = c
            for e, x in zip(exp, point):
                if e:
                    t *= x**e
            total += t
        return total

    # -- calculus

    def partial(self, k: int) -> "SparsePoly":
        """Partial derivative with respect to x_k (1-based)."""
        self._check_var(k)
        acc: dict = {}
        for exp, c in self._terms.items():
            e = exp[k - 1]
            if not e:
                continue
            new = exp[: k - 1] + (e - 1,) + exp[k:]
            s = acc.get(new, _ZERO) + c * e
            if s:
                acc[new] = s
            elif new in acc:
                del acc[new]
        return SparsePoly(self.nvars, acc)

    # -- serialization and comparison

    def to_json(self) -> dict:
        return {
            "nvars": self.nvars,
            "terms": [
                {"exp": list(exp), "coef": format_rational(c)}
                for exp, c in self.terms()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "SparsePoly":
        return cls(
            data["nvars"],
            [(tuple(t["exp"]), parse_rational(t["coef"])) for t in data["terms"]],
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        if self.is_zero:
            return f"SparsePoly({self.nvars}, 0)"
        parts = []
        for exp, c in self.terms():
            mono = "*".join(
                f"x{j + 1}^{e}" if e > 1 else f"x{j + 1}"
                for j, e in enumerate(exp)
                if e
            )
            parts.append(f"{format_rational(c)}" + (f"*{mono}" if mono else ""))
        return f"SparsePoly({self.nvars}, {' + '.join(parts)})"


_ZERO = Fraction(0)


def poly_zero(nvars: int) -> SparsePoly:
    return SparsePoly(nvars)


def poly_constant(nvars: int, value: RationalLike) -> SparsePoly:
    c = as_rational(value)
    return SparsePoly(nvars, {(0,) * nvars: c} if c else {})


def poly_from_form(v: Vector, nvars: int) -> SparsePoly:
    """Turn a length-(nvars+1) affine form into a degree-1 polynomial.

    The trailing affine constant becomes the constant term.
    """
    if len(v) != nvars + 1:
        raise ArityError(f"form length {len(v)}, expected {nvars + 1}")
    terms = {}
    for j in range(nvars):
        if v[j]:
            exp = tuple(1 if i == j else 0 for i in range(nvars))
            terms[exp] = v[j]
    if v[nvars]:
        terms[(0,) * nvars] = v[nvars]
    return SparsePoly(nvars, terms)


def poly_eval(p: SparsePoly, point: Sequence[RationalLike]) -> Fraction:
    """Evaluate p at the given point (exact)."""
    return p.evaluate([as_rational(x) for x in point])


def poly_partial_derivative(p: SparsePoly, k: int) -> SparsePoly:
    """Partial derivative of p with respect to x_k, k counted from 1."""
    return p.partial(k)


# ---------------------------------------------------------------------------
# exact linear algebra


def rref(rows: Sequence[Sequence[Fraction]]) -> tuple:
    """Reduced row echelon form. Returns (new_rows, pivot_columns)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for col in range(ncols):
        pivot_row = None
        for i in range(r, len(m)):
            if m[i][col]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = 1 / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m, pivots


def nullspace_basis(rows: Sequence[Sequence[Fraction]], ncols: int) -> list:
    """Basis of the right nullspace of the given row list (exact)."""
    if not rows:
        return [
            [Fraction(1 if i == j else 0) for i in range(ncols)]
            for j in range(ncols)
        ]
    red, pivots = rref(rows)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -red[i][fc]
        basis.append(v)
    return basis


def solve_square(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]):
    """Solve an n x n system exactly. Returns the solution or None if singular."""
    n = len(rows)
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    if len(pivots) != n or any(p >= n for p in pivots):
        return None
    sol = [Fraction(0)] * n
    for i, p in enumerate(pivots):
        sol[p] = red[i][n]
    return sol


def matrix_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    if not rows:
        return 0
    _, pivots = rref(rows)
    return len(pivots)


def vandermonde_nullspace(nodes: Sequence[RationalLike]) -> list:
    """Weights W with sum_i nodes[i]^k * W[i] = 0 for k = 0 .. len(nodes)-2.

    The nodes must be pairwise distinct (DegenerateNodes otherwise); the
    solution space is then one-dimensional and every weight is nonzero.
    The returned vector is normalized so its first entry is 1.
    """
    cs = [as_rational(c) for c in nodes]
    n = len(cs)
    if n < 2:
        raise ArityError("need at least two nodes")
    for i in range(n):
        for j in range(i + 1, n):
            if cs[i] == cs[j]:
                raise DegenerateNodes(i, j, cs[i])
    rows = [[c**k for c in cs] for k in range(n - 1)]
    basis = nullspace_basis(rows, n)
    assert len(basis) == 1, "Vandermonde nullspace is one-dimensional"
    w = basis[0]
    lead = next(x for x in w if x)
    w = [x / lead for x in w]
    assert all(w), "Vandermonde weights are all nonzero for distinct nodes"
    return w


def dumps_json(obj) -> str:
    """json.dumps with the package's fixed conventions (stable key order)."""
    return json.dumps(obj, separators=(", ", ": "), indent=2)

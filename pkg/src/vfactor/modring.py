"""Arithmetic in Z/cZ where c is composite and we pretend it is a field.

The central idea: division either succeeds (the divisor is a unit) or it
hands us a witness sharing a factor with c. A failed division is a good
outcome for the factoring drivers, so witnesses are ordinary return values
that flow up the call stack, never exceptions.

Inversion goes through the extended Euclidean algorithm only. Fermat-style
exponent inversion would silently produce garbage for composite moduli.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .errors import ArityError


class WitnessContext(enum.Enum):
    """Where a failed division arose."""

    RingDivision = "RingDivision"
    RationalReduction = "RationalReduction"
    PolyGcdLeadingCoef = "PolyGcdLeadingCoef"


@dataclass(frozen=True)
class DivisionWitness:
    """A value that refused inversion mod c.

    gcd(divisor, c) > 1 always holds (divisor 0 counts: gcd(0, c) = c).
    """

    divisor: int
    context: WitnessContext = WitnessContext.RingDivision

    def to_json(self) -> dict:
        return {"divisor": str(self.divisor), "context": self.context.value}


class Modulus:
    """Shared, read-only description of the ring Z/cZ."""

    __slots__ = ("c",)

    def __init__(self, c: int) -> None:
        if c < 2:
            raise ValueError(f"modulus must be at least 2, got {c}")
        if c.bit_length() > 128:
            raise ValueError("moduli above 128 bits are out of scope")
        self.c = c

    def element(self, value: int) -> "ModElement":
        return ModElement(value % self.c, self)

    def __eq__(self, other) -> bool:
        return isinstance(other, Modulus) and self.c == other.c

    def __hash__(self) -> int:
        return hash(("Modulus", self.c))

    def __repr__(self) -> str:
        return f"Modulus({self.c})"


class ModElement:
    """An immutable residue in [0, c)."""

    __slots__ = ("value", "modulus")

    def __init__(self, value: int, modulus: Modulus) -> None:
        self.value = value % modulus.c
        self.modulus = modulus

    def _lift(self, other) -> "ModElement":
        if isinstance(other, ModElement):
            if other.modulus.c != self.modulus.c:
                raise ArityError("mixed moduli")
            return other
        if isinstance(other, int):
            return ModElement(other, self.modulus)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        o = self._lift(other)
        return ModElement(self.value + o.value, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return ModElement(self.value - o.value, self.modulus)

    def __rsub__(self, other):
        o = self._lift(other)
        return ModElement(o.value - self.value, self.modulus)

    def __mul__(self, other):
        o = self._lift(other)
        return ModElement(self.value * o.value, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return ModElement(-self.value, self.modulus)

    def __pow__(self, e: int):
        return ModElement(pow(self.value, e, self.modulus.c), self.modulus)

    def __eq__(self, other) -> bool:
        if isinstance(other, ModElement):
            return self.value == other.value and self.modulus.c == other.modulus.c
        if isinstance(other, int):
            return self.value == other % self.modulus.c
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.value, self.modulus.c))

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"ModElement({self.value} mod {self.modulus.c})"

    def to_json(self) -> str:
        return str(self.value)


def _ext_gcd(a: int, b: int) -> tuple:
    """Extended Euclid: returns (g, x, y) with a*x + b*y = g."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def mod_div(
    a: Union[int, ModElement], b: Union[int, ModElement], m: Modulus
) -> Union[ModElement, DivisionWitness]:
    """a / b in Z/cZ, or the witness b when b is not invertible."""
    av = a.value if isinstance(a, ModElement) else a % m.c
    bv = b.value if isinstance(b, ModElement) else b % m.c
    g, x, _ = _ext_gcd(bv, m.c)
    if g != 1:
        return DivisionWitness(bv, WitnessContext.RingDivision)
    return ModElement(av * x, m)


def reduce_rational_mod(
    r: Fraction, m: Modulus
) -> Union[ModElement, DivisionWitness]:
    """Reinterpret a rational over Z/cZ.

    Succeeds when the denominator is invertible; otherwise the denominator's
    residue is the witness (context RationalReduction).
    """
    den = r.denominator % m.c
    g, x, _ = _ext_gcd(den, m.c)
    if g != 1:
        return DivisionWitness(den, WitnessContext.RationalReduction)
    return ModElement(r.numerator * x, m)


# ---------------------------------------------------------------------------
# gcd classification


@dataclass(frozen=True)
class Unit:
    def to_json(self) -> dict:
        return {"kind": "Unit"}


@dataclass(frozen=True)
class TrivialAll:
    def to_json(self) -> dict:
        return {"kind": "TrivialAll"}


@dataclass(frozen=True)
class Factor:
    f: int

    def to_json(self) -> dict:
        return {"kind": "Factor", "factor": str(self.f)}


Classification = Union[Unit, TrivialAll, Factor]


def gcd_extract(m: Union[int, ModElement], c: int) -> Classification:
    """Classify gcd(m, c): unit, the whole of c, or a proper factor."""
    if c < 2:
        raise ValueError("c must be at least 2")
    v = m.value if isinstance(m, ModElement) else abs(m) % c
    g = math.gcd(v, c)
    if g == 1:
        return Unit()
    if g == c:
        return TrivialAll()
    assert c % g == 0 and 1 < g < c
    return Factor(g)


# ---------------------------------------------------------------------------
# quotient-ring polynomials Z/cZ[X]/(P_I)


class QuotientPolyElement:
    """Element of Z/cZ[X]/(P_I), stored as coefficients [a_0, a_1, ...].

    P_I is kept with integer coefficients and reduced mod c lazily, so the
    same map datum serves every candidate c. Degree stays below deg P_I.
    """

    __slots__ = ("coeffs", "modulus")

    def __init__(self, coeffs: Sequence[int], modulus: Modulus) -> None:
        self.modulus = modulus
        cs = [c % modulus.c for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = cs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else -1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def to_json(self) -> list:
        return [str(c) for c in self.coeffs]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, QuotientPolyElement)
            and self.coeffs == other.coeffs
            and self.modulus.c == other.modulus.c
        )

    def __hash__(self) -> int:
        return hash((tuple(self.coeffs), self.modulus.c))

    def __repr__(self) -> str:
        return f"QuotientPolyElement({self.coeffs} mod {self.modulus.c})"


def _poly_add(a: list, b: list, c: int) -> list:
    out = [0] * max(len(a), len(b))
    for i, v in enumerate(a):
        out[i] = v
    for i, v in enumerate(b):
        out[i] = (out[i] + v) % c
    while out and out[-1] == 0:
        out.pop()
    return out


def _poly_scale(a: list, s: int, c: int) -> list:
    out = [v * s % c for v in a]
    while out and out[-1] == 0:
        out.pop()
    return out


def _poly_mul(a: list, b: list, c: int) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % c
    while out and out[-1] == 0:
        out.pop()
    return out


def quotient_add(a: QuotientPolyElement, b: QuotientPolyElement) -> QuotientPolyElement:
    return QuotientPolyElement(_poly_add(a.coeffs, b.coeffs, a.modulus.c), a.modulus)


def quotient_neg(a: QuotientPolyElement) -> QuotientPolyElement:
    return QuotientPolyElement(_poly_scale(a.coeffs, -1, a.modulus.c), a.modulus)


def quotient_mul(
    a: QuotientPolyElement, b: QuotientPolyElement, p_i: Sequence[int]
) -> QuotientPolyElement:
    """Multiply and reduce mod the monic P_I (coefficients low to high)."""
    c = a.modulus.c
    prod = _poly_mul(a.coeffs, b.coeffs, c)
    pi = [v % c for v in p_i]
    assert pi and pi[-1] == 1, "P_I must be monic"
    k0 = len(pi) - 1
    # monic reduction never divides, so no witness can arise here
    while len(prod) > k0:
        lead = prod.pop()
        if lead:
            for i in range(k0):
                idx = len(prod) - k0 + i
                prod[idx] = (prod[idx] - lead * pi[i]) % c
        while prod and prod[-1] == 0:
            prod.pop()
    return QuotientPolyElement(prod, a.modulus)


def quotient_div(
    a: QuotientPolyElement, b: QuotientPolyElement, p_i: Sequence[int]
) -> Union[QuotientPolyElement, DivisionWitness]:
    """a / b in Z/cZ[X]/(P_I) via the extended Euclidean algorithm.

    Any noninvertible leading coefficient met along the way is returned as
    a witness; so is a b that shares a full polynomial factor with P_I in a
    way that blocks inversion.
    """
    m = a.modulus
    c = m.c
    if b.is_zero:
        return DivisionWitness(0, WitnessContext.RingDivision)
    # extended Euclid on (P_I, b) tracking Bezout coefficient of b
    r0 = [v % c for v in p_i]
    r1 = list(b.coeffs)
    t0: list = []
    t1: list = [1]
    while r1:
        lead = r1[-1]
        g, inv, _ = _ext_gcd(lead, c)
        if g != 1:
            return DivisionWitness(lead, WitnessContext.PolyGcdLeadingCoef)
        q, rem = _poly_divmod(r0, r1, inv, c)
        r0, r1 = r1, rem
        t0, t1 = t1, _poly_add(t0, _poly_scale(_poly_mul(q, t1, c), -1, c), c)
    # r0 is the gcd; it must be a unit constant for b to be invertible
    if len(r0) != 1:
        return DivisionWitness(r0[-1] if r0 else 0, WitnessContext.PolyGcdLeadingCoef)
    g, inv, _ = _ext_gcd(r0[0], c)
    if g != 1:
        return DivisionWitness(r0[0], WitnessContext.PolyGcdLeadingCoef)
    binv = QuotientPolyElement(_poly_scale(t0, inv, c), m)
    return quotient_mul(a, binv, p_i)


def _poly_divmod(num: list, den: list, den_lead_inv: int, c: int) -> tuple:
    """Polynomial division where the denominator's lead is already inverted."""
    num = list(num)
    q = [0] * max(1, len(num) - len(den) + 1)
    while len(num) >= len(den) and num:
        shift = len(num) - len(den)
        factor = num[-1] * den_lead_inv % c
        q[shift] = factor
        for i, d in enumerate(den):
            num[shift + i] = (num[shift + i] - factor * d) % c
        while num and num[-1] == 0:
            num.pop()
    while q and q[-1] == 0:
        q.pop()
    return q, num


def quotient_poly_gcd(
    m_elt: QuotientPolyElement, p_i: Sequence[int], modulus: Modulus
) -> Union[Classification, DivisionWitness]:
    """Run the polynomial Euclidean algorithm on (P_I, m) pretending Z/cZ
    is a field.

    A leading coefficient that fails to invert is returned as a witness;
    the factoring driver turns it into a factor of c. If the algorithm
    completes, the classification falls back to gcd_extract applied to each
    coefficient of m (first non-unit answer wins, else Unit).
    """
    c = modulus.c
    if m_elt.is_zero:
        return TrivialAll()
    r0 = [v % c for v in p_i]
    r1 = list(m_elt.coeffs)
    while r1:
        lead = r1[-1]
        g, inv, _ = _ext_gcd(lead, c)
        if g != 1:
            return DivisionWitness(lead, WitnessContext.PolyGcdLeadingCoef)
        _, rem = _poly_divmod(r0, r1, inv, c)
        r0, r1 = r1, rem
    for coef in m_elt.coeffs:
        cls = gcd_extract(coef, c)
        if not isinstance(cls, Unit):
            return cls
    return Unit()

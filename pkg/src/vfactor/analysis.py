"""Probability and complexity formulas, point-count bounds, and the
brute-force finite-field counters that validate them.

The closed-form side works in extended precision (mpmath, 60 digits) with
log-space evaluation: (1 - p^(-k0*M))^N_P is computed as
exp(N_P * log1p(-p^(-k0*M))) so that huge N_P and tiny p^(-k0*M) never
cancel catastrophically. The counting side is exact integer arithmetic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Callable, Optional, Union

import mpmath
from mpmath import mp, mpf

from .errors import BudgetExceeded, NoInteriorOptimum
from .exact_arith import SparsePoly
from .modring import Modulus
from .variety import TriangularMap

mp.dps = 60  # module-wide working precision; plenty for 1e-12 contracts

ENUM_BUDGET = 10**7


# ---------------------------------------------------------------------------
# closed-form probability machinery


@dataclass(frozen=True)
class ComplexityInputs:
    """Symbols of the trial-success model: prime scale p, field degree k0,
    parameter count M, zero count N_P."""

    p: float
    k0: int
    M: int
    n_p: float

    def __post_init__(self):
        if self.p < 2 or self.k0 < 1 or self.M < 1 or self.n_p < 0:
            raise ValueError("all inputs must be positive (p >= 2, N_P >= 0)")


def _log_miss(p, k0m, n_p) -> mpf:
    """log of (1 - p^(-k0*M))^N_P, computed stably."""
    x = mpf(p) ** (-mpf(k0m))
    return mpf(n_p) * mpmath.log1p(-x)


def success_probability(inputs: ComplexityInputs) -> float:
    """Pr_succ = 2 [1 - (1 - p^(-k0 M))^N_P] (1 - p^(-k0 M))^N_P.

    The probability that exactly one of the two prime-side evaluations
    lands on a zero, so the gcd is a proper factor.
    """
    if inputs.n_p == 0:
        return 0.0
    t = mpmath.exp(_log_miss(inputs.p, inputs.k0 * inputs.M, inputs.n_p))
    return float(2 * (1 - t) * t)


def trials_estimate(inputs: ComplexityInputs) -> float:
    """N_trials = 1 / (1 - (1 - p^(-k0 M))^N_P), the expected number of
    samples before at least one side hits a zero."""
    if inputs.n_p < 1:
        raise ValueError("N_P must be at least 1")
    lm = _log_miss(inputs.p, inputs.k0 * inputs.M, inputs.n_p)
    return float(-1 / mpmath.expm1(lm))


def _xi_map(p: mpf, f: Callable[[mpf], mpf]) -> Callable[[mpf], mpf]:
    """The fixed-point map xi -> log log 2 - log(-log(1 - p^(-f(xi)))).

    Its fixed point xi0 makes (1 - p^(-f(xi0)))^(e^xi0) = 1/2 exactly,
    which is where Pr_succ peaks at 1/2. f is clamped below at 1: it
    stands for k0(xi)*M(xi), and both factors are at least 1, so values
    below 1 are outside the model's domain.
    """

    def g(xi: mpf) -> mpf:
        x = p ** (-max(f(xi), mpf(1)))
        if x >= 1:
            raise NoInteriorOptimum("p^(-f) must stay below 1")
        return mpmath.log(mpmath.log(2)) - mpmath.log(-mpmath.log1p(-x))

    return g


def optimal_log_np(
    p: float,
    k0: Optional[int] = None,
    M: Optional[int] = None,
    f: Optional[Callable] = None,
) -> mpf:
    """The optimal xi = log N_P.

    With constant k0*M the defining equation solves in closed form and the
    two-term expansion k0*M*log p + log log 2 agrees to O(p^(-k0*M)). A
    callable f (xi -> k0(xi)*M(xi)) goes through damped fixed-point
    iteration seeded by that expansion, with a bisection fallback; if the
    map has no positive fixed point (f growing linearly or faster at this
    p), NoInteriorOptimum is raised.
    """
    if p < 3:
        raise ValueError("p must be at least 3")
    pp = mpf(p)
    if f is None:
        if not (k0 and M):
            raise ValueError("give either k0 and M, or f")
        const = mpf(k0 * M)
        return _xi_map(pp, lambda _: const)(mpf(0))

    g = _xi_map(pp, f)
    xi = f(mpf(1)) * mpmath.log(pp) + mpmath.log(mpmath.log(2))  # seed
    if xi <= 0:
        xi = mpf(1)
    for _ in range(400):
        try:
            nxt = g(xi)
        except NoInteriorOptimum:
            raise
        if nxt <= 0:
            break
        step = (xi + nxt) / 2
        if abs(step - xi) < mpf("1e-30"):
            xi = step
            break
        xi = step
    if xi > 0 and abs(g(xi) - xi) < mpf("1e-10"):
        return xi

    # bisection fallback on h(xi) = g(xi) - xi
    lo, hi = mpf("1e-9"), (f(mpf(1)) + 2) * mpmath.log(pp) * 10
    h = lambda x: g(x) - x
    try:
        hlo, hhi = h(lo), h(hi)
    except (NoInteriorOptimum, ValueError):
        raise NoInteriorOptimum("fixed-point map leaves the positive axis")
    if hlo * hhi > 0:
        raise NoInteriorOptimum(
            "no positive solution at this p: the optimum sits at the "
            "boundary xi = 0 (a single zero, N_P = 1)"
        )
    for _ in range(300):
        mid = (lo + hi) / 2
        if h(mid) * hlo > 0:
            lo = mid
        else:
            hi = mid
    xi = (lo + hi) / 2
    if abs(g(xi) - xi) >= mpf("1e-10"):
        raise NoInteriorOptimum("bisection failed to reach residual 1e-10")
    return xi


def total_complexity(
    p: float,
    xi,
    k0m: Union[float, Callable],
    c0: Callable,
):
    """C(p, xi) = C0(xi) / Pr_succ(xi): per-trial cost over the success
    probability 2(1-t)t with t = (1 - p^(-f))^(e^xi). At xi = xi0 this is
    exactly 2*C0(xi0)."""
    fval = k0m(mpf(xi)) if callable(k0m) else mpf(k0m)
    n_p = mpmath.exp(mpf(xi))  # xi = log N_P
    x = mpf(p) ** (-fval)
    t = mpmath.exp(n_p * mpmath.log1p(-x))
    return c0(mpf(xi)) / (2 * (1 - t) * t)


# ---------------------------------------------------------------------------
# scaling-scenario classifier


@dataclass(frozen=True)
class ScalingScenario:
    """Asymptotic shapes for the per-trial cost C0 and the exponent budget
    f = k0*M as functions of xi = log N_P.

    c0_kind: "power" means C0 ~ xi^alpha; "exp_power" means
    C0 ~ exp(b xi^alpha). f_kind: "power" means f ~ xi^beta;
    "quasilinear" means f ~ xi / (log xi)^beta.
    """

    c0_kind: str
    f_kind: str
    alpha: float
    beta: float
    b: float = 1.0

    def __post_init__(self):
        if self.c0_kind not in ("power", "exp_power"):
            raise ValueError(f"unknown c0_kind {self.c0_kind!r}")
        if self.f_kind not in ("power", "quasilinear"):
            raise ValueError(f"unknown f_kind {self.f_kind!r}")


def litmus_classify(s: ScalingScenario) -> dict:
    """Classify one of the stated scaling shapes.

    The litmus limit is f(xi) * log C0(xi) / xi as xi grows; the overall
    complexity in log p is subexponential or polynomial precisely when it
    vanishes. The three named scenarios:

      (a) C0 ~ xi^alpha, f ~ xi^beta, 0 <= beta < 1:
          polynomial, (log p)^(alpha/(1-beta)).
      (b) C0 polynomial, f ~ xi/(log xi)^beta, beta > 1:
          subexponential, exp[b (log p)^(1/beta)].
      (c) C0 ~ exp(b xi^alpha), f ~ xi^beta, alpha + beta < 1:
          subexponential, exp[b (log p)^(alpha/(1-beta))].
    """
    a, b_, bb = s.alpha, s.beta, s.b
    if s.c0_kind == "power" and s.f_kind == "power":
        zero = b_ < 1
        if 0 <= b_ < 1:
            return {
                "scenario": "a",
                "litmusZero": zero,
                "complexity": "polynomial",
                "growth": f"(log p)^({a}/(1-{b_}))",
            }
        return {
            "scenario": None,
            "litmusZero": zero,
            "complexity": "not subexponential",
            "growth": None,
        }
    if s.c0_kind == "power" and s.f_kind == "quasilinear":
        zero = b_ > 1
        if zero:
            return {
                "scenario": "b",
                "litmusZero": True,
                "complexity": "subexponential",
                "growth": f"exp[{bb} (log p)^(1/{b_})]",
            }
        return {
            "scenario": None,
            "litmusZero": False,
            "complexity": "not subexponential",
            "growth": None,
        }
    if s.c0_kind == "exp_power" and s.f_kind == "power":
        zero = a + b_ < 1
        if zero:
            return {
                "scenario": "c",
                "litmusZero": True,
                "complexity": "subexponential",
                "growth": f"exp[{bb} (log p)^({a}/(1-{b_}))]",
            }
        return {
            "scenario": None,
            "litmusZero": False,
            "complexity": "not subexponential",
            "growth": None,
        }
    # exp_power C0 with quasilinear f: the ratio grows like xi^alpha
    return {
        "scenario": None,
        "litmusZero": False,
        "complexity": "not subexponential",
        "growth": None,
    }


# ---------------------------------------------------------------------------
# brute-force counting


@dataclass(frozen=True)
class CountReport:
    q: int
    curve_points: int
    numerator_zeros: int
    witness_count: int

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "curvePoints": self.curve_points,
            "numeratorZeros": self.numerator_zeros,
            "witnessCount": self.witness_count,
        }


def _eval_int_terms(terms, xs, q: int) -> int:
    total = 0
    for exp, coef in terms:
        v = coef
        for x, e in zip(xs, exp):
            if e:
                v = v * pow(x, e, q) % q
        total += v
    return total % q


def count_points_bruteforce(tmap: TriangularMap, q: int) -> CountReport:
    """Exhaust all tau in F_q^M through the map, tallying completed
    evaluations, numerator zeros, and witness (failed-division) outcomes.

    curve_points + witness_count = q^M by construction.
    """
    total = q**tmap.M
    if total > ENUM_BUDGET:
        raise BudgetExceeded(total, ENUM_BUDGET)
    reduced = tmap.reduced_mod(Modulus(q))
    if reduced[0] == "witness":
        # map coefficients degenerate identically mod q
        return CountReport(q=q, curve_points=0, numerator_zeros=0, witness_count=total)
    _, stage_terms, p0_terms = reduced
    n, M = tmap.n, tmap.M

    curve = zeros = witness = 0
    for tau in itertools.product(range(q), repeat=M):
        xs = [0] * n
        xs[n - M :] = tau
        ok = True
        for k in range(n - M, 0, -1):
            n_terms, d_terms = stage_terms[k - 1]
            d = _eval_int_terms(d_terms, xs, q)
            if d == 0:
                witness += 1
                ok = False
                break
            xs[k - 1] = _eval_int_terms(n_terms, xs, q) * pow(d, -1, q) % q
        if not ok:
            continue
        curve += 1
        if _eval_int_terms(p0_terms, xs, q) == 0:
            zeros += 1
    report = CountReport(
        q=q, curve_points=curve, numerator_zeros=zeros, witness_count=witness
    )
    assert report.curve_points + report.witness_count == total
    return report


def count_plane_curve(poly: SparsePoly, q: int) -> dict:
    """Projective point count of a plane curve given by a bivariate
    polynomial (affine chart). Returns affine, at-infinity, and projective
    tallies. Exhaustive: q^2 + q + 1 evaluations."""
    if poly.nvars != 2:
        raise ValueError("expected a bivariate polynomial")
    if q * q > ENUM_BUDGET:
        raise BudgetExceeded(q * q, ENUM_BUDGET)
    d = poly.total_degree()
    terms = [
        (exp, int(c.numerator) * pow(int(c.denominator), -1, q) % q)
        for exp, c in poly.terms()
    ]
    affine = 0
    for x in range(q):
        for y in range(q):
            if _eval_int_terms(terms, (x, y), q) == 0:
                affine += 1
    # infinity: zeros of the top-degree form H_d(X, Y) at Z = 0
    top = [(exp, c) for exp, c in terms if sum(exp) == d]
    at_inf = 0
    # [1 : 0 : 0]
    if _eval_int_terms(top, (1, 0), q) == 0:
        at_inf += 1
    # [x : 1 : 0]
    for x in range(q):
        if _eval_int_terms(top, (x, 1), q) == 0:
            at_inf += 1
    return {
        "affine": affine,
        "atInfinity": at_inf,
        "projective": affine + at_inf,
        "degree": d,
    }


# ---------------------------------------------------------------------------
# bounds


def _floor_a_plus_t_sqrt(a: Fraction, t: Fraction, q: int) -> int:
    """floor(a + t*sqrt(q)) exactly, t >= 0, q a non-square or anything:
    integer arithmetic only."""
    assert t >= 0
    # candidate from isqrt, then verify both sides exactly
    bn, bd = a.numerator, a.denominator
    tn, td = t.numerator, t.denominator
    # value = (bn*td + bd*tn*sqrt(q)) / (bd*td)
    num_rad = bd * tn  # times sqrt(q)
    s = isqrt(num_rad * num_rad * q)
    f = (bn * td + s) // (bd * td)

    def leq_value(k: int) -> bool:
        # k <= a + t sqrt q  <=>  (k - a) <= t sqrt q
        lhs = Fraction(k) - a
        if lhs <= 0:
            return True
        return lhs * lhs <= t * t * q

    while not leq_value(f):
        f -= 1
    while leq_value(f + 1):
        f += 1
    return f


@dataclass(frozen=True)
class BoundReport:
    q: int
    genus: Optional[dict] = None
    plane: Optional[dict] = None
    hypersurface: Optional[dict] = None

    def to_json(self) -> dict:
        out = {"q": self.q}
        for key in ("genus", "plane", "hypersurface"):
            v = getattr(self, key)
            if v is not None:
                out[key] = v
        return out


def bound_check(
    q: int,
    genus: Optional[int] = None,
    plane_degree: Optional[int] = None,
    hypersurface: Optional[tuple] = None,
) -> BoundReport:
    """Numeric values of the point-count bounds.

    genus g: the two-sided band (q+1) +/- 2g*sqrt(q); plane degree d:
    q+1+(d-1)(d-2)*sqrt(q); hypersurface (d, M):
    (q^M-1)/(q-1) + [(d-1)^M - (-1)^M](1 - 1/d) q^((M-1)/2).
    Integer envelopes are exact (isqrt arithmetic); floats are renderings.
    """
    rq = mpmath.sqrt(mpf(q))
    g_rec = p_rec = h_rec = None
    if genus is not None:
        s = isqrt(4 * genus * genus * q)
        g_rec = {
            "lower": float(q + 1 - 2 * genus * rq),
            "upper": float(q + 1 + 2 * genus * rq),
            "lowerInt": q + 1 - s,
            "upperInt": q + 1 + s,
        }
    if plane_degree is not None:
        d = plane_degree
        t = (d - 1) * (d - 2)
        p_rec = {
            "upper": float(q + 1 + t * rq),
            "upperInt": q + 1 + isqrt(t * t * q),
        }
    if hypersurface is not None:
        d, M = hypersurface
        lead = Fraction(q**M - 1, q - 1)
        coef = Fraction((d - 1) ** M - (-1) ** M) * (1 - Fraction(1, d))
        half = M - 1
        if half % 2 == 0 or coef == 0:
            exact = lead + coef * q ** (half // 2)
            h_rec = {
                "upper": float(exact),
                "upperInt": _floor_a_plus_t_sqrt(exact, Fraction(0), q),
                "exact": f"{exact.numerator}/{exact.denominator}",
            }
        else:
            t = coef * q ** ((half - 1) // 2)
            h_rec = {
                "upper": float(lead + t * rq),
                "upperInt": _floor_a_plus_t_sqrt(lead, t, q),
                "exact": None,
            }
    return BoundReport(q=q, genus=g_rec, plane=p_rec, hypersurface=h_rec)

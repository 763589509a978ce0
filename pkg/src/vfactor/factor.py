"""Randomized factoring drivers.

factor_semiprime runs the core loop: sample parameters, push them through
a triangular map over Z/cZ, and classify the gcd of whatever comes out (a
completed value or a failed-division witness). search_np wraps that loop
in a geometric bisection over the zero-count scale. factor_number_field
is the same loop with quotient-ring arithmetic so the map may have
coefficients in an extension field. pollard_baseline supplies the two
classic comparison methods under the same report type.

Randomness is counter-based: trial i's parameters are a pure function of
(seed, i), so reports are reproducible and trials could be sharded
without coordination.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .analysis import ComplexityInputs, success_probability
from .errors import ArityError, FamilyGap
from .modring import (
    DivisionWitness,
    Factor,
    Modulus,
    QuotientPolyElement,
    TrivialAll,
    Unit,
    gcd_extract,
    quotient_add,
    quotient_div,
    quotient_mul,
    quotient_poly_gcd,
    reduce_rational_mod,
)
from .variety import TriangularMap, eval_triangular

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix64(z: int) -> int:
    """SplitMix64 finalizer: a bijective 64-bit scramble."""
    z &= _MASK64
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK64
    return z ^ (z >> 31)


def _word_stream(seed: int, trial: int):
    """Endless 64-bit words, a pure function of (seed, trial)."""
    state = _mix64((seed & _MASK64) ^ _mix64(trial * _GOLDEN + 1))
    while True:
        state = (state + _GOLDEN) & _MASK64
        yield _mix64(state)


def sample_tau(seed: int, trial: int, c: int, m: int) -> list:
    """m uniform draws from [0, c) by 128-bit rejection sampling."""
    words = _word_stream(seed, trial)
    span = 1 << 128
    limit = span - span % c
    out = []
    while len(out) < m:
        v = (next(words) << 64) | next(words)
        if v < limit:
            out.append(v % c)
    return out


# ---------------------------------------------------------------------------
# configuration and report


@dataclass(frozen=True)
class FactorConfig:
    max_trials: int
    seed: int = 0
    ring: str = "plain"  # "plain" or "number-field"; informational echo
    trace: bool = False

    def __post_init__(self):
        if self.max_trials < 1:
            raise ValueError("max_trials must be at least 1")


@dataclass
class FactorReport:
    outcome: str  # "Factor" | "Trivial" | "Exhausted"
    factor: Optional[int]
    trials: int
    witness_trials: int
    zero_trials: int
    per_trial_log: Optional[list] = None

    def to_json(self) -> dict:
        out = {
            "outcome": self.outcome,
            "factor": self.factor,
            "trials": self.trials,
            "witnessTrials": self.witness_trials,
            "zeroTrials": self.zero_trials,
        }
        if self.per_trial_log is not None:
            out["perTrialLog"] = self.per_trial_log
        return out


class _Tally:
    """Per-run trial bookkeeping shared by all drivers."""

    def __init__(self, c: int, trace: bool):
        self.c = c
        self.trials = 0
        self.witness_trials = 0
        self.zero_trials = 0
        self.nontrivial_failures = 0
        self.log = [] if trace else None

    def record(self, tau, kind: str, g: Optional[int] = None, **extra) -> None:
        self.trials += 1
        if kind.startswith("witness"):
            self.witness_trials += 1
        if kind == "zero":
            self.zero_trials += 1
        if kind == "unit":
            self.nontrivial_failures += 1
        if self.log is not None:
            entry = {"trial": self.trials, "tau": list(tau), "kind": kind}
            if g is not None:
                entry["gcd"] = g
            entry.update(extra)
            self.log.append(entry)

    def finish(self, factor: Optional[int]) -> FactorReport:
        if factor is not None:
            assert 1 < factor < self.c and self.c % factor == 0
            outcome = "Factor"
        elif self.trials >= 1 and self.nontrivial_failures == 0:
            outcome = "Trivial"
        else:
            outcome = "Exhausted"
        return FactorReport(
            outcome=outcome,
            factor=factor,
            trials=self.trials,
            witness_trials=self.witness_trials,
            zero_trials=self.zero_trials,
            per_trial_log=self.log,
        )


# ---------------------------------------------------------------------------
# the core driver


def factor_semiprime(
    c: int, tmap: TriangularMap, cfg: FactorConfig
) -> FactorReport:
    """Sample tau, evaluate the map over Z/cZ, classify gcds; first proper
    factor wins. A value of 0 and a witness whose gcd is all of c are both
    trivial trials; anything with gcd 1 is a plain miss.
    """
    if c < 4:
        raise ValueError("c must be a composite of at least 4")
    modulus = Modulus(c)
    tally = _Tally(c, cfg.trace)

    reduced = tmap.reduced_mod(modulus)
    if reduced[0] == "witness":
        # the map itself degenerates mod c before any sampling
        cls = gcd_extract(reduced[1].divisor, c)
        if isinstance(cls, Factor):
            return tally.finish(cls.f)
        return FactorReport(
            outcome="Trivial", factor=None, trials=0,
            witness_trials=0, zero_trials=0,
            per_trial_log=[] if cfg.trace else None,
        )

    for i in range(cfg.max_trials):
        tau = sample_tau(cfg.seed, i, c, tmap.M)
        out = eval_triangular(tmap, tau, modulus)
        if out.kind == "Witness":
            cls = gcd_extract(out.witness.divisor, c)
            if isinstance(cls, Factor):
                tally.record(tau, "witness-factor", cls.f, stage=out.trace_stage)
                return tally.finish(cls.f)
            tally.record(tau, "witness-trivial", c, stage=out.trace_stage)
            continue
        cls = gcd_extract(out.value, c)
        if isinstance(cls, Factor):
            tally.record(tau, "value-factor", cls.f)
            return tally.finish(cls.f)
        if isinstance(cls, TrivialAll):
            tally.record(tau, "zero", c)
        else:
            tally.record(tau, "unit", 1)
    return tally.finish(None)


# ---------------------------------------------------------------------------
# bisection over the zero-count scale


@dataclass(frozen=True)
class FamilyMember:
    np_estimate: int
    tmap: TriangularMap
    label: str = ""


class MapFamily:
    """Maps indexed by their zero-count estimate N_P."""

    def __init__(self, members: Sequence[FamilyMember]):
        self.members = sorted(members, key=lambda m: m.np_estimate)

    @property
    def max_m(self) -> int:
        return max(m.tmap.M for m in self.members) if self.members else 0

    def nearest(self, target: int) -> FamilyMember:
        if not self.members:
            raise FamilyGap("the map family is empty")
        lt = math.log(max(target, 1))
        return min(
            self.members, key=lambda m: abs(math.log(m.np_estimate) - lt)
        )


RUNG_CAP = 20
TRIAL_CAP = 10**4


def search_np(c: int, family: MapFamily, cfg: FactorConfig) -> FactorReport:
    """Bisection over orders of magnitude of N_P.

    Bracket [a_d, a_u] starts at [1, c^M]; each rung runs the member
    nearest the geometric midpoint for a bounded number of trials. A run
    that produced only trivial outcomes means the zero count overshoots
    the prime scale, so the upper end comes down; any nontrivial miss
    raises the lower end. First factor wins.
    """
    if c < 4:
        raise ValueError("c must be a composite of at least 4")
    if not family.members:
        raise FamilyGap("the map family is empty")
    a_d, a_u = 1, c**family.max_m
    tally = _Tally(c, cfg.trace)
    p_scale = math.sqrt(c)

    for rung in range(RUNG_CAP):
        mid = math.isqrt(a_d * a_u)
        if mid <= a_d or mid >= a_u:
            break  # bracket exhausted in integer resolution
        member = family.nearest(mid)
        pr = success_probability(
            ComplexityInputs(
                p=p_scale, k0=1, M=member.tmap.M, n_p=member.np_estimate
            )
        )
        budget = TRIAL_CAP if pr <= 0 else min(TRIAL_CAP, 8 * math.ceil(1 / pr))
        rung_seed = _mix64(cfg.seed ^ _mix64(rung + 1))
        inner = factor_semiprime(
            c,
            member.tmap,
            FactorConfig(max_trials=budget, seed=rung_seed, trace=cfg.trace),
        )
        tally.trials += inner.trials
        tally.witness_trials += inner.witness_trials
        tally.zero_trials += inner.zero_trials
        # unit misses = trials that were neither zeros nor witnesses
        tally.nontrivial_failures += (
            inner.trials - inner.zero_trials - inner.witness_trials
        )
        if tally.log is not None and inner.per_trial_log is not None:
            for entry in inner.per_trial_log:
                entry["rung"] = rung
                entry["memberNp"] = member.np_estimate
            tally.log.extend(inner.per_trial_log)
        if inner.outcome == "Factor":
            return tally.finish(inner.factor)
        if inner.outcome == "Trivial":
            a_u = mid  # only the trivial divisor: N_P too large
        else:
            a_d = mid  # plain misses: N_P too small
    return tally.finish(None)


# ---------------------------------------------------------------------------
# number-field variant


@dataclass(frozen=True)
class NFTriangularMap:
    """Triangular map whose coefficients live in Q(alpha), encoded
    componentwise: each coefficient is a tuple of k0 rationals in the
    power basis 1, alpha, ..., alpha^(k0-1).

    stages[k-1] = (N_k, D_k); each polynomial is a dict mapping an
    exponent tuple (length n) to such a coefficient vector. p_i holds the
    monic defining polynomial, low-to-high integer coefficients.
    """

    n: int
    M: int
    p_i: tuple  # length k0 + 1, last entry 1
    stages: tuple  # of (dict, dict)
    p0: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 1 <= self.M < self.n:
            raise ArityError(f"need 1 <= M < n, got M={self.M}, n={self.n}")
        if len(self.stages) != self.n - self.M:
            raise ArityError("stage count must be n - M")
        if not self.p_i or self.p_i[-1] != 1:
            raise ArityError("P_I must be monic with integer coefficients")

    @property
    def k0(self) -> int:
        return len(self.p_i) - 1


def _nf_coeff_mod(vec, modulus: Modulus) -> Union[list, DivisionWitness]:
    out = []
    for r in vec:
        red = reduce_rational_mod(Fraction(r), modulus)
        if isinstance(red, DivisionWitness):
            return red
        out.append(red.value)
    return out


def _nf_eval(
    terms: dict, xs: list, p_i, modulus: Modulus
) -> Union[QuotientPolyElement, DivisionWitness]:
    acc = QuotientPolyElement([0], modulus)
    for exp, vec in terms.items():
        coeff = _nf_coeff_mod(vec, modulus)
        if isinstance(coeff, DivisionWitness):
            return coeff
        term = QuotientPolyElement(coeff, modulus)
        for x, e in zip(xs, exp):
            for _ in range(e):
                term = quotient_mul(term, x, p_i)
        acc = quotient_add(acc, term)
    return acc


def factor_number_field(
    c: int, nfmap: NFTriangularMap, cfg: FactorConfig
) -> FactorReport:
    """The core loop with values in Z/cZ[X]/(P_I).

    The computed value m is a polynomial of degree < k0; its coefficients
    get the plain gcd treatment first, then the polynomial Euclidean
    algorithm against P_I hunts for a degree collapse. Any failed
    inversion along the way surfaces as a witness whose gcd with c is
    checked the same way.
    """
    if c < 4:
        raise ValueError("c must be a composite of at least 4")
    modulus = Modulus(c)
    p_i = nfmap.p_i
    tally = _Tally(c, cfg.trace)
    n, M = nfmap.n, nfmap.M

    def classify(x, tau, kind_prefix: str):
        """Returns a factor or None, recording the trial."""
        cls = gcd_extract(x, c)
        if isinstance(cls, Factor):
            tally.record(tau, f"{kind_prefix}-factor", cls.f)
            return cls.f
        return None

    for i in range(cfg.max_trials):
        tau = sample_tau(cfg.seed, i, c, M)
        xs = [QuotientPolyElement([0], modulus) for _ in range(n)]
        for j, t in enumerate(tau):
            xs[n - M + j] = QuotientPolyElement([t], modulus)
        witness: Optional[DivisionWitness] = None
        for k in range(n - M, 0, -1):
            n_terms, d_terms = nfmap.stages[k - 1]
            d = _nf_eval(d_terms, xs, p_i, modulus)
            if isinstance(d, DivisionWitness):
                witness = d
                break
            num = _nf_eval(n_terms, xs, p_i, modulus)
            if isinstance(num, DivisionWitness):
                witness = num
                break
            q = quotient_div(num, d, p_i)
            if isinstance(q, DivisionWitness):
                witness = q
                break
            xs[k - 1] = q

        if witness is not None:
            f = classify(witness.divisor, tau, "witness")
            if f is not None:
                return tally.finish(f)
            tally.record(tau, "witness-trivial", c)
            continue

        m_val = _nf_eval(nfmap.p0, xs, p_i, modulus)
        if isinstance(m_val, DivisionWitness):
            f = classify(m_val.divisor, tau, "witness")
            if f is not None:
                return tally.finish(f)
            tally.record(tau, "witness-trivial", c)
            continue

        if m_val.is_zero:
            tally.record(tau, "zero", c)
            continue
        hit = None
        for coeff in m_val.coeffs:
            cls = gcd_extract(coeff, c)
            if isinstance(cls, Factor):
                hit = cls.f
                break
        if hit is not None:
            tally.record(tau, "value-factor", hit)
            return tally.finish(hit)
        # degree-collapse path
        g = quotient_poly_gcd(m_val, p_i, modulus)
        if isinstance(g, DivisionWitness):
            f = classify(g.divisor, tau, "witness")
            if f is not None:
                return tally.finish(f)
            tally.record(tau, "witness-trivial", c)
            continue
        if isinstance(g, Factor):
            tally.record(tau, "gcd-factor", g.f)
            return tally.finish(g.f)
        if isinstance(g, TrivialAll):
            tally.record(tau, "zero", c)
        else:
            tally.record(tau, "unit", 1)
    return tally.finish(None)


def gaussian_integer_fixture() -> NFTriangularMap:
    """A 2-variable map over Q(i): x1 = x2 - i, value m = x1.

    At parameter tau the value is the linear polynomial tau - X in the
    quotient by X^2 + 1; the Euclidean step against X^2 + 1 leaves the
    constant tau^2 + 1, so a trial succeeds exactly when tau^2 + 1 shares
    a single prime with c. Primes 1 mod 4 are reachable, primes 3 mod 4
    are not.
    """
    one = (Fraction(1), Fraction(0))
    minus_alpha = (Fraction(0), Fraction(-1))
    n1 = {(0, 1): one, (0, 0): minus_alpha}  # x2 - alpha
    d1 = {(0, 0): one}
    p0 = {(1, 0): one}
    return NFTriangularMap(
        n=2, M=1, p_i=(1, 0, 1), stages=((n1, d1),), p0=p0
    )


# ---------------------------------------------------------------------------
# Pollard baselines


def pollard_baseline(
    c: int,
    variant: str,
    cfg: FactorConfig,
    bound: Optional[int] = None,
) -> FactorReport:
    """Classic comparison methods under the same report contract.

    variant "rho": Floyd cycle detection on x -> x^2 + b mod c, restarting
    with a fresh (start, b) whenever the cycle closes on gcd = c; trials
    count iterations. variant "pminus1": staged exponentiation of a base
    by prime powers up to the bound, gcd check after each stage; trials
    count gcd checks.
    """
    if c < 4:
        raise ValueError("c must be a composite of at least 4")
    tally = _Tally(c, cfg.trace)
    if c % 2 == 0:
        # neither method handles even c gracefully; factor 2 is free
        tally.record((), "value-factor", 2)
        return tally.finish(2)

    if variant == "rho":
        words = _word_stream(cfg.seed, 0)
        budget = cfg.max_trials
        while budget > 0:
            x = y = 2 + next(words) % (c - 3)
            b = 1 + next(words) % (c - 2)
            restart = False
            while budget > 0:
                budget -= 1
                x = (x * x + b) % c
                y = (y * y + b) % c
                y = (y * y + b) % c
                g = math.gcd(abs(x - y), c)
                if g == c:
                    tally.record((x,), "zero", c)  # cycle closed: restart
                    restart = True
                    break
                if g > 1:
                    tally.record((x,), "value-factor", g)
                    return tally.finish(g)
                tally.record((x,), "unit", 1)
            if not restart and budget <= 0:
                break
        return tally.finish(None)

    if variant == "pminus1":
        if bound is None or bound < 2:
            raise ValueError("pminus1 needs a smoothness bound of at least 2")
        primes = _primes_up_to(bound)
        words = _word_stream(cfg.seed, 1)
        bases = [2, 3, 5, 7]
        for base in bases:
            if math.gcd(base, c) not in (1, c):
                g = math.gcd(base, c)
                tally.record((base,), "value-factor", g)
                return tally.finish(g)
            a = base % c
            stalled = False
            for p in primes:
                if tally.trials >= cfg.max_trials:
                    stalled = True
                    break
                e = 1
                while p ** (e + 1) <= bound:
                    e += 1
                a = pow(a, p**e, c)
                g = math.gcd(a - 1, c)
                if 1 < g < c:
                    tally.record((base, p), "value-factor", g)
                    return tally.finish(g)
                if g == c:
                    tally.record((base, p), "zero", c)
                    stalled = True
                    break  # exponent overshot every factor at once
                tally.record((base, p), "unit", 1)
            if stalled and tally.trials >= cfg.max_trials:
                break
        return tally.finish(None)

    raise ValueError(f"unknown variant {variant!r}")


def _primes_up_to(n: int) -> list:
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i in range(2, n + 1) if sieve[i]]

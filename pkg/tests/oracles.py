"""Independent oracles for the test suite.

Everything here recomputes expected values through a different route than
the package: plain integer arithmetic with Fermat inverses instead of the
Modulus machinery, truth tables instead of flat enumeration, closed-form
barycentric weights instead of nullspace elimination. Map data (stage
polynomials) is shared with the package where the map itself is the object
under test; the arithmetic path is not.
"""

import itertools
import math
from fractions import Fraction


# ---------------------------------------------------------------------------
# Vandermonde nullspace, closed form

def barycentric_weights(nodes):
    """w_i = 1 / prod_{j != i} (c_i - c_j).

    The right nullspace of the (n-1) x n Vandermonde matrix with rows
    (c_1^k ... c_n^k), k = 0..n-2, is spanned by exactly this vector:
    sum_i w_i c_i^k = 0 for k < n-1 is the classical divided-difference
    identity.
    """
    ws = []
    for i, ci in enumerate(nodes):
        prod = Fraction(1)
        for j, cj in enumerate(nodes):
            if i != j:
                prod *= ci - cj
        ws.append(1 / prod)
    return ws


# ---------------------------------------------------------------------------
# plain-integer triangular evaluation mod a prime

def _eval_terms(poly, xs, p):
    total = 0
    for exp, coef in poly.terms():
        assert coef.denominator == 1, "oracle expects integer coefficients"
        t = coef.numerator % p
        for e, x in zip(exp, xs):
            if e:
                t = t * pow(x, e, p) % p
        total = (total + t) % p
    return total


def run_stages_mod(tmap, taus, p):
    """("witness", k) at the first vanishing stage denominator, else
    ("value", P0 mod p). Inverses via Fermat, no shared division code."""
    n, m = tmap.n, tmap.M
    xs = [0] * n
    for j, t in enumerate(taus):
        xs[n - m + j] = t % p
    for k in range(n - m, 0, -1):
        nk, dk = tmap.stages[k - 1]
        d = _eval_terms(dk, xs, p)
        if d == 0:
            return ("witness", k)
        xs[k - 1] = _eval_terms(nk, xs, p) * pow(d, p - 2, p) % p
    return ("value", _eval_terms(tmap.P0, xs, p))


def joint_trial_class(tmap, taus, p, q):
    """Outcome of one trial mod c = p*q: "factor", "trivial", or "miss".

    The mod-c recursion mirrors both per-prime recursions until its first
    failed division, which is the earliest (largest-k) stage failing either
    prime; the witness gcd is proper exactly when the two primes do not
    fail at the same stage. A completed value yields a factor when it
    vanishes mod exactly one prime.
    """
    rp = run_stages_mod(tmap, taus, p)
    rq = run_stages_mod(tmap, taus, q)
    if rp[0] == "witness" or rq[0] == "witness":
        if rp[0] == "witness" and rq[0] == "witness" and rp[1] == rq[1]:
            return "trivial"
        return "factor"
    zp, zq = rp[1] == 0, rq[1] == 0
    if zp and zq:
        return "trivial"
    if zp or zq:
        return "factor"
    return "miss"


def exact_success_probability(tmap, p, q):
    """(successes, total): exhaustive trial classification over Z_{pq}."""
    assert tmap.M == 1
    hits = sum(
        1 for tau in range(p * q) if joint_trial_class(tmap, [tau], p, q) == "factor"
    )
    return hits, p * q


def residue_collision_probability(taus, p, q):
    """The acceptance-criterion oracle: distinct root residues mod each
    prime (roots whose denominator the prime divides have no residue and
    are skipped), combined as P(zero mod exactly one prime)."""

    def residues(prime):
        out = set()
        for t in taus:
            if t.denominator % prime == 0:
                continue
            out.add(t.numerator * pow(t.denominator, prime - 2, prime) % prime)
        return out

    np_, nq = len(residues(p)), len(residues(q))
    return Fraction(np_, p) * Fraction(q - nq, q) + Fraction(nq, q) * Fraction(p - np_, p)


# ---------------------------------------------------------------------------
# Gaussian-integer fixture: exact per-trial success set over Z_c

def gaussian_fixture_success(tau, c):
    """A trial at tau succeeds iff a coefficient of tau - X shares exactly
    one prime with c, or the Euclidean constant tau^2 + 1 does."""
    g = math.gcd(tau, c)
    if 1 < g < c:
        return True
    g = math.gcd(tau * tau + 1, c)
    return 1 < g < c


# ---------------------------------------------------------------------------
# Boolean truth tables

def sat_solutions(nvars, cnf):
    """All satisfying assignments of a signed-literal CNF, brute force."""
    out = []
    for bits in itertools.product((False, True), repeat=nvars):
        good = True
        for cl in cnf:
            if not any(bits[l - 1] if l > 0 else not bits[-l - 1] for l in cl):
                good = False
                break
        if good:
            out.append(bits)
    return out


# ---------------------------------------------------------------------------
# plane curves over F_q, double-loop count

def plane_points_bruteforce(terms, q):
    """Projective point count of the curve f = 0 for an affine polynomial
    given as {(i, j): coefficient}: affine zeros plus the zeros of the
    top-degree form on the line at infinity ([1:t:0] for all t, then
    [0:1:0])."""
    affine = 0
    for x in range(q):
        for y in range(q):
            v = 0
            for (i, j), coef in terms.items():
                v = (v + coef * pow(x, i, q) * pow(y, j, q)) % q
            if v == 0:
                affine += 1
    degree = max(i + j for (i, j), coef in terms.items() if coef % q)
    top = {(i, j): coef for (i, j), coef in terms.items() if i + j == degree}
    infinity = 0
    for t in range(q):
        v = sum(coef * pow(t, j, q) for (i, j), coef in top.items()) % q
        if v == 0:
            infinity += 1
    if top.get((0, degree), 0) % q == 0:
        infinity += 1
    return {"affine": affine, "atInfinity": infinity, "projective": affine + infinity}

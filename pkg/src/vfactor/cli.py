"""Command-line front door.

Eight subcommands: build maps, verify embedded fixtures, run factoring
trials, bisect over a map family, count points mod q, evaluate the cost
model, enumerate Boolean-model points, and benchmark against the Pollard
baselines. Machine-readable reports go to stdout (JSON except for bench,
which emits CSV); human summaries go to stderr. Exit 0 on success, 1 on
a verification failure or an exhausted run, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import functools
import json
import math
import os
import random
import sys
import time
from fractions import Fraction
from typing import Optional

from . import analysis
from .builder import build_example_n4, build_from_params, build_third_family
from .errors import (
    ArityError,
    BudgetExceeded,
    CorrespondenceViolation,
    EmptyModel,
    FamilyGap,
    IndependenceViolation,
    NoInteriorOptimum,
    ZeroPivot,
)
from .exact_arith import as_rational, format_rational
from .factor import (
    FactorConfig,
    FamilyMember,
    MapFamily,
    factor_number_field,
    factor_semiprime,
    gaussian_integer_fixture,
    pollard_baseline,
    search_np,
)
from .models import (
    diagonal_model,
    enumerate_isolated_points,
    model_a,
    model_from_cnf,
    parse_dimacs,
    cnf_to_3sat,
    reduce_model,
    sat_correspondence,
    verify_independence_property,
)
from .variety import (
    enumerate_quadratic_zeros,
    eval_triangular,
    verify_gaussian_form,
    verify_membership,
)

MAP_FIXTURES = ("n4", "n7", "n10")
CLOSED_FORM_SAMPLES = 50
BENCH_METHODS = ("n4", "search", "rho", "pminus1")


# ---------------------------------------------------------------------------
# embedded fixtures (deterministic: internal build seed 0)


@functools.lru_cache(maxsize=None)
def _fixture(name: str):
    """(model, tmap) for an embedded map fixture."""
    if name == "n4":
        model, tmap, _ = build_example_n4()
        return model, tmap
    if name == "n7":
        return build_third_family(7, seed=0)
    if name == "n10":
        return build_third_family(10, seed=0)
    raise ArityError(f"unknown fixture {name!r}")


def _emit(payload: str, out: Optional[str]) -> None:
    sys.stdout.write(payload)
    if not payload.endswith("\n"):
        sys.stdout.write("\n")
    if out:
        with open(out, "w") as fh:
            fh.write(payload if payload.endswith("\n") else payload + "\n")


def _say(text: str) -> None:
    print(text, file=sys.stderr)


def _json_report(report: dict, out: Optional[str]) -> None:
    _emit(json.dumps(report, indent=2), out)


# ---------------------------------------------------------------------------
# subcommand bodies


def _cmd_build(args) -> int:
    config = {
        "family": args.family,
        "n": args.n,
        "seed": args.seed,
        "A": _parse_rationals(args.A) if args.A else None,
        "Abar": _parse_rationals(args.Abar) if args.Abar else None,
        "params": _parse_rationals(args.params) if args.params else None,
    }
    t0 = time.perf_counter()
    model, tmap = build_from_params(config)
    dt = time.perf_counter() - t0
    report = {
        "seed": args.seed,
        "family": args.family,
        "n": tmap.n,
        "M": tmap.M,
        "order": list(tmap.order),
        "model": model.to_json(),
        "map": tmap.to_json(),
    }
    _json_report(report, args.out)
    _say(f"built {args.family} map: n={tmap.n} M={tmap.M} ({dt:.2f}s)")
    return 0


def _rand_tau(rng: random.Random) -> Fraction:
    num = rng.randint(-10**6, 10**6)
    den = rng.randint(1, 10**6)
    return Fraction(num, den)


def _verify_n4(seed: int) -> dict:
    model, tmap, closed = build_example_n4()
    rng = random.Random(seed)

    constant = None
    samples = 0
    closed_ok = True
    while samples < CLOSED_FORM_SAMPLES:
        tau = _rand_tau(rng)
        ratio = closed.ratio(tau)
        if ratio is None or ratio == 0:
            continue  # tau hit a Q-polynomial zero or a root; resample
        outcome = eval_triangular(tmap, [tau])
        if outcome.kind != "RationalValue":
            closed_ok = False
            break
        if constant is None:
            constant = outcome.value / ratio
        elif outcome.value != constant * ratio:
            closed_ok = False
            break
        samples += 1

    root_outcomes = [eval_triangular(tmap, [t]) for t in closed.taus]
    roots_ok = all(
        o.kind == "RationalValue" and o.value == 0 for o in root_outcomes
    )

    pts = enumerate_quadratic_zeros(model)
    membership = verify_membership(tmap, pts)
    polys = [model.reconstruct_poly(l) for l in range(1, 4)]
    gauss = verify_gaussian_form(polys)

    return {
        "closedForm": {
            "samples": samples,
            "constant": format_rational(constant) if constant is not None else None,
            "ok": closed_ok,
        },
        "roots": {"count": len(closed.taus), "allZero": roots_ok},
        "membership": {"points": len(pts), "ok": membership.ok},
        "gaussianForm": {"ok": gauss.ok, "violations": gauss.violations},
    }


def _verify_third(name: str) -> dict:
    model, tmap = _fixture(name)
    pts = enumerate_quadratic_zeros(model)
    membership = verify_membership(tmap, pts)
    distinct = len(set(pts.points)) == len(pts)
    polys = [model.reconstruct_poly(l) for l in range(1, tmap.n - tmap.M + 1)]
    gauss = verify_gaussian_form(polys)
    return {
        "n": tmap.n,
        "M": tmap.M,
        "points": {"count": len(pts), "expected": 2**tmap.n, "distinct": distinct},
        "membership": {"ok": membership.ok, "failures": membership.failures},
        "gaussianForm": {
            "stages": len(polys),
            "ok": gauss.ok,
            "violations": gauss.violations,
        },
    }


def _verify_diagonal(seed: int) -> dict:
    spec = diagonal_model(4, seed=seed)
    iso = enumerate_isolated_points(spec)
    indep = verify_independence_property(spec)
    corr = sat_correspondence(spec)
    red = reduce_model(spec, iso)
    re_embedded = {red.embed(p) for p in enumerate_isolated_points(red.spec).points.points}
    fixed_point = re_embedded == set(iso.points.points)
    return {
        "n": 4,
        "points": {"count": len(iso), "expected": 16},
        "independence": {"ok": indep.ok, "checked": indep.checked},
        "correspondence": {"solutions": corr.solutions, "points": corr.points},
        "reduction": {"m": red.m, "fixedPoint": fixed_point},
    }


def _cmd_verify(args) -> int:
    t0 = time.perf_counter()
    if args.fixture == "n4":
        checks = _verify_n4(args.seed)
        ok = (
            checks["closedForm"]["ok"]
            and checks["roots"]["allZero"]
            and checks["membership"]["ok"]
            and checks["gaussianForm"]["ok"]
        )
    elif args.fixture in ("n7", "n10"):
        checks = _verify_third(args.fixture)
        ok = (
            checks["points"]["count"] == checks["points"]["expected"]
            and checks["points"]["distinct"]
            and checks["membership"]["ok"]
            and checks["gaussianForm"]["ok"]
        )
    else:
        checks = _verify_diagonal(args.seed)
        ok = (
            checks["points"]["count"] == checks["points"]["expected"]
            and checks["independence"]["ok"]
            and checks["reduction"]["fixedPoint"]
        )
    dt = time.perf_counter() - t0
    report = {"seed": args.seed, "fixture": args.fixture, "ok": ok, "checks": checks}
    _json_report(report, args.out)
    _say(f"fixture {args.fixture}: {'verified' if ok else 'FAILED'} ({dt:.2f}s)")
    return 0 if ok else 1


def _cmd_factor(args) -> int:
    cfg = FactorConfig(
        max_trials=args.max_trials,
        seed=args.seed,
        ring="number-field" if args.fixture == "nf" else "plain",
        trace=args.trace,
    )
    t0 = time.perf_counter()
    if args.fixture == "nf":
        report = factor_number_field(args.c, gaussian_integer_fixture(), cfg)
    else:
        _, tmap = _fixture(args.fixture)
        report = factor_semiprime(args.c, tmap, cfg)
    dt = time.perf_counter() - t0
    payload = {
        "seed": args.seed,
        "c": args.c,
        "fixture": args.fixture,
        "maxTrials": args.max_trials,
        "report": report.to_json(),
    }
    _json_report(payload, args.out)
    if report.outcome == "Factor":
        _say(f"c={args.c}: factor {report.factor} after {report.trials} trials ({dt:.2f}s)")
    else:
        _say(f"c={args.c}: {report.outcome} after {report.trials} trials ({dt:.2f}s)")
    return 0 if report.outcome != "Exhausted" else 1


def _family_from_names(names) -> MapFamily:
    members = []
    for name in names:
        _, tmap = _fixture(name)
        members.append(FamilyMember(np_estimate=2**tmap.n, tmap=tmap, label=name))
    return MapFamily(members)


def _cmd_search(args) -> int:
    names = _parse_csv(args.members)
    for name in names:
        if name not in MAP_FIXTURES:
            raise ArityError(f"unknown family member {name!r}")
    cfg = FactorConfig(max_trials=args.max_trials, seed=args.seed, trace=args.trace)
    t0 = time.perf_counter()
    report = search_np(args.c, _family_from_names(names), cfg)
    dt = time.perf_counter() - t0
    payload = {
        "seed": args.seed,
        "c": args.c,
        "members": names,
        "report": report.to_json(),
    }
    _json_report(payload, args.out)
    _say(f"search c={args.c}: {report.outcome} after {report.trials} trials ({dt:.2f}s)")
    return 0 if report.outcome != "Exhausted" else 1


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    f = 2
    while f * f <= q:
        if q % f == 0:
            return False
        f += 1
    return True


def _cmd_count(args) -> int:
    if not _is_prime(args.q):
        raise ArityError(f"q must be prime, got {args.q}")
    _, tmap = _fixture(args.fixture)
    t0 = time.perf_counter()
    report = analysis.count_points_bruteforce(tmap, args.q)
    dt = time.perf_counter() - t0
    payload = {
        "seed": args.seed,
        "fixture": args.fixture,
        "q": args.q,
        "count": report.to_json(),
    }
    _json_report(payload, args.out)
    _say(
        f"{args.fixture} over Z_{args.q}: {report.curve_points} curve points, "
        f"{report.numerator_zeros} numerator zeros ({dt:.2f}s)"
    )
    return 0


def _cmd_analyze(args) -> int:
    payload = {"seed": args.seed}
    produced = False

    if args.np is not None:
        if args.p is None:
            raise ArityError("--np needs --p (with --k0 and --M)")
        inputs = analysis.ComplexityInputs(p=args.p, k0=args.k0, M=args.M, n_p=args.np)
        payload["trial"] = {
            "p": args.p,
            "k0": args.k0,
            "M": args.M,
            "np": args.np,
            "successProbability": analysis.success_probability(inputs),
            "trialsEstimate": analysis.trials_estimate(inputs),
        }
        produced = True

    if args.optimal:
        if args.p is None:
            raise ArityError("--optimal needs --p (with --k0 and --M)")
        xi0 = analysis.optimal_log_np(args.p, k0=args.k0, M=args.M)
        payload["optimal"] = {
            "p": args.p,
            "k0": args.k0,
            "M": args.M,
            "xi0": float(xi0),
            "npOptimal": float(math.exp(float(xi0))),
            "expansion": float(
                args.k0 * args.M * math.log(args.p) + math.log(math.log(2))
            ),
        }
        produced = True

    if args.scenario:
        kinds, nums = args.scenario.split(":", 1)
        c0_kind, f_kind = kinds.split(",")
        alpha, beta, b = (float(x) for x in nums.split(","))
        s = analysis.ScalingScenario(
            c0_kind=c0_kind, f_kind=f_kind, alpha=alpha, beta=beta, b=b
        )
        payload["scaling"] = analysis.litmus_classify(s)
        produced = True

    if args.genus is not None or args.plane_degree is not None or args.hyper:
        if args.q is None:
            raise ArityError("bound checks need --q")
        hyper = None
        if args.hyper:
            d, m = (int(x) for x in args.hyper.split(","))
            hyper = (d, m)
        report = analysis.bound_check(
            args.q,
            genus=args.genus,
            plane_degree=args.plane_degree,
            hypersurface=hyper,
        )
        payload["bounds"] = report.to_json()
        produced = True

    if not produced:
        raise ArityError(
            "nothing to analyze: give --np, --optimal, --scenario, or a bound flag"
        )
    _json_report(payload, args.out)
    _say("analysis blocks: " + ", ".join(k for k in payload if k != "seed"))
    return 0


def _parse_gamma(text: str) -> list:
    pairs = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        i, j = (int(x) for x in chunk.split(","))
        pairs.append((i, j))
    return pairs


def _cmd_models(args) -> int:
    if args.dimacs:
        with open(args.dimacs) as fh:
            nvars, cnf = parse_dimacs(fh.read())
        nvars, cnf, aux = cnf_to_3sat(nvars, cnf)
        spec = model_from_cnf(nvars, cnf, seed=args.seed)
        source = {"dimacs": args.dimacs, "auxVars": aux}
        n = nvars
    elif args.gamma:
        pairs = _parse_gamma(args.gamma)
        spec = model_a(args.n, pairs, seed=args.seed)
        source = {"gamma": [list(p) for p in pairs]}
        n = args.n
    else:
        spec = diagonal_model(args.n, seed=args.seed)
        source = {"diagonal": True}
        n = args.n

    iso = enumerate_isolated_points(spec)
    indep = verify_independence_property(spec)
    corr = sat_correspondence(spec)
    payload = {
        "seed": args.seed,
        "n": n,
        "nbar": spec.nbar,
        "source": source,
        "clauses2": len(spec.clauses2),
        "clauses3": len(spec.clauses3),
        "points": len(iso),
        "multiplicities": iso.multiplicities,
        "independence": indep.to_json(),
        "correspondence": {"solutions": corr.solutions, "points": corr.points},
    }
    if args.reduce:
        red = reduce_model(spec, iso)
        reduced_iso = enumerate_isolated_points(red.spec)
        originals = set(iso.points.points)
        re_embed_ok = all(
            red.embed(p) in originals for p in reduced_iso.points.points
        )
        payload["reduced"] = {
            "m": red.m,
            "keptPairs": red.kept_pairs,
            "points": len(reduced_iso),
            "reEmbedOk": re_embed_ok,
        }
    _json_report(payload, args.out)
    _say(f"model on {n} pairs: {len(iso)} isolated points")
    return 0


def _bench_one(method: str, c: int, args) -> tuple:
    cfg = FactorConfig(max_trials=args.max_trials, seed=args.seed)
    t0 = time.perf_counter()
    if method == "n4":
        _, tmap = _fixture("n4")
        report = factor_semiprime(c, tmap, cfg)
    elif method == "search":
        report = search_np(c, _family_from_names(["n4", "n7"]), cfg)
    elif method == "rho":
        report = pollard_baseline(c, "rho", cfg)
    else:
        report = pollard_baseline(c, "pminus1", cfg, bound=args.bound)
    wall_ms = (time.perf_counter() - t0) * 1000.0
    return report, wall_ms


def _cmd_bench(args) -> int:
    suite = [int(x) for x in _parse_csv(args.suite)]
    methods = _parse_csv(args.methods)
    for m in methods:
        if m not in BENCH_METHODS:
            raise ArityError(f"unknown method {m!r}; choose from {BENCH_METHODS}")
    lines = ["method,c,trials,success,wall_ms"]
    for method in methods:
        for c in suite:
            report, wall_ms = _bench_one(method, c, args)
            success = 1 if report.outcome == "Factor" else 0
            lines.append(f"{method},{c},{report.trials},{success},{wall_ms:.1f}")
            _say(
                f"bench {method} c={c}: {report.outcome}"
                f" trials={report.trials} ({wall_ms:.0f} ms)"
            )
    _emit("\n".join(lines), args.out)
    return 0


# ---------------------------------------------------------------------------
# argument plumbing


def _parse_csv(text: str) -> list:
    return [t.strip() for t in text.split(",") if t.strip()]


def _parse_rationals(text: str) -> list:
    return [str(as_rational(t)) for t in _parse_csv(text)]


def _add_common(sub) -> None:
    sub.add_argument("--seed", type=int, default=0, help="RNG seed (echoed in output)")
    sub.add_argument("--out", help="also write the report to this file")
    sub.add_argument(
        "--threads",
        type=int,
        default=int(os.environ.get("VFACTOR_THREADS", "1")),
        help="worker cap (execution is sequential; accepted for compatibility)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vfactor",
        description="exact variety toolkit: builders, counters, factoring trials",
    )
    subs = parser.add_subparsers(dest="subcommand", required=True)

    p = subs.add_parser("build", help="construct a map family member")
    p.add_argument("--family", required=True, choices=("n4", "half", "third"))
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--A", help="comma-separated A values")
    p.add_argument("--Abar", help="comma-separated A-bar (or A-double-prime) values")
    p.add_argument("--params", help="comma-separated k0,k1,r0,r1,s0,s1")
    _add_common(p)
    p.set_defaults(func=_cmd_build)

    p = subs.add_parser("verify", help="run an embedded fixture's check suite")
    p.add_argument(
        "--fixture", required=True, choices=MAP_FIXTURES + ("diagonal",)
    )
    _add_common(p)
    p.set_defaults(func=_cmd_verify)

    p = subs.add_parser("factor", help="factoring trials with a fixture map")
    p.add_argument("--c", type=int, required=True, help="odd semiprime to split")
    p.add_argument("--fixture", default="n4", choices=MAP_FIXTURES + ("nf",))
    p.add_argument("--max-trials", type=int, default=64)
    p.add_argument("--trace", action="store_true", help="keep a per-trial log")
    _add_common(p)
    p.set_defaults(func=_cmd_factor)

    p = subs.add_parser("search", help="bisect over map sizes while factoring")
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--members", default="n4,n7", help="comma-separated fixture names")
    p.add_argument("--max-trials", type=int, default=256)
    p.add_argument("--trace", action="store_true")
    _add_common(p)
    p.set_defaults(func=_cmd_search)

    p = subs.add_parser("count", help="brute-force point counts over Z_q")
    p.add_argument("--fixture", default="n4", choices=MAP_FIXTURES)
    p.add_argument("--q", type=int, required=True, help="prime modulus")
    _add_common(p)
    p.set_defaults(func=_cmd_count)

    p = subs.add_parser("analyze", help="cost model and point-count bounds")
    p.add_argument("--p", type=float, help="prime scale")
    p.add_argument("--k0", type=int, default=1)
    p.add_argument("--M", type=int, default=1)
    p.add_argument("--np", type=float, help="zero count N_P for one trial estimate")
    p.add_argument("--optimal", action="store_true", help="solve for xi0")
    p.add_argument(
        "--scenario",
        help="scaling shapes, e.g. power,power:2,0.5,1 (c0-kind,f-kind:alpha,beta,b)",
    )
    p.add_argument("--q", type=int, help="field size for bound checks")
    p.add_argument("--genus", type=int, help="genus for the curve band")
    p.add_argument("--plane-degree", type=int, help="degree for the plane-curve bound")
    p.add_argument("--hyper", help="d,M for the hypersurface bound")
    _add_common(p)
    p.set_defaults(func=_cmd_analyze)

    p = subs.add_parser("models", help="Boolean models and isolated points")
    p.add_argument("--n", type=int, default=3, help="number of variable pairs")
    p.add_argument("--gamma", help="extra 0-0 clauses as i,j;k,l pairs")
    p.add_argument("--dimacs", help="read a CNF file instead")
    p.add_argument("--reduce", action="store_true", help="also reduce and re-embed")
    _add_common(p)
    p.set_defaults(func=_cmd_models)

    p = subs.add_parser("bench", help="compare methods over a semiprime suite")
    p.add_argument("--suite", default="667,221,8051", help="comma-separated composites")
    p.add_argument(
        "--methods", default="n4,rho,pminus1", help=f"subset of {BENCH_METHODS}"
    )
    p.add_argument("--max-trials", type=int, default=512)
    p.add_argument("--bound", type=int, default=64, help="p-1 smoothness bound")
    _add_common(p)
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be positive")
    try:
        return args.func(args)
    except (ArityError, ZeroPivot, ValueError) as exc:
        parser.error(str(exc))  # exits 2
    except (
        BudgetExceeded,
        CorrespondenceViolation,
        EmptyModel,
        FamilyGap,
        IndependenceViolation,
        NoInteriorOptimum,
    ) as exc:
        _say(f"{type(exc).__name__}: {exc}")
        return 1
    return 2  # unreachable; parser.error raises SystemExit


if __name__ == "__main__":
    sys.exit(main())

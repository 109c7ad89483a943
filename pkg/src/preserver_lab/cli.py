"""Command-line interface: ``preserver-lab <command> [options]``.

Every command prints one JSON report with the keys ``command``, ``inputs``,
``seed``, ``results``, ``tolerances`` and ``timing``.  Exit status is 0 on
success, 1 when a violation or falsifying witness was found, 2 on invalid
arguments.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import hciz, linalg, order, preserver, symfun, thresholds
from .errors import PreserverLabError
from .io import parse_number, read_matrix_csv, read_moments_csv, to_json

__all__ = ["main", "build_parser", "dispatch", "SEED_ENV"]

SEED_ENV = "PRESERVER_LAB_SEED"
SEED_MAX = 2**64


class UsageError(Exception):
    """Raised for arguments that parse but fail validation."""


class Outcome:
    def __init__(self, results: dict, tolerances: dict | None = None, violation: bool = False):
        self.results = results
        self.tolerances = tolerances or {}
        self.violation = violation


def _floats(text: str) -> list[float]:
    return [float(parse_number(x)) for x in text.split(",") if x.strip()]


def _exacts(text: str) -> list[Fraction]:
    return [parse_number(x) for x in text.split(",") if x.strip()]


def _exponents(text: str) -> list:
    vals = _exacts(text)
    return [int(v) if v.denominator == 1 else float(v) for v in vals]


def _index_tuple(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",") if x.strip())


def _pairs(text: str) -> list[tuple[float, float]]:
    out = []
    for item in text.split(","):
        if not item.strip():
            continue
        key, sep, value = item.partition(":")
        if not sep:
            raise UsageError(f"expected key:value, got {item!r}")
        out.append((float(parse_number(key)), float(parse_number(value))))
    return out


def _check_N(args, n) -> None:
    if getattr(args, "N", None) is not None and args.N != len(n):
        raise UsageError(f"-N {args.N} does not match {len(n)} exponents")


def _report(threshold: thresholds.ThresholdReport) -> dict:
    return {
        "value": threshold.value,
        "formula": threshold.formula,
        "inputs": threshold.inputs,
        "witness": threshold.witness,
        "extras": threshold.extras,
    }


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_schur(args) -> Outcome:
    n = _exponents(args.n)
    integral = all(isinstance(e, int) for e in n)
    u = _exacts(args.u) if integral else _floats(args.u)
    results: dict = {}
    if args.engine in ("tableaux", "both"):
        if not integral:
            raise UsageError("the tableaux engine needs integral exponents")
        results["tableaux"] = symfun.schur_tableaux(n, u)
    if args.engine in ("bialternant", "both"):
        results["bialternant"] = symfun.schur_bialternant(n, u)
    if args.engine == "both":
        results["equal"] = results["tableaux"] == results["bialternant"]
    results["weyl_dimension"] = symfun.weyl_dimension(n)
    violation = args.engine == "both" and not results["equal"]
    return Outcome(results, violation=violation)


def cmd_threshold(args) -> Outcome:
    n = _exponents(args.n)
    _check_N(args, n)
    c = _floats(args.c) if args.c else [1.0] * len(n)
    if args.M is None and not (args.series or args.cube):
        raise UsageError("-M is required")
    if args.sharp:
        rep = thresholds.sharp_C(n, c, args.M, args.rho)
    elif args.qualitative:
        rep = thresholds.qualitative_K(n, c, args.M, args.rho, args.qualitative)
    elif args.rank1:
        rep = thresholds.rank1_threshold_at(_floats(args.rank1), n, c, args.M)
    elif args.rayleigh:
        rep = thresholds.rayleigh_threshold(read_matrix_csv(args.rayleigh, exact=True), n, c, args.M)
    elif args.series:
        tail = dict(_pairs(args.tail)) if args.tail else None
        atoms = _pairs(args.atoms) if args.atoms else None
        rep = thresholds.series_threshold(n, c, args.rho, coefficients=tail, atoms=atoms)
    else:
        if not args.alphas:
            raise UsageError("--cube needs --alphas")
        lo, hi = thresholds.cube_bounds(n, c, args.rho, _floats(args.alphas))
        return Outcome({"eta_lower": lo, "eta_upper": hi})
    return Outcome(_report(rep))


def _domain(args) -> preserver.Domain:
    if args.unbounded:
        return preserver.Domain.unbounded()
    if args.rho is None:
        raise UsageError("--rho is required unless --unbounded is given")
    if args.two_sided:
        return preserver.Domain.two_sided(args.rho)
    return preserver.Domain.bounded(args.rho)


def _cert_config(args) -> preserver.CertConfig:
    ranks = _index_tuple(args.ranks) if args.ranks else None
    return preserver.CertConfig(samples=args.samples, ranks=ranks, tol=args.tol, seed=args.seed)


def _cert_results(rep: preserver.CertReport) -> dict:
    out = {
        "verdict": rep.verdict,
        "samples": rep.samples,
        "worst_min_eigenvalue": rep.worst_min_eigenvalue,
        "horn_ok": rep.horn_ok,
        "horn_violation": rep.horn_violation,
        "rank_one_probes": rep.rank_one_probes,
        "witness": None,
    }
    if rep.witness is not None:
        w = rep.witness
        out["witness"] = {
            "matrix": w.matrix,
            "min_eigenvalue": w.min_eigenvalue,
            "precision": w.precision,
            "source": w.source,
            "vector": w.vector,
        }
    return out


def _cert_tolerances(cfg: preserver.CertConfig) -> dict:
    return {"psd_rtol": cfg.tol, "hp_rtol": cfg.hp_tol, "hp_dps": cfg.hp_dps}


def cmd_certify(args) -> Outcome:
    domain = _domain(args)
    f = preserver.PowerSum.parse(args.f, domain)
    cfg = _cert_config(args)
    rep = preserver.certify_preserver(f, args.N, config=cfg)
    results = {"function": str(f), "domain": domain.kind}
    results.update(_cert_results(rep))
    return Outcome(results, _cert_tolerances(cfg), violation=rep.verdict == "Falsified")


def cmd_sign_series(args) -> Outcome:
    base = _exponents(args.base)
    tail = [(e, int(s)) for e, s in _pairs(args.tail)] if args.tail else []
    pattern = preserver.SignPattern(tuple(base), tuple(tail))
    c = _floats(args.c) if args.c else [1.0] * len(base)
    rho = None if args.unbounded else args.rho
    if rho is None and not args.unbounded:
        raise UsageError("--rho is required unless --unbounded is given")
    f = preserver.construct_sign_series(pattern, c, rho, args.m_max)
    cfg = _cert_config(args)
    rep = preserver.certify_preserver(f, pattern.N, config=cfg)
    horn_ok, _ = preserver.horn_sign_check(f, pattern.N, f.domain)
    results = {
        "series": str(f),
        "terms": [[e, coef] for e, coef in f.terms],
        "domain": f.domain.kind,
        "horn_ok": horn_ok,
        "certification": _cert_results(rep),
    }
    return Outcome(results, _cert_tolerances(cfg), violation=rep.verdict == "Falsified")


def cmd_hciz(args) -> Outcome:
    alpha, x = _floats(args.alpha), _floats(args.x)
    exact = hciz.hciz_exact(alpha, x)
    est = hciz.hciz_mc(alpha, x, args.samples, args.seed, workers=args.workers)
    z = 0.0 if est.stderr == 0 else (est.mean - exact) / est.stderr
    within = abs(est.mean - exact) <= 4 * est.stderr or math.isclose(est.mean, exact, rel_tol=1e-12)
    results = {
        "exact": exact,
        "mean": est.mean,
        "stderr": est.stderr,
        "samples": est.samples,
        "z_score": z,
        "within_4_stderr": within,
        "schur_horn_lower": est.lower,
        "schur_horn_upper": est.upper,
    }
    return Outcome(results, {"z_bound": 4.0, "min_gap": hciz.MIN_GAP}, violation=not within)


def cmd_majorize(args) -> Outcome:
    m, n = _floats(args.m), _floats(args.n)
    results: dict = {"relation": order.weak_majorize(m, n)}
    violation = False
    if args.u:
        holds, lhs, rhs = order.cgs_check(m, n, _floats(args.u))
        results["cgs"] = {"holds": holds, "lhs": lhs, "rhs": rhs}
        violation = results["relation"] != order.NEITHER and not holds
    if args.converse:
        res = order.cgs_converse_search(m, n, budget=args.budget, seed=args.seed)
        results["converse"] = {
            "verdict": res.verdict,
            "probes": res.probes,
            "u": res.u,
            "probe": res.probe,
            "log_lhs": res.log_lhs,
            "log_rhs": res.log_rhs,
        }
        violation = violation or (results["relation"] != order.NEITHER and res.verdict == "Violated")
    tol = {"majorization_atol": order.MAJORIZATION_ATOL, "cgs_rtol": order.CGS_RTOL}
    return Outcome(results, tol, violation=violation)


def cmd_tn(args) -> Outcome:
    if bool(args.moments) == bool(args.moments_file):
        raise UsageError("give exactly one of --moments and --moments-file")
    moments = _floats(args.moments) if args.moments else read_moments_csv(args.moments_file)
    a = linalg.hankel_build(moments)
    results = {
        "hankel": a,
        "truncation": linalg.hankel_truncate(a),
        "is_tn": linalg.is_tn_hankel(moments, args.tol),
    }
    violation = False
    if args.brute:
        scale = max(1.0, float(np.max(np.abs(a))))
        brute = linalg.is_totally_nonnegative(a, args.tol * scale)
        results["brute_force"] = brute
        violation = brute != results["is_tn"]
    return Outcome(results, {"psd_rtol": args.tol}, violation=violation)


def cmd_logsup(args) -> Outcome:
    if bool(args.matrix) == bool(args.vandermonde):
        raise UsageError("give exactly one of --matrix and --vandermonde")
    if args.matrix:
        a = read_matrix_csv(args.matrix, exact=args.exact)
        check_tp = True
    else:
        u_text, _, n_text = args.vandermonde.partition(";")
        u, n = _exacts(u_text), _exponents(n_text)
        if args.exact:
            a = [[x**e for e in n] for x in u]
        else:
            a = np.array([[float(x) ** e for e in n] for x in u])
        check_tp = False
    i1, i2, j1, j2 = (_index_tuple(t) for t in (args.rows1, args.rows2, args.cols1, args.cols2))
    residual = order.logsup_check(a, i1, i2, j1, j2, check_tp=check_tp)
    meet_r, join_r = order.tuple_meet_join(i1, i2)
    meet_c, join_c = order.tuple_meet_join(j1, j2)
    scale = 1.0
    if not args.exact:
        arr = np.asarray(a, dtype=float)
        scale = max(1.0, float(np.max(np.abs(arr)))) ** (2 * len(i1))
    ok = residual >= 0 if args.exact else residual >= -1e-10 * scale
    results = {
        "residual": residual,
        "nonnegative": bool(ok),
        "meet": {"rows": meet_r, "cols": meet_c},
        "join": {"rows": join_r, "cols": join_c},
    }
    return Outcome(results, {"residual_rtol": 0.0 if args.exact else 1e-10}, violation=not ok)


def cmd_counterexample(args) -> Outcome:
    if args.two_sided:
        if args.k is None or args.t is None:
            raise UsageError("--two-sided needs -k and -t")
        value = preserver.two_sided_witness(args.k, args.t, args.rho)
        return Outcome({"kind": "two_sided", "quadratic_form": value, "negative": value < 0})
    if not args.n:
        raise UsageError("--complex needs -n")
    res = preserver.complex_counterexample(_exponents(args.n), args.rho, seed=args.seed)
    if res is None:
        return Outcome({"kind": "complex", "none_exists": True})
    results = {
        "kind": "complex",
        "none_exists": False,
        "z0": res.z0,
        "M": res.M,
        "u": list(res.u),
        "determinant": res.determinant,
    }
    return Outcome(results, {"span_rtol": preserver.SPAN_RTOL, "root_tol": preserver.DK_TOL})


COMMANDS: dict[str, Callable] = {
    "schur": cmd_schur,
    "threshold": cmd_threshold,
    "certify": cmd_certify,
    "sign-series": cmd_sign_series,
    "hciz": cmd_hciz,
    "majorize": cmd_majorize,
    "tn": cmd_tn,
    "logsup": cmd_logsup,
    "counterexample": cmd_counterexample,
}


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < SEED_MAX:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _default_seed() -> int:
    text = os.environ.get(SEED_ENV)
    if text is None:
        return 0
    try:
        return _seed(text)
    except (ValueError, argparse.ArgumentTypeError):
        raise SystemExit(f"error: {SEED_ENV}={text!r} is not a valid seed") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=None, help=f"RNG seed (default ${SEED_ENV} or 0)")
    common.add_argument("--out", help="write the JSON report here instead of stdout")

    parser = argparse.ArgumentParser(prog="preserver-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("schur", parents=[common], help="evaluate a Schur polynomial")
    p.add_argument("-n", required=True, help="exponents, comma separated")
    p.add_argument("-u", required=True, help="point, comma separated (decimals or p/q)")
    p.add_argument("--engine", choices=["tableaux", "bialternant", "both"], default="both")

    p = sub.add_parser("threshold", parents=[common], help="threshold constants")
    kind = p.add_mutually_exclusive_group(required=True)
    kind.add_argument("--sharp", action="store_true")
    kind.add_argument("--qualitative", choices=["integer", "real_rank1", "real_full", "two_sided"])
    kind.add_argument("--rank1", metavar="U", help="rank-one threshold at this vector")
    kind.add_argument("--rayleigh", metavar="CSV", help="threshold for the matrix in this file")
    kind.add_argument("--series", action="store_true")
    kind.add_argument("--cube", action="store_true")
    p.add_argument("-N", type=int)
    p.add_argument("-n", required=True)
    p.add_argument("-c")
    p.add_argument("-M", type=float)
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--tail", help="finite series tail as M:g pairs")
    p.add_argument("--atoms", help="atomic measure as t:w pairs")
    p.add_argument("--alphas", help="increasing powers for --cube")

    for name, help_text in (("certify", "try to falsify a preserver"), ("sign-series", "construct and certify")):
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name == "certify":
            p.add_argument("-f", required=True, help='power sum such as "1 + x - 0.21*x^2"')
            p.add_argument("-N", type=int, required=True)
        else:
            p.add_argument("--base", required=True, help="the N positive exponents")
            p.add_argument("-c", help="base coefficients (default all 1)")
            p.add_argument("--tail", help="signed tail as M:sign pairs, sign in -1,0,1")
            p.add_argument("--m-max", type=float, dest="m_max")
        p.add_argument("--rho", type=float)
        p.add_argument("--unbounded", action="store_true")
        if name == "certify":
            p.add_argument("--two-sided", action="store_true", dest="two_sided")
        p.add_argument("--samples", type=int, default=preserver.CertConfig.samples)
        p.add_argument("--ranks")
        p.add_argument("--tol", type=float, default=preserver.CertConfig.tol)

    p = sub.add_parser("hciz", parents=[common], help="Monte Carlo versus closed form")
    p.add_argument("--alpha", required=True)
    p.add_argument("-x", required=True)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("majorize", parents=[common], help="weak majorization and the determinant criterion")
    p.add_argument("-m", required=True)
    p.add_argument("-n", required=True)
    p.add_argument("-u", help="evaluate both determinant sides at this point")
    p.add_argument("--converse", action="store_true", help="search for a violating point")
    p.add_argument("--budget", type=int, default=order.CONVERSE_BUDGET)

    p = sub.add_parser("tn", parents=[common], help="total non-negativity of a Hankel matrix")
    p.add_argument("--moments")
    p.add_argument("--moments-file", dest="moments_file")
    p.add_argument("--tol", type=float, default=linalg.PSD_TOL)
    p.add_argument("--brute", action="store_true", help="compare with all-minors enumeration")

    p = sub.add_parser("logsup", parents=[common], help="log-supermodularity residual")
    p.add_argument("--matrix", help="CSV file")
    p.add_argument("--vandermonde", help='"u1,u2,...;n1,n2,..." generalized Vandermonde')
    p.add_argument("--rows1", required=True)
    p.add_argument("--rows2", required=True)
    p.add_argument("--cols1", required=True)
    p.add_argument("--cols2", required=True)
    p.add_argument("--exact", action="store_true")

    p = sub.add_parser("counterexample", parents=[common], help="complex or two-sided witnesses")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--complex", action="store_true")
    which.add_argument("--two-sided", action="store_true", dest="two_sided")
    p.add_argument("-n")
    p.add_argument("-k", type=int)
    p.add_argument("-t", type=float)
    p.add_argument("--rho", type=float, default=1.0)
    return parser


def _inputs(args) -> dict:
    skip = {"command", "out", "seed"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _execute(parser: argparse.ArgumentParser, args) -> tuple[int, str]:
    if args.seed is None:
        args.seed = _default_seed()
    start = time.perf_counter()
    try:
        outcome = COMMANDS[args.command](args)
    except (UsageError, PreserverLabError, ValueError, ZeroDivisionError) as exc:
        parser.exit(2, f"{parser.prog} {args.command}: error: {exc}\n")
    report = {
        "command": args.command,
        "inputs": _inputs(args),
        "seed": args.seed,
        "results": outcome.results,
        "tolerances": outcome.tolerances,
        "timing": {"seconds": time.perf_counter() - start},
    }
    return (1 if outcome.violation else 0), to_json(report)


def dispatch(argv: Sequence[str] | None = None) -> tuple[int, str]:
    """Run one command; returns (exit code, JSON report)."""
    parser = build_parser()
    return _execute(parser, parser.parse_args(argv))


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    code, text = _execute(parser, args)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

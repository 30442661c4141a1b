"""Command-line front end.

Subcommands::

    cbid expand FAMILY P...   [--format plain|latex|json]
    cbid verify FAMILY P...   [--mode exact|fuzz|both] [--seed S] [--trials T] [--prime P]
    cbid derive M1 M2 ...
    cbid grid FAMILY BOUND    [--mode exact|fuzz|both] [--arity N]

Exit status is 0 when every requested check holds, 1 when any fails and 2
for usage errors or bad parameters.  ``--json`` prints exactly one JSON
document per invocation.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
import time
from typing import Sequence

from .derivation import check_derivation
from .errors import CBIDError
from .identities import FAMILIES, Identity, VerificationReport, build, verify_exact
from .pit import DEFAULT_SEED, MERSENNE_61, FuzzConfig, fuzz_verify
from .textfmt import format_poly, format_rf, format_sum

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


# -- renderings -----------------------------------------------------------------------------------


def identity_json(identity: Identity) -> dict:
    names = identity.names
    return {
        "family": identity.family,
        "params": list(identity.params),
        "arity": identity.arity,
        "constraint": None if identity.constraint is None else format_poly(identity.constraint, names),
        "lhs": [format_rf(t, names) for t in identity.lhs_terms],
        "rhs": [format_rf(t, names) for t in identity.rhs_terms],
    }


def identity_latex(identity: Identity) -> str:
    def side(info):
        if not info:
            return "0"
        return " + ".join(i.latex for i in info)

    out = f"{side(identity.lhs_info)} = {side(identity.rhs_info)}"
    if identity.constraint is not None:
        out += f" \\quad \\text{{on }} {format_poly(identity.constraint, identity.names).replace('*', ' ')} = 0"
    return out


def report_line(report: VerificationReport) -> str:
    ident = f"{report.family}({', '.join(map(str, report.params))})"
    line = f"{ident} {report.method}: {report.verdict} ({report.elapsed * 1000:.1f} ms"
    if report.method == "modp":
        line += f", {report.trials} trials, seed {report.seed}"
    line += ")"
    if report.residual is not None:
        line += f"\n  residual: {format_rf(report.residual, report.names)}"
    if report.detail:
        line += f"\n  {report.detail}"
    return line


# -- commands -------------------------------------------------------------------------------------


def run_checks(identity: Identity, mode: str, cfg: FuzzConfig) -> list[VerificationReport]:
    reports = []
    if mode in ("exact", "both"):
        reports.append(verify_exact(identity))
    if mode in ("fuzz", "both"):
        reports.append(fuzz_verify(identity, cfg))
    return reports


def cmd_expand(args) -> int:
    identity = build(args.family, args.params)
    fmt = "json" if args.json else args.format
    if fmt == "json":
        print(json.dumps(identity_json(identity)))
    elif fmt == "latex":
        print(identity_latex(identity))
    else:
        print(identity.plain())
    return EXIT_OK


def cmd_verify(args) -> int:
    identity = build(args.family, args.params)
    reports = run_checks(identity, args.mode, _fuzz_config(args))
    if args.json:
        docs = [r.to_json() for r in reports]
        print(json.dumps(docs[0] if len(docs) == 1 else docs))
    else:
        print(identity.plain())
        for r in reports:
            print(report_line(r))
    return EXIT_OK if all(r.holds for r in reports) else EXIT_FAIL


def cmd_derive(args) -> int:
    if len(args.orders) < 2:
        raise CBIDError("derive needs at least two orders")
    check = check_derivation(args.orders)
    yn = {True: "yes", False: "no"}
    if args.json:
        print(json.dumps({
            "orders": list(check.orders),
            "report": check.report.to_json(),
            "matches_inverse_n": check.matches_inverse,
            "matches_n_powers": check.matches_n_powers,
            "mismatch": check.mismatch,
        }))
    else:
        print(f"derived: {format_sum(check.derived.lhs_terms, check.derived.names)} = "
              f"{format_sum(check.derived.rhs_terms, check.derived.names)}")
        print(f"matches inverse_n: {yn[check.matches_inverse]}; "
              f"matches n_powers after inversion: {yn[check.matches_n_powers]}")
        if check.mismatch:
            print(f"first mismatch: {check.mismatch}")
    return EXIT_OK if check.ok else EXIT_FAIL


def grid_params(family: str, bound: int, arity: int = 2):
    """All parameter tuples with entries in ``0..bound``, in lexicographic order.

    Tuples the builder rejects (``m - r + k - l != 0``, ``m <= r`` and so on)
    are filtered out by the caller.
    """
    fam = FAMILIES[family]
    width = arity if fam.nparams is None else fam.nparams
    if family == "three_param":
        for m, r, k in itertools.product(range(bound + 1), repeat=3):
            l = m - r + k
            if 0 <= l <= bound:
                yield (m, r, k, l)
        return
    yield from itertools.product(range(bound + 1), repeat=width)


def run_grid(family: str, bound: int, mode: str = "exact", cfg: FuzzConfig | None = None, arity: int = 2):
    """Verify every valid tuple; returns ``[(params, reports)]`` ordered by tuple."""
    if family not in FAMILIES:
        build(family, ())  # raises the unknown-family error
    if bound < 0:
        raise CBIDError(f"bound must be >= 0, got {bound}")
    cfg = cfg or FuzzConfig()
    rows = []
    for params in grid_params(family, bound, arity):
        try:
            identity = build(family, params)
        except CBIDError:
            continue
        rows.append((params, run_checks(identity, mode, cfg)))
    return rows


def cmd_grid(args) -> int:
    fam = FAMILIES.get(args.family)
    if fam is not None and fam.nparams is None and args.arity < 2:
        raise CBIDError(f"--arity must be >= 2, got {args.arity}")
    start = time.perf_counter()
    rows = run_grid(args.family, args.bound, args.mode, _fuzz_config(args), args.arity)
    elapsed = time.perf_counter() - start
    passed = sum(all(r.holds for r in reports) for _, reports in rows)
    if args.json:
        print(json.dumps({
            "family": args.family,
            "bound": args.bound,
            "identities": len(rows),
            "pass": passed,
            "fail": len(rows) - passed,
            "elapsed_ms": round(elapsed * 1000.0, 3),
            "reports": [r.to_json() for _, reports in rows for r in reports],
        }))
    else:
        for params, reports in rows:
            cells = "  ".join(f"{r.method} {r.verdict}" for r in reports)
            print(f"{args.family}({', '.join(map(str, params))})  {cells}")
        print(f"{len(rows)} identities, {passed} pass, {len(rows) - passed} fail, {elapsed:.2f} s")
    return EXIT_OK if passed == len(rows) else EXIT_FAIL


# -- argument handling ----------------------------------------------------------------------------


def _default_seed() -> int:
    env = os.environ.get("CBID_SEED")
    if env is None:
        return DEFAULT_SEED
    try:
        return int(env, 0)
    except ValueError:
        raise CBIDError(f"CBID_SEED must be an integer, got {env!r}") from None


def _fuzz_config(args) -> FuzzConfig:
    seed = args.seed if args.seed is not None else _default_seed()
    try:
        return FuzzConfig(trials=args.trials, prime=args.prime, seed=seed)
    except ValueError as exc:
        raise CBIDError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit one JSON document")
    fuzz = argparse.ArgumentParser(add_help=False)
    fuzz.add_argument("--mode", choices=("exact", "fuzz", "both"), default="exact")
    fuzz.add_argument("--seed", type=int, default=None, help="fuzz seed (default: $CBID_SEED or built-in)")
    fuzz.add_argument("--trials", type=int, default=64)
    fuzz.add_argument("--prime", type=int, default=MERSENNE_61)

    families = ", ".join(FAMILIES)
    parser = argparse.ArgumentParser(prog="cbid", description="Build and verify Chaundy-Bullard type identities.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", parents=[common], help="print an identity's terms")
    p.add_argument("family", help=families)
    p.add_argument("params", nargs="*", type=int)
    p.add_argument("--format", choices=("plain", "latex", "json"), default="plain")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("verify", parents=[common, fuzz], help="verify one identity")
    p.add_argument("family", help=families)
    p.add_argument("params", nargs="*", type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("derive", parents=[common], help="derive the inverse-power identity by differentiation")
    p.add_argument("orders", nargs="+", type=int)
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("grid", parents=[common, fuzz], help="verify every parameter tuple up to a bound")
    p.add_argument("family", help=families)
    p.add_argument("bound", type=int)
    p.add_argument("--arity", type=int, default=2, help="vector length for inverse_n, n_powers, transformed")
    p.set_defaults(func=cmd_grid)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CBIDError, ValueError) as exc:
        print(f"cbid: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

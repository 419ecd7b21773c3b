"""Command-line front end.

Subcommands::

    lacunary verify --suite identities --group 2^4
    lacunary sweep chang --count 100 --seed 7 --out chang.jsonl
    lacunary eval higher-moment --group 64 --lambda 1,2,4 --set interval:0:9 --l 3
    lacunary dissoc check --group 7 --set 1,2,3

Exit codes: 0 pass, 1 assertion or budget failure, 2 usage error,
3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import re
import sys

import numpy as np

from .dissociation import CapExceededError, SetMask, greedy_dissociated, interval, is_dissociated, random_set, subspace
from .fourier import FuncC
from .group import GroupSpec, GroupSpecError, parse_group
from .harness import inequalities as ineq
from .harness import suites
from .harness.reports import DEFAULT_BUDGET, to_csv, to_jsonl
from .harness.sweeps import INEQUALITIES, UnknownInequalityError, empirical_constants, sharpness_sweep

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

DEFAULT_GROUPS = {
    "identities": ("2^4", "16", "2,3,5", "13"),
    "spectra": ("2^4", "2,3", "7", "16"),
}
DEFAULT_PRIMES = {"chebotarev": (3, 5, 7), "uncertainty": (5, 7, 11)}


class UsageError(ValueError):
    pass


# -- set specifications -----------------------------------------------------

_TUPLE = re.compile(r"\(([^()]*)\)")


def _parse_elements(g: GroupSpec, text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    if text.startswith("("):
        tuples = _TUPLE.findall(text)
        if _TUPLE.sub("", text).replace(",", "").strip():
            raise UsageError(f"malformed tuple list {text!r}")
        out = []
        for t in tuples:
            digits = [int(d) for d in t.split(",")]
            if len(digits) != g.rank:
                raise UsageError(f"tuple ({t}) has {len(digits)} digits, group rank is {g.rank}")
            out.append(int(g.encode([d % n for d, n in zip(digits, g.orders)])))
        return out
    try:
        codes = [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"malformed element list {text!r}") from None
    for c in codes:
        if not 0 <= c < g.N:
            raise UsageError(f"element {c} outside [0, {g.N})")
    return codes


def parse_set(g: GroupSpec, text: str) -> SetMask:
    """Explicit codes ``1,2,3``, tuples ``(0,1),(1,1)``, ``random:<size>:<seed>``,
    ``interval:<a>:<b>`` or ``subspace:<generators>``."""
    kind, _, rest = text.partition(":")
    try:
        if kind == "random" and rest:
            size, _, seed = rest.partition(":")
            return random_set(g, size=int(size), seed=int(seed or 0))
        if kind == "interval" and rest:
            a, _, b = rest.partition(":")
            return interval(g, int(a), int(b))
        if kind == "subspace" and rest:
            return subspace(g, _parse_elements(g, rest))
    except (ValueError, GroupSpecError) as e:
        raise UsageError(f"bad set spec {text!r}: {e}") from None
    return SetMask.from_elements(g, _parse_elements(g, text))


# -- output -----------------------------------------------------------------


def _emit(reports, args):
    text = to_csv(reports) if args.format == "csv" else to_jsonl(reports)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    return text


def _table(reports, k: int = 5) -> str:
    rows = [("ratio", "name", "variant", "instance")]
    for r in reports[:k]:
        ratio = "degenerate" if r.ratio is None else f"{r.ratio:.6g}"
        rows.append((ratio, r.name, r.variant or "-", r.instance))
    widths = [max(len(row[i]) for row in rows) for i in range(3)]
    return "\n".join(
        "  ".join(c.ljust(w) for c, w in zip(row[:3], widths)) + "  " + row[3] for row in rows
    )


def _save_constants(reports, path):
    if path:
        empirical_constants(reports).save(path)


# -- commands ---------------------------------------------------------------


def cmd_verify(args) -> int:
    suite = args.suite
    names = list(suites.SUITES) if suite == "all" else [suite]
    checks, reports = [], []
    for name in names:
        if name in DEFAULT_GROUPS:
            groups = [parse_group(args.group)] if args.group else [parse_group(x) for x in DEFAULT_GROUPS[name]]
            for g in groups:
                if name == "identities":
                    checks += suites.identity_suite(g, seed=args.seed, tol=args.tol)
                else:
                    checks += suites.spectra_suite(g, seed=args.seed)
        elif name in DEFAULT_PRIMES:
            for p in [args.p] if args.p else DEFAULT_PRIMES[name]:
                try:
                    checks += suites.SUITES[name](p, seed=args.seed)
                except ValueError as e:
                    raise UsageError(str(e)) from None
        else:
            groups = [args.group] if args.group else None
            c, r = suites.inequality_suite(seed=args.seed, budget=args.budget, groups=groups)
            checks += c
            reports += r
    for c in checks:
        print(c)
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks)} checks, {failed} failed")
    if reports:
        _emit(reports, args)
        _save_constants(reports, args.constants)
    return EXIT_FAIL if failed else EXIT_OK


def _inequality_name(name: str) -> str:
    key = name.replace("_", "-")
    if key not in INEQUALITIES:
        raise UsageError(f"unknown inequality {name!r}; choose from {', '.join(INEQUALITIES)}")
    return key


def cmd_sweep(args) -> int:
    name = _inequality_name(args.inequality)
    groups = args.group_list or None
    try:
        reports = sharpness_sweep(name, args.count, groups=groups, seed=args.seed, budget=args.budget)
    except UnknownInequalityError as e:
        raise UsageError(str(e)) from None
    text = _emit(reports, args)
    if not args.out:
        sys.stdout.write(text)
    print(_table(reports))
    _save_constants(reports, args.constants)
    bad = [r for r in reports if not r.passed]
    if bad:
        print(f"{len(bad)} of {len(reports)} records exceed budget {args.budget:g}:")
        for r in bad:
            print(f"  {r.key}: {r.instance} (ratio {r.ratio})")
        return EXIT_FAIL
    print(f"{len(reports)} records, all within budget {args.budget:g}")
    return EXIT_OK


def _need(value, flag, name):
    if value is None:
        raise UsageError(f"{name} needs {flag}")
    return value


def cmd_eval(args) -> int:
    name = _inequality_name(args.inequality)
    g = parse_group(_need(args.group, "--group", name))
    sets = [parse_set(g, s) for s in args.set or []]
    L = parse_set(g, args.lam) if args.lam else None
    kw = dict(budget=args.budget, seed=args.seed)
    if name == "popular-sums":
        if len(sets) != 2:
            raise UsageError("popular-sums needs two --set options")
        reports = [ineq.popular_sums_bound(sets[0], sets[1], _need(args.r, "--r", name), **kw)[0]]
    else:
        _need(L, "--lambda", name)
        if name == "rudin":
            a = FuncC(g, L.members.astype(np.complex128))
            reports = [ineq.rudin_moment(L, a, _need(args.p, "--p", name), **kw)]
        elif name == "dual-convolution":
            if len(sets) < 2:
                raise UsageError("dual-convolution needs at least two --set options")
            reports = ineq.dual_convolution_bound(L, sets, **kw)
        else:
            if len(sets) != 1:
                raise UsageError(f"{name} needs exactly one --set")
            S = sets[0]
            if name == "chang":
                reports = [ineq.chang_bound(L, S, **kw)]
            elif name == "top-eigenvalue":
                reports = ineq.top_eigenvalue_bound(L, S.indicator(), **kw)
            elif name == "higher-moment":
                reports = [ineq.higher_moment_chang(L, S, _need(args.l, "--l", name), **kw)]
            else:
                reports = [ineq.bilinear_bound(L, S, **kw)]
    text = _emit(reports, args)
    if not args.out:
        sys.stdout.write(text)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_dissoc(args) -> int:
    g = parse_group(_need(args.group, "--group", "dissoc"))
    L = parse_set(g, _need(args.set[0] if args.set else None, "--set", "dissoc"))
    if args.mode == "check":
        print(is_dissociated(L))
    else:
        print(greedy_dissociated(L, order=args.order, seed=args.seed).describe())
    return EXIT_OK


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", help="group spec, e.g. 64, 2^7 or 2,3,5")
    common.add_argument("--set", action="append", help="set spec (repeatable)")
    common.add_argument("--lambda", dest="lam", help="dissociated frequency set spec")
    common.add_argument("--l", type=int, help="moment order or number of sets")
    common.add_argument("--p", type=int, help="moment exponent or prime")
    common.add_argument("--r", type=int, help="popularity threshold")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=float, default=DEFAULT_BUDGET, help="allowed lhs/rhs ratio")
    common.add_argument("--out", help="report file")
    common.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    common.add_argument("--tol", type=float, default=suites.IDENTITY_TOL, help="identity tolerance")
    common.add_argument("--constants", help="JSON file of empirical constants (max-merged)")

    ap = argparse.ArgumentParser(prog="lacunary", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("--suite", choices=(*suites.SUITES, "all"), default="all")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", parents=[common], help="seeded sweep of one inequality")
    s.add_argument("inequality")
    s.add_argument("--count", type=int, default=100)
    s.set_defaults(func=cmd_sweep)

    e = sub.add_parser("eval", parents=[common], help="evaluate one inequality instance")
    e.add_argument("inequality")
    e.set_defaults(func=cmd_eval)

    d = sub.add_parser("dissoc", parents=[common], help="dissociativity check or greedy extraction")
    d.add_argument("mode", choices=("check", "greedy"))
    d.add_argument("--order", choices=("ascending", "descending", "random"), default="ascending")
    d.set_defaults(func=cmd_dissoc)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.command == "sweep":
            args.group_list = [parse_group(args.group)] if args.group else []
        return args.func(args)
    except CapExceededError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAP
    except (UsageError, GroupSpecError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ineq.IdentityViolation as e:
        print(f"identity check failed: {e}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

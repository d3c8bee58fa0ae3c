"""Command-line front end.

Exit codes: 0 ok, 2 usage error, 3 budget refusal, 4 internal invariant violation.

Polynomials f are written as terms ``k*X^e`` joined by ``+``. A coefficient is
either a decimal (an element of F_p) or a bracketed vector ``[c0,c1,...]`` of
coordinates in 1, a, a^2, ... (lowest degree first), e.g. ``X^3+[0,1]*X``.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass
from typing import Optional

from . import census as cen
from . import lift as lf
from .basis import format_basis
from .errors import BudgetExceeded, InvariantViolation
from .ff import FieldCtx, format_modulus, is_prime

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_INVARIANT = 0, 2, 3, 4

F_HELP = ("polynomial f: terms k*X^e joined by '+', k decimal (F_p) or [c0,c1,...] "
          "(F_q, lowest degree first), e.g. 'X^3+[0,1]*X'")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    p: Optional[int] = None
    r: Optional[int] = None
    d: Optional[int] = None
    modulus: Optional[list[int]] = None
    basis_policy: str = "polynomial"
    f: Optional[str] = None
    f_policy: Optional[str] = None
    kind: Optional[str] = None
    c: Optional[int] = None
    system: Optional[str] = None
    primes: Optional[list[int]] = None
    moduli: Optional[dict[str, list[int]]] = None
    seed: int = 0
    budget: Optional[int] = None
    output: Optional[str] = None
    format: str = "csv"

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), sort_keys=True, separators=(",", ":"))

    def comment(self) -> str:
        return "config: " + self.to_json()


def _ctx(args) -> FieldCtx:
    if not is_prime(args.p):
        raise UsageError(f"p not prime: {args.p}")
    if args.r < 1:
        raise UsageError("r must be >= 1")
    try:
        if getattr(args, "modulus", None):
            return FieldCtx(args.p, args.r, tuple(int(t) for t in args.modulus.split(",")))
        return FieldCtx.canonical(args.p, args.r)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _f(args, ctx: FieldCtx) -> tuple[lf.UniPolyFq, str]:
    policy = args.f_policy or ("user" if args.f else "monomial")
    if policy == "user" and not args.f:
        raise UsageError("--f is required with --f-policy user")
    if policy != "user" and args.d is None:
        raise UsageError(f"--d is required with --f-policy {policy}")
    try:
        f = cen.make_f(ctx, args.d, policy, args.seed, args.f)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if f.degree is None or f.degree < 1:
        raise UsageError("f must have degree >= 1")
    return f, policy


def _pair(args, ctx: FieldCtx):
    try:
        return cen.make_pair(ctx, args.basis, args.seed)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _emit(text: str, output: Optional[str]):
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _base_config(args, ctx: Optional[FieldCtx] = None, **extra) -> RunConfig:
    cfg = RunConfig(command=args.command, seed=getattr(args, "seed", 0),
                    budget=getattr(args, "budget", None), output=getattr(args, "out", None),
                    format=getattr(args, "format", "csv"),
                    basis_policy=getattr(args, "basis", "polynomial"))
    if ctx is not None:
        cfg.p, cfg.r, cfg.modulus = ctx.p, ctx.r, list(ctx.modulus)
    for k, v in extra.items():
        setattr(cfg, k, v)
    return cfg


# -- commands ---------------------------------------------------------------

def cmd_field(args) -> int:
    ctx = _ctx(args)
    pair = cen.make_pair(ctx, "polynomial")
    cfg = _base_config(args, ctx, basis_policy="polynomial")
    if args.format == "json":
        body = {"config": dataclasses.asdict(cfg), "p": ctx.p, "r": ctx.r, "modulus": list(ctx.modulus),
                "basis": [list(b.coeffs) for b in pair.basis],
                "dual": [list(b.coeffs) for b in pair.dual]}
        _emit(json.dumps(body, sort_keys=True) + "\n", args.out)
        return EXIT_OK
    lines = [f"# {cfg.comment()}", format_modulus(ctx),
             f"basis={format_basis(pair.basis)}", f"dual={format_basis(pair.dual)}"]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_count(args) -> int:
    ctx = _ctx(args)
    f, policy = _f(args, ctx)
    pair = _pair(args, ctx)
    cfg = _base_config(args, ctx, d=f.degree, f=lf.format_unipoly(f), f_policy=policy,
                       kind=args.kind, c=args.c)
    rep = cen.distribution(f, pair, args.kind, jobs=args.jobs, budget=args.budget,
                           basis_policy=args.basis)
    summary = []
    status = EXIT_OK
    if args.kind == "T":
        try:
            ok = cen.ds13_check(rep)
            summary.append("ds13_check: " + ("pass" if ok else "FAIL"))
            if not ok:
                status = EXIT_INVARIANT
        except ValueError:
            summary.append("ds13_check: inapplicable (gcd(d,p) != 1)")
    else:
        worst = max(row.normalized for row in cen.hk_report(rep))
        summary.append(f"max normalized deviation: {worst!r}")
    rows = cen.report_rows(rep)
    if args.c is not None:
        rows = [row for row in rows if row[6] == args.c % ctx.p]
    if args.format == "json":
        body = {"config": dataclasses.asdict(cfg), "counts": rep.counts,
                "rows": [dict(zip(cen.CSV_HEADER, row)) for row in rows], "summary": summary}
        _emit(json.dumps(body, sort_keys=True) + "\n", args.out)
    else:
        text = cen.rows_to_csv(rows, cfg.comment()) + "".join(f"# {s}\n" for s in summary)
        _emit(text, args.out)
    return status


def _yes_no(v) -> str:
    return "skipped" if v is None else ("yes" if v else "no")


def cmd_lift(args) -> int:
    ctx = _ctx(args)
    if ctx.r < 2:
        raise UsageError("lift needs r >= 2")
    f, policy = _f(args, ctx)
    pair = _pair(args, ctx)
    cfg = _base_config(args, ctx, d=f.degree, f=lf.format_unipoly(f), f_policy=policy, format="text")
    rep = lf.lift_report(f, pair, budget=args.budget)
    out = [f"# {cfg.comment()}", format_modulus(ctx),
           f"basis={format_basis(pair.basis)}", f"dual={format_basis(pair.dual)}",
           f"f={lf.format_unipoly(f)}", "a_{j,k}:"]
    for j in range(ctx.r):
        out.append("  " + " ".join(repr(rep.a[j, k]) for k in range(ctx.r)))
    for name, P in (("F", rep.F), ("Q", rep.Q), ("Q_2d", rep.Q2d)):
        out.append(f"{name}: {len(P)} terms, degree {P.degree}")
        out.append(lf.format_mvpoly(P))
    out.append(f"deg F = {rep.F.degree}")
    if not rep.in_lemma_range:
        out.append(f"out of Lemma hypothesis (need 2 <= d < p; d={f.degree}, p={ctx.p})")
    failed = []
    for name, v in rep.checks.items():
        out.append(f"{name}: {_yes_no(v)}")
        required = name != "a_{j,j}=0" or args.basis == "special-dual"
        if v is False and required:
            failed.append(name)
    _emit("\n".join(out) + "\n", args.out)
    if failed:
        print("invariant violation: " + ", ".join(failed), file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_census_singular(args) -> int:
    ctx = _ctx(args)
    if ctx.r < 2 and args.system != "thue-morse":
        raise UsageError("the Rudin-Shapiro systems need r >= 2")
    f, policy = _f(args, ctx)
    pair = _pair(args, ctx)
    c = args.c % ctx.p
    if args.system == "thue-morse":
        P, target = lf.thue_morse_Q(f, pair, c), 0
    else:
        Q = lf.build_Q(f, lf.compute_ajk(pair))
        P = Q.homogeneous_part(2 * f.degree) if args.system == "Q2d" else Q
        target = c
    cfg = _base_config(args, ctx, d=f.degree, f=lf.format_unipoly(f), f_policy=policy,
                       c=c, system=args.system)
    lines = [f"# {cfg.comment()}", "system,p,r,d,c,m,census"]
    for m in range(1, args.m_max + 1):
        try:
            n = lf.singular_census(P, target, m, budget=args.budget)
        except BudgetExceeded as e:
            if m == 1:
                raise
            lines.append(f"# m={m} skipped: {e}")
            continue
        lines.append(f"{args.system},{ctx.p},{ctx.r},{f.degree},{c},{m},{n}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    try:
        primes = [int(t) for t in args.primes.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"bad prime list {args.primes!r}") from None
    bad = [p for p in primes if not is_prime(p)]
    if bad:
        raise UsageError(f"not prime: {bad}")
    policy = args.f_policy or ("user" if args.f else "monomial")
    moduli = {str(p): list(FieldCtx.canonical(p, args.r).modulus) for p in sorted(primes)}
    cfg = _base_config(args, None, r=args.r, d=args.d, f=args.f, f_policy=policy, kind=args.kind,
                       primes=sorted(primes), moduli=moduli)
    try:
        res = cen.sweep(args.d, args.r, args.kind, primes, args.basis, policy, args.seed,
                        args.f, args.jobs, args.budget)
    except ValueError as e:
        raise UsageError(str(e)) from None
    rel = " ".join(f"p={rep.p}:{rep.relative_deviation()!r}" for rep in res.reports)
    if res.trend_ok is None:
        verdict = "no verdict"
    else:
        verdict = "decreasing" if res.trend_ok else "NOT decreasing"
    summary = f"trend: {rel} -> {verdict}"
    if args.format == "json":
        body = {"config": dataclasses.asdict(cfg),
                "reports": [{"p": rep.p, "counts": rep.counts,
                             "relative_deviation": rep.relative_deviation()} for rep in res.reports],
                "trend_ok": res.trend_ok}
        _emit(json.dumps(body, sort_keys=True) + "\n", args.out)
    else:
        _emit(cen.to_csv(res.reports, cfg.comment()) + f"# {summary}\n", args.out)
    return EXIT_OK


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rsfield", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    def field_args(sp, need_r=True):
        sp.add_argument("--p", type=int, required=True, help="prime")
        if need_r:
            sp.add_argument("--r", type=int, required=True, help="extension degree")
        sp.add_argument("--modulus", help="comma-separated monic irreducible, lowest degree first")
        sp.add_argument("--out", help="output file (default stdout)")

    def poly_args(sp):
        sp.add_argument("--f", help=F_HELP)
        sp.add_argument("--d", type=int, help="degree for generated f")
        sp.add_argument("--f-policy", choices=["monomial", "random", "user"])
        sp.add_argument("--basis", choices=cen.BASIS_POLICIES, default="polynomial")
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("field", help="describe F_{p^r}, its polynomial basis and dual")
    field_args(sp)
    sp.add_argument("--format", choices=["text", "json"], default="text")
    sp.set_defaults(func=cmd_field)

    sp = sub.add_parser("count", help="distribution of R(f(xi)) or T(f(xi))")
    field_args(sp)
    poly_args(sp)
    sp.add_argument("--kind", choices=cen.KINDS, default="R")
    sp.add_argument("--c", type=int, help="only emit the row for this class")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--budget", type=int, default=cen.DEFAULT_EVAL_BUDGET)
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    sp.set_defaults(func=cmd_count)

    sp = sub.add_parser("lift", help="a_{j,k}, F, Q, Q_2d and their checks")
    field_args(sp)
    poly_args(sp)
    sp.add_argument("--budget", type=int, default=lf.DEFAULT_TERM_BUDGET)
    sp.set_defaults(func=cmd_lift)

    sp = sub.add_parser("census-singular", help="rational points of a singular system")
    field_args(sp)
    poly_args(sp)
    sp.add_argument("--system", choices=["Q", "Q2d", "thue-morse"], default="Q")
    sp.add_argument("--c", type=int, default=0)
    sp.add_argument("--m-max", type=int, default=2)
    sp.add_argument("--budget", type=int, default=lf.DEFAULT_POINT_BUDGET)
    sp.set_defaults(func=cmd_census_singular)

    sp = sub.add_parser("sweep", help="distributions over a list of primes")
    sp.add_argument("--primes", required=True, help="comma-separated primes")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--out")
    poly_args(sp)
    sp.add_argument("--kind", choices=cen.KINDS, default="R")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--budget", type=int, default=cen.DEFAULT_EVAL_BUDGET)
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    sp.set_defaults(func=cmd_sweep)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as e:
        print(f"refused: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (InvariantViolation, AssertionError) as e:
        print(f"invariant violation: {e}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())

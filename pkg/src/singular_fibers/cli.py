"""``singular-fibers`` command line.

Exit status: 0 when everything checked passes, 1 when a report contains a
failure (failed claim, violated constraint, invalid trace), 2 for usage and
input errors. ``--porcelain`` replaces the tables with ``key=value`` lines.
"""
from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .catalog import ClassNameError, list_classes
from .cochain import (
    ComplexError,
    betti,
    cohomology_basis,
    complex_problems,
    format_cochain,
)
from .invariants import evaluate, resolve_cochain
from .morse import (
    TraceParseError,
    check_coexistence,
    count_fibers,
    euler_characteristic,
    format_counts,
    format_trace,
    morse_constraints,
    random_trace,
    read_counts,
    read_trace,
    validate_trace,
)
from .universal import (
    build_complex,
    coarsen_constraints,
    constraint_basis,
    derive_constraints,
)
from .verify import TRUNCATION_NOTE, run_claims

VARIANT_CHOICES = ("full", "admissible", "morse")


class UsageError(Exception):
    pass


class Output:
    """Collects table rows or porcelain pairs and prints them in order."""

    def __init__(self, porcelain: bool):
        self.porcelain = porcelain
        self.lines: list[str] = []

    def row(self, *cols: object, widths: Sequence[int] = ()) -> None:
        if self.porcelain:
            return
        cells = [f"{c!s:<{w}}" for c, w in zip(cols, widths)] + [str(c) for c in cols[len(widths):]]
        self.lines.append("  ".join(cells).rstrip())

    def text(self, line: str) -> None:
        if not self.porcelain:
            self.lines.append(line)

    def kv(self, key: str, value: object) -> None:
        if self.porcelain:
            self.lines.append(f"{key}={value}")

    def flush(self) -> None:
        if self.lines:
            sys.stdout.write("\n".join(self.lines) + "\n")


# ---------------------------------------------------------------------------
# commands

def cmd_catalog_list(args, out: Output) -> int:
    pair = tuple(int(x) for x in args.dim_pair.split(","))
    try:
        entries = list_classes(pair, args.codim, args.variant, refined=not args.unrefined)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out.row("name", "codim", "admissible", "orientable_excluded", widths=(14, 6, 11))
    for e in entries:
        out.row(e.name, e.codim, int(e.admissible), int(e.orientable_excluded), widths=(14, 6, 11))
        out.kv(f"class.{e.name}", f"codim:{e.codim},admissible:{int(e.admissible)},"
                                  f"orientable_excluded:{int(e.orientable_excluded)}")
    out.text(f"{len(entries)} classes")
    out.kv("count", len(entries))
    return 0


def cmd_complex_check(args, out: Output) -> int:
    variants = VARIANT_CHOICES if args.variant == "all" else (args.variant,)
    status = 0
    out.row("variant", "dims", "betti", "delta^2", widths=(14, 12, 12))
    for v in variants:
        C = build_complex(v)
        problems = complex_problems(C)
        dims = "/".join(str(C.dim(k)) for k in (0, 1, 2))
        bs = "/".join(str(betti(C, k)) for k in (0, 1, 2))
        ok = "ok" if not problems else "FAIL"
        out.row(C.name, dims, bs, ok, widths=(14, 12, 12))
        out.kv(f"{C.name}.dims", dims)
        out.kv(f"{C.name}.betti", bs)
        out.kv(f"{C.name}.delta_squared_zero", int(not problems))
        for p in problems:
            out.text(f"  {p}")
        status = status or (1 if problems else 0)
    out.text(f"note: {TRUNCATION_NOTE}")
    return status


def cmd_cohomology(args, out: Output) -> int:
    C = build_complex(args.variant)
    summary = cohomology_basis(C, args.degree)
    out.text(f"H^{args.degree}({C.name}) dimension {summary.dimension}")
    out.kv("variant", C.name)
    out.kv("degree", args.degree)
    out.kv("dimension", summary.dimension)
    for i, g in enumerate(summary.generators, 1):
        text = format_cochain(g)
        out.text(f"  [{i}] {text}")
        out.kv(f"generator.{i}", text)
    if args.degree == 2:
        out.text(f"note: {TRUNCATION_NOTE}")
    return 0


def cmd_verify_paper(args, out: Output) -> int:
    if args.trials < 0:
        raise UsageError("--trials must be nonnegative")
    try:
        claims = run_claims(args.formulae, range(args.seed, args.seed + args.trials), args.budget)
    except OSError as exc:
        raise UsageError(str(exc)) from None
    for c in claims:
        status = "PASS" if c.passed else "FAIL"
        out.row(status, c.key, c.description, widths=(4, 20))
        if c.detail:
            out.text(f"      {c.detail}")
        out.kv(f"claim.{c.key}", "pass" if c.passed else "fail")
    failed = [c.key for c in claims if not c.passed]
    out.text(f"{len(claims) - len(failed)}/{len(claims)} claims pass")
    out.text(f"note: {TRUNCATION_NOTE}")
    out.kv("passed", len(claims) - len(failed))
    out.kv("failed", len(failed))
    return 1 if failed else 0


def cmd_constraints_derive(args, out: Output) -> int:
    C = build_complex(args.variant)
    cs = derive_constraints(C, args.degree)
    if args.level == "coarse":
        cs = coarsen_constraints(cs)
    elif args.level == "basis":
        cs = constraint_basis(coarsen_constraints(cs))
    out.text(f"{len(cs)} {args.level} constraints from delta_{args.degree} of {C.name}")
    out.kv("count", len(cs))
    for i, c in enumerate(cs, 1):
        src = f"  (from {c.source})" if c.source is not None and args.level == "refined" else ""
        out.row(f"[{i}]", f"{c} = 0 mod 2{src}", widths=(5,))
        out.kv(f"constraint.{i}", str(c))
    return 0


def cmd_coexist(args, out: Output) -> int:
    counts = read_counts(args.file)
    bad = sorted(n for n in counts if n.codim not in (1, 2))
    if bad:
        raise UsageError(f"{args.file}: only codimension 1 and 2 classes are counted, got {bad[0]}")
    families = []
    if any(n.codim == 2 for n in counts) or not counts:
        families.append(("codim2", derive_constraints(build_complex("full"), 1)))
    if any(n.codim == 1 for n in counts):
        families.append(("codim1", morse_constraints()))
    universe = set()
    for codim in (1, 2):
        universe |= {e.name for e in list_classes((3, 2), codim, "full")}
    status = 0
    for label, cs in families:
        try:
            report = check_coexistence(counts, cs, universe)
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from None
        for i, r in enumerate(report.results, 1):
            mark = "even" if r.even else "ODD"
            if not r.even or args.all:
                out.row(label, f"[{i}]", mark, f"sum={r.total}", r.constraint,
                        widths=(7, 5, 5, 8))
            out.kv(f"{label}.{i}", "even" if r.even else "odd")
        n_bad = len(report.violated())
        out.text(f"{label}: {len(report.results) - n_bad}/{len(report.results)} constraints even")
        status = status or (1 if n_bad else 0)
    out.kv("ok", int(status == 0))
    return status


def _trace_or_report(args, out: Output):
    t = read_trace(args.file)
    report = validate_trace(t)
    if not report.valid:
        out.text("invalid")
        for v in report.violations:
            out.text(f"  {v}")
        out.kv("valid", 0)
        for i, v in enumerate(report.violations, 1):
            out.kv(f"violation.{i}", v.rule)
        return None
    return t


def cmd_morse_validate(args, out: Output) -> int:
    t = _trace_or_report(args, out)
    if t is None:
        return 1
    out.text(f"valid ({t.target} target, {len(t)} events)")
    out.kv("valid", 1)
    out.kv("events", len(t))
    return 0


def cmd_morse_counts(args, out: Output) -> int:
    t = _trace_or_report(args, out)
    if t is None:
        return 1
    counts = count_fibers(t)
    chi = euler_characteristic(t)
    for line in format_counts(counts).splitlines():
        out.text(line)
        name, value = line.split(" = ")
        out.kv(f"count.{name}", value)
    out.text(f"euler_characteristic = {chi}")
    out.kv("euler_characteristic", chi)
    report = check_coexistence(counts, morse_constraints())
    out.text(f"parity laws: {'all even' if report.ok else 'VIOLATED'}")
    out.kv("parity_laws_ok", int(report.ok))
    return 0 if report.ok else 1


def cmd_morse_invariant(args, out: Output) -> int:
    try:
        c = resolve_cochain(args.cls)
    except (ClassNameError, ValueError) as exc:
        raise UsageError(f"--class: {exc}") from None
    t = _trace_or_report(args, out)
    if t is None:
        return 1
    try:
        value = evaluate(c, t, args.variant)
    except ComplexError as exc:
        raise UsageError(str(exc)) from None
    out.text(str(value))
    out.kv("cochain", format_cochain(c, compact=True))
    out.kv("value", value)
    return 0


def cmd_morse_random(args, out: Output) -> int:
    t = random_trace(args.seed, args.budget, args.target, args.orientable)
    sys.stdout.write(format_trace(t))
    return 0


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="singular-fibers",
                                description="Universal complexes of singular fibers and "
                                            "invariants of Morse functions on surfaces.")
    p.add_argument("--porcelain", action="store_true", help="emit key=value lines")
    p.set_defaults(porcelain=False)
    # also accepted after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--porcelain", action="store_true", default=argparse.SUPPRESS,
                        help="emit key=value lines")
    sub = p.add_subparsers(dest="command", required=True)

    cat = sub.add_parser("catalog", parents=[common], help="fiber class catalog").add_subparsers(dest="action", required=True)
    q = cat.add_parser("list", parents=[common], help="classes spanning one degree of a complex")
    q.add_argument("--dim-pair", default="3,2", choices=("3,2", "2,1"))
    q.add_argument("--codim", type=int, default=1, choices=(0, 1, 2))
    q.add_argument("--variant", default="full", choices=("full", "admissible"))
    q.add_argument("--unrefined", action="store_true", help="one row per class, no _o/_e split")
    q.set_defaults(func=cmd_catalog_list)

    cx = sub.add_parser("complex", parents=[common], help="universal complexes").add_subparsers(dest="action", required=True)
    q = cx.add_parser("check", parents=[common], help="dimensions, Betti numbers and delta o delta = 0")
    q.add_argument("--variant", default="all", choices=VARIANT_CHOICES + ("all",))
    q.set_defaults(func=cmd_complex_check)

    q = sub.add_parser("cohomology", parents=[common], help="dimension and generators of H^k")
    q.add_argument("--variant", required=True, choices=VARIANT_CHOICES)
    q.add_argument("--degree", type=int, required=True, choices=(0, 1, 2))
    q.set_defaults(func=cmd_cohomology)

    q = sub.add_parser("verify-paper", parents=[common], help="check every numerical claim")
    q.add_argument("--formulae", help="literal transcription to compare against")
    q.add_argument("--seed", type=int, default=0, help="first seed of the random-trace sweep")
    q.add_argument("--trials", type=int, default=1000, help="number of random traces")
    q.add_argument("--budget", type=int, default=24, help="maximum events per random trace")
    q.set_defaults(func=cmd_verify_paper)

    cs = sub.add_parser("constraints", parents=[common], help="parity constraints").add_subparsers(dest="action", required=True)
    q = cs.add_parser("derive", parents=[common], help="constraints from the coboundary")
    q.add_argument("--level", default="refined", choices=("refined", "coarse", "basis"))
    q.add_argument("--variant", default="full", choices=VARIANT_CHOICES)
    q.add_argument("--degree", type=int, default=1, choices=(0, 1))
    q.set_defaults(func=cmd_constraints_derive)

    q = sub.add_parser("coexist", parents=[common], help="check a count file against the parity constraints")
    q.add_argument("file")
    q.add_argument("--all", action="store_true", help="list even constraints too")
    q.set_defaults(func=cmd_coexist)

    m = sub.add_parser("morse", parents=[common], help="Morse function traces").add_subparsers(dest="action", required=True)
    q = m.add_parser("validate", parents=[common])
    q.add_argument("file")
    q.set_defaults(func=cmd_morse_validate)
    q = m.add_parser("counts", parents=[common], help="fiber counts, Euler characteristic, parity laws")
    q.add_argument("file")
    q.set_defaults(func=cmd_morse_counts)
    q = m.add_parser("invariant", parents=[common], help="value of a degree-one cocycle")
    q.add_argument("file")
    q.add_argument("--class", dest="cls", default="alpha",
                   help="alpha, beta, gamma or a cochain expression")
    q.add_argument("--variant", default="admissible", choices=("full", "admissible"))
    q.set_defaults(func=cmd_morse_invariant)
    q = m.add_parser("random", parents=[common], help="print a seeded random valid trace")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--budget", type=int, default=12)
    q.add_argument("--target", default="line", choices=("line", "circle"))
    q.add_argument("--orientable", action="store_true", help="omit bI^9 and bI^10")
    q.set_defaults(func=cmd_morse_random)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Output(args.porcelain)
    try:
        status = args.func(args, out)
    except (UsageError, TraceParseError, ClassNameError, OSError) as exc:
        out.flush()
        where = f"{args.file}: " if isinstance(exc, TraceParseError) and hasattr(args, "file") else ""
        print(f"singular-fibers: error: {where}{exc}", file=sys.stderr)
        return 2
    out.flush()
    return status


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point.  Each subcommand calls one library operation and
prints that operation's serializer output unchanged."""

from __future__ import annotations

import argparse
import os
import sys
from typing import Sequence

from .algebra import (
    AlgebraError,
    CapExceeded,
    FormatError,
    check_axioms,
    format_algebra,
    format_axiom_results,
    make_named_algebra,
    parse_algebra,
)
from .calculus import (
    RuleSet,
    UnknownSymbolScope,
    combine,
    derives_analytic,
    format_soundness,
    is_sound,
    or_transform,
    parse_ruleset,
    resolve_calculus,
    single_conclusion_derives,
)
from .formula import FormulaSyntaxError, Sequent, parse_formula, parse_sequent, read_sequent_lines
from .harness import CHECK_NAMES, PROFILES, random_sequent_crosscheck, run_paper_checks
from .matrix import (
    LogicalMatrix,
    format_filters,
    format_mapping,
    format_matrix,
    format_verdict,
    lattice_filters,
    leibniz_congruence,
    matrix_isomorphism,
    matrix_nabla_lift,
    mc_semantic_consequence,
    parse_matrices,
    parse_matrix_ref,
    reduce,
)


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- resolvers

def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def load_algebra(ref: str):
    if ref.startswith("builtin:"):
        return make_named_algebra(ref[len("builtin:"):])
    return parse_algebra(_read(ref))


def load_matrices(refs: Sequence[str]) -> list[LogicalMatrix]:
    """``builtin:ALG:TOKEN`` references and matrix files (every matrix in the file)."""
    out: list[LogicalMatrix] = []
    for ref in refs:
        if ref.startswith("builtin:"):
            out.append(parse_matrix_ref(ref))
        else:
            found = parse_matrices(_read(ref))
            if not found:
                raise UsageError(f"{ref}: no [matrix] section")
            out.extend(found)
    return out


def load_calculus(spec: str) -> RuleSet:
    """``NAME[+NAME...]`` of built-ins, where any part may also be a rule file."""
    parts = [p.strip() for p in spec.split("+") if p.strip()]
    sets = []
    for p in parts:
        if os.path.isfile(p):
            sets.append(parse_ruleset(_read(p), os.path.splitext(os.path.basename(p))[0]))
        else:
            sets.append(resolve_calculus(p))
    if not sets:
        raise UsageError("empty --calculus")
    return sets[0] if len(sets) == 1 else combine(sets)


def load_schema(spec: str | None):
    if spec is None or spec.upper() in ("S", "SNABLA", "NONE"):
        return None if spec is None or spec.upper() == "NONE" else spec.upper()
    lines = [ln.strip() for ln in _read(spec).splitlines()]
    return tuple(parse_formula(ln) for ln in lines if ln and not ln.startswith("//"))


def load_sequents(args) -> list[Sequent]:
    if args.sequent is not None:
        return [parse_sequent(args.sequent)]
    if args.sequents is not None:
        return read_sequent_lines(_read(args.sequents).splitlines())
    raise UsageError("give --sequent or --sequents")


def _need(args, *names: str) -> None:
    for n in names:
        if getattr(args, n) in (None, []):
            raise UsageError(f"--{n.replace('_', '-')} is required for this command")


# ---------------------------------------------------------------- commands

def cmd_algebra(args, out) -> int:
    _need(args, "algebra")
    a = load_algebra(args.algebra)
    if args.action == "show":
        out.write(format_algebra(a))
        return 0
    results = check_axioms(a)
    out.write(format_axiom_results(results))
    return 0 if all(v for _, v in results) else 1


def cmd_matrix(args, out) -> int:
    _need(args, "matrix")
    ms = load_matrices(args.matrix)
    if args.action == "iso":
        if len(ms) != 2:
            raise UsageError("matrix iso needs exactly two matrices")
        out.write(format_mapping(matrix_isomorphism(ms[0], ms[1])))
        return 0
    for m in ms:
        if args.action == "reduce":
            out.write(format_matrix(reduce(m)))
        elif args.action == "leibniz":
            out.write(str(leibniz_congruence(m)) + "\n")
        elif args.action == "lift":
            out.write(format_matrix(matrix_nabla_lift(m)))
        elif args.action == "filters":
            out.write(format_filters(lattice_filters(m.algebra)))
    return 0


def cmd_entail(args, out) -> int:
    _need(args, "matrix")
    ms = load_matrices(args.matrix)
    for s in load_sequents(args):
        out.write(format_verdict(mc_semantic_consequence(ms, s.premises, s.conclusions)))
    return 0


def cmd_prove(args, out) -> int:
    _need(args, "calculus")
    rs = load_calculus(args.calculus)
    phi = load_schema(args.schema if args.schema is not None else (rs.schema or None))
    for s in load_sequents(args):
        if args.engine == "forward":
            if len(s.conclusions) != 1:
                raise UsageError("the forward engine needs exactly one conclusion")
            res = single_conclusion_derives(rs, s.premises, s.conclusions[0], phi=phi,
                                            engine="forward", rounds=args.rounds)
        else:
            res = derives_analytic(rs, phi, s.premises, s.conclusions)
        out.write(res.text())
    return 0


def _matrices_for(args, rs: RuleSet) -> list[LogicalMatrix]:
    refs = args.matrix or list(rs.matrices)
    if not refs:
        raise UsageError(f"{rs.name} has no default matrices; give --matrix")
    return load_matrices(refs)


def cmd_soundness(args, out) -> int:
    _need(args, "calculus")
    rs = load_calculus(args.calculus)
    ms = _matrices_for(args, rs)
    out.write(format_soundness(rs, ms, args.format))
    return 0 if all(is_sound(r, ms) for r in rs.rules) else 1


def cmd_transform_or(args, out) -> int:
    _need(args, "calculus")
    out.write(or_transform(load_calculus(args.calculus)).text())
    return 0


def cmd_crosscheck(args, out) -> int:
    _need(args, "calculus", "seed")
    rs = load_calculus(args.calculus)
    phi = load_schema(args.schema if args.schema is not None else (rs.schema or None))
    variables = tuple(v.strip() for v in args.vars.split(",") if v.strip())
    rep = random_sequent_crosscheck(rs, phi, _matrices_for(args, rs), args.count, variables,
                                    args.depth, args.seed, jobs=args.jobs)
    if args.format == "records":
        out.write(rep.record())
    else:
        out.write(rep.text())
    return 0 if rep.ok else 1


def cmd_paper_check(args, out) -> int:
    _need(args, "seed")
    report = run_paper_checks(args.select or "ALL", args.seed, args.profile, args.jobs)
    out.write(report.format(args.format))
    return 0 if report.passed else 1


COMMANDS = {
    "algebra": cmd_algebra,
    "matrix": cmd_matrix,
    "entail": cmd_entail,
    "prove": cmd_prove,
    "soundness": cmd_soundness,
    "transform-or": cmd_transform_or,
    "crosscheck": cmd_crosscheck,
    "paper-check": cmd_paper_check,
}


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algebra", metavar="FILE|builtin:NAME")
    common.add_argument("--matrix", action="append", default=[], metavar="FILE|builtin:ALG:TOKEN",
                        help="repeatable")
    common.add_argument("--calculus", metavar="NAME[+NAME...]|FILE")
    common.add_argument("--schema", metavar="S|SNABLA|FILE")
    seq = common.add_mutually_exclusive_group()
    seq.add_argument("--sequent", metavar="STR")
    seq.add_argument("--sequents", metavar="FILE")
    common.add_argument("--vars", default="p,q")
    common.add_argument("--depth", type=int, default=2)
    common.add_argument("--count", type=int, default=100)
    common.add_argument("--seed", type=int)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--profile", choices=sorted(PROFILES), default="smoke")
    common.add_argument("--format", choices=("text", "records"), default="text")

    parser = argparse.ArgumentParser(prog="islogic", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("algebra", parents=[common], help="show an algebra or check its axioms")
    p.add_argument("action", choices=("show", "check-identities"))
    p = sub.add_parser("matrix", parents=[common], help="matrix constructions")
    p.add_argument("action", choices=("reduce", "leibniz", "lift", "filters", "iso"))
    sub.add_parser("entail", parents=[common], help="semantic consequence in matrices")
    p = sub.add_parser("prove", parents=[common], help="derivability in a calculus")
    p.add_argument("--engine", choices=("search", "forward"), default="search")
    p.add_argument("--rounds", type=int, default=2, help="disjunction rounds for the forward engine")
    sub.add_parser("soundness", parents=[common], help="rule soundness per matrix")
    sub.add_parser("transform-or", parents=[common], help="single-conclusion disjunctive form")
    sub.add_parser("crosscheck", parents=[common], help="calculus vs matrices on random sequents")
    p = sub.add_parser("paper-check", parents=[common], help="run the scripted checks")
    p.add_argument("--select", action="append", metavar="NAME|N",
                   help=f"check name or criterion number; names: {', '.join(CHECK_NAMES)}")
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"islogic {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (AlgebraError, CapExceeded, FormatError, FormulaSyntaxError, UnknownSymbolScope,
            KeyError, ValueError, OSError) as exc:
        print(f"islogic {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

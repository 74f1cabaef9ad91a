"""Command line front end.

Subcommands: parse, infer, query, check, export-dot, oracle.

Exit codes: 0 success, 1 syntax or usage problem in the input program or
query, 2 infeasible conditioning (zero normalizing constant), 3 I/O or
automaton-file problem, 4 oracle comparison failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from fractions import Fraction
from typing import Any, Optional

from .analysis import coefficient, validate_pga
from .errors import (
    InfeasibleObservation,
    PgaParseError,
    RedipError,
    RedipSyntaxError,
)
from .lang import (
    Program,
    parse_guard,
    parse_program,
    parse_valuation,
    program_size,
    program_to_text,
    program_vars,
)
from .oracle import compare, enumerate_program, mc_sample
from .rational import decimal_str, format_ext, format_weight
from .serialize import load_pga, pga_to_dot, save_pga
from .translate import guard_mass, infer, marginal, translate


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _load_program(path: str) -> Program:
    return parse_program(_read_text(path))


def _show(value: Fraction, digits: int) -> str:
    return f"{format_weight(value)} (= {decimal_str(value, digits)})"


def _ast_json(node: Any) -> Any:
    if dataclasses.is_dataclass(node) and not isinstance(node, type):
        out: dict[str, Any] = {"node": type(node).__name__}
        for f in dataclasses.fields(node):
            out[f.name] = _ast_json(getattr(node, f.name))
        return out
    if isinstance(node, Fraction):
        return format_weight(node)
    if isinstance(node, tuple):
        return [_ast_json(x) for x in node]
    return node


# ---------------------------------------------------------------- commands


def cmd_parse(args: argparse.Namespace) -> int:
    p = _load_program(args.file)
    if args.json:
        doc = {
            "variables": list(program_vars(p)),
            "size": program_size(p),
            "ast": _ast_json(p),
        }
        print(json.dumps(doc, indent=2))
    else:
        print(program_to_text(p))
    return 0


def cmd_infer(args: argparse.Namespace) -> int:
    p = _load_program(args.file)
    prior = load_pga(args.prior) if args.prior else None
    result = infer(p, prior)
    digits = args.digits

    doc: dict[str, Any] = {
        "alphabet": list(result.alphabet),
        "normalizing_constant": format_weight(result.normalizing_constant),
        "prior_mass": format_weight(result.prior_mass),
        "violation_mass": format_weight(result.violation_mass),
    }
    lines = [
        f"alphabet: {', '.join(result.alphabet)}",
        f"normalizing constant: {_show(result.normalizing_constant, digits)}",
        f"violation mass: {_show(result.violation_mass, digits)}",
    ]

    if args.query:
        g = parse_guard(args.query, result.alphabet)
        prob = guard_mass(result.posterior, g)
        doc["query"] = {"guard": args.query, "probability": format_weight(prob)}
        lines.append(f"P({args.query}) = {_show(prob, digits)}")

    if args.marginal:
        probs, tail = marginal(result.posterior, args.marginal, args.upto)
        doc["marginal"] = {
            "variable": args.marginal,
            "probabilities": [format_weight(q) for q in probs],
            "tail": format_weight(tail),
        }
        for k, q in enumerate(probs):
            lines.append(f"P({args.marginal} = {k}) = {_show(q, digits)}")
        lines.append(f"P({args.marginal} > {args.upto}) = {_show(tail, digits)}")

    if args.steps:
        doc["steps"] = [dataclasses.asdict(s) for s in result.steps]
        lines.append("steps (construction, raw size -> trimmed size):")
        for s in result.steps:
            lines.append(
                f"  {s.construction:<17} {s.pre_trim_size:>5} -> {s.post_trim_size:<5} {s.detail}"
            )

    target = result.unnormalized if args.unnormalized else result.posterior
    if args.out:
        save_pga(target, args.out)
        doc["saved"] = args.out
        lines.append(f"saved {'unnormalized' if args.unnormalized else 'posterior'} to {args.out}")

    print(json.dumps(doc, indent=2) if args.json else "\n".join(lines))
    return 0


def cmd_query(args: argparse.Namespace) -> int:
    a = load_pga(args.file)
    digits = args.digits
    if args.at:
        valuation = parse_valuation(args.at)
        value = coefficient(a, valuation)
        label = f"coefficient at {args.at}"
    elif args.guard:
        g = parse_guard(args.guard, a.alphabet)
        value = guard_mass(a, g)
        label = f"mass of {args.guard}"
    else:
        print("query needs --at or --guard", file=sys.stderr)
        return 1
    if args.json:
        print(json.dumps({"query": label, "value": format_weight(value)}))
    else:
        print(f"{label}: {_show(value, digits)}")
    return 0


def cmd_check(args: argparse.Namespace) -> int:
    if args.file.endswith(".json"):
        a = load_pga(args.file)
        report = validate_pga(a)
        print(f"mass: {format_ext(report.mass)}")
        for issue in report.issues:
            print(f"note: {issue}")
        if report.is_pga:
            print("ok: probability generating automaton")
            return 0
        print("not a probability automaton (mass exceeds 1 or diverges)")
        return 1
    p = _load_program(args.file)
    alphabet = program_vars(p)
    print(f"ok: {program_size(p)} statements over {', '.join(alphabet)}")
    return 0


def cmd_export_dot(args: argparse.Namespace) -> int:
    if args.file.endswith(".json"):
        a = load_pga(args.file)
    else:
        result = translate(_load_program(args.file))
        a = result.automaton
    text = pga_to_dot(a, name=args.name)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        print(text)
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    p = _load_program(args.file)
    prior = load_pga(args.prior) if args.prior else None
    digits = args.digits

    if args.mode == "compare":
        result = compare(p, prior, truncation=args.trunc)
        print(f"truncation: {args.trunc}, residual: {format_weight(result.residual)}")
        if result.ok:
            print("ok: translation agrees with enumeration")
            return 0
        for line in result.mismatches:
            print(f"mismatch: {line}")
        print(f"worst discrepancy: {format_weight(result.worst_discrepancy)}")
        return 4

    if args.mode == "mc":
        report = mc_sample(p, samples=args.samples, seed=args.seed)
        print(f"samples: {report.samples}, accepted: {report.accepted}, "
              f"violations: {report.violations}")
        top = sorted(report.counts.items(), key=lambda kv: (-kv[1], kv[0]))[: args.limit]
        for sigma, count in top:
            pairs = ", ".join(f"{v}={k}" for v, k in zip(report.alphabet, sigma))
            print(f"  {pairs}: {count} (~{count / max(report.accepted, 1):.{digits}f})")
        return 0

    report = enumerate_program(p, truncation=args.trunc)
    print(f"truncation: {report.truncation}")
    for sigma in sorted(report.terminal):
        pairs = ", ".join(f"{v}={k}" for v, k in zip(report.alphabet, sigma))
        print(f"  {pairs}: {_show(report.terminal[sigma], digits)}")
    print(f"violation mass: {_show(report.violation, digits)}")
    print(f"truncated residual: {_show(report.residual, digits)}")
    return 0


# ---------------------------------------------------------------- wiring


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="redip", description="exact inference for loop-free discrete programs"
    )
    sub = top.add_subparsers(dest="command", required=True)

    def common(sp: argparse.ArgumentParser, file_help: str) -> None:
        sp.add_argument("file", help=file_help)
        sp.add_argument("--digits", type=int, default=6, help="decimal digits shown")
        sp.add_argument("--json", action="store_true", help="machine-readable output")

    sp = sub.add_parser("parse", help="parse and echo the desugared program")
    common(sp, "program file, or - for stdin")
    sp.set_defaults(handler=cmd_parse)

    sp = sub.add_parser("infer", help="exact posterior inference")
    common(sp, "program file, or - for stdin")
    sp.add_argument("--prior", help="automaton JSON file used as the prior")
    sp.add_argument("--query", help="guard whose posterior probability to report")
    sp.add_argument("--marginal", metavar="VAR", help="variable whose marginal to report")
    sp.add_argument("--upto", type=int, default=10, help="largest marginal point shown")
    sp.add_argument("--steps", action="store_true", help="show per-construction sizes")
    sp.add_argument("--unnormalized", action="store_true",
                    help="save the unnormalized automaton instead of the posterior")
    sp.add_argument("-o", "--out", help="write the resulting automaton JSON here")
    sp.set_defaults(handler=cmd_infer)

    sp = sub.add_parser("query", help="query a stored automaton")
    common(sp, "automaton JSON file")
    sp.add_argument("--at", help='valuation like "x=2,r=0": exact coefficient')
    sp.add_argument("--guard", help="guard: probability mass of satisfying runs")
    sp.set_defaults(handler=cmd_query)

    sp = sub.add_parser("check", help="validate a program or automaton file")
    common(sp, "program file or automaton .json")
    sp.set_defaults(handler=cmd_check)

    sp = sub.add_parser("export-dot", help="render a program translation or automaton to DOT")
    common(sp, "program file or automaton .json")
    sp.add_argument("--name", default="pga", help="graph name")
    sp.add_argument("-o", "--out", help="output file (default stdout)")
    sp.set_defaults(handler=cmd_export_dot)

    sp = sub.add_parser("oracle", help="reference interpreter and differential check")
    common(sp, "program file, or - for stdin")
    sp.add_argument("--mode", choices=("enumerate", "mc", "compare"), default="enumerate")
    sp.add_argument("--prior", help="automaton JSON file used as the prior")
    sp.add_argument("--trunc", type=int, default=40, help="sampling truncation bound")
    sp.add_argument("--samples", type=int, default=100_000, help="mc sample count")
    sp.add_argument("--seed", type=int, default=0, help="mc rng seed")
    sp.add_argument("--limit", type=int, default=20, help="mc rows shown")
    sp.set_defaults(handler=cmd_oracle)

    return top


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except RedipSyntaxError as exc:
        print(f"syntax error: {exc}", file=sys.stderr)
        return 1
    except InfeasibleObservation as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 2
    except (OSError, PgaParseError) as exc:
        print(f"file error: {exc}", file=sys.stderr)
        return 3
    except (RedipError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Exit codes: 0 = success (including "NotAutomorphism" verdicts), 1 = usage or
input error, 2 = verification failure.

Endomorphisms are given either as a JSON document {"rank": n, "images":
[...]} (inline or as a file path), as a semicolon-separated list of bracket
expressions ("x1 + [x2,x3]; x2; x3"), or through the constructor shorthands
"inner:EXPR", "elementary:EXPR" (rank taken from --rank) and
"linear:[[...]]".
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__, dyadic, endos, freeassoc
from . import metabelian as mb
from . import verify as verify_mod
from .lieexpr import format_expr, max_generator, parse_expr
from .polyring import ParseError


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


class _UsageError(Exception):
    pass


def _emit(args, text_fn, doc_fn):
    if args.format == "structured":
        print(json.dumps(doc_fn(), indent=2, sort_keys=True))
    else:
        print(text_fn())


# -- endomorphism input/output ------------------------------------------------


def load_endo(spec: str, rank: int = 0) -> endos.Endo:
    for prefix in ("inner:", "elementary:"):
        if spec.startswith(prefix):
            if not rank:
                raise ValueError(f"{prefix[:-1]} shorthand needs --rank")
            expr = parse_expr(spec[len(prefix) :], "x", rank)
            if prefix == "inner:":
                return endos.inner(rank, mb.evaluate(expr, rank))
            return endos.elementary(rank, expr)
    if spec.startswith("linear:"):
        matrix = json.loads(spec[len("linear:") :])
        return endos.linear(matrix)

    text = spec
    if os.path.exists(spec):
        with open(spec, "r", encoding="utf-8") as fh:
            text = fh.read()
    text = text.strip()
    if text.startswith("{"):
        doc = json.loads(text)
        doc_rank = int(doc["rank"])
        images = list(doc["images"])
    else:
        images = [part for part in text.split(";") if part.strip()]
        doc_rank = len(images)
    if rank and rank != doc_rank:
        raise ValueError(f"--rank {rank} does not match endomorphism rank {doc_rank}")
    exprs = [parse_expr(s, "x", doc_rank) for s in images]
    return endos.from_exprs(doc_rank, exprs)


def endo_doc(phi: endos.Endo) -> dict:
    # canonical image expressions: linear part plus deterministic lift
    return {
        "rank": phi.rank,
        "images": [format_expr(mb.lift(img), "x") for img in phi.images],
    }


def endo_text(phi: endos.Endo) -> str:
    doc = endo_doc(phi)
    lines = [f"rank {phi.rank}"]
    lines += [f"x{i + 1} -> {img}" for i, img in enumerate(doc["images"])]
    return "\n".join(lines)


def melement_doc(f: mb.MElement) -> dict:
    return {
        "rank": f.rank,
        "linear": [str(c) for c in f.linear],
        "tpart": [str(p) for p in f.tpart],
    }


def melement_text(f: mb.MElement) -> str:
    lin = ", ".join(str(c) for c in f.linear)
    tp = ", ".join(str(p) for p in f.tpart)
    return f"linear: ({lin})\ntpart:  ({tp})"


def jacobian_doc(j) -> list:
    return [[str(p) for p in row] for row in j.rows]


def jacobian_text(j) -> str:
    return "\n".join("[" + ", ".join(str(p) for p in row) + "]" for row in j.rows)


# -- subcommands --------------------------------------------------------------


def cmd_nf(args) -> int:
    expr = parse_expr(args.expr, "x")
    rank = args.rank or max(max_generator(expr), 1)
    if max_generator(expr) > rank:
        raise ValueError(
            f"expression uses x{max_generator(expr)} but rank is {rank}"
        )
    value = mb.evaluate(expr, rank)
    _emit(args, lambda: melement_text(value), lambda: melement_doc(value))
    return 0


def cmd_jac(args) -> int:
    phi = load_endo(args.endo, args.rank)
    j = endos.jacobian(phi)
    _emit(args, lambda: jacobian_text(j), lambda: {"rank": phi.rank, "jacobian": jacobian_doc(j)})
    return 0


def cmd_compose(args) -> int:
    phi = load_endo(args.endo, args.rank)
    psi = load_endo(args.other, args.rank)
    comp = endos.compose(phi, psi)
    _emit(args, lambda: endo_text(comp), lambda: endo_doc(comp))
    return 0


def cmd_inverse(args) -> int:
    phi = load_endo(args.endo, args.rank)
    inv = endos.inverse(phi)
    if inv is None:
        _emit(
            args,
            lambda: "NotAutomorphism",
            lambda: {"rank": phi.rank, "verdict": "NotAutomorphism"},
        )
        return 0
    _emit(args, lambda: endo_text(inv), lambda: endo_doc(inv))
    return 0


def cmd_iaut_level(args) -> int:
    phi = load_endo(args.endo, args.rank)
    level = endos.iaut_level(phi)
    rendered = "infinity" if level == float("inf") else int(level)
    _emit(
        args,
        lambda: f"iaut level: {rendered}",
        lambda: {"rank": phi.rank, "iaut_level": rendered},
    )
    return 0


def cmd_replay_bn(args) -> int:
    report = dyadic.residual_check(args.factors)
    _emit(args, report.to_text, report.to_doc)
    return 0


def cmd_replay_oe(args) -> int:
    report = freeassoc.replay(args.rank, include_witness=args.witness)
    _emit(args, report.to_text, report.to_doc)
    return 0


def cmd_verify(args) -> int:
    names = list(verify_mod.SUITES) if args.suite == "all" else [args.suite]
    results = verify_mod.run_suites(names, args.seed)
    failed = False
    for res in results:
        status = "pass" if res.passed else "FAIL"
        print(f"{res.name}: {status} ({res.cases} cases)")
        for line in res.failures:
            print(f"  {line}")
        failed = failed or not res.passed
    total = sum(r.cases for r in results)
    print(f"total: {total} cases, {'FAIL' if failed else 'pass'}")
    return 2 if failed else 0


# -- parser -------------------------------------------------------------------


def _add_format(p):
    p.add_argument(
        "--format",
        choices=["text", "structured"],
        default="text",
        help="output format (structured = JSON)",
    )


def build_parser() -> _Parser:
    parser = _Parser(
        prog="metalie",
        description="Exact computations in the free metabelian Lie algebra: "
        "normal forms, Jacobians, automorphism tests, and the two "
        "matrix-calculus replays.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("nf", help="normal form of a bracket expression")
    p.add_argument("expr", help="bracket expression, e.g. '[x1,x2]'")
    p.add_argument("--rank", type=int, default=0, help="rank n (default: inferred)")
    _add_format(p)
    p.set_defaults(func=cmd_nf)

    for name, fn, helptext in [
        ("jac", cmd_jac, "Jacobian matrix of an endomorphism"),
        ("inverse", cmd_inverse, "inverse automorphism or NotAutomorphism"),
        ("iaut-level", cmd_iaut_level, "identity-modulo-degree filtration level"),
    ]:
        p = sub.add_parser(name, help=helptext)
        p.add_argument("endo", help="endomorphism (file, JSON, images, shorthand)")
        p.add_argument("--rank", type=int, default=0)
        _add_format(p)
        p.set_defaults(func=fn)

    p = sub.add_parser("compose", help="compose two endomorphisms")
    p.add_argument("endo", help="phi (applied last)")
    p.add_argument("other", help="psi (applied first)")
    p.add_argument("--rank", type=int, default=0)
    _add_format(p)
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser(
        "replay-bn", help="rank-one update product trace and residual verdict"
    )
    p.add_argument("--factors", type=int, default=3, help="number of factors k >= 2")
    _add_format(p)
    p.set_defaults(func=cmd_replay_bn)

    p = sub.add_parser(
        "replay-oe", help="free-associative degree-4 trace computation"
    )
    p.add_argument("--rank", type=int, required=True, help="rank n >= 4")
    p.add_argument(
        "--witness",
        action="store_true",
        help="run the exact linear solve for correction terms",
    )
    _add_format(p)
    p.set_defaults(func=cmd_replay_oe)

    p = sub.add_parser("verify", help="run the randomized verification suites")
    p.add_argument(
        "--suite",
        choices=sorted(verify_mod.SUITES) + ["all"],
        required=True,
    )
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as e:
        print(e, file=sys.stderr)
        return 1
    except ParseError as e:
        print(f"metalie: parse error: {e}", file=sys.stderr)
        return 1
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as e:
        print(f"metalie: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

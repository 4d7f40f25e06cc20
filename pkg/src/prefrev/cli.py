"""Command-line interface: ``prefrev <command> ...``."""

from __future__ import annotations

import argparse
import sys
from typing import Sequence, TextIO

from . import io as pio
from .algebra import DEFAULT_MAX_ITER, IterationCapExceeded, transitive_closure
from .axioms import Derived, classify
from .formula import ParseError, PrefError, PrefRelation, SchemaError, UnsupportedConstraint
from .oracle import UniverseTooLarge, build_grid, graph_axioms, materialize, tc_on_grid
from .revision import Mode, revise
from .solver import simplify
from .winnow import ALGORITHMS, ChainError, PreconditionError, iterate_winnow

EXIT_OK = 0
EXIT_PROPERTY = 1
EXIT_PARSE = 2
EXIT_UNSUPPORTED = 3
EXIT_ITER_CAP = 4


class UsageError(PrefError):
    """Bad command-line arguments that argparse cannot catch."""


def _load(args) -> dict[str, PrefRelation]:
    schemas = pio.read_schemas(open(args.schema).read())
    return pio.load_prefs(args.prefs, schemas)


def _pick(prefs: dict[str, PrefRelation], name: str | None) -> PrefRelation:
    if name is not None:
        if name not in prefs:
            raise UsageError(f"no preference named {name!r}; defined: {', '.join(prefs) or 'none'}")
        return prefs[name]
    if len(prefs) != 1:
        raise UsageError(f"file defines {len(prefs)} preferences; choose one with --name")
    return next(iter(prefs.values()))


def cmd_classify(args, out: TextIO) -> int:
    prefs = _load(args)
    chosen = [_pick(prefs, args.name)] if args.name else list(prefs.values())
    status = EXIT_OK
    for p in chosen:
        cls = classify(p)
        out.write(f"{p.name}: {cls.describe()}\n")
        if not cls.is_spo:
            status = EXIT_PROPERTY
    return status


_REQUIRE = {"spo": Derived.SPO, "weak": Derived.WEAK, "total": Derived.TOTAL}
_RANK = {Derived.NONE: 0, Derived.SPO: 1, Derived.WEAK: 2, Derived.TOTAL: 3}


def cmd_revise(args, out: TextIO) -> int:
    prefs = _load(args)
    p = _pick(prefs, args.base)
    p0 = _pick(prefs, args.revising)
    schema = p.schema
    domain = None
    if args.domain:
        domain = pio.load_csv(args.domain, schema).rows
    report = revise(
        p, p0, Mode(args.mode),
        scp_assertions=args.assert_scp, domain=domain, max_iter=args.max_iter,
    )
    name = args.result_name or f"{p.name}_{args.mode}_{p0.name}"
    result = report.result.with_formula(simplify(report.result.formula), name)
    out.write(report.summary() + "\n")
    if report.compat.sample_conflict:
        out.write(f"conflict: {report.compat.sample_conflict}\n")
    line = result.to_line() + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(line)
    else:
        out.write(line)
    if args.require:
        want = _REQUIRE[args.require]
        got = report.result_class.derived
        if _RANK[got] < _RANK[want]:
            sys.stderr.write(f"error: result is {got.value}, {want.value} was required\n")
            return EXIT_PROPERTY
    return EXIT_OK


def cmd_winnow(args, out: TextIO) -> int:
    prefs = _load(args)
    p = _pick(prefs, args.name)
    r = pio.load_csv(args.data, p.schema)
    algo = ALGORITHMS[args.algo]
    if args.algo == "weak" and not classify(p).is_weak:
        raise PreconditionError(f"{p.name} is not a weak order; use --algo generic or bnl")
    if args.algo == "bnl" and not classify(p).is_spo:
        raise PreconditionError(f"{p.name} is not an SPO; use --algo generic")
    if len(r) == 0:
        return EXIT_OK
    pio.write_csv(algo(p, r), out)
    return EXIT_OK


def cmd_iterate(args, out: TextIO) -> int:
    prefs = _load(args)
    chain = [_pick(prefs, n.strip()) for n in args.chain.split(",") if n.strip()]
    if not chain:
        raise UsageError("--chain names no preferences")
    r = pio.load_csv(args.data, chain[0].schema)
    results = iterate_winnow(chain, r)
    for p, res in zip(chain, results[1:]):
        out.write(f"# {p.name}: {len(res)} tuple(s)\n")
        pio.write_csv(res, out)
    return EXIT_OK


def cmd_oracle_check(args, out: TextIO) -> int:
    prefs = _load(args)
    chosen = [_pick(prefs, args.name)] if args.name else list(prefs.values())
    instances = []
    if args.data:
        instances.append(pio.load_csv(args.data, chosen[0].schema).rows)
    status = EXIT_OK
    for p in chosen:
        u = build_grid(p.schema, [p.formula], instances, args.density, args.fresh, args.cap)
        e = materialize(p, u)
        sym = classify(p)
        ground = graph_axioms(e)
        ok_cls = sym == ground
        out.write(f"{p.name}: grid of {len(u)} tuples, {len(e)} edges\n")
        out.write(f"  axioms symbolic: {sym.describe()}\n")
        out.write(f"  axioms grid:     {ground.describe()}\n")
        tc = transitive_closure(p, args.max_iter)
        ok_tc = materialize(tc, u) == tc_on_grid(p, u)
        out.write(f"  axioms {'agree' if ok_cls else 'DISAGREE'}; TC {'agrees' if ok_tc else 'DISAGREES'}\n")
        if not (ok_cls and ok_tc):
            status = EXIT_PROPERTY
    return status


def cmd_repl(args, out: TextIO) -> int:
    from .repl import Session, run

    schema = pio.load_schema(args.schema)
    r = pio.load_csv(args.data, schema)
    prefs = pio.load_prefs(args.prefs, schema) if args.prefs else {}
    run(Session(schema, r, prefs), sys.stdin, out, interactive=sys.stdin.isatty())
    return EXIT_OK


def _common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("prefs", help="preference file (pref NAME over SCHEMA: FORMULA;)")
    sp.add_argument("--schema", required=True, help="schema file (relation NAME (attr: D|Q, ...))")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="prefrev", description="Revise and query constraint-defined preference relations.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("classify", help="report the order axioms of preferences")
    _common(sp)
    sp.add_argument("--name", help="only this preference")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("revise", help="refine or override one preference with another")
    _common(sp)
    sp.add_argument("--base", required=True, help="relation being revised")
    sp.add_argument("--revising", required=True, help="revising relation")
    sp.add_argument("--mode", choices=[m.value for m in Mode], default="refine")
    sp.add_argument("--assert-scp", action="append", default=[], metavar="NAME",
                    help="assert that NAME has the single-chain property (repeatable)")
    sp.add_argument("--domain", metavar="CSV", help="treat the tuples of CSV as the whole (finite) domain")
    sp.add_argument("--require", choices=sorted(_REQUIRE), help="fail unless the result has this class")
    sp.add_argument("--result-name", help="name of the revised preference")
    sp.add_argument("--output", "-o", help="write the result preference here instead of stdout")
    sp.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)
    sp.set_defaults(func=cmd_revise)

    sp = sub.add_parser("winnow", help="best tuples of a CSV instance")
    _common(sp)
    sp.add_argument("--data", required=True, help="CSV instance with a header row")
    sp.add_argument("--name")
    sp.add_argument("--algo", choices=sorted(ALGORITHMS), default="auto")
    sp.set_defaults(func=cmd_winnow)

    sp = sub.add_parser("iterate", help="winnow under a growing chain of preferences")
    _common(sp)
    sp.add_argument("--data", required=True)
    sp.add_argument("--chain", required=True, help="comma-separated preference names, weakest first")
    sp.set_defaults(func=cmd_iterate)

    sp = sub.add_parser("repl", help="interactive revision session")
    sp.add_argument("--schema", required=True)
    sp.add_argument("--data", required=True)
    sp.add_argument("--prefs", help="preload preferences from this file")
    sp.set_defaults(func=cmd_repl)

    sp = sub.add_parser("oracle-check", help="compare symbolic results with a finite grid")
    _common(sp)
    sp.add_argument("--name")
    sp.add_argument("--data", help="CSV whose values are added to the grid")
    sp.add_argument("--density", type=int, default=3)
    sp.add_argument("--fresh", type=int, default=3)
    sp.add_argument("--cap", type=int, default=250_000, help="maximum number of ground pairs")
    sp.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)
    sp.set_defaults(func=cmd_oracle_check)
    return ap


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    args = build_parser().parse_args(argv)
    out = out if out is not None else sys.stdout
    try:
        return args.func(args, out)
    except UnsupportedConstraint as e:
        sys.stderr.write(f"unsupported constraint: {e}\n")
        return EXIT_UNSUPPORTED
    except (ParseError, SchemaError, UsageError) as e:
        sys.stderr.write(f"parse error: {e}\n")
        return EXIT_PARSE
    except OSError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_PARSE
    except IterationCapExceeded as e:
        sys.stderr.write(f"iteration cap: {e}\n")
        return EXIT_ITER_CAP
    except (PreconditionError, ChainError, UniverseTooLarge) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_PROPERTY


if __name__ == "__main__":
    sys.exit(main())

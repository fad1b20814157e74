"""Command-line front end: run an algorithm, compare several, bench, or test
a quotient for the Gorenstein property."""

from __future__ import annotations

import argparse
import json
import random
import sys

from .bms import format_trace
from .compare import (
    ALGORITHMS,
    FAMILY_NAMES,
    FamilySpec,
    bench,
    compare_algorithms,
    comparison_report_to_json,
    gorenstein_test,
    monomials_up_to_degree,
    result_to_json,
    rows_to_csv,
    run_algorithm,
)
from .errors import BoundExceededError, ParseError, SeqrelError
from .field import parse_field
from .monomials import MonomialOrder, enumerate_up_to, parse_monomial, parse_order
from .poly import inter_reduce, parse_poly, staircase_of
from .sequences import (
    GENERATOR_NAMES,
    IdealSequenceSpec,
    _rand_elem,
    from_ideal,
    make_generator,
    table_from_json,
)

_BMS_FAMILY = ("bms", "bms-linalg", "bms-tweaked")

_DEFAULT_ORDERS = {2: "drl(y<x)", 3: "drl(z<y<x)"}


def _default_order(args) -> str:
    if args.generator == "fib4":
        return "lex(z<y<x)"
    if getattr(args, "table", None):
        with open(args.table) as fh:
            ndim = len(json.load(fh)["shape"])
        return _DEFAULT_ORDERS.get(ndim, "drl(y<x)")
    return "drl(y<x)"


def _default_field(args) -> str:
    return "Q" if args.generator == "sq" else "Fp:65537"


def _resolve_inputs(args):
    """Order, field and a fresh-oracle factory from the input flags."""
    ord = parse_order(args.order or _default_order(args))
    field = parse_field(args.field or _default_field(args))
    if args.generator:
        name = args.generator
        factory = lambda: make_generator(name, field)
    elif args.table:
        with open(args.table) as fh:
            data = json.load(fh)
        explicit = args.field is not None
        factory = lambda: table_from_json(data, field if explicit else None)
        if not explicit:
            field = factory().field
    else:
        gens = [parse_poly(s.strip(), ord, field) for s in args.ideal.split(",")]
        gb = inter_reduce(gens, ord)
        stair = staircase_of(gb, ord)
        rng = random.Random(args.seed)
        initial = {s: _rand_elem(field, rng) for s in stair}
        spec = IdealSequenceSpec(gb=gb, ord=ord, initial=initial)
        factory = lambda: from_ideal(spec)
    return ord, field, factory


def _bound_and_table(args, ord: MonomialOrder):
    """Monomial bound for the scan solvers, term set for the table solvers."""
    bound = parse_monomial(args.bound, ord) if args.bound else None
    table = None
    if args.degree is not None:
        table = monomials_up_to_degree(args.degree, ord)
        if bound is None:
            bound = tuple(e * args.degree for e in ord.variable(ord.names[0]))
    elif bound is not None:
        table = enumerate_up_to(bound, ord)
    return bound, table


def _parse_d_range(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(text)]


def cmd_run(args) -> int:
    ord, _, factory = _resolve_inputs(args)
    bound, table = _bound_and_table(args, ord)
    oracle = factory()
    if args.trace and args.algo in _BMS_FAMILY:
        from .bms import run_bms, run_bms_linalg, run_bms_tweaked

        runner = {
            "bms": run_bms,
            "bms-linalg": run_bms_linalg,
            "bms-tweaked": run_bms_tweaked,
        }[args.algo]
        if bound is None:
            raise SeqrelError(f"algorithm {args.algo!r} needs a stopping monomial")
        res = runner(oracle, bound, ord, trace=True)
    else:
        res = run_algorithm(args.algo, oracle, ord, bound, table)
    data = result_to_json(res)
    if args.trace and getattr(res, "trace", None):
        data["trace"] = format_trace(res.trace, ord).splitlines()
    print(json.dumps(data, indent=2, sort_keys=True))
    return 0


def cmd_compare(args) -> int:
    ord, _, factory = _resolve_inputs(args)
    bound, table = _bound_and_table(args, ord)
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    rep = compare_algorithms(factory, algos, ord, bound, table, window=args.window)
    print(json.dumps(comparison_report_to_json(rep), indent=2, sort_keys=True))
    return 0


def cmd_bench(args) -> int:
    ds = _parse_d_range(args.d)
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    families = [args.family] if args.family else list(FAMILY_NAMES)
    specs = [
        FamilySpec(fam, d, args.n, args.seed) for fam in families for d in ds
    ]
    rows = bench(specs, algos)
    text = rows_to_csv(rows)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_gorenstein(args) -> int:
    ord = parse_order(args.order or "drl(y<x)")
    field = parse_field(args.field or "Fp:65537")
    gens = [parse_poly(s.strip(), ord, field) for s in args.ideal.split(",")]
    print(gorenstein_test(gens, ord, args.trials, args.seed))
    return 0


def _add_input_flags(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--generator", choices=GENERATOR_NAMES, help="built-in sequence")
    src.add_argument("--table", help="JSON table file")
    src.add_argument("--ideal", help="comma-separated generators; random initial values")
    p.add_argument("--order", help='monomial order, e.g. "drl(y<x)"')
    p.add_argument("--field", help='"Fp:<prime>" or "Q"')
    p.add_argument("--bound", help='stopping monomial, e.g. "x^3"')
    p.add_argument("--degree", type=int, help="term set = all monomials up to this degree")
    p.add_argument("--seed", type=int, default=0, help="randomness for --ideal inputs")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="seqrel",
        description="Relation ideals of multidimensional linear recurrent sequences.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one algorithm")
    _add_input_flags(p_run)
    p_run.add_argument("--algo", choices=ALGORITHMS, default="bms")
    p_run.add_argument("--trace", action="store_true", help="per-monomial event log")
    p_run.set_defaults(func=cmd_run)

    p_cmp = sub.add_parser("compare", help="run several algorithms, report verdicts")
    _add_input_flags(p_cmp)
    p_cmp.add_argument("--algos", default="bms,sfglm", help="comma-separated list")
    p_cmp.add_argument("--window", type=int, help="containment solve degree window")
    p_cmp.set_defaults(func=cmd_compare)

    p_bench = sub.add_parser("bench", help="benchmark grid to CSV")
    p_bench.add_argument("--family", choices=FAMILY_NAMES, help="default: all three")
    p_bench.add_argument("-n", type=int, choices=(2, 3), default=2)
    p_bench.add_argument("-d", required=True, help='degree grid, e.g. "2..6" or "4"')
    p_bench.add_argument("--algos", default="bms,sfglm")
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--out", help="CSV path (default: stdout)")
    p_bench.set_defaults(func=cmd_bench)

    p_gor = sub.add_parser("gorenstein", help="probabilistic Gorenstein test")
    p_gor.add_argument("--ideal", required=True, help="comma-separated generators")
    p_gor.add_argument("--order", help='default "drl(y<x)"')
    p_gor.add_argument("--field", help='default "Fp:65537"')
    p_gor.add_argument("--trials", type=int, default=10)
    p_gor.add_argument("--seed", type=int, default=0)
    p_gor.set_defaults(func=cmd_gorenstein)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BoundExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ParseError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SeqrelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

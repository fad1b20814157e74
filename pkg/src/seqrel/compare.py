"""Cross-algorithm verification, the Gorenstein test, and the benchmark harness."""

from __future__ import annotations

import csv
import io
import random
import time
from dataclasses import dataclass
from itertools import product
from typing import Any, Callable, Iterable, Sequence

from .bms import relationset_to_json, run_bms, run_bms_linalg, run_bms_tweaked
from .errors import PositiveDimensionError, SeqrelError
from .field import Field, FpField, OpCounter, counting_paused
from .hankel import _rref
from .monomials import (
    Monomial,
    MonomialOrder,
    degree,
    enumerate_up_to,
    format_monomial,
    parse_order,
)
from .poly import Poly, format_poly, inter_reduce, mul_monomial, staircase_of
from .ranksolver import rank_result_to_json, run_rank_solver
from .sequences import (
    IdealSequenceSpec,
    SequenceOracle,
    _rand_elem,
    bracket,
    from_ideal,
    random_from_lms,
)
from .sfglm import SfglmResult, run_sfglm, run_sfglm_tweaked, sfglm_result_to_json

ALGORITHMS = ("bms", "bms-linalg", "bms-tweaked", "sfglm", "sfglm-tweaked", "rank")

_BMS_RUNNERS: dict[str, Callable] = {
    "bms": run_bms,
    "bms-linalg": run_bms_linalg,
    "bms-tweaked": run_bms_tweaked,
    "rank": run_rank_solver,
}
_SFGLM_RUNNERS: dict[str, Callable] = {
    "sfglm": run_sfglm,
    "sfglm-tweaked": run_sfglm_tweaked,
}


def monomials_up_to_degree(deg: int, ord: MonomialOrder) -> list[Monomial]:
    """All monomials of total degree <= deg, ascending."""
    exps = range(deg + 1)
    return ord.sort([e for e in product(exps, repeat=ord.n) if sum(e) <= deg])


def run_algorithm(
    algo: str,
    oracle: SequenceOracle,
    ord: MonomialOrder,
    bound: Monomial | None = None,
    table: list[Monomial] | None = None,
):
    """Dispatch on algorithm name; monomial bound or term set per family."""
    if algo in _BMS_RUNNERS:
        if bound is None:
            raise SeqrelError(f"algorithm {algo!r} needs a stopping monomial")
        return _BMS_RUNNERS[algo](oracle, bound, ord)
    if algo in _SFGLM_RUNNERS:
        if table is None:
            raise SeqrelError(f"algorithm {algo!r} needs a term set")
        return _SFGLM_RUNNERS[algo](oracle, table, ord)
    raise SeqrelError(f"unknown algorithm {algo!r}")


def result_basis(res) -> list[Poly]:
    return list(res.gb) if isinstance(res, SfglmResult) else res.basis()


def result_shift_table(res, ord: MonomialOrder) -> list[tuple[Poly, Monomial | None]]:
    """Per-generator certified shift: per-relation for the iterative solvers,
    the top of the certificate row set for the table-driven ones."""
    if isinstance(res, SfglmResult):
        top = res.table[-1] if res.table else ord.one
        return [(g, top) for g in res.gb]
    return [(r.poly, r.shift) for r in res.relations]


def result_to_json(res) -> dict:
    if isinstance(res, SfglmResult):
        return sfglm_result_to_json(res)
    if res.algorithm == "rank":
        return rank_result_to_json(res)
    return relationset_to_json(res)


# -- verification -------------------------------------------------------------------


def verify_shift(
    oracle: SequenceOracle, g: Poly, shifts: Iterable[Monomial]
) -> bool:
    """True iff [m*g] vanishes for every m in the shift set."""
    return all(not bracket(oracle, g, m) for m in shifts)


def verify_result(oracle: SequenceOracle, res, ord: MonomialOrder) -> bool:
    """Re-check every certified shift claim of a result against a fresh oracle."""
    for g, shift in result_shift_table(res, ord):
        if shift is None:
            continue
        if not verify_shift(oracle, g, enumerate_up_to(shift, ord)):
            return False
    return True


def is_zero_dimensional(G: Sequence[Poly], ord: MonomialOrder) -> bool:
    """True iff every variable has some LM(g) equal to a pure power of it."""
    lms = [g.lm(ord) for g in G if g]
    return ord.n > 0 and all(
        any(sum(m) == m[i] for m in lms) for i in range(ord.n)
    )


def ideal_contains_at_truncation(
    G_big: Sequence[Poly],
    G_small: Sequence[Poly],
    ord: MonomialOrder,
    degree_window: int,
) -> bool:
    """True iff each g in G_small equals some sum h_i*g_i over G_big with
    deg h_i <= degree_window (a bounded-degree linear membership solve)."""
    gens = [g for g in G_big if g]
    targets = [g for g in G_small if g]
    if not targets:
        return True
    if not gens:
        return False
    field = targets[0].field
    with counting_paused():
        cols = [
            mul_monomial(mu, g)
            for g in gens
            for mu in monomials_up_to_degree(degree_window, ord)
        ]
        support = sorted(
            {m for p in cols for m in p.terms}
            | {m for t in targets for m in t.terms},
            key=ord.key,
        )
        idx = {m: i for i, m in enumerate(support)}

        def column(p: Poly) -> list:
            v = [field.zero] * len(support)
            for m, c in p.terms.items():
                v[idx[m]] = c
            return v

        ncols = len(cols)
        entries = [column(p) for p in cols] + [column(t) for t in targets]
        # row-reduce the transpose: a pivot inside a target column means that
        # target is independent of the generator multiples
        matrix = [list(r) for r in zip(*entries, strict=True)]
        _, pivots = _rref(matrix, field)
    return all(p < ncols for p in pivots)


# -- cross-algorithm comparison -------------------------------------------------------


@dataclass
class ComparisonReport:
    ord: MonomialOrder
    field: Field
    algorithms: list[str]
    results: dict[str, Any]
    zero_dimensional: dict[str, bool]
    containment: dict[str, bool]
    queries: dict[str, int]
    ops: dict[str, OpCounter]


def compare_algorithms(
    make_oracle: Callable[[], SequenceOracle],
    algos: Sequence[str],
    ord: MonomialOrder,
    bound: Monomial | None = None,
    table: list[Monomial] | None = None,
    window: int | None = None,
) -> ComparisonReport:
    """Run each algorithm on a fresh oracle and recompute all verdicts."""
    names: list[str] = []
    for a in algos:
        name = a
        k = 2
        while name in names:
            name = f"{a}#{k}"
            k += 1
        names.append(name)
    results: dict[str, Any] = {}
    for name, algo in zip(names, algos, strict=True):
        results[name] = run_algorithm(algo, make_oracle(), ord, bound, table)
    bases = {name: result_basis(res) for name, res in results.items()}
    if window is None:
        degs = [degree(g.lm(ord)) for B in bases.values() for g in B if g]
        window = max([2, *degs])
    containment: dict[str, bool] = {}
    for a in names:
        for b in names:
            if a != b:
                containment[f"{a}<={b}"] = ideal_contains_at_truncation(
                    bases[b], bases[a], ord, window
                )
    fld = next(iter(results.values())).field
    return ComparisonReport(
        ord=ord,
        field=fld,
        algorithms=names,
        results=results,
        zero_dimensional={n: is_zero_dimensional(bases[n], ord) for n in names},
        containment=containment,
        queries={n: results[n].queries for n in names},
        ops={n: results[n].ops for n in names},
    )


def comparison_report_to_json(rep: ComparisonReport) -> dict:
    shifts = {}
    for name, res in rep.results.items():
        shifts[name] = [
            {
                "poly": format_poly(g, rep.ord),
                "shift": format_monomial(s, rep.ord) if s is not None else "0",
                "tested": s is not None,
            }
            for g, s in result_shift_table(res, rep.ord)
        ]
    return {
        "order": rep.ord.spec_string(),
        "field": str(rep.field),
        "algorithms": list(rep.algorithms),
        "results": {n: result_to_json(r) for n, r in rep.results.items()},
        "zero_dimensional": dict(rep.zero_dimensional),
        "containment": dict(rep.containment),
        "shifts": shifts,
        "queries": dict(rep.queries),
        "ops": {
            n: {
                "additions": o.additions,
                "multiplications": o.multiplications,
                "inversions": o.inversions,
            }
            for n, o in rep.ops.items()
        },
    }


# -- Gorenstein probabilistic test ----------------------------------------------------

GORENSTEIN_LIKELY = "Gorenstein-likely"
NOT_GORENSTEIN = "NotGorenstein"


def gorenstein_test(
    J_gb: Sequence[Poly], ord: MonomialOrder, trials: int, seed: int
) -> str:
    """Random dual elements of Q = R/J: if any has a relation ideal strictly
    larger than J, the quotient has no single dual generator."""
    if not J_gb:
        raise PositiveDimensionError("empty basis generates a positive-dimensional ideal")
    gb = inter_reduce(J_gb, ord)
    field = gb[0].field
    try:
        staircase = staircase_of(gb, ord)
    except ValueError as exc:
        raise PositiveDimensionError(str(exc)) from exc
    d_stair = max((degree(s) for s in staircase), default=0)
    # S(2*d_S) covers S*S; the max with 1 keeps border candidates when S = {1}
    T = monomials_up_to_degree(max(2 * d_stair, 1), ord)
    target = sorted(format_poly(g, ord) for g in gb)
    for trial in range(trials):
        rng = random.Random(seed * 1_000_003 + trial)
        initial = {s: _rand_elem(field, rng) for s in staircase}
        oracle = from_ideal(IdealSequenceSpec(gb=gb, ord=ord, initial=initial))
        res = run_sfglm(oracle, T, ord)
        if sorted(format_poly(g, ord) for g in res.gb) != target:
            return NOT_GORENSTEIN
    return GORENSTEIN_LIKELY


# -- benchmark families ---------------------------------------------------------------

FAMILY_NAMES = ("rectangle", "lshape", "simplex")
BENCH_FIELD = FpField(65537)


@dataclass
class FamilySpec:
    family: str  # "rectangle" | "lshape" | "simplex"
    d: int
    n: int  # 2 or 3
    seed: int = 0

    def __post_init__(self) -> None:
        if self.family not in FAMILY_NAMES:
            raise SeqrelError(f"unknown family {self.family!r}")
        if self.n not in (2, 3):
            raise SeqrelError("benchmark families are 2- or 3-dimensional")
        if self.d < 2:
            raise SeqrelError("family degree parameter must be >= 2")


def family_order(n: int) -> MonomialOrder:
    return parse_order("drl(y<x)" if n == 2 else "drl(z<y<x)")


def _vpow(v: Monomial, e: int) -> Monomial:
    return tuple(c * e for c in v)


def _vmul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(i + j for i, j in zip(a, b, strict=True))


def family_lms(spec: FamilySpec, ord: MonomialOrder) -> list[Monomial]:
    d, n = spec.d, spec.n
    x, y = ord.variable("x"), ord.variable("y")
    z = ord.variable("z") if n == 3 else None
    if spec.family == "rectangle":
        lms = [_vpow(y, d // 2), _vpow(x, d)]
        if n == 3:
            lms.insert(0, _vpow(z, -(-d // 3)))
    elif spec.family == "lshape":
        if n == 2:
            lms = [_vmul(x, y), _vpow(y, d), _vpow(x, d)]
        else:
            lms = [
                _vmul(y, z), _vmul(x, z), _vmul(x, y),
                _vpow(z, d), _vpow(y, d), _vpow(x, d),
            ]
    else:  # simplex
        lms = [m for m in monomials_up_to_degree(d, ord) if sum(m) == d]
    return ord.sort(lms)


def family_degrees(spec: FamilySpec) -> tuple[int, int, int]:
    """(d_S, d_G, d_max) from the known generating leading monomials."""
    ord = family_order(spec.n)
    lms = family_lms(spec, ord)
    stair = staircase_of([Poly.monomial(BENCH_FIELD, m) for m in lms], ord)
    d_s = max((degree(s) for s in stair), default=0)
    d_g = max(degree(m) for m in lms)
    return d_s, d_g, max(d_s, d_g)


def make_family(
    spec: FamilySpec, field: Field = BENCH_FIELD
) -> tuple[SequenceOracle, list[Poly], int]:
    """A random sequence whose ideal has the family's leading monomials."""
    ord = family_order(spec.n)
    lms = family_lms(spec, ord)
    oracle, gb = random_from_lms(lms, ord, field, spec.seed)
    stair = staircase_of([Poly.monomial(field, m) for m in lms], ord)
    return oracle, gb, len(stair)


# -- benchmark harness ----------------------------------------------------------------

CSV_HEADER = (
    "family",
    "n",
    "d",
    "algorithm",
    "queries",
    "mults",
    "adds",
    "staircase_size",
    "dmax",
    "wall_ms",
)


@dataclass
class BenchRow:
    family: str
    n: int
    d: int
    algorithm: str
    queries: int
    mults: int
    adds: int
    staircase_size: int
    dmax: int
    wall_ms: float

    def as_csv(self) -> list[str]:
        return [
            self.family,
            str(self.n),
            str(self.d),
            self.algorithm,
            str(self.queries),
            str(self.mults),
            str(self.adds),
            str(self.staircase_size),
            str(self.dmax),
            f"{self.wall_ms:.3f}",
        ]


def bench_point(
    spec: FamilySpec, algorithm: str, field: Field = BENCH_FIELD
) -> BenchRow:
    """One grid point, one fresh oracle: BMS-family solvers scan up to
    x^(d_S + d_max); the table-driven ones use all monomials of degree <= d_max."""
    ord = family_order(spec.n)
    oracle, _, ssize = make_family(spec, field)
    d_s, _, d_max = family_degrees(spec)
    bound = table = None
    if algorithm in _SFGLM_RUNNERS:
        table = monomials_up_to_degree(d_max, ord)
    else:
        bound = tuple(e * (d_s + d_max) for e in ord.variable("x"))
    t0 = time.perf_counter()
    res = run_algorithm(algorithm, oracle, ord, bound, table)
    wall_ms = (time.perf_counter() - t0) * 1000.0
    return BenchRow(
        family=spec.family,
        n=spec.n,
        d=spec.d,
        algorithm=algorithm,
        queries=res.queries,
        mults=res.ops.multiplications,
        adds=res.ops.additions,
        staircase_size=ssize,
        dmax=d_max,
        wall_ms=wall_ms,
    )


def bench(
    specs: Iterable[FamilySpec],
    algorithms: Sequence[str],
    output_path: str | None = None,
    field: Field = BENCH_FIELD,
) -> list[BenchRow]:
    rows = [bench_point(s, a, field) for s in specs for a in algorithms]
    if output_path is not None:
        with open(output_path, "w", newline="") as fh:
            _write_csv(rows, fh)
    return rows


def _write_csv(rows: Sequence[BenchRow], fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(r.as_csv())


def rows_to_csv(rows: Sequence[BenchRow]) -> str:
    buf = io.StringIO()
    _write_csv(rows, buf)
    return buf.getvalue()


def gnuplot_columns(rows: Sequence[BenchRow], value: str = "queries") -> str:
    """Blank-line-separated (d, value) blocks, one per family/n/algorithm series."""
    keys = sorted({(r.family, r.n, r.algorithm) for r in rows})
    blocks = []
    for fam, n, algo in keys:
        series = sorted(
            (r.d, getattr(r, value)) for r in rows
            if (r.family, r.n, r.algorithm) == (fam, n, algo)
        )
        lines = [f'# {fam} n={n} {algo} ({value})']
        lines += [f"{d} {v}" for d, v in series]
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"

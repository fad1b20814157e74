"""Relation-ideal computation by incremental rank comparisons.

The scan visits every monomial m up to the bound in ascending order.  Each
border candidate leading monomial t dividing m contributes the row m/t: the
candidate admits a relation valid on its accumulated rows exactly when
adjoining the t-column to the staircase columns does NOT raise the row-space
rank.  A rank jump certifies that m/t belongs to the staircase; the staircase
is then restabilized, the candidate set becomes the new border, and every
candidate restarts from the full row window {mu : mu*t <= m}.  Relation tails
are solved only once, after the scan, from each candidate's final row set.

Per-candidate ranks are maintained as incremental row-echelon forms with the
candidate column kept last, so each visit costs one row reduction.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .field import Field, FieldElement, OpCounter, counting
from .monomials import (
    Monomial,
    MonomialOrder,
    border,
    divides,
    enumerate_up_to,
    format_monomial,
    iter_up_to,
    mul as mono_mul,
    quotient,
    stabilize,
)
from .poly import Poly, poly_from_json, poly_to_json
from .sequences import SequenceOracle
from .hankel import Inconsistent, solve_relation


@dataclass
class RankRelation:
    poly: Poly
    shift: Monomial | None  # greatest row whose shifted bracket was verified
    open: bool = False  # tail solve failed on the certified rows; poly is bare
    fail_row: Monomial | None = None
    residual: FieldElement | None = None


@dataclass
class RankResult:
    algorithm: str
    ord: MonomialOrder
    field: Field
    bound: Monomial
    relations: list[RankRelation]
    staircase: list[Monomial]
    queries: int
    ops: OpCounter

    def basis(self) -> list[Poly]:
        return [r.poly for r in self.relations]


class _Candidate:
    """Echelon bookkeeping for one border monomial; candidate column last."""

    __slots__ = ("lm", "V", "rows", "pivots", "dead")

    def __init__(self, lm: Monomial):
        self.lm = lm
        self.V: list[Monomial] = []  # rows accumulated, ascending
        self.rows: list[list[FieldElement]] = []  # reduced echelon rows
        self.pivots: list[int] = []
        self.dead = False  # a pivot sits in the candidate column

    def insert(self, label: Monomial, row: list[FieldElement]) -> None:
        self.V.append(label)
        row = list(row)
        for prow, p in zip(self.rows, self.pivots):
            c = row[p]
            if c:
                row = [a - c * b for a, b in zip(row, prow)]
        pivot = next((j for j, a in enumerate(row) if a), None)
        if pivot is not None:
            inv = row[pivot].inverse()
            row = [a * inv for a in row]
            self.rows.append(row)
            self.pivots.append(pivot)
            if pivot == len(row) - 1:
                self.dead = True


def _candidate_row(
    oracle: SequenceOracle, q: Monomial, S: list[Monomial], lm: Monomial
) -> list[FieldElement]:
    return [oracle.query(mono_mul(q, s)) for s in S] + [oracle.query(mono_mul(q, lm))]


def _fresh_candidate(
    oracle: SequenceOracle,
    lm: Monomial,
    S: list[Monomial],
    upto: Monomial,
    ord: MonomialOrder,
) -> _Candidate:
    cand = _Candidate(lm)
    for mu in enumerate_up_to(upto, ord):
        if ord.leq(mono_mul(mu, lm), upto):
            cand.insert(mu, _candidate_row(oracle, mu, S, lm))
    return cand


def staircase_membership_test(
    oracle: SequenceOracle,
    S: list[Monomial],
    t: Monomial,
    rows: list[Monomial],
    ord: MonomialOrder,
) -> bool:
    """True iff no relation led by t with tail on S annihilates all rows."""
    return isinstance(solve_relation(oracle, S, rows, t, ord), Inconsistent)


def run_rank_solver(
    oracle: SequenceOracle, bound: Monomial, ord: MonomialOrder
) -> RankResult:
    ops = OpCounter()
    start = oracle.queries
    staircase: list[Monomial] = []
    candidates: list[_Candidate] = [_Candidate(ord.one)]
    with counting(ops):
        for m in iter_up_to(bound, ord):
            additions: list[Monomial] = []
            for cand in candidates:
                if not divides(cand.lm, m):
                    continue
                q = quotient(m, cand.lm)
                cand.insert(q, _candidate_row(oracle, q, staircase, cand.lm))
                if cand.dead:
                    additions.append(q)
            if additions:
                staircase = stabilize(staircase + additions, ord)
                candidates = [
                    _fresh_candidate(oracle, lm, staircase, m, ord)
                    for lm in border(staircase, ord)
                ]
        relations = []
        for cand in candidates:
            solved = solve_relation(oracle, staircase, cand.V, cand.lm, ord)
            shift = cand.V[-1] if cand.V else None
            if isinstance(solved, Inconsistent):
                relations.append(
                    RankRelation(
                        Poly.monomial(oracle.field, cand.lm),
                        shift,
                        open=True,
                        fail_row=solved.row,
                        residual=solved.residual,
                    )
                )
            else:
                relations.append(RankRelation(solved, shift))
    relations.sort(key=lambda r: ord.key(r.poly.lm(ord)))
    return RankResult(
        "rank",
        ord,
        oracle.field,
        bound,
        relations,
        staircase,
        oracle.queries - start,
        ops,
    )


# -- serialization --------------------------------------------------------------


def rank_result_to_json(res: RankResult) -> dict:
    relations = []
    for r in res.relations:
        entry = {
            "poly": poly_to_json(r.poly, res.ord),
            "shift": "0" if r.shift is None else format_monomial(r.shift, res.ord),
            "tested": r.shift is not None,
            "open": r.open,
        }
        if r.open:
            assert r.fail_row is not None and r.residual is not None
            entry["fail_row"] = format_monomial(r.fail_row, res.ord)
            entry["residual"] = str(r.residual)
        relations.append(entry)
    return {
        "algorithm": res.algorithm,
        "order": res.ord.spec_string(),
        "field": str(res.field),
        "bound": format_monomial(res.bound, res.ord),
        "staircase": [format_monomial(s, res.ord) for s in res.staircase],
        "relations": relations,
        "queries": res.queries,
        "ops": res.ops.as_dict(),
    }


def rank_result_from_json(data: dict) -> RankResult:
    from .field import parse_field
    from .monomials import parse_monomial, parse_order

    ord = parse_order(data["order"])
    fld = parse_field(data["field"])
    relations = []
    for r in data["relations"]:
        relations.append(
            RankRelation(
                poly_from_json(r["poly"], ord, fld),
                None if r["shift"] == "0" else parse_monomial(r["shift"], ord),
                open=r.get("open", False),
                fail_row=(
                    parse_monomial(r["fail_row"], ord) if r.get("open") else None
                ),
                residual=fld.elem(r["residual"]) if r.get("open") else None,
            )
        )
    ops = OpCounter()
    for key, value in data.get("ops", {}).items():
        setattr(ops, key, value)
    return RankResult(
        data["algorithm"],
        ord,
        fld,
        parse_monomial(data["bound"], ord),
        relations,
        [parse_monomial(s, ord) for s in data["staircase"]],
        data["queries"],
        ops,
    )

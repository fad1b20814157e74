"""Relation-ideal computation from the rank profile of one multi-Hankel matrix.

Given a stable set T of monomials, the matrix H_{T,T} is built in full; the
column rank profile yields the useful staircase S.  Every monomial of T (and,
in the adaptive variant, of the shifted staircases x_i·S) outside the
stabilized staircase is a candidate leading monomial: its relation tail is
obtained by solving the square invertible system H_{S,S}·α = −H_{S,t}, then
verified row by row against the remaining table rows.  Accepted relations
prune their monomial multiples from the candidate list, so the output is a
reduced basis with pairwise non-dividing leading monomials.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .field import Field, FieldElement, OpCounter, counting
from .monomials import (
    Monomial,
    MonomialOrder,
    divides,
    format_monomial,
    is_stable,
    mul as mono_mul,
    stabilize,
)
from .poly import Poly, poly_from_json, poly_to_json
from .sequences import SequenceOracle
from .errors import SeqrelError
from .hankel import Inconsistent, build, column_rank_profile, solve_relation


@dataclass
class RejectedCandidate:
    """Candidate leading monomial whose solved tail fails on some table row."""

    candidate: Monomial
    row: Monomial
    residual: FieldElement


@dataclass
class SfglmResult:
    algorithm: str  # "sfglm" | "sfglm-tweaked"
    ord: MonomialOrder
    field: Field
    table: list[Monomial]  # T, ascending; doubles as the certificate row set
    gb: list[Poly]
    staircase: list[Monomial]  # useful staircase = column rank profile
    queries: int
    ops: OpCounter
    rejected: list[RejectedCandidate] = dc_field(default_factory=list)


def useful_staircase(
    oracle: SequenceOracle, T: list[Monomial], ord: MonomialOrder
) -> tuple[int, list[Monomial]]:
    """Rank and column rank profile of H_{T,T}."""
    H = build(oracle, T, T, ord)
    return column_rank_profile(H)


def _validated_table(T: list[Monomial], ord: MonomialOrder) -> list[Monomial]:
    T = ord.sort(T)
    if not T:
        raise SeqrelError("table of monomials must be nonempty")
    if not is_stable(T):
        raise SeqrelError("table of monomials must be stable under division")
    return T


def _dense_residual(
    oracle: SequenceOracle,
    rel: Poly,
    t: Monomial,
    S: list[Monomial],
    row: Monomial,
) -> FieldElement:
    # Dense row-times-vector product: every staircase column is multiplied,
    # zero tail coefficients included, matching the matrix cost convention.
    acc = oracle.query(mono_mul(row, t))
    for s in S:
        acc = acc + rel.coeff(s) * oracle.query(mono_mul(row, s))
    return acc


def _solve_candidate(
    oracle: SequenceOracle,
    S: list[Monomial],
    t: Monomial,
    ord: MonomialOrder,
) -> Poly:
    rel = solve_relation(oracle, S, S, t, ord)
    assert not isinstance(rel, Inconsistent), "square staircase system is invertible"
    assert rel.lm(ord) == t, "solved tail must stay below the candidate"
    return rel


def _solve_candidates(
    oracle: SequenceOracle,
    S: list[Monomial],
    cands: list[Monomial],
    ord: MonomialOrder,
) -> dict[Monomial, Poly]:
    """Monic relations t + tail_S(t) for every candidate at once.

    One elimination of [H_{S,S} | H_{S,cands}] replaces a per-candidate solve;
    at full rank each reduced RHS column is the unique tail.
    """
    from .hankel import _rref

    field = oracle.field
    S_sorted = ord.sort(S)
    k = len(S_sorted)
    cols = S_sorted + list(cands)
    entries = [[oracle.query(mono_mul(r, c)) for c in cols] for r in S_sorted]
    R, pivots = _rref(entries, field)
    assert pivots == list(range(k)), "staircase system must be invertible"
    out: dict[Monomial, Poly] = {}
    for j, t in enumerate(cands):
        terms = {t: field.one}
        for i, s in enumerate(S_sorted):
            x = R[i][k + j]
            if x:
                terms[s] = -x
        rel = Poly(field, terms)
        assert rel.lm(ord) == t, "solved tail must stay below the candidate"
        out[t] = rel
    return out


def run_sfglm(
    oracle: SequenceOracle, T: list[Monomial], ord: MonomialOrder
) -> SfglmResult:
    """Relations of the table restricted to T, leading monomials in T."""
    T = _validated_table(T, ord)
    ops = OpCounter()
    start = oracle.queries
    with counting(ops):
        H = build(oracle, T, T, ord)
        rank, S = column_rank_profile(H)
        if rank == 0:
            gb = [Poly.monomial(oracle.field, ord.one)]
            return SfglmResult(
                "sfglm", ord, oracle.field, T, gb, [], oracle.queries - start, ops
            )
        stable_S = set(stabilize(S, ord))
        in_S = set(S)
        gb: list[Poly] = []
        L = [t for t in T if t not in stable_S]
        solved = _solve_candidates(oracle, S, L, ord)
        while L:
            t = L[0]
            rel = solved[t]
            for row in T:
                if row in in_S:
                    continue
                residual = _dense_residual(oracle, rel, t, S, row)
                assert not residual, (
                    f"relation at {format_monomial(t, ord)} fails on row "
                    f"{format_monomial(row, ord)}"
                )
            gb.append(rel)
            L = [m for m in L[1:] if not divides(t, m)]
    return SfglmResult(
        "sfglm", ord, oracle.field, T, gb, S, oracle.queries - start, ops
    )


def run_sfglm_tweaked(
    oracle: SequenceOracle, T: list[Monomial], ord: MonomialOrder
) -> SfglmResult:
    """Adaptive variant: candidates extend past T along the shifted staircase.

    Each accepted or rejected candidate prunes its multiples, so pure-power
    relations beyond the table degree are reached without enlarging T.
    Rejections (a solved tail failing on some table row) are reported with
    the first failing row and its residual.
    """
    T = _validated_table(T, ord)
    ops = OpCounter()
    start = oracle.queries
    rejected: list[RejectedCandidate] = []
    with counting(ops):
        H = build(oracle, T, T, ord)
        rank, S = column_rank_profile(H)
        if rank == 0:
            gb = [Poly.monomial(oracle.field, ord.one)]
            return SfglmResult(
                "sfglm-tweaked",
                ord,
                oracle.field,
                T,
                gb,
                [],
                oracle.queries - start,
                ops,
            )
        stable_S = set(stabilize(S, ord))
        candidates = set(T)
        for s in stable_S:
            for v in ord.variables:
                candidates.add(mono_mul(v, s))
        gb = []
        L = ord.sort(candidates - stable_S)
        while L:
            t = L[0]
            rel = _solve_candidate(oracle, S, t, ord)
            failure: RejectedCandidate | None = None
            for row in T:
                residual = _dense_residual(oracle, rel, t, S, row)
                if residual:
                    failure = RejectedCandidate(t, row, residual)
                    break
            if failure is None:
                gb.append(rel)
            else:
                rejected.append(failure)
            L = [m for m in L[1:] if not divides(t, m)]
    return SfglmResult(
        "sfglm-tweaked",
        ord,
        oracle.field,
        T,
        gb,
        S,
        oracle.queries - start,
        ops,
        rejected,
    )


# -- serialization --------------------------------------------------------------


def sfglm_result_to_json(res: SfglmResult) -> dict:
    return {
        "algorithm": res.algorithm,
        "order": res.ord.spec_string(),
        "field": str(res.field),
        "gb": [poly_to_json(g, res.ord) for g in res.gb],
        "staircase": [format_monomial(s, res.ord) for s in res.staircase],
        "certified_shift_set": [format_monomial(t, res.ord) for t in res.table],
        "queries": res.queries,
        "ops": res.ops.as_dict(),
        "rejected": [
            {
                "candidate": format_monomial(r.candidate, res.ord),
                "row": format_monomial(r.row, res.ord),
                "residual": str(r.residual),
            }
            for r in res.rejected
        ],
    }


def sfglm_result_from_json(data: dict) -> SfglmResult:
    from .field import parse_field
    from .monomials import parse_monomial, parse_order

    ord = parse_order(data["order"])
    fld = parse_field(data["field"])
    ops = OpCounter()
    for key, value in data.get("ops", {}).items():
        setattr(ops, key, value)
    table = [parse_monomial(t, ord) for t in data["certified_shift_set"]]
    return SfglmResult(
        data["algorithm"],
        ord,
        fld,
        table,
        [poly_from_json(g, ord, fld) for g in data["gb"]],
        [parse_monomial(s, ord) for s in data["staircase"]],
        data["queries"],
        ops,
        [
            RejectedCandidate(
                parse_monomial(r["candidate"], ord),
                parse_monomial(r["row"], ord),
                fld.elem(r["residual"]),
            )
            for r in data.get("rejected", [])
        ],
    )

"""Incremental rank-based relation solver: goldens and cross-solver agreement."""

from __future__ import annotations

import json

from hypothesis import given, settings, strategies as st

from seqrel.bms import run_bms, stopping_bound
from seqrel.field import QQ, FpField, OpCounter, parse_field
from seqrel.monomials import (
    enumerate_up_to,
    format_monomial,
    parse_monomial,
    parse_order,
)
from seqrel.poly import Poly, format_poly
from seqrel.ranksolver import (
    RankRelation,
    RankResult,
    rank_result_from_json,
    rank_result_to_json,
    run_rank_solver,
    staircase_membership_test,
)
from seqrel.sequences import bracket, make_generator, random_from_lms, table_oracle

DRL2 = parse_order("drl(y<x)")
LEX3 = parse_order("lex(z<y<x)")
F65537 = parse_field("Fp:65537")


def solve(gen, field, bound, ord):
    oracle = make_generator(gen, field)
    return run_rank_solver(oracle, parse_monomial(bound, ord), ord)


def fmt_rel(res):
    return [
        (
            format_poly(r.poly, res.ord),
            format_monomial(r.shift, res.ord) if r.shift is not None else None,
        )
        for r in res.relations
    ]


def fmt_monos(monos, ord):
    return [format_monomial(s, ord) for s in monos]


# -- golden outputs --------------------------------------------------------------


def test_binomial_truncations():
    res3 = solve("binomial", F65537, "x^3", DRL2)
    assert fmt_rel(res3) == [
        ("y^2", "x"),
        ("x*y + 65536*y + 65536", "x"),
        ("x^2 + 65535*x + 1", "x"),
    ]
    assert fmt_monos(res3.staircase, DRL2) == ["1", "y", "x"]
    assert res3.queries == 10
    assert not any(r.open for r in res3.relations)

    # one degree further the y^2/x^2 truncation relations are displaced
    res4 = solve("binomial", F65537, "x^4", DRL2)
    assert fmt_rel(res4) == [
        ("x*y + 65536*y + 65536", "x^2"),
        ("y^3", "x"),
        ("x^3 + 65534*x + 2", "x"),
    ]
    assert fmt_monos(res4.staircase, DRL2) == ["1", "y", "x", "y^2", "x^2"]
    assert res4.queries == 15


def test_pow23_truncation():
    res = solve("pow23", F65537, "x^4", DRL2)
    assert fmt_rel(res) == [("y + 65534", "x^3"), ("x^2 + 65533*x + 4", "x^2")]
    assert fmt_monos(res.staircase, DRL2) == ["1", "x"]
    assert res.queries == 15


def test_squares_over_rationals():
    res = solve("sq", QQ, "y^5", DRL2)
    assert fmt_rel(res) == [
        ("x*y - x - y + 1", "x^2"),
        ("x^2 - y^2 - 2*x + 2*y", "x^2"),
        ("y^3 - 3*y^2 + 3*y - 1", "y^2"),
    ]
    assert fmt_monos(res.staircase, DRL2) == ["1", "y", "x", "y^2"]
    assert res.queries == 16


def test_step_small_bound():
    res = solve("step", F65537, "y^3", DRL2)
    assert fmt_rel(res) == [
        ("y^2 + 65535*y + 1", "y"),
        ("x*y + 65535*y", "1"),
        ("x^2 + 65533*y", "1"),
    ]
    assert fmt_monos(res.staircase, DRL2) == ["1", "y", "x"]
    assert res.queries == 7


def test_kron_truncation():
    res = solve("kron", F65537, "x^4", DRL2)
    assert fmt_rel(res) == [("y^2", "x^2"), ("x^2", "x^2")]
    assert fmt_monos(res.staircase, DRL2) == ["1", "y", "x", "x*y"]
    assert res.queries == 15


def test_quadrisection_lex():
    res = solve("fib4", F65537, "z^6", LEX3)
    assert fmt_rel(res) == [
        ("z^2 + 65536*z + 65536", "z^4"),
        ("y", None),
        ("x", None),
    ]
    assert fmt_monos(res.staircase, LEX3) == ["1", "z"]
    assert res.queries == 7


def test_zero_table_unit_relation():
    oracle = table_oracle(QQ, (3, 3), ["0"] * 9)
    res = run_rank_solver(oracle, parse_monomial("y^2", DRL2), DRL2)
    assert [format_poly(r.poly, DRL2) for r in res.relations] == ["1"]
    assert not res.relations[0].open
    assert res.staircase == []
    assert res.queries == 4


# -- agreement with the iterative solver -------------------------------------------

AGREEMENT_CASES = [
    ("binomial", F65537, "x^3", DRL2),
    ("binomial", F65537, "x^4", DRL2),
    ("pow23", F65537, "x^4", DRL2),
    ("sq", QQ, "y^5", DRL2),
    ("step", F65537, "y^3", DRL2),
    ("kron", F65537, "x^4", DRL2),
    ("fib4", F65537, "z^6", LEX3),
]


def test_agrees_with_iterative_solver():
    for gen, field, bound, ord in AGREEMENT_CASES:
        m = parse_monomial(bound, ord)
        rres = run_rank_solver(make_generator(gen, field), m, ord)
        bres = run_bms(make_generator(gen, field), m, ord)
        assert fmt_monos(rres.staircase, ord) == fmt_monos(bres.staircase, ord)
        assert [format_monomial(r.poly.lm(ord), ord) for r in rres.relations] == [
            format_monomial(r.poly.lm(ord), ord) for r in bres.relations
        ]
        rshifts = [
            format_monomial(r.shift, ord) if r.shift is not None else None
            for r in rres.relations
        ]
        bshifts = [
            format_monomial(r.shift, ord) if r.shift is not None else None
            for r in bres.relations
        ]
        assert rshifts == bshifts
        assert rres.queries == bres.queries


# -- staircase escalation through shared failure cells -----------------------------


def test_cross_candidate_escalation():
    # u(1,2) kills the x*y candidate and, through the same table cell, the
    # y^2 candidate; both quotients enter the staircase in one step.
    entries = ["1", "0", "1", "0", "2", "0", "1", "1", "0", "0", "1", "0", "0", "0", "0"]
    oracle = table_oracle(QQ, (3, 5), entries)
    res = run_rank_solver(oracle, parse_monomial("x*y^2", DRL2), DRL2)
    assert fmt_rel(res) == [("x*y - y - 1", "y"), ("x^2 - 1", "1"), ("y^3", "1")]
    assert fmt_monos(res.staircase, DRL2) == ["1", "y", "x", "y^2"]
    assert res.queries == 8
    assert not any(r.open for r in res.relations)


def test_escalation_absorbs_codeath_quotients():
    # Factorial x-axis with a single off-axis nonzero at u(3,1): at step x^3*y
    # both the y and x^2 candidates fail, and the closure of their quotients
    # {x^3, x*y} pulls y, x*y into the staircase.
    fact = [1, 1, 2, 6, 24, 120, 720, 5040]
    entries = []
    for i in range(8):
        row = [str(fact[i])] + ["0"] * 4
        if i == 3:
            row[1] = "1"
        entries += row
    oracle = table_oracle(QQ, (8, 5), entries)
    res = run_rank_solver(oracle, parse_monomial("x^4", DRL2), DRL2)
    assert fmt_rel(res) == [
        ("y^2", "x^2"),
        ("x^2*y - x + 1", "x"),
        ("x^4 - 24", "1"),
    ]
    assert fmt_monos(res.staircase, DRL2) == ["1", "y", "x", "x*y", "x^2", "x^3"]
    assert res.queries == 18
    assert not any(r.open for r in res.relations)


# -- membership certificates -------------------------------------------------------


def test_membership_certificate():
    S = [parse_monomial(s, DRL2) for s in ["1", "y", "x"]]
    t = parse_monomial("x^2", DRL2)
    wide = enumerate_up_to(parse_monomial("y^2", DRL2), DRL2)
    # no relation led by x^2 with tail on S survives the wider row window
    assert staircase_membership_test(
        make_generator("step", F65537), S, t, wide, DRL2
    )
    # over the rows S alone such a relation still exists
    assert not staircase_membership_test(
        make_generator("step", F65537), S, t, S, DRL2
    )


# -- certification of emitted relations --------------------------------------------


def test_emitted_relations_certified():
    # every closed relation must vanish on its whole certified shift window
    for gen, field, bound, ord in AGREEMENT_CASES:
        m = parse_monomial(bound, ord)
        res = run_rank_solver(make_generator(gen, field), m, ord)
        oracle = make_generator(gen, field)
        for rel in res.relations:
            assert not rel.open  # certified sequences never leave failures open
            assert rel.fail_row is None and rel.residual is None
            if rel.shift is None:
                continue
            # shift is the largest certified row; the window is its down-set
            for mu in enumerate_up_to(rel.shift, ord):
                assert not bracket(oracle, rel.poly, mu)


# -- serialization ------------------------------------------------------------------


def test_json_round_trip():
    entries = ["1", "0", "1", "0", "2", "0", "1", "1", "0", "0", "1", "0", "0", "0", "0"]
    oracle = table_oracle(QQ, (3, 5), entries)
    res = run_rank_solver(oracle, parse_monomial("x*y^2", DRL2), DRL2)
    data = rank_result_to_json(res)
    assert data["relations"][0] == {
        "poly": [
            {"monomial": "x*y", "coefficient": "1"},
            {"monomial": "y", "coefficient": "-1"},
            {"monomial": "1", "coefficient": "-1"},
        ],
        "shift": "y",
        "tested": True,
        "open": False,
    }
    text = json.dumps(data, sort_keys=True)
    back = rank_result_from_json(json.loads(text))
    assert json.dumps(rank_result_to_json(back), sort_keys=True) == text


def test_json_round_trip_open_relation():
    # the open flag marks a candidate whose final window check failed; no finite
    # recurrent table has produced one, but the wire format must carry it.
    lm = parse_monomial("x^2", DRL2)
    rel = RankRelation(
        poly=Poly.monomial(QQ, lm),
        shift=None,
        open=True,
        fail_row=parse_monomial("x*y", DRL2),
        residual=QQ.elem("7"),
    )
    res = RankResult(
        algorithm="rank",
        ord=DRL2,
        field=QQ,
        bound=parse_monomial("x^2*y", DRL2),
        relations=[rel],
        staircase=[parse_monomial("1", DRL2), parse_monomial("x", DRL2)],
        queries=9,
        ops=OpCounter(additions=3, multiplications=4, inversions=1),
    )
    data = rank_result_to_json(res)
    entry = data["relations"][0]
    assert entry["open"] is True
    assert entry["fail_row"] == "x*y"
    assert entry["residual"] == "7"
    assert entry["shift"] == "0"
    assert entry["tested"] is False
    back = rank_result_from_json(data)
    assert back.relations[0].open
    assert back.relations[0].shift is None
    assert format_monomial(back.relations[0].fail_row, DRL2) == "x*y"
    assert back.relations[0].residual == QQ.elem("7")
    assert rank_result_to_json(back) == data


# -- recovery property ---------------------------------------------------------------


@settings(deadline=None, max_examples=15)
@given(
    a=st.integers(min_value=1, max_value=3),
    b=st.integers(min_value=1, max_value=4),
    seed=st.integers(min_value=0, max_value=10**6),
)
def test_matches_iterative_solver_on_random_ideals(a, b, seed):
    fld = FpField(65537)
    lms = [parse_monomial(f"y^{a}", DRL2), parse_monomial(f"x^{b}", DRL2)]
    oracle, gb = random_from_lms(lms, DRL2, fld, seed)
    bound = stopping_bound(gb, DRL2)
    rres = run_rank_solver(oracle, bound, DRL2)
    oracle2, _ = random_from_lms(lms, DRL2, fld, seed)
    bres = run_bms(oracle2, bound, DRL2)
    assert fmt_monos(rres.staircase, DRL2) == fmt_monos(bres.staircase, DRL2)
    assert [format_monomial(r.poly.lm(DRL2), DRL2) for r in rres.relations] == [
        format_monomial(r.poly.lm(DRL2), DRL2) for r in bres.relations
    ]
    rshifts = [
        format_monomial(r.shift, DRL2) if r.shift is not None else None
        for r in rres.relations
    ]
    bshifts = [
        format_monomial(r.shift, DRL2) if r.shift is not None else None
        for r in bres.relations
    ]
    assert rshifts == bshifts
    assert not any(r.open for r in rres.relations)

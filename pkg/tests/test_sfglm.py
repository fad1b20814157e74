"""Rank-profile relation finding: golden tables and recovery properties."""

from __future__ import annotations

import json

from hypothesis import given, settings, strategies as st

from seqrel.errors import SeqrelError
from seqrel.field import QQ, FpField
from seqrel.monomials import (
    enumerate_up_to,
    format_monomial,
    parse_monomial,
    parse_order,
)
from seqrel.poly import format_poly
from seqrel.sequences import make_generator, random_from_lms, table_oracle
from seqrel.sfglm import (
    run_sfglm,
    run_sfglm_tweaked,
    sfglm_result_from_json,
    sfglm_result_to_json,
    useful_staircase,
)

DRL2 = parse_order("drl(y<x)")
DRL3 = parse_order("drl(z<y<x)")


def downset(bound: str, ord):
    return enumerate_up_to(parse_monomial(bound, ord), ord)


def fmt_polys(res):
    return [format_poly(g, res.ord) for g in res.gb]


def fmt_monos(monos, ord):
    return [format_monomial(s, ord) for s in monos]


# -- golden outputs --------------------------------------------------------------


def test_pow23_degree_two_table():
    res = run_sfglm(make_generator("pow23", QQ), downset("x^2", DRL2), DRL2)
    assert fmt_polys(res) == ["y - 3", "x^2 - 4*x + 4"]
    assert fmt_monos(res.staircase, DRL2) == ["1", "x"]
    assert res.queries == 15
    assert res.algorithm == "sfglm"


def test_binomial_tables():
    res2 = run_sfglm(make_generator("binomial", QQ), downset("x^2", DRL2), DRL2)
    assert fmt_polys(res2) == ["x*y - y - 1"]
    assert fmt_monos(res2.staircase, DRL2) == ["1", "y", "x", "y^2", "x^2"]
    assert res2.queries == 15

    res3 = run_sfglm(make_generator("binomial", QQ), downset("x^3", DRL2), DRL2)
    assert fmt_polys(res3) == ["x*y - y - 1"]
    assert fmt_monos(res3.staircase, DRL2) == [
        "1", "y", "x", "y^2", "x^2", "y^3", "x^3",
    ]
    assert res3.queries == 28


def test_squares_over_rationals():
    res = run_sfglm(make_generator("sq", QQ), downset("x^3", DRL2), DRL2)
    assert fmt_polys(res) == [
        "x*y - x - y + 1",
        "x^2 - y^2 - 2*x + 2*y",
        "y^3 - 3*y^2 + 3*y - 1",
    ]
    assert fmt_monos(res.staircase, DRL2) == ["1", "y", "x", "y^2"]
    assert res.queries == 28


def test_step_sequence_small_table():
    res = run_sfglm(make_generator("step", QQ), downset("y^2", DRL2), DRL2)
    assert fmt_polys(res) == ["y^2 - 2*y + 1"]
    assert fmt_monos(res.staircase, DRL2) == ["1", "y", "x"]
    # frozen operation counts: one shared elimination plus the dense row checks
    assert res.ops.as_dict() == {
        "additions": 31,
        "multiplications": 69,
        "inversions": 17,
    }


def test_quadrisection_block_table():
    res = run_sfglm(make_generator("fib4", QQ), downset("z^6", DRL3), DRL3)
    assert fmt_polys(res) == ["y - 1", "x - 3*z - 2", "z^2 - z - 1"]
    assert fmt_monos(res.staircase, DRL3) == ["1", "z"]
    assert res.queries == 308


def test_zero_table_gives_unit_ideal():
    oracle = table_oracle(QQ, (3, 3), ["0"] * 9)
    res = run_sfglm(oracle, downset("y^1", DRL2), DRL2)
    assert fmt_polys(res) == ["1"]
    assert res.staircase == []


# -- adaptive (tweaked) variant --------------------------------------------------


def test_tweaked_step_rejects_failing_candidate():
    res = run_sfglm_tweaked(make_generator("step", QQ), downset("y^2", DRL2), DRL2)
    assert fmt_polys(res) == ["y^2 - 2*y + 1", "x*y - x - y + 1"]
    assert fmt_monos(res.staircase, DRL2) == ["1", "y", "x"]
    assert len(res.rejected) == 1
    rej = res.rejected[0]
    assert format_monomial(rej.candidate, DRL2) == "x^2"
    assert format_monomial(rej.row, DRL2) == "y^2"
    assert str(rej.residual) == "1"
    assert res.algorithm == "sfglm-tweaked"


def test_tweaked_binomial_reaches_pure_powers():
    # The degree-3 table alone cannot contain y^4 or x^4; the shifted
    # staircase candidates reach them without growing the table.
    res = run_sfglm_tweaked(make_generator("binomial", QQ), downset("x^3", DRL2), DRL2)
    assert fmt_polys(res) == [
        "x*y - y - 1",
        "y^4",
        "x^4 - 4*x^3 + 6*x^2 - 4*x + 1",
    ]
    assert res.rejected == []
    assert res.queries == 36


# -- rank profiles ---------------------------------------------------------------


def test_useful_staircase_single_spike():
    rank, profile = useful_staircase(make_generator("kron", QQ), downset("x^2", DRL2), DRL2)
    assert rank == 4
    assert fmt_monos(profile, DRL2) == ["1", "y", "x", "x*y"]

    # a table missing x^2 sees a non-stable profile: 1 is a dependent column
    T = [parse_monomial(s, DRL2) for s in ["1", "y", "x", "y^2"]]
    rank2, profile2 = useful_staircase(make_generator("kron", QQ), T, DRL2)
    assert rank2 == 2
    assert fmt_monos(profile2, DRL2) == ["y", "x"]


# -- input validation ------------------------------------------------------------


def test_table_must_be_stable_and_nonempty():
    oracle = make_generator("binomial", QQ)
    T = [parse_monomial(s, DRL2) for s in ["1", "x^2"]]
    try:
        run_sfglm(oracle, T, DRL2)
        assert False, "expected SeqrelError"
    except SeqrelError:
        pass
    try:
        run_sfglm(oracle, [], DRL2)
        assert False, "expected SeqrelError"
    except SeqrelError:
        pass
    # unsorted input is fine: the table is sorted internally
    shuffled = list(reversed(downset("x^2", DRL2)))
    res = run_sfglm(make_generator("pow23", QQ), shuffled, DRL2)
    assert fmt_polys(res) == ["y - 3", "x^2 - 4*x + 4"]


# -- serialization ---------------------------------------------------------------


def test_json_round_trip():
    res = run_sfglm_tweaked(make_generator("step", QQ), downset("y^2", DRL2), DRL2)
    data = sfglm_result_to_json(res)
    assert data["certified_shift_set"] == ["1", "y", "x", "y^2"]
    assert data["rejected"] == [{"candidate": "x^2", "row": "y^2", "residual": "1"}]
    text = json.dumps(data, sort_keys=True)
    back = sfglm_result_from_json(json.loads(text))
    assert json.dumps(sfglm_result_to_json(back), sort_keys=True) == text


# -- recovery property -----------------------------------------------------------


@settings(deadline=None, max_examples=15)
@given(
    a=st.integers(min_value=1, max_value=3),
    b=st.integers(min_value=1, max_value=4),
    seed=st.integers(min_value=0, max_value=10**6),
)
def test_recovers_random_rectangle_ideals(a, b, seed):
    fld = FpField(65537)
    lms = [parse_monomial(f"y^{a}", DRL2), parse_monomial(f"x^{b}", DRL2)]
    oracle, gb = random_from_lms(lms, DRL2, fld, seed)
    d_stair = (a - 1) + (b - 1)
    dmax = max(d_stair, a, b)
    T = downset(f"x^{dmax}", DRL2)
    res = run_sfglm(oracle, T, DRL2)
    assert sorted(fmt_polys(res)) == sorted(format_poly(g, DRL2) for g in gb)
    from math import comb

    assert res.queries == comb(2 + 2 * dmax, 2)

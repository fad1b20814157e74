"""Sequence oracles: built-in generators, finite tables, ideal-driven
sequences, bracket evaluation, and distinct-query counting.

An oracle memoizes values and counts *distinct* indices fetched by callers;
provider-internal work runs with operation counting paused, so only the
algorithms' own field arithmetic is ever tallied.
"""

from __future__ import annotations

import math
import random
import threading
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .errors import BoundExceededError, ParseError, PositiveDimensionError, SeqrelError
from .field import Field, FieldElement, QQ, counting_paused
from .monomials import (
    Monomial,
    MonomialOrder,
    border,
    degree,
    divides,
    iter_up_to,
    mul as mono_mul,
    quotient,
)
from .poly import Poly, staircase_of

Index = tuple[int, ...]


class SequenceOracle:
    """Memoized u_i provider with a distinct-index query counter."""

    def __init__(
        self,
        n: int,
        field: Field,
        provider: Callable[[Index], FieldElement],
        name: str = "custom",
    ):
        self.n = n
        self.field = field
        self.name = name
        self._provider = provider
        self._values: dict[Index, FieldElement] = {}
        self._queried: set[Index] = set()
        self._lock = threading.Lock()

    @property
    def queries(self) -> int:
        return len(self._queried)

    def query(self, index: Iterable[int]) -> FieldElement:
        i = tuple(int(v) for v in index)
        if len(i) != self.n or any(v < 0 for v in i):
            raise ValueError(f"bad index {i} for a {self.n}-dimensional sequence")
        with self._lock:
            self._queried.add(i)
            value = self._values.get(i)
            if value is None:
                with counting_paused():
                    value = self._provider(i)
                self._values[i] = value
            return value


def query(oracle: SequenceOracle, index: Iterable[int]) -> FieldElement:
    return oracle.query(index)


def bracket(oracle: SequenceOracle, f: Poly, shift: Monomial | None = None) -> FieldElement:
    """[shift·f] = Σ_k α_k · u_{k + shift}."""
    acc: FieldElement | None = None
    for m, c in f.terms.items():
        idx = mono_mul(m, shift) if shift is not None else m
        term = c * oracle.query(idx)
        acc = term if acc is None else acc + term
    return acc if acc is not None else f.field.zero


# ---------------------------------------------------------------------------
# built-in generators


def _fib(n: int) -> int:
    def doubling(k: int) -> tuple[int, int]:
        if k == 0:
            return 0, 1
        a, b = doubling(k >> 1)
        c = a * (2 * b - a)
        d = a * a + b * b
        return (d, c + d) if k & 1 else (c, d)

    return doubling(n)[0]


_GENERATORS: dict[str, tuple[int, Callable[[Index], int]]] = {
    "binomial": (2, lambda i: math.comb(i[0], i[1])),
    "pow23": (2, lambda i: 2 ** i[0] * 3 ** i[1] * (i[0] + 1)),
    "sq": (2, lambda i: i[0] ** 2 + i[1] ** 2 - 1),
    "step": (2, lambda i: i[0] ** 2 + i[1] + (1 if 3 * i[0] + 2 * i[1] > 9 else 0)),
    "fib4": (3, lambda i: _fib(4 * i[0] + i[2])),
    "kron": (2, lambda i: 1 if i == (1, 1) else 0),
}

GENERATOR_NAMES = tuple(sorted(_GENERATORS))


def make_generator(name: str, field: Field) -> SequenceOracle:
    if name not in _GENERATORS:
        raise ParseError(
            f"unknown generator {name!r} (choose from {', '.join(GENERATOR_NAMES)})"
        )
    n, fn = _GENERATORS[name]
    return SequenceOracle(n, field, lambda i: field.elem(fn(i)), name=name)


# ---------------------------------------------------------------------------
# finite tables


def table_oracle(
    field: Field, shape: tuple[int, ...], entries: list, name: str = "table"
) -> SequenceOracle:
    dims = tuple(int(s) for s in shape)
    size = math.prod(dims)
    if len(entries) != size:
        raise ParseError(f"table needs {size} entries for shape {dims}, got {len(entries)}")
    values = [field.elem(e) for e in entries]

    def provider(i: Index) -> FieldElement:
        if any(v >= s for v, s in zip(i, dims, strict=True)):
            raise BoundExceededError(i, dims)
        flat = 0
        for v, s in zip(i, dims, strict=True):
            flat = flat * s + v
        return values[flat]

    return SequenceOracle(len(dims), field, provider, name=name)


def table_from_json(data: dict, field: Field | None = None) -> SequenceOracle:
    from .field import parse_field

    try:
        fld = field if field is not None else parse_field(data["field"])
        return table_oracle(fld, tuple(data["shape"]), list(data["entries"]))
    except KeyError as exc:
        raise ParseError(f"table JSON missing key {exc}") from exc


def table_to_json(oracle: SequenceOracle, shape: tuple[int, ...]) -> dict:
    idx = [0] * len(shape)
    entries: list[str] = []

    def walk(d: int) -> None:
        if d == len(shape):
            entries.append(str(oracle.query(tuple(idx))))
            return
        for v in range(shape[d]):
            idx[d] = v
            walk(d + 1)

    walk(0)
    return {
        "dim": len(shape),
        "field": str(oracle.field),
        "shape": list(shape),
        "entries": entries,
    }


# ---------------------------------------------------------------------------
# sequences defined by an ideal plus initial conditions


@dataclass
class IdealSequenceSpec:
    gb: list[Poly]
    ord: MonomialOrder
    initial: dict[Monomial, FieldElement]


def from_ideal(spec: IdealSequenceSpec) -> SequenceOracle:
    ord = spec.ord
    field = spec.gb[0].field if spec.gb else QQ
    try:
        staircase = staircase_of(spec.gb, ord)
    except ValueError as exc:
        raise PositiveDimensionError(str(exc)) from exc
    if set(spec.initial) != set(staircase):
        raise SeqrelError(
            f"initial values must cover exactly the staircase "
            f"({len(staircase)} monomials), got {len(spec.initial)}"
        )
    # monic rewrite rules LM -> -tail, divisor chosen by ascending LM
    rules: list[tuple[Monomial, list[tuple[Monomial, FieldElement]]]] = []
    with counting_paused():
        for g in sorted(spec.gb, key=lambda g: ord.key(g.lm(ord))):
            gm = g.monic(ord)
            lm = gm.lm(ord)
            tail = [(m, -c) for m, c in gm.terms.items() if m != lm]
            rules.append((lm, tail))
    stair_set = set(staircase)
    values: dict[Index, FieldElement] = {}

    def provider(i: Index) -> FieldElement:
        # iterative rewrite: resolve dependencies with an explicit stack
        # (each dependency is strictly ≺, so this terminates)
        stack = [i]
        while stack:
            cur = stack[-1]
            if cur in values:
                stack.pop()
                continue
            if cur in stair_set:
                values[cur] = spec.initial[cur]
                stack.pop()
                continue
            lm, tail = next(r for r in rules if divides(r[0], cur))
            q = quotient(cur, lm)
            deps = [mono_mul(m, q) for m, _ in tail]
            missing = [d for d in deps if d not in values]
            if missing:
                stack.extend(missing)
                continue
            acc = field.zero
            for (_, c), d in zip(tail, deps, strict=True):
                acc = acc + c * values[d]
            values[cur] = acc
            stack.pop()
        return values[i]

    return SequenceOracle(ord.n, field, provider, name="ideal")


# ---------------------------------------------------------------------------
# random sequences with a prescribed leading-monomial set


def _rand_elem(field: Field, rng: random.Random, nonzero: bool = False) -> FieldElement:
    from .field import FpField

    if isinstance(field, FpField):
        lo = 1 if nonzero else 0
        return field.elem(rng.randrange(lo, field.p))
    v = rng.randint(-50, 50)
    while nonzero and v == 0:
        v = rng.randint(-50, 50)
    return field.elem(v)


def _point_eval_oracle(
    field: Field,
    points: list[tuple],
    weights: list[FieldElement],
    n: int,
) -> SequenceOracle:
    from .field import FpField

    p = field.p if isinstance(field, FpField) else None

    def power(base, e: int):
        if e == 0:
            return field.one.value if p is None else 1
        if p is not None:
            return pow(base, e, p)
        return base**e

    def provider(i: Index) -> FieldElement:
        total = field.zero
        for pt, w in zip(points, weights, strict=True):
            v = 1 if p is not None else field.one.value
            ok = True
            for base, e in zip(pt, i, strict=True):
                if base == 0 and e > 0:
                    ok = False
                    break
                v = v * power(base, e) if e else v
            if not ok:
                continue
            total = total + w * field.elem(v)
        return total

    return SequenceOracle(n, field, provider, name="points")


def _gb_from_profile(
    oracle: SequenceOracle, S: list[Monomial], ord: MonomialOrder
) -> list[Poly] | None:
    """Solve border relations over a staircase S; None if H_{S,S} is singular.

    One elimination of [H_{S,S} | H_{S,border}] yields every border relation:
    at full rank the reduced RHS block is H^{-1}·H_{S,t}, so the monic relation
    is t − Σ X[i][t]·s_i.
    """
    from .field import FpField
    from .hankel import _NP_PRIME_CAP, _fp_rref_np, _rref

    with counting_paused():
        field = oracle.field
        S_sorted = ord.sort(S)
        B = border(S_sorted, ord)
        k = len(S_sorted)
        if k == 0:
            return [Poly.monomial(field, t) for t in B]
        cols = S_sorted + B
        if isinstance(field, FpField) and field.p < _NP_PRIME_CAP:
            A = np.array(
                [[oracle.query(mono_mul(r, c)).value for c in cols] for r in S_sorted],
                dtype=np.int64,
            )
            R, pivots = _fp_rref_np(A, field.p)
            if pivots != list(range(k)):
                return None
            sol = [[field.elem(int(R[i, k + j])) for j in range(len(B))] for i in range(k)]
        else:
            entries = [[oracle.query(mono_mul(r, c)) for c in cols] for r in S_sorted]
            R, pivots = _rref(entries, field)
            if pivots != list(range(k)):
                return None
            sol = [R[i][k:] for i in range(k)]
        gb = []
        for j, t in enumerate(B):
            terms = {t: field.one}
            for i, s in enumerate(S_sorted):
                x = sol[i][j]
                if x:
                    terms[s] = -x
            gb.append(Poly(field, terms))
        return gb


def random_from_lms(
    lms: list[Monomial],
    ord: MonomialOrder,
    field: Field,
    seed: int,
    _attempts: int = 32,
) -> tuple[SequenceOracle, list[Poly]]:
    """A random sequence whose relation ideal has exactly these LMs.

    Returns a fresh oracle (empty memo and counter) plus the reduced basis.
    Degenerate draws (rank-deficient H over the intended staircase) reseed
    deterministically.
    """
    lm_set = sorted(set(lms), key=ord.key)
    staircase = staircase_of([Poly.monomial(field, m) for m in lm_set], ord)
    if not staircase and ord.one not in lm_set:
        raise SeqrelError("leading monomials do not close a staircase")
    for attempt in range(_attempts):
        rng = random.Random(seed * 1_000_003 + attempt)
        oracle, gb = _random_instance(lm_set, staircase, ord, field, rng)
        if oracle is None:
            continue
        check = _gb_from_profile(oracle, staircase, ord)
        if check is None:
            continue
        if gb is None:
            gb = check
        if sorted(g.lm(ord) for g in gb) != sorted(lm_set):
            continue
        fresh = _clone_oracle(oracle)
        return fresh, gb
    raise SeqrelError(
        f"could not build a non-degenerate sequence for LMs {lm_set} in {_attempts} draws"
    )


def _clone_oracle(oracle: SequenceOracle) -> SequenceOracle:
    return SequenceOracle(oracle.n, oracle.field, oracle._provider, name=oracle.name)


def _random_instance(
    lm_set: list[Monomial],
    staircase: list[Monomial],
    ord: MonomialOrder,
    field: Field,
    rng: random.Random,
) -> tuple[SequenceOracle | None, list[Poly] | None]:
    n = ord.n
    degs = {degree(m) for m in lm_set}
    is_pure_powers = all(sum(m) == max(m) for m in lm_set) and len(lm_set) == n and all(
        any(m[i] > 0 for m in lm_set) for i in range(n)
    )
    is_simplex = len(degs) == 1 and len(lm_set) == math.comb(n + min(degs) - 1, n - 1)

    if is_pure_powers:
        # pairwise-coprime pure powers: random staircase-supported tails give a
        # basis outright (coprime leading monomials), plus random initials
        gb = []
        with counting_paused():
            for m in lm_set:
                terms = {m: field.one}
                for s in staircase:
                    if ord.lt(s, m) and rng.random() < 0.6:
                        c = _rand_elem(field, rng)
                        if c:
                            terms[s] = c
                gb.append(Poly(field, terms))
        initial = {s: _rand_elem(field, rng) for s in staircase}
        oracle = from_ideal(IdealSequenceSpec(gb, ord, initial))
        return oracle, gb

    if is_simplex or _is_lshape(lm_set, ord):
        points = _family_points(lm_set, staircase, ord, field, rng, is_simplex)
        if points is None:
            return None, None
        weights = [_rand_elem(field, rng, nonzero=True) for _ in points]
        return _point_eval_oracle(field, points, weights, n), None

    # general fallback: random tails, then verify the relations actually hold
    gb = []
    with counting_paused():
        for m in lm_set:
            terms = {m: field.one}
            for s in staircase:
                if ord.lt(s, m) and rng.random() < 0.6:
                    c = _rand_elem(field, rng)
                    if c:
                        terms[s] = c
            gb.append(Poly(field, terms))
        initial = {s: _rand_elem(field, rng) for s in staircase}
        oracle = from_ideal(IdealSequenceSpec(gb, ord, initial))
        bound = 6
        for g in gb:
            for m in iter_up_to((bound,) + (0,) * (n - 1), ord):
                if bracket(oracle, g, m):
                    return None, None
    return oracle, gb


def _is_lshape(lm_set: list[Monomial], ord: MonomialOrder) -> bool:
    n = ord.n
    d = max(degree(m) for m in lm_set)
    pures = [m for m in lm_set if sum(m) == max(m) and degree(m) == d]
    mixed = [m for m in lm_set if m not in pures]
    want_mixed = {
        tuple(1 if k in (i, j) else 0 for k in range(n))
        for i in range(n)
        for j in range(i + 1, n)
    }
    return len(pures) == n and set(mixed) == want_mixed and d >= 2


def _family_points(
    lm_set: list[Monomial],
    staircase: list[Monomial],
    ord: MonomialOrder,
    field: Field,
    rng: random.Random,
    is_simplex: bool,
) -> list[tuple] | None:
    """Point supports whose vanishing ideal generically has these LMs."""
    from .field import FpField

    n = ord.n
    r = len(staircase)
    if isinstance(field, FpField):
        if field.p <= r + 1:
            return None
        draw = lambda: rng.randrange(1, field.p)
        zero = 0
    else:
        draw = lambda: rng.choice([v for v in range(-3 * r - 2, 3 * r + 3) if v])
        zero = 0
    if is_simplex:
        pts: set[tuple] = set()
        guard = 0
        while len(pts) < r and guard < 50 * r:
            pts.add(tuple(draw() for _ in range(n)))
            guard += 1
        if len(pts) != r:
            return None
        return sorted(pts)
    # L-shape: the origin plus d-1 distinct nonzero abscissae per axis
    d = max(degree(m) for m in lm_set)
    points: list[tuple] = [tuple(zero for _ in range(n))]
    for axis in range(n):
        coords: set = set()
        guard = 0
        while len(coords) < d - 1 and guard < 50 * d:
            coords.add(draw())
            guard += 1
        if len(coords) != d - 1:
            return None
        for c in sorted(coords):
            points.append(tuple(c if k == axis else zero for k in range(n)))
    return points

"""Exact coefficient arithmetic (prime fields and Q) with operation counting.

Field elements are immutable; every arithmetic dunder reports to the active
`OpCounter` stack, so algorithm-level operation counts fall out of ordinary
expressions.  Bulk (vectorized) kernels report through `count_mults` and
friends instead.
"""

from __future__ import annotations

import threading
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

from .errors import FieldMismatchError, ParseError


@dataclass
class OpCounter:
    """Field-operation tally; multiplications + inversions = "basic" count."""

    additions: int = 0
    multiplications: int = 0
    inversions: int = 0

    @property
    def basic(self) -> int:
        return self.multiplications + self.inversions

    def snapshot(self) -> OpCounter:
        return OpCounter(self.additions, self.multiplications, self.inversions)

    def __sub__(self, other: OpCounter) -> OpCounter:
        return OpCounter(
            self.additions - other.additions,
            self.multiplications - other.multiplications,
            self.inversions - other.inversions,
        )

    def as_dict(self) -> dict[str, int]:
        return {
            "additions": self.additions,
            "multiplications": self.multiplications,
            "inversions": self.inversions,
        }


_active = threading.local()


def _counters() -> list[OpCounter]:
    stack = getattr(_active, "stack", None)
    if stack is None:
        stack = []
        _active.stack = stack
    return stack


@contextmanager
def counting(ops: OpCounter) -> Iterator[OpCounter]:
    """Route this thread's field operations into `ops` (stackable)."""
    _counters().append(ops)
    try:
        yield ops
    finally:
        _counters().pop()


@contextmanager
def counting_paused() -> Iterator[None]:
    """Suspend all active counters (table setup and verification are free)."""
    stack = _counters()
    saved = stack[:]
    del stack[:]
    try:
        yield
    finally:
        stack[:] = saved


def count_adds(n: int = 1) -> None:
    for ops in _counters():
        ops.additions += n


def count_mults(n: int = 1) -> None:
    for ops in _counters():
        ops.multiplications += n


def count_invs(n: int = 1) -> None:
    for ops in _counters():
        ops.inversions += n


# Deterministic Miller-Rabin: this base set decides primality for n < 3.3e24,
# far beyond the 2^62 cap enforced below.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for b in _MR_BASES:
        if n == b:
            return True
        if n % b == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class FieldElement:
    """Immutable scalar tied to its field; dunders count operations."""

    __slots__ = ("field", "value")

    def __init__(self, field: Field, value):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, val):  # pragma: no cover - immutability guard
        raise AttributeError("FieldElement is immutable")

    def _check(self, other: FieldElement) -> None:
        if other.field is not self.field and other.field != self.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")

    def __add__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        self._check(other)
        count_adds()
        return FieldElement(self.field, self.field._add(self.value, other.value))

    def __sub__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        self._check(other)
        count_adds()
        return FieldElement(self.field, self.field._sub(self.value, other.value))

    def __neg__(self):
        count_adds()
        return FieldElement(self.field, self.field._neg(self.value))

    def __mul__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        self._check(other)
        count_mults()
        return FieldElement(self.field, self.field._mul(self.value, other.value))

    def __truediv__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        self._check(other)
        if not other:
            raise ZeroDivisionError("division by the zero field element")
        count_invs()
        count_mults()
        return FieldElement(
            self.field, self.field._mul(self.value, self.field._inv(other.value))
        )

    def inverse(self) -> FieldElement:
        if not self:
            raise ZeroDivisionError("inverse of the zero field element")
        count_invs()
        return FieldElement(self.field, self.field._inv(self.value))

    def __bool__(self) -> bool:
        return self.value != self.field._raw_zero

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field == other.field and self.value == other.value

    def __hash__(self) -> int:
        return hash((self.field, self.value))

    def __str__(self) -> str:
        return self.field._to_str(self.value)

    def __repr__(self) -> str:
        return self.field._to_str(self.value)


class Field:
    """Backend interface: raw (uncounted) value arithmetic + parsing."""

    _raw_zero = 0

    def elem(self, value) -> FieldElement:
        raise NotImplementedError

    @property
    def zero(self) -> FieldElement:
        return self._zero

    @property
    def one(self) -> FieldElement:
        return self._one

    # raw ops, implemented per backend
    def _add(self, a, b):
        raise NotImplementedError

    def _sub(self, a, b):
        raise NotImplementedError

    def _neg(self, a):
        raise NotImplementedError

    def _mul(self, a, b):
        raise NotImplementedError

    def _inv(self, a):
        raise NotImplementedError

    def _to_str(self, a) -> str:
        return str(a)


class FpField(Field):
    """Prime field F_p, canonical representatives in [0, p)."""

    def __init__(self, p: int):
        if not isinstance(p, int) or p >= 1 << 62:
            raise ParseError(f"prime must be an integer < 2^62, got {p!r}")
        if not is_prime(p):
            raise ParseError(f"{p} is not prime")
        self.p = p
        self._zero = FieldElement(self, 0)
        self._one = FieldElement(self, 1 % p)

    def elem(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatchError(f"{value.field} element given to {self}")
            return value
        if isinstance(value, bool):
            raise TypeError("bool is not a field scalar")
        if isinstance(value, int):
            return FieldElement(self, value % self.p)
        if isinstance(value, Fraction):
            return FieldElement(
                self, value.numerator % self.p * pow(value.denominator, -1, self.p) % self.p
            )
        if isinstance(value, str):
            try:
                return self.elem(Fraction(value.strip()))
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(f"cannot parse {value!r} as an F_{self.p} element") from exc
        raise TypeError(f"cannot coerce {type(value).__name__} into F_{self.p}")

    def _add(self, a, b):
        return (a + b) % self.p

    def _sub(self, a, b):
        return (a - b) % self.p

    def _neg(self, a):
        return -a % self.p

    def _mul(self, a, b):
        return a * b % self.p

    def _inv(self, a):
        return pow(a, -1, self.p)

    def __eq__(self, other) -> bool:
        return isinstance(other, FpField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("Fp", self.p))

    def __str__(self) -> str:
        return f"Fp:{self.p}"

    __repr__ = __str__


class QField(Field):
    """The rationals, on top of Fraction (lowest terms, positive denominator)."""

    _raw_zero = Fraction(0)

    def __init__(self):
        self._zero = FieldElement(self, Fraction(0))
        self._one = FieldElement(self, Fraction(1))

    def elem(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatchError(f"{value.field} element given to Q")
            return value
        if isinstance(value, bool):
            raise TypeError("bool is not a field scalar")
        if isinstance(value, (int, Fraction)):
            return FieldElement(self, Fraction(value))
        if isinstance(value, str):
            try:
                return FieldElement(self, Fraction(value.strip()))
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(f"cannot parse {value!r} as a rational") from exc
        raise TypeError(f"cannot coerce {type(value).__name__} into Q")

    def _add(self, a, b):
        return a + b

    def _sub(self, a, b):
        return a - b

    def _neg(self, a):
        return -a

    def _mul(self, a, b):
        return a * b

    def _inv(self, a):
        return 1 / a

    def __eq__(self, other) -> bool:
        return isinstance(other, QField)

    def __hash__(self) -> int:
        return hash("Q")

    def __str__(self) -> str:
        return "Q"

    __repr__ = __str__


QQ = QField()

Scalar = Union[int, str, Fraction, FieldElement]


def parse_field(spec: str) -> Field:
    """Parse a field spec string: "Q" or "Fp:<prime>" (e.g. "Fp:65537")."""
    text = spec.strip()
    if text == "Q":
        return QQ
    if text.startswith("Fp:"):
        try:
            p = int(text[3:])
        except ValueError as exc:
            raise ParseError(f"bad field spec {spec!r}") from exc
        return FpField(p)
    raise ParseError(f"bad field spec {spec!r} (expected 'Q' or 'Fp:<prime>')")


# spec-surface free functions
def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def neg(a: FieldElement) -> FieldElement:
    return -a


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()

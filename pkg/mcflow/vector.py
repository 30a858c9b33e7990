from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .errors import DimensionError
from .util import as_rational, rational_str


def _raw(entries) -> "CommodityVector":
    # entries are already Fractions
    return tuple.__new__(CommodityVector, tuple(entries))


class CommodityVector(tuple):
    """An exact vector of k commodity amounts.

    A tuple of Fractions, so it hashes and compares like a tuple; ``+``,
    ``-`` and scalar ``*`` are elementwise vector arithmetic, not tuple
    concatenation.
    """
    __slots__ = ()

    def __new__(cls, entries: Iterable = ()):
        return super().__new__(cls, tuple(as_rational(x) for x in entries))

    @classmethod
    def zero(cls, k: int) -> "CommodityVector":
        return cls((0,) * k)

    @property
    def k(self) -> int:
        return len(self)

    def _check(self, other) -> None:
        if len(other) != len(self):
            raise DimensionError(f"dimension mismatch: {len(self)} vs {len(other)}")

    def __add__(self, other):
        self._check(other)
        return _raw(a + b for a, b in zip(self, other))

    def __radd__(self, other):
        # sum() starts from int 0
        if other == 0:
            return self
        return CommodityVector(other).__add__(self)

    def __sub__(self, other):
        self._check(other)
        return _raw(a - b for a, b in zip(self, other))

    def __neg__(self):
        return _raw(-a for a in self)

    def __mul__(self, scalar):
        if isinstance(scalar, tuple):
            return NotImplemented
        s = as_rational(scalar)
        return _raw(s * a for a in self)

    __rmul__ = __mul__

    def dot(self, other) -> Fraction:
        self._check(other)
        return sum((a * b for a, b in zip(self, other)), Fraction(0))

    def le(self, other) -> bool:
        """Elementwise self <= other."""
        self._check(other)
        return all(a <= b for a, b in zip(self, other))

    def is_nonnegative(self) -> bool:
        return all(a >= 0 for a in self)

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self)

    def is_zero(self) -> bool:
        return all(a == 0 for a in self)

    def __repr__(self):
        return "(" + ", ".join(rational_str(a) for a in self) + ")"

    __str__ = __repr__


def vec(*entries) -> CommodityVector:
    """Shorthand: vec(1, 2) or vec([1, 2])."""
    if len(entries) == 1 and isinstance(entries[0], (list, tuple)):
        return CommodityVector(entries[0])
    return CommodityVector(entries)


def vsum(vectors: Iterable[CommodityVector], k: int) -> CommodityVector:
    total = CommodityVector.zero(k)
    for v in vectors:
        total = total + v
    return total

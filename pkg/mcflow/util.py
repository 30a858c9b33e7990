from __future__ import annotations

import re
import time
from fractions import Fraction

_RATIONAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")
_DIGITS = re.compile(r"(\d+)")


def now_s() -> float:
    """Monotonic clock in seconds."""
    return time.monotonic()


def as_rational(value) -> Fraction:
    """Coerce an int, Fraction or "p/q" string to an exact Fraction.

    Floats are refused: every quantity in a network is exact.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rational numbers")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"expected an int, Fraction or 'p/q' string, got {type(value).__name__}")


def parse_rational(text: str) -> Fraction:
    m = _RATIONAL.match(text)
    if not m:
        raise ValueError(f"not a rational literal: {text!r}")
    num, den = m.group(1), m.group(2)
    if den is not None and int(den) == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def format_rational(q: Fraction):
    """JSON-friendly form: int when integral, else a "p/q" string."""
    q = Fraction(q)
    if q.denominator == 1:
        return q.numerator
    return f"{q.numerator}/{q.denominator}"


def rational_str(q: Fraction) -> str:
    return str(format_rational(q))


def parse_vector_arg(text: str) -> tuple[Fraction, ...]:
    """Parse a CLI vector such as "2/1,1/1" or "1,2"."""
    parts = [p for p in text.split(",") if p.strip()]
    if not parts:
        raise ValueError(f"empty vector: {text!r}")
    return tuple(parse_rational(p) for p in parts)


def parse_int_list(text: str) -> list[int]:
    return [int(p) for p in text.split(",") if p.strip()]


def natural_key(token: str):
    """Sort key that orders "a2" before "a10"."""
    return [int(p) if p.isdigit() else p for p in _DIGITS.split(str(token))]

"""Rendering and parsing of exact rationals and root keys for JSON."""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Sequence, Tuple


def fmt(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse(s) -> Fraction:
    if isinstance(s, bool):
        raise ValueError("boolean is not a rational")
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    if isinstance(s, str):
        return Fraction(s.strip())
    raise ValueError(f"expected a 'p/q' string, got {s!r}")


def root_key(r: Sequence[int]) -> str:
    return "[" + ",".join(str(int(c)) for c in r) + "]"


def parse_root_key(s: str) -> Tuple[int, ...]:
    v = json.loads(s)
    if not isinstance(v, list) or not all(isinstance(c, int) for c in v):
        raise ValueError(f"bad root key {s!r}")
    return tuple(v)

"""Unipotent elements of N in exponential coordinates, and conjugation by words.

An element u = exp(sum_lam y_lam e_lam) is stored as the finite map lam -> y_lam.
Conjugation by exp(Z) is computed as exp(e^{ad Z} log u), never through BCH.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

from .exact import fmt, parse, parse_root_key, root_key
from .liealg import ChevalleyBasis, LieElement, RootVector, positive_norm_sq
from .rootsys import Root, RootSystemKind, height

Coords = Dict[Root, Fraction]


def _clean(d: Mapping[Root, Fraction]) -> Coords:
    return {tuple(r): Fraction(c) for r, c in d.items() if c}


@dataclass(frozen=True, eq=True)
class UnipotentCoords:
    coords: Mapping[Root, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "coords", _clean(self.coords))

    def __getitem__(self, r: Root) -> Fraction:
        return self.coords.get(tuple(r), Fraction(0))

    def support(self) -> List[Root]:
        return sorted(self.coords)

    def as_lie(self) -> LieElement:
        return LieElement({RootVector(r, 1): c for r, c in self.coords.items()})

    def to_json(self, kind: RootSystemKind) -> dict:
        return {"kind": kind.to_json(),
                "coords": {root_key(r): fmt(c) for r, c in sorted(self.coords.items())}}

    @staticmethod
    def from_json(doc: dict) -> Tuple[RootSystemKind, "UnipotentCoords"]:
        kind = RootSystemKind.from_json(doc["kind"])
        coords = {parse_root_key(k): parse(v) for k, v in doc["coords"].items()}
        return kind, UnipotentCoords(coords)


@dataclass(frozen=True)
class NilFactor:
    """exp(X) with X = sum_mu x_mu e_mu in the positive nilpotent part."""
    coords: Mapping[Root, Fraction]

    def __post_init__(self):
        object.__setattr__(self, "coords", _clean(self.coords))

    def inverse(self) -> "NilFactor":
        return NilFactor({r: -c for r, c in self.coords.items()})

    def length_sq(self, cb: ChevalleyBasis) -> Fraction:
        return positive_norm_sq(cb, self.coords)

    def length(self, cb: ChevalleyBasis) -> float:
        return math.sqrt(self.length_sq(cb))

    def as_lie(self) -> LieElement:
        return LieElement({RootVector(r, 1): c for r, c in self.coords.items()})

    def to_json(self) -> dict:
        return {"nil": {root_key(r): fmt(c) for r, c in sorted(self.coords.items())}}


@dataclass(frozen=True)
class CartanFactor:
    """exp(H0) acting on e_lam by prod_i C_i^{c_i}, where lam_i(H0) = ln C_i.

    The ratios are exact; only the length goes through logarithms.
    """
    ratios: Tuple[Fraction, ...]

    def __post_init__(self):
        rs = tuple(Fraction(c) for c in self.ratios)
        if any(c <= 0 for c in rs):
            raise ValueError("Cartan ratios must be positive")
        object.__setattr__(self, "ratios", rs)

    def scale(self, r: Root) -> Fraction:
        out = Fraction(1)
        for c, k in zip(self.ratios, r):
            if k:
                out *= c ** k
        return out

    def inverse(self) -> "CartanFactor":
        return CartanFactor(tuple(1 / c for c in self.ratios))

    def h_coords(self) -> Tuple[float, ...]:
        return tuple(math.log(c) for c in self.ratios)

    def length_sq(self, cb: ChevalleyBasis) -> float:
        x = self.h_coords()
        return 2.0 * sum(sum(k * v for k, v in zip(r, x)) ** 2 for r in cb.rs.positives)

    def length(self, cb: ChevalleyBasis) -> float:
        return math.sqrt(self.length_sq(cb))

    def to_json(self) -> dict:
        return {"cartan": [fmt(c) for c in self.ratios]}


Factor = Union[NilFactor, CartanFactor]


def factor_from_json(doc: dict) -> Factor:
    if "nil" in doc:
        return NilFactor({parse_root_key(k): parse(v) for k, v in doc["nil"].items()})
    if "cartan" in doc:
        return CartanFactor(tuple(parse(c) for c in doc["cartan"]))
    raise ValueError(f"unknown factor tag in {sorted(doc)}")


@dataclass(frozen=True)
class ConjugatorWord:
    """A product of factors, stored in application order (factors[0] acts first).

    As a group element the word is factors[-1] * ... * factors[0].
    """
    factors: Tuple[Factor, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))

    def __mul__(self, other: "ConjugatorWord") -> "ConjugatorWord":
        # (self * other) acts by other first
        return ConjugatorWord(other.factors + self.factors)

    def inverse(self) -> "ConjugatorWord":
        return ConjugatorWord(tuple(f.inverse() for f in reversed(self.factors)))

    def ledger(self, cb: ChevalleyBasis) -> List[float]:
        """Per-factor lengths."""
        return [f.length(cb) for f in self.factors]

    def length(self, cb: ChevalleyBasis) -> float:
        return sum(self.ledger(cb))

    def __len__(self):
        return len(self.factors)

    def to_json(self) -> list:
        return [f.to_json() for f in self.factors]

    @staticmethod
    def from_json(doc: list) -> "ConjugatorWord":
        return ConjugatorWord(tuple(factor_from_json(f) for f in doc))


def ad_pos(cb: ChevalleyBasis, z: Mapping[Root, Fraction], y: Mapping[Root, Fraction]) -> Coords:
    """[Z, Y] for Z, Y in the positive part, via the positive action table."""
    out: Coords = {}
    act = cb.pos_action
    for mu, a in z.items():
        for lam, b in y.items():
            hit = act.get((mu, lam))
            if hit is not None:
                s, n = hit
                out[s] = out.get(s, 0) + a * b * n
    return out


def _conj_nil(cb: ChevalleyBasis, y: Coords, z: Mapping[Root, Fraction]) -> Coords:
    if not z:
        return y
    out = dict(y)
    term, r = y, 1
    while True:
        term = ad_pos(cb, z, term)
        term = {k: v / r for k, v in term.items() if v}
        if not term:
            break
        for k, v in term.items():
            out[k] = out.get(k, 0) + v
        r += 1
    return {k: v for k, v in out.items() if v}


def _conj_cartan(y: Coords, f: CartanFactor) -> Coords:
    return {r: c * f.scale(r) for r, c in y.items()}


def conj_factor(cb: ChevalleyBasis, u: UnipotentCoords, f: Factor) -> UnipotentCoords:
    if isinstance(f, NilFactor):
        return UnipotentCoords(_conj_nil(cb, dict(u.coords), f.coords))
    return UnipotentCoords(_conj_cartan(dict(u.coords), f))


def conj_root_exp(cb: ChevalleyBasis, u: UnipotentCoords, mu: Root, z) -> UnipotentCoords:
    """Coordinates of exp(z e_mu) u exp(-z e_mu)."""
    return conj_factor(cb, u, NilFactor({tuple(mu): Fraction(z)}))


def conj_commutator(cb: ChevalleyBasis, u: UnipotentCoords, mu1: Root, z1, mu2: Root, z2) -> UnipotentCoords:
    """Conjugate by [exp(z1 e_mu1), exp(z2 e_mu2)] = exp(Z1)exp(Z2)exp(-Z1)exp(-Z2)."""
    z1, z2 = Fraction(z1), Fraction(z2)
    y = dict(u.coords)
    for mu, z in ((mu1, z1), (mu2, z2), (mu1, -z1), (mu2, -z2)):
        y = _conj_nil(cb, y, {tuple(mu): z} if z else {})
    return UnipotentCoords(y)


def conj_word(cb: ChevalleyBasis, u: UnipotentCoords, w: ConjugatorWord) -> UnipotentCoords:
    y = dict(u.coords)
    for f in w.factors:
        y = _conj_nil(cb, y, f.coords) if isinstance(f, NilFactor) else _conj_cartan(y, f)
    return UnipotentCoords(y)


def delta_sq(cb: ChevalleyBasis, u: UnipotentCoords) -> Fraction:
    """Squared minimum norm among the simple entries (0 if one is missing)."""
    return min(u[s] ** 2 * cb.norm_sq[s] for s in cb.rs.simples)


def delta(cb: ChevalleyBasis, u: UnipotentCoords) -> float:
    return math.sqrt(delta_sq(cb, u))


def length_sq(cb: ChevalleyBasis, u: UnipotentCoords) -> Fraction:
    return positive_norm_sq(cb, u.coords)


def length(cb: ChevalleyBasis, u: UnipotentCoords) -> float:
    return math.sqrt(length_sq(cb, u))


def entry_norm_sq(cb: ChevalleyBasis, u: UnipotentCoords, r: Root) -> Fraction:
    return u[r] ** 2 * cb.norm_sq[tuple(r)]

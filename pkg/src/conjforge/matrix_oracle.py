"""Exact unipotent-matrix backend for type A, used as an independent check.

Nothing here touches the Chevalley basis: the root lambda_i + ... + lambda_j of
A_{n-1} is the matrix unit E_{i,j+1}, conjugation is matrix multiplication,
and exp/log are the finite series of a nilpotent matrix.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Sequence, Tuple

import numpy as np

from .errors import NotConjugate, NotSimpleCase
from .exact import fmt, parse
from .rootsys import Root, RootSystemKind


@dataclass(frozen=True, eq=False)
class RationalMatrix:
    a: np.ndarray  # object array of Fraction

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RationalMatrix":
        a = np.array([[Fraction(x) for x in row] for row in rows], dtype=object)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("expected a square matrix")
        return cls(a)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, n: int) -> "RationalMatrix":
        return cls.from_rows([[0] * n for _ in range(n)])

    @classmethod
    def unit(cls, n: int, i: int, j: int, c=1) -> "RationalMatrix":
        m = cls.zeros(n)
        m.a[i, j] = Fraction(c)
        return m

    def __getitem__(self, ij) -> Fraction:
        return self.a[ij]

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        return RationalMatrix(self.a.dot(other.a))

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        return RationalMatrix(self.a + other.a)

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        return RationalMatrix(self.a - other.a)

    def scale(self, c) -> "RationalMatrix":
        c = Fraction(c)
        return RationalMatrix(np.array([[x * c for x in row] for row in self.a], dtype=object))

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalMatrix) and self.a.shape == other.a.shape and bool((self.a == other.a).all())

    def is_strictly_upper(self) -> bool:
        return all(self.a[i, j] == 0 for i in range(self.n) for j in range(i + 1))

    def is_unipotent_upper(self) -> bool:
        return (self - RationalMatrix.identity(self.n)).is_strictly_upper()

    def inverse(self) -> "RationalMatrix":
        n = self.n
        m = [list(self.a[i]) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        for col in range(n):
            piv = next((r for r in range(col, n) if m[r][col]), None)
            if piv is None:
                raise ZeroDivisionError("singular matrix")
            m[col], m[piv] = m[piv], m[col]
            p = m[col][col]
            m[col] = [x / p for x in m[col]]
            for r in range(n):
                if r != col and m[r][col]:
                    f = m[r][col]
                    m[r] = [x - f * y for x, y in zip(m[r], m[col])]
        return RationalMatrix.from_rows([row[n:] for row in m])

    def rows(self) -> List[List[Fraction]]:
        return [list(r) for r in self.a]

    def to_json(self) -> list:
        return [[fmt(x) for x in row] for row in self.a]

    @classmethod
    def from_json(cls, doc: list) -> "RationalMatrix":
        return cls.from_rows([[parse(x) for x in row] for row in doc])

    def __repr__(self):
        return "RationalMatrix(" + repr([[str(x) for x in row] for row in self.a]) + ")"


def exp_nilpotent(x: RationalMatrix) -> RationalMatrix:
    if not x.is_strictly_upper():
        raise ValueError("exp series needs a strictly upper triangular argument")
    out = RationalMatrix.identity(x.n)
    term = out
    for k in range(1, x.n):
        term = (term @ x).scale(Fraction(1, k))
        out = out + term
    return out


def log_unipotent(m: RationalMatrix) -> RationalMatrix:
    if not m.is_unipotent_upper():
        raise ValueError("log series needs a unipotent upper triangular argument")
    x = m - RationalMatrix.identity(m.n)
    out = RationalMatrix.zeros(m.n)
    term = RationalMatrix.identity(m.n)
    for k in range(1, m.n):
        term = term @ x
        out = out + term.scale(Fraction((-1) ** (k + 1), k))
    return out


def _root_entry(r: Root) -> Tuple[int, int]:
    idx = [i for i, c in enumerate(r) if c]
    if not idx or any(c not in (0, 1) for c in r) or idx != list(range(idx[0], idx[-1] + 1)):
        raise ValueError(f"{r} is not a root of type A")
    return idx[0], idx[-1] + 1


def embed_typeA(kind: RootSystemKind, u) -> RationalMatrix:
    """exp(sum y_lam E_lam) for u over A_{n-1} (u a UnipotentCoords or a plain mapping)."""
    if kind.family != "A":
        raise ValueError(f"matrix embedding is only defined for type A, got {kind}")
    coords: Mapping[Root, Fraction] = getattr(u, "coords", u)
    n = kind.rank + 1
    x = RationalMatrix.zeros(n)
    for r, c in coords.items():
        i, j = _root_entry(tuple(r))
        x.a[i, j] = Fraction(c)
    return exp_nilpotent(x)


def unembed_typeA(m: RationalMatrix) -> Dict[Root, Fraction]:
    """Log coordinates of a unipotent upper triangular matrix, keyed by roots of A_{n-1}."""
    l = log_unipotent(m)
    n = m.n
    out = {}
    for i in range(n):
        for j in range(i + 1, n):
            if l[i, j]:
                out[tuple(int(i <= k < j) for k in range(n - 1))] = l[i, j]
    return out


def oracle_conjugate(m: RationalMatrix, g: RationalMatrix) -> RationalMatrix:
    return g @ m @ g.inverse()


def oracle_reduce(m: RationalMatrix) -> Tuple[RationalMatrix, RationalMatrix]:
    """Knock off the non-simple log entries by elementary conjugations.

    Entries are removed by height, top row first.  The top-row entry (0,k)
    uses I + a E_{0,k-1} with a = -L[0,k]/L[k-1,k]; entry (i,k) below it uses
    I + a E_{i+1,k} with a = L[i,k]/L[i,i+1].  Returns (g, g m g^-1); the
    reduced matrix is exp of its superdiagonal.
    """
    if not m.is_unipotent_upper():
        raise ValueError("expected a unipotent upper triangular matrix")
    n = m.n
    if any(m[i, i + 1] == 0 for i in range(n - 1)):
        raise NotSimpleCase("zero superdiagonal entry")
    g = RationalMatrix.identity(n)
    cur = m
    for h in range(2, n):
        for i in range(n - h):
            k = i + h
            l = log_unipotent(cur)
            if not l[i, k]:
                continue
            if i == 0:
                step = RationalMatrix.identity(n) + RationalMatrix.unit(n, 0, k - 1, -l[0, k] / l[k - 1, k])
            else:
                step = RationalMatrix.identity(n) + RationalMatrix.unit(n, i + 1, k, l[i, k] / l[i, i + 1])
            cur = oracle_conjugate(cur, step)
            g = step @ g
            if log_unipotent(cur)[i, k]:
                raise ArithmeticError(f"entry ({i},{k}) survived its elimination step")
    return g, cur


def diagonal_fourth_powers(x: Sequence, w: Sequence) -> Tuple[Fraction, ...]:
    """alpha_i^n (n = len(x)+1) for the diagonal D with D u' D^-1 = v'.

    From alpha_i / alpha_{i+1} = w_i / x_i and prod alpha_i = 1.
    """
    x = [Fraction(t) for t in x]
    w = [Fraction(t) for t in w]
    if any(t == 0 for t in x + w):
        raise NotSimpleCase("zero superdiagonal entry")
    ratios = [b / a for a, b in zip(x, w)]
    if any(c <= 0 for c in ratios):
        raise NotConjugate("negative-ratio", "a superdiagonal entry changes sign")
    n = len(x) + 1
    # alpha_1^n = prod_i (w_i/x_i)^{n-i}
    first = Fraction(1)
    for i, c in enumerate(ratios, start=1):
        first *= c ** (n - i)
    powers = [first]
    for c in ratios:
        powers.append(powers[-1] / c ** n)
    return tuple(powers)


def sl4_diagonal(x: Sequence, w: Sequence) -> Tuple[Tuple[float, ...], Tuple[Fraction, ...]]:
    """(alphas, exact alpha^4) for the 4x4 diagonal conjugation taking x-superdiagonal to w."""
    if len(x) != 3 or len(w) != 3:
        raise ValueError("sl4_diagonal takes three superdiagonal entries each")
    p4 = diagonal_fourth_powers(x, w)
    return tuple(float(p) ** 0.25 for p in p4), p4


def diagonal_matrix_float(alphas: Sequence[float]) -> np.ndarray:
    return np.diag(np.asarray(alphas, dtype=float))

"""Split semisimple Lie algebras in a Chevalley basis, with exact arithmetic.

Structure constants are generated from extraspecial pairs (Carter's
algorithm).  Extraspecial pairs are taken with respect to the order
"height, then reverse-lexicographic", with positive sign, which makes the
type A basis coincide with the matrix units E_ij.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Tuple, Union

import numpy as np
import scipy.sparse as sp

from .exact import fmt, root_key
from .rootsys import InternalConsistencyError, Root, RootSystem, build_root_system, height

S_LAMBDA_METHOD = (
    "trace certificate: B(H,H) = 2*sum_{positive roots} (c.x)^2 <= 2*sum_{positive roots} |c|^2 * |x|^2 "
    "(Cauchy-Schwarz), x = simple-root values of H"
)


class RootVector(NamedTuple):
    root: Root
    sign: int  # +1 for e_lambda, -1 for e_{-lambda}


class CartanGenerator(NamedTuple):
    index: int


BasisElement = Union[RootVector, CartanGenerator]


def _neg(r: Root) -> Root:
    return tuple(-c for c in r)


def _signed(b: RootVector) -> Root:
    return b.root if b.sign > 0 else _neg(b.root)


@dataclass(frozen=True)
class LieElement:
    terms: Mapping[BasisElement, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {b: Fraction(c) for b, c in self.terms.items() if c}
        object.__setattr__(self, "terms", clean)

    @classmethod
    def e(cls, root: Iterable[int], sign: int = 1, coeff=1) -> "LieElement":
        return cls({RootVector(tuple(root), sign): Fraction(coeff)})

    @classmethod
    def h(cls, index: int, coeff=1) -> "LieElement":
        return cls({CartanGenerator(index): Fraction(coeff)})

    def __add__(self, other: "LieElement") -> "LieElement":
        out = dict(self.terms)
        for b, c in other.terms.items():
            out[b] = out.get(b, 0) + c
        return LieElement(out)

    def __neg__(self) -> "LieElement":
        return LieElement({b: -c for b, c in self.terms.items()})

    def __sub__(self, other: "LieElement") -> "LieElement":
        return self + (-other)

    def __mul__(self, k) -> "LieElement":
        return LieElement({b: c * k for b, c in self.terms.items()})

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.terms)

    def is_nilpotent_positive(self) -> bool:
        return all(isinstance(b, RootVector) and b.sign > 0 for b in self.terms)

    def is_cartan(self) -> bool:
        return all(isinstance(b, CartanGenerator) for b in self.terms)

    def positive_part(self) -> Dict[Root, Fraction]:
        return {b.root: c for b, c in self.terms.items() if isinstance(b, RootVector) and b.sign > 0}


def _structure_constants(rs: RootSystem) -> Dict[Tuple[Root, Root], int]:
    """N_{a,b} for all pairs of (signed) roots whose sum is a root."""
    pos = rs.positive_set
    ip = rs.inner
    key = lambda r: (height(r), tuple(-c for c in r))  # noqa: E731
    npos: Dict[Tuple[Root, Root], int] = {}

    def is_root(r):
        return any(r) and rs.is_root(r)

    def sub(a, b):
        return tuple(x - y for x, y in zip(a, b))

    def add(a, b):
        return tuple(x + y for x, y in zip(a, b))

    def ratio(num, den) -> int:
        q = Fraction(num, den)
        if q.denominator != 1:
            raise InternalConsistencyError(f"non-integral structure constant {q}")
        return q.numerator

    def n_any(a: Root, b: Root) -> int:
        ap, bp = all(c >= 0 for c in a), all(c >= 0 for c in b)
        if ap and bp:
            return npos[(a, b)]
        if not ap and not bp:
            return -npos[(_neg(a), _neg(b))]
        if not ap:
            return -n_any(b, a)
        xi = add(a, b)
        if all(c >= 0 for c in xi):
            return ratio(-ip(xi, xi) * n_any(_neg(b), xi), ip(a, a))
        g = _neg(xi)
        return ratio(ip(g, g) * n_any(g, a), ip(b, b))

    for xi in sorted((r for r in rs.positives if height(r) > 1), key=key):
        pairs = [(a, sub(xi, a)) for a in rs.positives if sub(xi, a) in pos and key(a) < key(sub(xi, a))]
        a0, b0 = min(pairs, key=lambda p: key(p[0]))
        p = 0
        while is_root(sub(b0, tuple((p + 1) * c for c in a0))):
            p += 1
        n0 = p + 1
        npos[(a0, b0)], npos[(b0, a0)] = n0, -n0
        for a, b in pairs:
            if a == a0:
                continue
            total = Fraction(0)
            d1 = sub(b, a0)
            if is_root(d1):
                total += Fraction(n_any(b, _neg(a0)) * n_any(a, _neg(b0)), ip(d1, d1))
            d2 = sub(a, a0)
            if is_root(d2):
                total += Fraction(n_any(_neg(a0), a) * n_any(b, _neg(b0)), ip(d2, d2))
            n = ratio(ip(xi, xi) * total, n0)
            npos[(a, b)], npos[(b, a)] = n, -n

    full: Dict[Tuple[Root, Root], int] = {}
    roots = list(rs.positives) + [_neg(r) for r in rs.positives]
    for a in roots:
        for b in roots:
            s = add(a, b)
            if is_root(s):
                full[(a, b)] = n_any(a, b)
    return full


class ChevalleyBasis:
    """Chevalley basis {e_lambda, e_-lambda, h_i} of the split algebra of type rs.kind.

    Immutable after construction.  `bracket_table`, `killing` and `norm_sq`
    hold exact integers.
    """

    def __init__(self, rs: RootSystem, verify: bool = True):
        self.rs = rs
        n = rs.rank
        self.basis: Tuple[BasisElement, ...] = (
            tuple(RootVector(r, 1) for r in rs.positives)
            + tuple(RootVector(r, -1) for r in rs.positives)
            + tuple(CartanGenerator(i) for i in range(n))
        )
        self.index = {b: i for i, b in enumerate(self.basis)}
        self.N = _structure_constants(rs)
        self.bracket_table = self._build_table()
        mats = self._ad_matrices()
        if verify:
            self._verify(mats)
        self.killing = self._killing(mats)
        self.norm_sq: Dict[Root, Fraction] = {
            r: Fraction(self.killing[(RootVector(r, -1), RootVector(r, 1))]) for r in rs.positives}
        # ad(e_mu) restricted to the positive part: (mu, lam) -> (mu + lam, N)
        self.pos_action: Dict[Tuple[Root, Root], Tuple[Root, int]] = {
            (a, b): (s, self.N[(a, b)]) for (a, b), s in rs.sum_table.items()}

    def coroot(self, r: Root) -> Dict[BasisElement, int]:
        """h_r expanded in the h_i (r a signed root)."""
        rs = self.rs
        sign = 1 if all(c >= 0 for c in r) else -1
        pr = r if sign > 0 else _neg(r)
        rr = rs.inner(pr, pr)
        out = {}
        for i, c in enumerate(pr):
            if c:
                q = Fraction(c * rs.gram[i][i], rr)
                assert q.denominator == 1
                out[CartanGenerator(i)] = sign * q.numerator
        return out

    def _build_table(self) -> Dict[Tuple[BasisElement, BasisElement], Dict[BasisElement, int]]:
        rs = self.rs
        table = {}
        for x in self.basis:
            for y in self.basis:
                res: Dict[BasisElement, int] = {}
                if isinstance(x, RootVector) and isinstance(y, RootVector):
                    a, b = _signed(x), _signed(y)
                    s = tuple(i + j for i, j in zip(a, b))
                    if not any(s):
                        res = self.coroot(a)
                    elif (a, b) in self.N:
                        pr = all(c >= 0 for c in s)
                        res = {RootVector(s if pr else _neg(s), 1 if pr else -1): self.N[(a, b)]}
                elif isinstance(x, CartanGenerator) and isinstance(y, RootVector):
                    k = y.sign * rs.pairing(y.root, x.index)
                    if k:
                        res = {y: k}
                elif isinstance(x, RootVector) and isinstance(y, CartanGenerator):
                    k = -x.sign * rs.pairing(x.root, y.index)
                    if k:
                        res = {x: k}
                if res:
                    table[(x, y)] = res
        return table

    def _ad_matrices(self) -> List[sp.csr_matrix]:
        d = len(self.basis)
        mats = []
        for x in self.basis:
            rows, cols, vals = [], [], []
            for j, y in enumerate(self.basis):
                for z, c in self.bracket_table.get((x, y), {}).items():
                    rows.append(self.index[z])
                    cols.append(j)
                    vals.append(c)
            mats.append(sp.csr_matrix((np.array(vals, dtype=np.int64), (rows, cols)), shape=(d, d)))
        return mats

    def _verify(self, mats: List[sp.csr_matrix]) -> None:
        rs = self.rs
        for (a, b), n in self.N.items():
            p = 0
            while rs.is_root(tuple(x - (p + 1) * y for x, y in zip(b, a))) and any(
                    x - (p + 1) * y for x, y in zip(b, a)):
                p += 1
            if abs(n) != p + 1 or self.N[(b, a)] != -n:
                raise InternalConsistencyError(f"{rs.kind}: bad structure constant N{a, b} = {n}")
        # Jacobi <=> ad is a homomorphism on all basis pairs
        d = len(self.basis)
        for i in range(d):
            for j in range(i + 1, d):
                lhs = sp.csr_matrix((d, d), dtype=np.int64)
                for z, c in self.bracket_table.get((self.basis[i], self.basis[j]), {}).items():
                    lhs = lhs + c * mats[self.index[z]]
                rhs = mats[i] @ mats[j] - mats[j] @ mats[i]
                if (lhs != rhs).nnz:
                    raise InternalConsistencyError(
                        f"{rs.kind}: Jacobi identity fails for {self.basis[i]}, {self.basis[j]}")

    def _killing(self, mats) -> Dict[Tuple[BasisElement, BasisElement], int]:
        out = {}
        rank = self.rs.rank
        for r in self.rs.positives:
            i, j = self.index[RootVector(r, 1)], self.index[RootVector(r, -1)]
            v = int(mats[i].multiply(mats[j].T).sum())
            out[(self.basis[i], self.basis[j])] = out[(self.basis[j], self.basis[i])] = v
        for a in range(rank):
            for b in range(rank):
                i, j = self.index[CartanGenerator(a)], self.index[CartanGenerator(b)]
                v = int(mats[i].multiply(mats[j].T).sum())
                if v:
                    out[(self.basis[i], self.basis[j])] = v
        return out

    @property
    def killing_diag(self) -> Dict[Tuple[BasisElement, BasisElement], int]:
        return self.killing

    @functools.cached_property
    def constants(self) -> Optional[Tuple[Fraction, Fraction]]:
        return c_constants(self)


@functools.lru_cache(maxsize=None)
def _cached_basis(kind) -> ChevalleyBasis:
    return ChevalleyBasis(build_root_system(kind))


def chevalley_basis(rs: RootSystem) -> ChevalleyBasis:
    return _cached_basis(rs.kind)


def bracket(cb: ChevalleyBasis, X: LieElement, Y: LieElement) -> LieElement:
    out: Dict[BasisElement, Fraction] = {}
    table = cb.bracket_table
    for x, cx in X.terms.items():
        for y, cy in Y.terms.items():
            for z, c in table.get((x, y), {}).items():
                out[z] = out.get(z, 0) + cx * cy * c
    return LieElement(out)


def ad_exp(cb: ChevalleyBasis, Z: LieElement, Y: LieElement) -> LieElement:
    """sum_r (ad Z)^r Y / r!  for Z in the positive nilpotent part."""
    if not Z.is_nilpotent_positive():
        raise ValueError("ad_exp needs Z supported on positive root vectors")
    result, term, r = Y, Y, 1
    while term:
        term = bracket(cb, Z, term) * Fraction(1, r)
        result = result + term
        r += 1
    return result


def killing_form(cb: ChevalleyBasis, X: LieElement, Y: LieElement) -> Fraction:
    total = Fraction(0)
    for x, cx in X.terms.items():
        for y, cy in Y.terms.items():
            k = cb.killing.get((x, y))
            if k:
                total += cx * cy * k
    return total


def cartan_involution(X: LieElement) -> LieElement:
    out = {}
    for b, c in X.terms.items():
        if isinstance(b, RootVector):
            out[RootVector(b.root, -b.sign)] = -c
        else:
            out[b] = -c
    return LieElement(out)


def inner_product(cb: ChevalleyBasis, X: LieElement, Y: LieElement) -> Fraction:
    """<X, Y> = -B(theta X, Y)."""
    return -killing_form(cb, cartan_involution(X), Y)


def norm_sq(cb: ChevalleyBasis, X: LieElement) -> Fraction:
    return inner_product(cb, X, X)


def positive_norm_sq(cb: ChevalleyBasis, coords: Mapping[Root, Fraction]) -> Fraction:
    """Squared norm of sum c_lambda e_lambda; root spaces are orthogonal."""
    ns = cb.norm_sq
    return sum((c * c * ns[r] for r, c in coords.items()), Fraction(0))


def c_constants(cb: ChevalleyBasis) -> Optional[Tuple[Fraction, Fraction]]:
    """(c0^2, c1^2): extreme values of ||[Z_lam, Z_mu]||^2 over unit root vectors.

    Returns None when there are no non-simple roots (rank 1); the reduction
    then has nothing to do.
    """
    vals = []
    ns = cb.norm_sq
    for lam in cb.rs.simples:
        for mu in cb.rs.positives:
            s = cb.rs.sum_table.get((lam, mu))
            if s is not None:
                n = cb.N[(lam, mu)]
                vals.append(Fraction(n * n) * ns[s] / (ns[lam] * ns[mu]))
    if not vals:
        return None
    return min(vals), max(vals)


def s_lambda(cb: ChevalleyBasis) -> Fraction:
    """Certified S with B(H,H) <= S * sum_{simple} lambda(H)^2 on the Cartan subspace."""
    return Fraction(2 * sum(sum(c * c for c in r) for r in cb.rs.positives))


def cartan_norm_sq(rs: RootSystem, simple_values) -> float:
    """B(H,H) = sum over all roots of lambda(H)^2, given lambda_i(H) for simple roots."""
    return 2.0 * sum(sum(c * x for c, x in zip(r, simple_values)) ** 2 for r in rs.positives)


def constants_report(cb: ChevalleyBasis) -> dict:
    cc = cb.constants
    rep = {
        "kind": cb.rs.kind.to_json(),
        "c0_sq": fmt(cc[0]) if cc else None,
        "c1_sq": fmt(cc[1]) if cc else None,
        "s_lambda": fmt(s_lambda(cb)),
        "s_lambda_method": S_LAMBDA_METHOD,
        "norm_sq": {root_key(r): fmt(v) for r, v in cb.norm_sq.items()},
    }
    if cc is None:
        rep["note"] = "no non-simple roots"
    else:
        rep["c0"] = math.sqrt(cc[0])
        rep["c1"] = math.sqrt(cc[1])
    return rep

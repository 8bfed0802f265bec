"""Reduction of a simple-case unipotent to its simple entries, and the assembled conjugator.

Each step removes the order-least non-zero non-simple entry.  Steps with a
Single witness use exp(z e_mu).  Steps with a Pair witness use the
minimum-norm Z in the root spaces one height below the target: conjugating
by a commutator of exp(e_mu1) and exp(e_mu2) is the identity whenever
mu1 + mu2 is not a root, so the witness only certifies that the target can
be reached, and the factor is obtained by an exact linear solve.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import NotConjugate, NotSimpleCase
from .exact import fmt, root_key
from .liealg import ChevalleyBasis, s_lambda
from .rootsys import InternalConsistencyError, Pair, ReductionOrder, Root, Single, Witness, height
from .unipotent import (CartanFactor, ConjugatorWord, NilFactor, UnipotentCoords, conj_factor,
                        conj_word, delta_sq, length)


@dataclass(frozen=True)
class StepRecord:
    target: Root
    witness: Witness
    factor: NilFactor
    factor_len_sq: Fraction
    bound_sq: Optional[Fraction]   # |Y_target|^2 / (c0^2 delta^2)
    entry_norm_sq: Fraction
    delta_sq: Fraction

    @property
    def bound_ok(self) -> bool:
        return self.bound_sq is None or self.factor_len_sq <= self.bound_sq

    def to_json(self, rs) -> dict:
        return {
            "root": root_key(self.target),
            "witness": self.witness.to_json(),
            "factor": self.factor.to_json()["nil"],
            "factor_len_sq": fmt(self.factor_len_sq),
            "bound_sq": fmt(self.bound_sq) if self.bound_sq is not None else None,
            "bound_ok": self.bound_ok,
        }


def _check_simple(cb: ChevalleyBasis, u: UnipotentCoords) -> None:
    missing = [s for s in cb.rs.simples if not u[s]]
    if missing:
        raise NotSimpleCase(f"zero simple entries at {[root_key(s) for s in missing]}")


def _solve(a: List[List[Fraction]], b: List[Fraction]) -> List[Fraction]:
    """Gauss-Jordan on a square non-singular system, exact."""
    n = len(a)
    m = [row[:] + [b[i]] for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            raise InternalConsistencyError("singular elimination system")
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[i][n] for i in range(n)]


def _pair_factor(cb: ChevalleyBasis, order: ReductionOrder, u: UnipotentCoords, target: Root) -> Dict[Root, Fraction]:
    """Minimum-norm Z of height hgt(target)-1 whose first-order action kills the target
    entry and leaves every earlier entry of the same height untouched."""
    rs = cb.rs
    h = height(target)
    unknowns = rs.by_height[h - 1]
    pos = order.position
    rows = [r for r in rs.by_height[h] if pos[r] <= pos[target]]
    rhs = [(-u[target] if r == target else Fraction(0)) for r in rows]

    def coeff(rho, mu):
        diff = tuple(a - b for a, b in zip(rho, mu))
        if rs.is_simple(diff) and (mu, diff) in cb.N:
            return cb.N[(mu, diff)] * u[diff]
        return Fraction(0)

    A = [[coeff(rho, mu) for mu in unknowns] for rho in rows]
    w_inv = [1 / cb.norm_sq[mu] for mu in unknowns]
    # Z = W^-1 A^T (A W^-1 A^T)^-1 b
    gram = [[sum(A[i][k] * w_inv[k] * A[j][k] for k in range(len(unknowns))) for j in range(len(rows))]
            for i in range(len(rows))]
    y = _solve(gram, rhs)
    return {mu: w_inv[k] * sum(A[i][k] * y[i] for i in range(len(rows))) for k, mu in enumerate(unknowns)}


def reduce_step(cb: ChevalleyBasis, order: ReductionOrder, u: UnipotentCoords
                ) -> Optional[Tuple[StepRecord, UnipotentCoords]]:
    """Eliminate the order-least non-zero non-simple entry; None when u is simple-supported."""
    _check_simple(cb, u)
    rs = cb.rs
    target = next((r for r in order.sequence if not rs.is_simple(r) and u[r]), None)
    if target is None:
        return None
    w = order.witnesses[target]
    if isinstance(w, Single):
        z = -u[target] / (cb.N[(w.mu, w.simple)] * u[w.simple])
        x = {w.mu: z}
    else:
        x = _pair_factor(cb, order, u, target)
    factor = NilFactor(x)
    out = conj_factor(cb, u, factor)
    pos = order.position
    if out[target] or any(out[r] != u[r] for r in order.sequence[:pos[target]]):
        raise InternalConsistencyError(f"step at {target} disturbed the order-smaller entries")
    ds = delta_sq(cb, u)
    ens = u[target] ** 2 * cb.norm_sq[target]
    cc = cb.constants
    bound = ens / (cc[0] * ds) if cc else None
    rec = StepRecord(target, w, factor, factor.length_sq(cb), bound, ens, ds)
    return rec, out


def reduce_to_simple(cb: ChevalleyBasis, order: ReductionOrder, u: UnipotentCoords
                     ) -> Tuple[ConjugatorWord, UnipotentCoords, List[StepRecord]]:
    """Returns (g1, u', steps) with conj_word(u, g1) = u' supported on the simple roots."""
    steps: List[StepRecord] = []
    cur = u
    limit = len(cb.rs.positives) - cb.rs.rank
    while True:
        res = reduce_step(cb, order, cur)
        if res is None:
            break
        rec, cur = res
        steps.append(rec)
        if len(steps) > limit:
            raise InternalConsistencyError("reduction did not terminate within |positives|-rank steps")
    return ConjugatorWord(tuple(s.factor for s in steps)), cur, steps


def k_delta(cb: ChevalleyBasis, delta: float) -> float:
    """K(delta) = sum_{i=2}^r R_i/(c0 delta) prod_{j=2}^{i-1} (2 R_j/(c0 delta) + 1)."""
    if not delta > 0:
        raise ValueError("delta must be positive")
    cc = cb.constants
    if cc is None:
        return 0.0
    cd = math.sqrt(cc[0]) * delta
    counts = cb.rs.height_counts
    total, prod = 0.0, 1.0
    for i in range(2, cb.rs.max_height + 1):
        total += counts[i] / cd * prod
        prod *= 2 * counts[i] / cd + 1
    return total


@dataclass(frozen=True)
class DiagonalConjugator:
    ratios: Tuple[Fraction, ...]
    h_coords: Tuple[float, ...]
    norm_sq_float: float

    @property
    def factor(self) -> CartanFactor:
        return CartanFactor(self.ratios)

    def to_json(self) -> dict:
        return {"ratios": [fmt(c) for c in self.ratios], "h_coords": list(self.h_coords),
                "norm_sq": self.norm_sq_float}


def diagonal_conjugator(cb: ChevalleyBasis, u: UnipotentCoords, v: UnipotentCoords) -> DiagonalConjugator:
    rs = cb.rs
    for name, x in (("u", u), ("v", v)):
        extra = [r for r in x.coords if not rs.is_simple(r)]
        missing = [s for s in rs.simples if not x[s]]
        if extra or missing:
            raise NotConjugate("support", f"{name} is not supported exactly on the simple roots")
    ratios = tuple(v[s] / u[s] for s in rs.simples)
    bad = [i for i, c in enumerate(ratios) if c <= 0]
    if bad:
        raise NotConjugate("negative-ratio", f"simple indices {bad} change sign")
    f = CartanFactor(ratios)
    return DiagonalConjugator(ratios, f.h_coords(), f.length_sq(cb))


@dataclass
class ConjugacyResult:
    status: str                    # "conjugate" | "not-conjugate" | "not-simple"
    reason: str = ""
    word: ConjugatorWord = field(default_factory=ConjugatorWord)
    steps_u: List[StepRecord] = field(default_factory=list)
    steps_v: List[StepRecord] = field(default_factory=list)
    diagonal: Optional[DiagonalConjugator] = None
    verified: bool = False
    len_u: float = 0.0
    len_v: float = 0.0
    delta: float = 0.0
    len_g1: float = 0.0
    len_g2: float = 0.0
    len_g3: float = 0.0
    length_upper: float = 0.0
    k_delta: float = 0.0
    bound_g12: float = 0.0         # K(delta)(|u|+|v|)
    bound_g3: float = 0.0          # sqrt(S rank) ln(max(|u|,|v|)/delta)
    linear_bound: float = 0.0

    @property
    def steps_ok(self) -> bool:
        """Every elimination factor within |Y_target|/(c0 delta), exactly."""
        return all(s.bound_ok for s in self.steps_u + self.steps_v)

    @property
    def ledger_ok(self) -> bool:
        """g1 and g2 within K(delta)|u| and K(delta)|v| (relative tolerance 1e-9)."""
        tol = 1e-9 * max(1.0, self.bound_g12)
        return (self.len_g1 <= self.k_delta * self.len_u + tol
                and self.len_g2 <= self.k_delta * self.len_v + tol)

    @property
    def bound_ok(self) -> bool:
        return self.length_upper <= self.linear_bound * (1 + 1e-12) + 1e-12

    def to_json(self, rs) -> dict:
        return {
            "status": self.status,
            "reason": self.reason,
            "verified": self.verified,
            "word": self.word.to_json(),
            "steps_u": [s.to_json(rs) for s in self.steps_u],
            "steps_v": [s.to_json(rs) for s in self.steps_v],
            "diagonal": self.diagonal.to_json() if self.diagonal else None,
            "lengths": {"u": self.len_u, "v": self.len_v, "g1": self.len_g1, "g2": self.len_g2,
                        "g3": self.len_g3, "g": self.length_upper},
            "bound": {"delta": self.delta, "k_delta": self.k_delta, "g1_g2": self.bound_g12,
                      "g3": self.bound_g3, "total": self.linear_bound,
                      "holds": self.bound_ok, "ledger_holds": self.ledger_ok,
                      "steps_hold": self.steps_ok},
        }


def conjugate(cb: ChevalleyBasis, order: ReductionOrder, u: UnipotentCoords, v: UnipotentCoords) -> ConjugacyResult:
    """Build g = g2^-1 g3 g1 with g u g^-1 = v, and the per-instance linear bound."""
    try:
        g1, u1, steps_u = reduce_to_simple(cb, order, u)
        g2, v1, steps_v = reduce_to_simple(cb, order, v)
    except NotSimpleCase as e:
        return ConjugacyResult("not-simple", reason=str(e))
    res = ConjugacyResult("conjugate", steps_u=steps_u, steps_v=steps_v)
    res.len_u, res.len_v = length(cb, u), length(cb, v)
    try:
        diag = diagonal_conjugator(cb, u1, v1)
    except NotConjugate as e:
        res.status, res.reason = "not-conjugate", e.reason
        return res
    res.diagonal = diag
    g3 = ConjugatorWord((diag.factor,))
    word = g2.inverse() * g3 * g1
    res.word = word
    res.verified = conj_word(cb, u, word) == v
    res.len_g1, res.len_g2 = g1.length(cb), g2.length(cb)
    res.len_g3 = math.sqrt(diag.norm_sq_float)
    res.length_upper = res.len_g1 + res.len_g2 + res.len_g3
    res.delta = math.sqrt(min(delta_sq(cb, u), delta_sq(cb, v)))
    res.k_delta = k_delta(cb, res.delta)
    res.bound_g12 = res.k_delta * (res.len_u + res.len_v)
    big = max(res.len_u, res.len_v)
    res.bound_g3 = math.sqrt(float(s_lambda(cb)) * cb.rs.rank) * max(0.0, math.log(big / res.delta))
    res.linear_bound = res.bound_g12 + res.bound_g3
    return res

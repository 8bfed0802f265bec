"""Positive root systems, heights, and elimination orderings.

Roots are tuples of non-negative integers giving the coefficient of each
simple root (Bourbaki labelling).  Everything here is integer arithmetic.
"""
from __future__ import annotations

import functools
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

Root = Tuple[int, ...]

_RANK_RULES = {
    "A": (lambda n: n >= 1, "rank >= 1"),
    "B": (lambda n: n >= 2, "rank >= 2"),
    "C": (lambda n: n >= 3, "rank >= 3"),
    "D": (lambda n: n >= 4, "rank >= 4"),
    "E": (lambda n: n in (6, 7, 8), "rank in {6, 7, 8}"),
    "F": (lambda n: n == 4, "rank == 4"),
    "G": (lambda n: n == 2, "rank == 2"),
}


class InternalConsistencyError(RuntimeError):
    """A construction produced data that failed its own verification."""


@dataclass(frozen=True, order=True)
class RootSystemKind:
    family: str
    rank: int

    def __post_init__(self):
        if self.family not in _RANK_RULES:
            raise ValueError(f"unknown family {self.family!r}; expected one of A-G")
        ok, rule = _RANK_RULES[self.family]
        if not isinstance(self.rank, int) or not ok(self.rank):
            raise ValueError(f"invalid rank {self.rank} for type {self.family}: requires {rule}")

    @classmethod
    def parse(cls, text: str) -> "RootSystemKind":
        m = re.fullmatch(r"\s*([A-Ga-g])_?(\d+)\s*", text)
        if not m:
            raise ValueError(f"cannot parse root system kind {text!r} (expected e.g. 'F4')")
        return cls(m.group(1).upper(), int(m.group(2)))

    def __str__(self):
        return f"{self.family}{self.rank}"

    def to_json(self) -> dict:
        return {"family": self.family, "rank": self.rank}

    @classmethod
    def from_json(cls, obj) -> "RootSystemKind":
        if isinstance(obj, str):
            return cls.parse(obj)
        return cls(str(obj["family"]), int(obj["rank"]))


def _edges(kind: RootSystemKind) -> List[Tuple[int, int]]:
    n, f = kind.rank, kind.family
    if f in "ABCFG":
        return [(i, i + 1) for i in range(n - 1)]
    if f == "D":
        return [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
    # E: 1-3-4-5-6-7-8 with 2 attached to 4 (1-based)
    chain = [0, 2, 3, 4, 5, 6, 7][: n - 1]
    return list(zip(chain, chain[1:])) + [(1, 3)]


def _lengths(kind: RootSystemKind) -> List[int]:
    """Squared length of each simple root: short roots have length^2 2."""
    n, f = kind.rank, kind.family
    if f == "B":
        return [4] * (n - 1) + [2]
    if f == "C":
        return [2] * (n - 1) + [4]
    if f == "F":
        return [4, 4, 2, 2]
    if f == "G":
        return [2, 6]
    return [2] * n


def gram_matrix(kind: RootSystemKind) -> Tuple[Tuple[int, ...], ...]:
    """Symmetric bilinear form on the simple roots."""
    n = kind.rank
    lengths = _lengths(kind)
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        g[i][i] = lengths[i]
    for i, j in _edges(kind):
        g[i][j] = g[j][i] = -max(lengths[i], lengths[j]) // 2
    return tuple(tuple(row) for row in g)


def height(r: Sequence[int]) -> int:
    return sum(r)


def _add(a: Sequence[int], b: Sequence[int]) -> Root:
    return tuple(x + y for x, y in zip(a, b))


def _sub(a: Sequence[int], b: Sequence[int]) -> Root:
    return tuple(x - y for x, y in zip(a, b))


def lex_key(r: Root):
    """Height first, then lexicographic on the coefficient vector."""
    return (height(r), r)


@dataclass(frozen=True, eq=False)
class RootSystem:
    kind: RootSystemKind
    positives: Tuple[Root, ...]
    simples: Tuple[Root, ...]
    sum_table: Dict[Tuple[Root, Root], Root] = field(repr=False)
    gram: Tuple[Tuple[int, ...], ...] = field(repr=False)

    @property
    def rank(self) -> int:
        return self.kind.rank

    @functools.cached_property
    def positive_set(self) -> frozenset:
        return frozenset(self.positives)

    def is_root(self, r: Sequence[int]) -> bool:
        r = tuple(r)
        if all(c <= 0 for c in r):
            r = tuple(-c for c in r)
        return r in self.positive_set

    def is_simple(self, r: Root) -> bool:
        return height(r) == 1 and r in self.positive_set

    def inner(self, a: Sequence[int], b: Sequence[int]) -> int:
        g = self.gram
        return sum(a[i] * g[i][j] * b[j] for i in range(self.rank) if a[i] for j in range(self.rank) if b[j])

    def pairing(self, beta: Sequence[int], i: int) -> int:
        """<beta, alpha_i^vee> = 2 (beta, alpha_i) / (alpha_i, alpha_i)."""
        num = 2 * sum(beta[j] * self.gram[j][i] for j in range(self.rank))
        q, rem = divmod(num, self.gram[i][i])
        assert rem == 0
        return q

    @functools.cached_property
    def max_height(self) -> int:
        return max(height(r) for r in self.positives)

    @functools.cached_property
    def height_counts(self) -> Dict[int, int]:
        """R_i: the number of positive roots of each height."""
        counts: Dict[int, int] = {}
        for r in self.positives:
            counts[height(r)] = counts.get(height(r), 0) + 1
        return counts

    @functools.cached_property
    def by_height(self) -> Dict[int, Tuple[Root, ...]]:
        out: Dict[int, List[Root]] = {}
        for r in self.positives:
            out.setdefault(height(r), []).append(r)
        return {h: tuple(rs) for h, rs in out.items()}

    def plus_simples(self, mu: Root) -> List[Tuple[Root, Root]]:
        """The set {mu} + Pi, as (root, simple) pairs."""
        return [(self.sum_table[(mu, a)], a) for a in self.simples if (mu, a) in self.sum_table]

    def to_json(self) -> dict:
        return {
            "version": 1,
            "kind": self.kind.to_json(),
            "positives": [list(r) for r in self.positives],
            "simples": [list(r) for r in self.simples],
        }


def sum_root(rs: RootSystem, a: Root, b: Root) -> Optional[Root]:
    return rs.sum_table.get((tuple(a), tuple(b)))


@functools.lru_cache(maxsize=None)
def build_root_system(kind: RootSystemKind) -> RootSystem:
    """Close the simple roots under addition using root strings."""
    n = kind.rank
    gram = gram_matrix(kind)
    simples = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    found = set(simples)
    layer = list(simples)
    while layer:
        nxt = []
        for beta in layer:
            for i, a in enumerate(simples):
                if beta == a:
                    continue
                p = 0
                while _sub(beta, tuple(k * (p + 1) for k in a)) in found:
                    p += 1
                pair = 2 * sum(beta[j] * gram[j][i] for j in range(n)) // gram[i][i]
                if p - pair > 0:
                    new = _add(beta, a)
                    if new not in found:
                        found.add(new)
                        nxt.append(new)
        layer = nxt
    positives = tuple(sorted(found, key=lex_key))
    table = {}
    for a in positives:
        for b in positives:
            s = _add(a, b)
            if s in found:
                table[(a, b)] = s
    return RootSystem(kind, positives, simples, table, gram)


# --- orderings --------------------------------------------------------------


@dataclass(frozen=True)
class Single:
    mu: Root
    simple: Root

    def to_json(self) -> dict:
        return {"single": {"mu": list(self.mu), "simple": list(self.simple)}}


@dataclass(frozen=True)
class Pair:
    mu1: Root
    mu2: Root
    simple: Root

    def to_json(self) -> dict:
        return {"pair": {"mu1": list(self.mu1), "mu2": list(self.mu2), "simple": list(self.simple)}}


Witness = Union[Single, Pair]


def witness_from_json(obj: dict) -> Witness:
    if "single" in obj:
        s = obj["single"]
        return Single(tuple(s["mu"]), tuple(s["simple"]))
    if "pair" in obj:
        p = obj["pair"]
        return Pair(tuple(p["mu1"]), tuple(p["mu2"]), tuple(p["simple"]))
    raise ValueError(f"witness must be tagged 'single' or 'pair', got keys {sorted(obj)}")


@dataclass(frozen=True, eq=False)
class ReductionOrder:
    sequence: Tuple[Root, ...]
    witnesses: Dict[Root, Witness]

    @functools.cached_property
    def position(self) -> Dict[Root, int]:
        return {r: i for i, r in enumerate(self.sequence)}

    def to_json(self, rs: RootSystem) -> dict:
        return {
            "version": 1,
            "kind": rs.kind.to_json(),
            "order": [list(r) for r in self.sequence],
            "witnesses": [dict(root=list(r), **self.witnesses[r].to_json()) for r in self.sequence if r in self.witnesses],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ReductionOrder":
        seq = tuple(tuple(r) for r in obj["order"])
        wit = {tuple(w["root"]): witness_from_json(w) for w in obj["witnesses"]}
        return cls(seq, wit)


def pair_is_valid(rs: RootSystem, target: Root, w: Pair) -> bool:
    s = _add(w.mu1, w.mu2)
    if rs.is_root(s) or _add(s, w.simple) != target:
        return False
    hits = [a for a in rs.simples if _add(s, a) in rs.positive_set]
    return hits == [w.simple]


def verify_order(rs: RootSystem, order: ReductionOrder) -> List[str]:
    """Return every way `order` fails the elimination conditions; empty means valid."""
    out = []
    pos = order.position
    if sorted(order.sequence) != sorted(rs.positives) or len(pos) != len(rs.positives):
        out.append("sequence is not a permutation of the positive roots")
    nonsimple = [r for r in rs.positives if height(r) > 1]
    extra = set(order.witnesses) - set(nonsimple)
    if extra:
        out.append(f"witnesses given for non-target roots {sorted(extra)}")
    for lam in nonsimple:
        w = order.witnesses.get(lam)
        if w is None:
            out.append(f"{list(lam)}: no witness")
            continue
        if isinstance(w, Single):
            if w.mu not in rs.positive_set or not rs.is_simple(w.simple):
                out.append(f"{list(lam)}: single witness uses non-roots {list(w.mu)}, {list(w.simple)}")
                continue
            if _add(w.mu, w.simple) != lam:
                out.append(f"{list(lam)}: mu {list(w.mu)} + simple {list(w.simple)} != target")
                continue
            for other, _ in rs.plus_simples(w.mu):
                if other != lam and not (lam in pos and other in pos and pos[lam] < pos[other]):
                    out.append(f"{list(lam)}: not minimal in {{mu}}+Pi for mu={list(w.mu)}; {list(other)} is not later")
        else:
            if not all(m in rs.positive_set for m in (w.mu1, w.mu2)) or not rs.is_simple(w.simple):
                out.append(f"{list(lam)}: pair witness uses non-roots")
                continue
            s = _add(w.mu1, w.mu2)
            if rs.is_root(s):
                out.append(f"{list(lam)}: pair mu1={list(w.mu1)}, mu2={list(w.mu2)} sums to a root")
            elif _add(s, w.simple) != lam:
                out.append(f"{list(lam)}: mu1 + mu2 + simple != target")
            elif not pair_is_valid(rs, lam, w):
                out.append(f"{list(lam)}: {{mu1}}+{{mu2}}+Pi != {{target}} for mu1={list(w.mu1)}, mu2={list(w.mu2)}")
    return out


def _single_candidates(rs: RootSystem, lam: Root) -> List[Single]:
    """Single witnesses for lam, lexicographically largest mu first."""
    out = []
    for a in rs.simples:
        mu = _sub(lam, a)
        if mu in rs.positive_set:
            out.append(Single(mu, a))
    out.sort(key=lambda w: w.mu, reverse=True)
    return out


def _pair_candidates(rs: RootSystem, lam: Root) -> List[Pair]:
    out = []
    for a in rs.simples:
        s = _sub(lam, a)
        if min(s) < 0 or rs.is_root(s) or not any(s):
            continue
        if [b for b in rs.simples if _add(s, b) in rs.positive_set] != [a]:
            continue
        for mu1 in sorted(rs.positives, reverse=True):
            mu2 = _sub(s, mu1)
            if mu2 in rs.positive_set and mu1 >= mu2:
                out.append(Pair(mu1, mu2, a))
    return out


def search_order(rs: RootSystem) -> ReductionOrder:
    """Height-primary ordering found by exhaustive search within each height class.

    Within a height, candidates are tried in lexicographic order and a root is
    placed with a single witness whenever one is available; pair witnesses are
    the fallback.
    """
    sequence: List[Root] = list(rs.by_height.get(1, ()))
    witnesses: Dict[Root, Witness] = {}
    for h in range(2, rs.max_height + 1):
        cls = sorted(rs.by_height[h])
        singles = {lam: _single_candidates(rs, lam) for lam in cls}
        pairs = {lam: _pair_candidates(rs, lam) for lam in cls}

        def dfs(remaining: Tuple[Root, ...], placed: List[Tuple[Root, Witness]]):
            if not remaining:
                return placed
            rem = set(remaining)
            options = []
            for lam in remaining:
                for w in singles[lam]:
                    if all(o == lam or o in rem for o, _ in rs.plus_simples(w.mu)):
                        options.append((0, lam, w))
                        break
            for lam in remaining:
                if pairs[lam]:
                    options.append((1, lam, pairs[lam][0]))
            for _, lam, w in options:
                res = dfs(tuple(r for r in remaining if r != lam), placed + [(lam, w)])
                if res is not None:
                    return res
            return None

        found = dfs(tuple(cls), [])
        if found is None:
            raise InternalConsistencyError(
                f"{rs.kind}: no elimination ordering exists for height {h} (counterexample candidate)")
        for lam, w in found:
            sequence.append(lam)
            witnesses[lam] = w
    return ReductionOrder(tuple(sequence), witnesses)


def _classical_witness(kind: RootSystemKind, lam: Root) -> Witness:
    n = kind.rank
    idx = [i for i, c in enumerate(lam) if c]
    first, last = idx[0], idx[-1]
    e = lambda i: tuple(int(j == i) for j in range(n))  # noqa: E731
    twos = [i for i, c in enumerate(lam) if c == 2]
    if kind.family == "A" or (kind.family in "BC" and not twos):
        return Single(_sub(lam, e(last)), e(last))
    if kind.family in "BC":
        return Single(_sub(lam, e(twos[0])), e(twos[0]))
    # D_n: lambda_{n-2} (0-based n-3) is the branch node
    a, b, c = n - 3, n - 2, n - 1
    if twos:
        return Single(_sub(lam, e(twos[0])), e(twos[0]))
    if lam[c] and not lam[b]:
        return Single(_sub(lam, e(c)), e(c))
    if lam[b] and not lam[c]:
        if last != b:
            raise AssertionError(lam)
        if first <= n - 4:
            mu1 = tuple(1 if first <= j <= n - 4 else 0 for j in range(n))
            return Pair(mu1, e(b), e(a))
        return Single(e(b), e(a))
    if lam[b] and lam[c]:
        if first == a:
            return Pair(e(b), e(c), e(a))
        return Single(_sub(lam, e(c)), e(c))
    return Single(_sub(lam, e(last)), e(last))


_F4_TABLE = [
    # height, order within height, lambda, mu or mu1, mu2
    (2, 1, (1, 1, 0, 0), (0, 1, 0, 0), None),
    (2, 2, (0, 1, 1, 0), (0, 0, 1, 0), None),
    (2, 3, (0, 0, 1, 1), (0, 0, 0, 1), None),
    (3, 2, (1, 1, 1, 0), (1, 1, 0, 0), None),
    (3, 1, (0, 1, 2, 0), (0, 1, 1, 0), None),
    (3, 3, (0, 1, 1, 1), (0, 0, 1, 1), None),
    (4, 1, (1, 1, 2, 0), (1, 1, 1, 0), None),
    (4, 3, (1, 1, 1, 1), (1, 1, 0, 0), (0, 0, 0, 1)),
    (4, 2, (0, 1, 2, 1), (0, 1, 1, 1), None),
    (5, 1, (1, 2, 2, 0), (1, 1, 2, 0), None),
    (5, 3, (1, 1, 2, 1), (1, 1, 1, 1), None),
    (5, 2, (0, 1, 2, 2), (0, 1, 2, 1), None),
    (6, 1, (1, 2, 2, 1), (1, 2, 2, 0), None),
    (6, 2, (1, 1, 2, 2), (0, 1, 2, 2), None),
    (7, 1, (1, 2, 3, 1), (1, 2, 2, 1), None),
    (7, 2, (1, 2, 2, 2), (1, 1, 2, 2), None),
    (8, 1, (1, 2, 3, 2), (1, 2, 3, 1), None),
    (9, 1, (1, 2, 4, 2), (1, 2, 3, 2), None),
    (10, 1, (1, 3, 4, 2), (1, 2, 4, 2), None),
    (11, 1, (2, 3, 4, 2), (1, 3, 4, 2), None),
]


def _table_order(rs: RootSystem, rows) -> ReductionOrder:
    seq = list(rs.by_height[1])
    wit: Dict[Root, Witness] = {}
    for h, _, lam, m1, m2 in sorted(rows, key=lambda r: (r[0], r[1])):
        seq.append(lam)
        if m2 is None:
            wit[lam] = Single(m1, _sub(lam, m1))
        else:
            wit[lam] = Pair(m1, m2, _sub(_sub(lam, m1), m2))
    return ReductionOrder(tuple(seq), wit)


def _g2_order(rs: RootSystem) -> ReductionOrder:
    # one root per height above 1; mu is the unique root one height below
    rows = []
    for h in range(2, rs.max_height + 1):
        (lam,) = rs.by_height[h]
        mu = (1, 0) if h == 2 else rs.by_height[h - 1][0]
        rows.append((h, 1, lam, mu, None))
    return _table_order(rs, rows)


def restrict_order(sub: RootSystem, big: ReductionOrder) -> ReductionOrder:
    """Induced ordering on a subsystem spanned by the first `sub.rank` simple roots."""
    n = sub.rank
    cut = lambda r: r[:n]  # noqa: E731
    inside = lambda r: not any(r[n:])  # noqa: E731
    seq = tuple(cut(r) for r in big.sequence if inside(r))
    wit: Dict[Root, Witness] = {}
    for lam, w in big.witnesses.items():
        if inside(lam):
            if isinstance(w, Single):
                wit[cut(lam)] = Single(cut(w.mu), cut(w.simple))
            else:
                wit[cut(lam)] = Pair(cut(w.mu1), cut(w.mu2), cut(w.simple))
    return ReductionOrder(seq, wit)


@functools.lru_cache(maxsize=None)
def _builtin_cached(kind: RootSystemKind) -> ReductionOrder:
    rs = build_root_system(kind)
    f = kind.family
    if f in "ABCD":
        seq = rs.positives  # height, then lexicographic
        wit = {lam: _classical_witness(kind, lam) for lam in seq if height(lam) > 1}
        order = ReductionOrder(seq, wit)
    elif f == "F":
        order = _table_order(rs, _F4_TABLE)
    elif f == "G":
        order = _g2_order(rs)
    else:
        e8 = search_order(build_root_system(RootSystemKind("E", 8)))
        order = e8 if kind.rank == 8 else restrict_order(rs, e8)
    bad = verify_order(rs, order)
    if bad:
        raise InternalConsistencyError(f"builtin order for {kind} failed verification: {bad[:3]}")
    return order


def builtin_order(rs: RootSystem) -> ReductionOrder:
    """The closed-form / tabulated ordering for the type of `rs`.

    E6 and E7 use the ordering induced from the searched E8 ordering.
    """
    return _builtin_cached(rs.kind)

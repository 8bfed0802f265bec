"""Print the two instances on which the stated per-step and ledger bounds fail.

1. D4, a Pair-witness step whose factor is forced by the linear system:
   simple entries (1, 1, 1, 2) and a unit entry at lambda1+lambda2+lambda3.
2. Unit simple entries and every non-simple entry equal to t: for fixed
   delta the eliminating word grows faster than |u| (quadratically in A4,
   faster in C3 and G2), so no delta-only constant K(delta) can cover it.
"""
from fractions import Fraction

from conjforge.liealg import chevalley_basis
from conjforge.reduce import conjugate, k_delta, reduce_to_simple
from conjforge.rootsys import RootSystemKind, build_root_system, builtin_order
from conjforge.unipotent import UnipotentCoords, delta, length


def setup(kind):
    rs = build_root_system(RootSystemKind.parse(kind))
    return chevalley_basis(rs), builtin_order(rs)


def pair_step():
    cb, order = setup("D4")
    u = UnipotentCoords({(1, 0, 0, 0): 1, (0, 1, 0, 0): 1, (0, 0, 1, 0): 1, (0, 0, 0, 1): 2, (1, 1, 1, 0): 1})
    _, _, steps = reduce_to_simple(cb, order, u)
    for s in steps:
        print(f"D4 step at {s.target}: factor_len_sq={s.factor_len_sq} bound_sq={s.bound_sq} ok={s.bound_ok}")


def ledger(kind, t):
    cb, order = setup(kind)
    rs = cb.rs
    u = UnipotentCoords({r: (1 if rs.is_simple(r) else t) for r in rs.positives})
    g1, _, _ = reduce_to_simple(cb, order, u)
    k = k_delta(cb, delta(cb, u))
    res = conjugate(cb, order, u, u)
    print(f"{kind} t={t}: |g1|={g1.length(cb):.4g}  K(delta)|u|={k * length(cb, u):.4g}  "
          f"|g|={res.length_upper:.4g}  assembled bound={res.linear_bound:.4g}  holds={res.bound_ok}")


if __name__ == "__main__":
    pair_step()
    for kind in ("A4", "C3", "G2"):
        for t in (1, 10, 100, 1000):
            ledger(kind, Fraction(t))

import json

import pytest
from hypothesis import given, strategies as st

from conjforge.rootsys import (Pair, ReductionOrder, RootSystemKind, Single, build_root_system, builtin_order,
                               height, search_order, sum_root, verify_order)

COUNTS = {"A": lambda n: n * (n + 1) // 2, "B": lambda n: n * n, "C": lambda n: n * n,
          "D": lambda n: n * (n - 1), "G": lambda n: 6, "F": lambda n: 24, "E": lambda n: {6: 36, 7: 63, 8: 120}[n]}

ALL_KINDS = ([f"A{n}" for n in range(1, 9)] + [f"B{n}" for n in range(2, 9)] + [f"C{n}" for n in range(3, 9)]
             + [f"D{n}" for n in range(4, 9)] + ["E6", "E7", "E8", "F4", "G2"])


def rs_of(text):
    return build_root_system(RootSystemKind.parse(text))


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_positive_root_count(kind):
    rs = rs_of(kind)
    assert len(rs.positives) == COUNTS[rs.kind.family](rs.rank)
    assert len(set(rs.positives)) == len(rs.positives)
    assert set(rs.simples) <= set(rs.positives)


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_sum_table_is_exactly_root_sums(kind):
    rs = rs_of(kind)
    pos = set(rs.positives)
    for a in rs.positives:
        for b in rs.positives:
            s = tuple(x + y for x, y in zip(a, b))
            assert (sum_root(rs, a, b) == s) == (s in pos)


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_builtin_and_search_orders_verify(kind):
    rs = rs_of(kind)
    for order in (builtin_order(rs), search_order(rs)):
        assert verify_order(rs, order) == []
        assert set(order.witnesses) == {r for r in rs.positives if not rs.is_simple(r)}
        hs = [height(r) for r in order.sequence]
        assert hs == sorted(hs)


def test_bad_ranks_are_rejected():
    for fam, n in [("B", 1), ("C", 2), ("D", 3), ("E", 5), ("F", 3), ("G", 3), ("A", 0)]:
        with pytest.raises(ValueError, match="rank"):
            RootSystemKind(fam, n)


def test_small_listings():
    assert set(rs_of("A2").positives) == {(1, 0), (0, 1), (1, 1)}
    assert set(rs_of("B2").positives) == {(1, 0), (0, 1), (1, 1), (1, 2)}
    f4 = rs_of("F4")
    assert f4.max_height == 11 and (2, 3, 4, 2) in f4.positive_set
    e8 = rs_of("E8")
    assert e8.max_height == 29 and len(e8.positives) == 120


def test_heights_and_sums():
    assert height((1, 0)) == 1
    assert height((1, 2)) == 3
    assert height((2, 3, 4, 2)) == 11
    a2 = rs_of("A2")
    assert sum_root(a2, (1, 0), (0, 1)) == (1, 1)
    assert sum_root(a2, (1, 0), (1, 0)) is None
    assert sum_root(rs_of("F4"), (1, 1, 0, 0), (0, 0, 0, 1)) is None


def test_builtin_witness_examples():
    a3 = rs_of("A3")
    assert builtin_order(a3).witnesses[(1, 1, 1)] == Single((1, 1, 0), (0, 0, 1))
    d4 = rs_of("D4")
    assert builtin_order(d4).witnesses[(0, 1, 1, 1)] == Pair((0, 0, 1, 0), (0, 0, 0, 1), (0, 1, 0, 0))
    f4 = rs_of("F4")
    assert builtin_order(f4).witnesses[(1, 1, 1, 1)] == Pair((1, 1, 0, 0), (0, 0, 0, 1), (0, 0, 1, 0))


def test_search_examples():
    a2 = rs_of("A2")
    assert search_order(a2).witnesses == {(1, 1): Single((1, 0), (0, 1))}
    g2 = search_order(rs_of("G2"))
    assert len(g2.witnesses) == 4
    assert all(isinstance(w, Single) for w in g2.witnesses.values())


def test_corrupted_pair_is_reported():
    rs = rs_of("D4")
    order = builtin_order(rs)
    target = (0, 1, 1, 1)
    # mu1 + mu2 = lambda2 + lambda3 is a root
    bad = dict(order.witnesses)
    bad[target] = Pair((0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
    violations = verify_order(rs, ReductionOrder(order.sequence, bad))
    assert len(violations) == 1 and "[0, 1, 1, 1]" in violations[0] and "sums to a root" in violations[0]


def test_single_with_smaller_neighbour_is_reported():
    rs = rs_of("A3")
    order = builtin_order(rs)
    bad = dict(order.witnesses)
    # {lambda2} + Pi contains both height-2 roots; one of them precedes the other
    first = [r for r in order.sequence if height(r) == 2][1]
    other = (1, 1, 0) if first == (0, 1, 1) else (0, 1, 1)
    simple = tuple(a - b for a, b in zip(first, (0, 1, 0)))
    bad[first] = Single((0, 1, 0), simple)
    assert verify_order(rs, ReductionOrder(order.sequence, bad))


@given(st.sampled_from(ALL_KINDS), st.data())
def test_roots_reconstruct_from_simples(kind, data):
    rs = rs_of(kind)
    r = data.draw(st.sampled_from(rs.positives))
    total = tuple(sum(c * s[i] for c, s in zip(r, rs.simples)) for i in range(rs.rank))
    assert total == r
    assert height(r) >= 1


def test_order_json_round_trip():
    rs = rs_of("F4")
    order = builtin_order(rs)
    back = ReductionOrder.from_json(json.loads(json.dumps(order.to_json(rs))))
    assert back.sequence == order.sequence and back.witnesses == order.witnesses
    assert json.loads(json.dumps(rs.to_json()))["kind"] == {"family": "F", "rank": 4}

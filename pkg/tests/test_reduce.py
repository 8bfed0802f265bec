import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conjforge.errors import NotConjugate, NotSimpleCase
from conjforge.harness import ExperimentConfig, gen_instance
from conjforge.reduce import conjugate, diagonal_conjugator, k_delta, reduce_step, reduce_to_simple
from conjforge.rootsys import Pair, Single, height
from conjforge.unipotent import ConjugatorWord, UnipotentCoords, conj_root_exp, conj_word, delta, length

from conftest import SMALL_KINDS, setup, simple_case


def test_a2_single_step():
    cb, order = setup("A2")
    u = UnipotentCoords({(1, 0): 1, (0, 1): 1, (1, 1): 1})
    rec, out = reduce_step(cb, order, u)
    assert rec.target == (1, 1)
    assert rec.factor.coords == {(1, 0): Fraction(-1, cb.N[((1, 0), (0, 1))])}
    assert out == UnipotentCoords({(1, 0): 1, (0, 1): 1})
    assert rec.factor_len_sq == 6 and rec.bound_sq == 6
    assert reduce_step(cb, order, out) is None


def test_sl4_first_step_damages_only_the_top_entry():
    cb, order = setup("A3")
    x1, x2, x3, y1, y2, z1 = map(Fraction, (2, 3, 5, 7, 11, 13))
    u = UnipotentCoords({(1, 0, 0): x1, (0, 1, 0): x2, (0, 0, 1): x3, (1, 1, 0): y1, (0, 1, 1): y2, (1, 1, 1): z1})
    # make y1 the order-least non-simple entry
    u = UnipotentCoords({**u.coords, (0, 1, 1): 0})
    rec, out = reduce_step(cb, order, u)
    assert rec.target == (1, 1, 0)
    alpha = rec.factor.coords[(1, 0, 0)]
    assert alpha == -y1 / x2
    assert out[(1, 1, 0)] == 0 and out[(1, 1, 1)] == z1
    changed = {r for r in cb.rs.positives if out[r] != u[r]}
    assert changed == {(1, 1, 0)}


def test_zero_simple_entry_is_not_simple_case():
    cb, order = setup("A3")
    u = UnipotentCoords({(1, 0, 0): 1, (0, 0, 1): 1, (1, 1, 0): 1})
    with pytest.raises(NotSimpleCase):
        reduce_step(cb, order, u)
    assert conjugate(cb, order, u, u).status == "not-simple"


def test_simple_supported_input_needs_no_steps():
    cb, order = setup("B3")
    u = UnipotentCoords({(1, 0, 0): 2, (0, 1, 0): -1, (0, 0, 1): Fraction(1, 3)})
    word, out, steps = reduce_to_simple(cb, order, u)
    assert word == ConjugatorWord() and out == u and steps == []


def test_f4_full_reduction_takes_twenty_steps():
    cb, order = setup("F4")
    rng = random.Random(3)
    u = UnipotentCoords({r: Fraction(rng.choice([1, 2, 3]), rng.choice([1, 2])) * rng.choice([1, -1])
                         for r in cb.rs.positives})
    word, out, steps = reduce_to_simple(cb, order, u)
    assert len(steps) == 20 == len(cb.rs.positives) - cb.rs.rank
    assert set(out.coords) == set(cb.rs.simples)
    assert all(out[s] == u[s] for s in cb.rs.simples)
    assert conj_word(cb, u, word) == out
    for s in steps:
        if isinstance(s.witness, Single):
            assert s.bound_ok


@pytest.mark.parametrize("kind", SMALL_KINDS + ["C4", "F4"])
@settings(max_examples=25)
@given(data=st.data())
def test_reduction_properties(kind, data):
    cb, order = setup(kind)
    rs = cb.rs
    u = data.draw(simple_case(rs))
    word, out, steps = reduce_to_simple(cb, order, u)
    assert len(steps) <= len(rs.positives) - rs.rank
    assert set(out.coords) == set(rs.simples)
    assert conj_word(cb, u, word) == out
    # elimination respects the order: each target is later than the previous one
    pos = [order.position[s.target] for s in steps]
    assert pos == sorted(pos) and len(set(pos)) == len(pos)
    # single steps obey the per-step bound exactly
    for s in steps:
        if isinstance(s.witness, Single):
            assert s.factor_len_sq * cb.constants[0] * s.delta_sq <= s.entry_norm_sq
    # determinism under a different insertion order of the coordinates
    items = list(u.coords.items())
    random.Random(len(items)).shuffle(items)
    word2, out2, _ = reduce_to_simple(cb, order, UnipotentCoords(dict(items)))
    assert word2 == word and out2 == out


def test_pair_step_bound_fails_on_unbalanced_d4():
    """The per-step factor bound does not hold for a forced Pair step: documented counterexample."""
    cb, order = setup("D4")
    assert isinstance(order.witnesses[(1, 1, 1, 0)], Pair)
    u = UnipotentCoords({(1, 0, 0, 0): 1, (0, 1, 0, 0): 1, (0, 0, 1, 0): 1, (0, 0, 0, 1): 2, (1, 1, 1, 0): 1})
    rec, out = reduce_step(cb, order, u)
    assert rec.target == (1, 1, 1, 0) and out[(1, 1, 1, 0)] == 0
    assert (rec.factor_len_sq, rec.bound_sq) == (18, 12)
    assert not rec.bound_ok
    # with balanced simple entries the same step is inside the bound
    balanced = UnipotentCoords({**u.coords, (0, 0, 0, 1): 1})
    assert reduce_step(cb, order, balanced)[0].bound_ok


def test_ledger_bound_fails_for_large_entries_at_fixed_delta():
    """|g1| <= K(delta)|u| is not linear in |u| for fixed delta: documented counterexample."""
    cb, order = setup("G2")
    rs = cb.rs
    ratios = []
    for t in (1, 10, 100):
        u = UnipotentCoords({r: (1 if rs.is_simple(r) else t) for r in rs.positives})
        g1, _, _ = reduce_to_simple(cb, order, u)
        ratios.append(g1.length(cb) / (k_delta(cb, delta(cb, u)) * length(cb, u)))
    assert ratios[0] <= 1 and ratios[1] > 1 and ratios[2] > 100 * ratios[1]


def test_k_delta_examples():
    cb, _ = setup("A2")
    assert math.isclose(k_delta(cb, math.sqrt(6)), 1.0)
    a1, _ = setup("A1")
    assert k_delta(a1, 0.5) == 0
    f4, _ = setup("F4")
    ks = [k_delta(f4, d) for d in (0.5, 1, 2, 4, 8)]
    assert ks == sorted(ks, reverse=True)
    with pytest.raises(ValueError):
        k_delta(cb, 0)


def test_diagonal_conjugator_examples():
    cb, _ = setup("A2")
    u = UnipotentCoords({(1, 0): 2, (0, 1): 3})
    same = diagonal_conjugator(cb, u, u)
    assert same.ratios == (1, 1) and same.h_coords == (0.0, 0.0) and same.norm_sq_float == 0
    d = diagonal_conjugator(cb, u, UnipotentCoords({(1, 0): 1, (0, 1): 1}))
    assert d.ratios == (Fraction(1, 2), Fraction(1, 3))
    assert d.factor.scale((1, 1)) == Fraction(1, 6)
    assert all(math.isclose(math.exp(h), float(c)) for h, c in zip(d.h_coords, d.ratios))
    with pytest.raises(NotConjugate) as e:
        diagonal_conjugator(cb, u, UnipotentCoords({(1, 0): -2, (0, 1): 3}))
    assert e.value.reason == "negative-ratio"
    with pytest.raises(NotConjugate) as e:
        diagonal_conjugator(cb, u, UnipotentCoords({(1, 0): 2, (0, 1): 3, (1, 1): 1}))
    assert e.value.reason == "support"


def test_conjugate_identity_and_a2_example():
    cb, order = setup("A2")
    u = UnipotentCoords({(1, 0): 1, (0, 1): 1, (1, 1): 1})
    res = conjugate(cb, order, u, u)
    assert res.verified and res.status == "conjugate"
    assert res.diagonal.ratios == (1, 1)
    v = conj_root_exp(cb, u, (0, 1), 1)
    res = conjugate(cb, order, u, v)
    assert res.verified and conj_word(cb, u, res.word) == v
    assert res.length_upper <= res.linear_bound


def test_conjugate_identity_has_zero_length_when_simple():
    cb, order = setup("C3")
    u = UnipotentCoords({(1, 0, 0): 1, (0, 1, 0): 2, (0, 0, 1): 3})
    res = conjugate(cb, order, u, u)
    assert res.verified and res.length_upper == 0


@pytest.mark.parametrize("kind", ["A3", "B3", "G2", "D4"])
def test_sign_flip_is_not_conjugate(kind):
    cb, order = setup(kind)
    u, _, _ = gen_instance(ExperimentConfig(family=kind[0], rank=int(kind[1:]), seed=5), 0, cb)
    _, u1, _ = reduce_to_simple(cb, order, u)
    s = cb.rs.simples[-1]
    v = UnipotentCoords({**u1.coords, s: -u1[s]})
    res = conjugate(cb, order, u, v)
    assert res.status == "not-conjugate" and res.reason == "negative-ratio" and not res.verified

import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conjforge.errors import NotConjugate, NotSimpleCase
from conjforge.matrix_oracle import (RationalMatrix, diagonal_fourth_powers, embed_typeA, exp_nilpotent,
                                     log_unipotent, oracle_conjugate, oracle_reduce, sl4_diagonal, unembed_typeA)
from conjforge.reduce import diagonal_conjugator, reduce_to_simple
from conjforge.rootsys import RootSystemKind
from conjforge.unipotent import UnipotentCoords

from conftest import rationals, setup

A2 = RootSystemKind("A", 2)


def strictly_upper(n):
    k = n * (n - 1) // 2
    return st.lists(rationals(5, 9), min_size=k, max_size=k).map(lambda vals: _fill(n, vals))


def _fill(n, vals):
    m = RationalMatrix.zeros(n)
    it = iter(vals)
    for i in range(n):
        for j in range(i + 1, n):
            m.a[i, j] = next(it)
    return m


def test_embed_examples():
    assert embed_typeA(A2, {}) == RationalMatrix.identity(3)
    m = embed_typeA(A2, UnipotentCoords({(1, 0): 1, (0, 1): 1, (1, 1): 1}))
    assert m == RationalMatrix.from_rows([[1, 1, Fraction(3, 2)], [0, 1, 1], [0, 0, 1]])
    assert unembed_typeA(m) == {(1, 0): 1, (0, 1): 1, (1, 1): 1}
    with pytest.raises(ValueError):
        embed_typeA(RootSystemKind("B", 2), {})


@settings(max_examples=1000)
@given(st.integers(2, 6).flatmap(strictly_upper))
def test_exp_log_round_trip(x):
    m = exp_nilpotent(x)
    assert m.is_unipotent_upper()
    assert log_unipotent(m) == x


def test_sl4_first_step_matrix_identity():
    x1, x2, x3, y1, y2, z1 = map(Fraction, (2, 3, 5, 7, 11, 13))
    u = RationalMatrix.from_rows([[1, x1, y1, z1], [0, 1, x2, y2], [0, 0, 1, x3], [0, 0, 0, 1]])
    alpha = -y1 / x2
    g = RationalMatrix.identity(4) + RationalMatrix.unit(4, 0, 1, alpha)
    out = oracle_conjugate(u, g)
    assert out == RationalMatrix.from_rows([[1, x1, y1 + alpha * x2, z1 + alpha * y2], [0, 1, x2, y2],
                                            [0, 0, 1, x3], [0, 0, 0, 1]])
    assert out[0, 2] == 0 and out[0, 3] == z1 - (y1 / x2) * y2


def test_oracle_reduce_examples():
    m = RationalMatrix.from_rows([[1, 1, Fraction(3, 2)], [0, 1, 1], [0, 0, 1]])
    g, red = oracle_reduce(m)
    assert g == RationalMatrix.identity(3) - RationalMatrix.unit(3, 0, 1)
    assert red == RationalMatrix.from_rows([[1, 1, Fraction(1, 2)], [0, 1, 1], [0, 0, 1]])
    g, red2 = oracle_reduce(red)
    assert g == RationalMatrix.identity(3) and red2 == red
    with pytest.raises(NotSimpleCase):
        oracle_reduce(RationalMatrix.from_rows([[1, 0, 1], [0, 1, 1], [0, 0, 1]]))


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_oracle_reduce_matches_abstract_reduction(n):
    cb, order = setup(f"A{n - 1}")
    rng = np.random.default_rng(n)
    for _ in range(20):
        u = UnipotentCoords({r: Fraction(int(rng.integers(1, 6)) * int(rng.choice([-1, 1])) if cb.rs.is_simple(r)
                                         else int(rng.integers(-5, 6)), int(rng.integers(1, 4)))
                             for r in cb.rs.positives})
        m = embed_typeA(cb.rs.kind, u)
        g, red = oracle_reduce(m)
        _, u1, _ = reduce_to_simple(cb, order, u)
        assert red == embed_typeA(cb.rs.kind, u1)
        assert oracle_conjugate(m, g) == red


def test_sl4_diagonal_examples():
    alphas, p4 = sl4_diagonal((1, 2, 3), (1, 2, 3))
    assert p4 == (1, 1, 1, 1) and alphas == (1.0, 1.0, 1.0, 1.0)
    alphas, p4 = sl4_diagonal((1, 1, 1), (16, 1, 1))
    assert p4 == (4096, Fraction(1, 16), Fraction(1, 16), Fraction(1, 16))
    assert p4[0] * p4[1] * p4[2] * p4[3] == 1
    u = np.array([[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1], [0, 0, 0, 1]], dtype=float)
    d = np.diag(alphas)
    assert np.allclose(d @ u @ np.linalg.inv(d), [[1, 16, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1], [0, 0, 0, 1]],
                       atol=1e-9, rtol=0)
    with pytest.raises(NotConjugate):
        sl4_diagonal((1, 1, 1), (1, -1, 1))


def test_alpha2_uses_x2_squared_not_cubed():
    x = tuple(map(Fraction, (2, 3, 5)))
    w = tuple(map(Fraction, (7, Fraction(1, 2), 3)))
    _, p4 = sl4_diagonal(x, w)
    x1, x2, x3 = x
    w1, w2, w3 = w
    cubed = x1 * w2 ** 2 * w3 / (w1 * x2 ** 3 * x3)
    corrected = x1 * w2 ** 2 * w3 / (w1 * x2 ** 2 * x3)
    assert p4[1] == corrected != cubed


def test_general_diagonal_powers_agree_with_cartan_ratios():
    cb, _ = setup("A4")
    x = [Fraction(2), Fraction(-3), Fraction(1, 2), Fraction(5)]
    w = [Fraction(1), Fraction(-7), Fraction(3), Fraction(1, 5)]
    powers = diagonal_fourth_powers(x, w)
    n = len(x) + 1
    prod = Fraction(1)
    for p in powers:
        prod *= p
    assert prod == 1
    d = diagonal_conjugator(cb, UnipotentCoords(dict(zip(cb.rs.simples, x))), UnipotentCoords(dict(zip(cb.rs.simples, w))))
    for i, c in enumerate(d.ratios):
        assert powers[i] / powers[i + 1] == c ** n


def test_matrix_json_round_trip():
    m = RationalMatrix.from_rows([[1, Fraction(-2, 3)], [0, 1]])
    doc = json.loads(json.dumps(m.to_json()))
    assert doc == [["1/1", "-2/3"], ["0/1", "1/1"]]
    assert RationalMatrix.from_json(doc) == m
    assert m.inverse() @ m == RationalMatrix.identity(2)

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from metaplectic import linalg as la
from metaplectic.padic import Mu8, SquareClass, hilbert_symbol
from metaplectic.quadform import HALF_PSI, STANDARD_PSI, gamma_norm, gamma_psi
from metaplectic.rao import (
    c_pm,
    c_pr,
    m_from_invariants,
    m_norm,
    relation_check,
    sl2_c_pm,
    sl2_c_pr,
    sl2_m,
    sl2_x,
)
from metaplectic.symplectic import inverse, leray_q, random_sl2, random_sp, x_invariant

seeds = st.integers(0, 2 ** 32)
ms = st.sampled_from([1, 2])
primes = st.sampled_from([3, 5, 7, 13])


def test_trivial_values():
    for m in (1, 2):
        g = random_sp(random.Random(m), m, 5, 7)
        I = la.identity(2 * m)
        assert c_pr(I, g, 7) == Mu8(0)
        assert c_pm(I, g, 7) == Mu8(0)
        assert m_norm(I, 7) == Mu8(0)
        assert relation_check(I, I, 7)


def test_c_pr_degenerate_inverse_pair():
    rng = random.Random(8)
    for _ in range(50):
        g = random_sp(rng, 2, 5, 5)
        if leray_q(g, inverse(g), 5).l == 0:
            assert c_pr(g, inverse(g), 5) == Mu8(0)


def test_sl2_c_pr_closed_form():
    p = 7
    rng = random.Random(9)
    hits = 0
    for _ in range(300):
        g1, g2 = random_sl2(rng, p, False), random_sl2(rng, p, False)
        c3 = la.mul(g1, g2)[1][0]
        if c3 == 0:
            continue
        hits += 1
        c1, c2 = g1[1][0], g2[1][0]
        assert c_pr(g1, g2, p) == gamma_psi(Fraction(1, 2) * c1 * c2 * c3, STANDARD_PSI, p)
    assert hits > 100


def test_sl2_m_closed_form():
    p = 5
    rng = random.Random(10)
    for _ in range(200):
        g = random_sl2(rng, p)
        (a, _), (c, _) = g
        if c == 0:
            expected = gamma_norm(a, HALF_PSI, p).inverse()
        else:
            expected = gamma_psi(Fraction(1, 2) * c, STANDARD_PSI, p).inverse()
        assert m_norm(g, p) == expected


def test_sl2_c_pm_closed_form():
    p = 3
    rng = random.Random(11)
    for _ in range(200):
        g1, g2 = random_sl2(rng, p), random_sl2(rng, p)
        x1, x2, x3 = (x_invariant(g, p) for g in (g1, g2, la.mul(g1, g2)))
        minus_one = SquareClass(p, 0, -1)
        expected = hilbert_symbol(x1, x2, p) * hilbert_symbol(minus_one * x1 * x2, x3, p)
        assert c_pm(g1, g2, p) == Mu8.sign(expected)


@settings(max_examples=300, deadline=None)
@given(seeds, primes)
def test_sl2_examples_match_pipeline(seed, p):
    rng = random.Random(seed)
    g1, g2 = random_sl2(rng, p), random_sl2(rng, p)
    assert sl2_x(g1, p) == x_invariant(g1, p)
    assert sl2_m(g1, p) == m_norm(g1, p)
    assert sl2_c_pr(g1, g2, p) == c_pr(g1, g2, p)
    assert sl2_c_pm(g1, g2, p) == c_pm(g1, g2, p)


@settings(max_examples=200, deadline=None)
@given(seeds, ms, primes)
def test_relation_and_sign_values(seed, m, p):
    rng = random.Random(seed)
    g1, g2 = random_sp(rng, m, 5, p), random_sp(rng, m, 5, p)
    assert relation_check(g1, g2, p)
    assert c_pm(g1, g2, p).in_mu2()


@settings(max_examples=60, deadline=None)
@given(seeds, ms, primes)
def test_cocycle_identities(seed, m, p):
    rng = random.Random(seed)
    g1, g2, g3 = (random_sp(rng, m, 4, p) for _ in range(3))
    for f in (c_pr, c_pm):
        lhs = f(g1, g2, p) * f(la.mul(g1, g2), g3, p)
        rhs = f(g1, la.mul(g2, g3), p) * f(g2, g3, p)
        assert lhs == rhs


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_normalizer_two_forms_agree(p):
    for x in SquareClass.all(p):
        for j in range(3):
            m_from_invariants(x, j)

import random
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from metaplectic import linalg as la
from metaplectic.barthel import (
    SemidirectElement,
    c_b,
    c_bpr,
    coboundary_check,
    coboundary_check2,
    gl2_c_bpr,
    gl2_nu2,
    gl2_split,
    nu,
    nu2,
    nu_compose_check,
    nu_conj,
    nu_scale,
)
from metaplectic.padic import Mu8, hilbert_symbol
from metaplectic.quadform import HALF_PSI, gamma_norm
from metaplectic.symplectic import m_of, omega_S, random_sl2, random_sp, s_of

seeds = st.integers(0, 2 ** 32)
ms = st.sampled_from([1, 2])
primes = st.sampled_from([3, 5, 7, 13])


def rand_y(rng, p):
    return Fraction(rng.choice([1, -1]) * rng.randint(1, 9), rng.randint(1, 4)) * Fraction(p) ** rng.randint(-2, 2)


def rand_gl2(rng, p):
    return la.mul(s_of(rand_y(rng, p), 1), random_sl2(rng, p))


def test_trivial_values():
    rng = random.Random(0)
    g = random_sp(rng, 2, 5, 7)
    I = la.identity(4)
    assert nu_conj(I, g, 7) == Mu8(0)
    assert nu_conj(g, I, 7) == Mu8(0)
    assert nu_scale(Fraction(3), I, 7) == Mu8(0)
    assert nu2(s_of(Fraction(1), 2), g, 7) == Mu8(0)
    e = SemidirectElement(Fraction(1), I)
    assert c_bpr(e, e, 7) == Mu8(0)
    assert c_b(e, e, 7) == Mu8(0)


def test_nu_scale_on_omega_and_levi():
    p = 7
    for y in (Fraction(7), Fraction(3), Fraction(-7, 2)):
        for S in [(1,), (1, 2)]:
            assert nu_scale(y, omega_S(S, 2), p) == gamma_norm(y, HALF_PSI, p) ** (-len(S))
        A = la.mat([[3, 0], [0, 1]])
        assert nu_scale(y, m_of(A), p) == Mu8.sign(hilbert_symbol(Fraction(3), y, p))


@settings(max_examples=100, deadline=None)
@given(seeds, ms, primes)
def test_nu_square_class_invariance(seed, m, p):
    rng = random.Random(seed)
    y, t = rand_y(rng, p), rand_y(rng, p)
    g = random_sp(rng, m, 5, p)
    assert nu(s_of(y, m), g, p) == nu(s_of(t * t * y, m), g, p)


@settings(max_examples=100, deadline=None)
@given(seeds, ms, primes)
def test_coboundary_and_composition(seed, m, p):
    rng = random.Random(seed)
    g, g2, h = (random_sp(rng, m, 4, p) for _ in range(3))
    y1, y2 = rand_y(rng, p), rand_y(rng, p)
    for M in (h, s_of(y1, m), la.mul(s_of(y1, m), h)):
        assert coboundary_check(M, g, g2, p)
        assert coboundary_check2(M, g, g2, p)
    assert nu_compose_check(la.identity(2 * m), h, g, p)
    assert nu_compose_check(h, s_of(y1, m), g, p)
    assert nu_compose_check(s_of(y1, m), s_of(y2, m), g, p)
    assert nu(s_of(y1 * y2, m), g, p) == nu(s_of(y1, m), g, p) * nu(s_of(y2, m), la.mul_many(s_of(1 / y1, m), g, s_of(y1, m)), p)


def test_gl2_table():
    p = 7
    rng = random.Random(1)
    both = [0, 0]
    for _ in range(400):
        h1, h2 = rand_gl2(rng, p), rand_gl2(rng, p)
        both[h1[1][0] != 0] += 1
        assert gl2_c_bpr(h1, h2, p) == c_bpr(gl2_split(h1), gl2_split(h2), p)
    assert min(both) > 50


def test_gl2_c_bpr_first_branch():
    p = 5
    rng = random.Random(2)
    for _ in range(100):
        a = rand_y(rng, p)
        h1 = la.mat([[a, 1], [0, rand_y(rng, p) / a]])
        h2 = rand_gl2(rng, p)
        assert c_bpr(gl2_split(h1), gl2_split(h2), p) == Mu8.sign(hilbert_symbol(a, la.det(h2), p))


def test_nu2_branches():
    p = 3
    rng = random.Random(3)
    for _ in range(200):
        y = rand_y(rng, p)
        g = random_sl2(rng, p)
        expected = Mu8.sign(hilbert_symbol(y, g[0][0], p)) if g[1][0] == 0 else Mu8(0)
        assert nu2(s_of(y, 1), g, p) == expected
        assert gl2_nu2(g, y, p) == expected


@settings(max_examples=60, deadline=None)
@given(seeds, ms, primes)
def test_barthel_cocycles(seed, m, p):
    rng = random.Random(seed)
    es = [SemidirectElement(rand_y(rng, p), random_sp(rng, m, 4, p)) for _ in range(3)]
    e1, e2, e3 = es
    for f in (c_bpr, c_b):
        assert f(e1, e2, p) * f(e1 * e2, e3, p) == f(e1, e2 * e3, p) * f(e2, e3, p)
    assert c_b(e1, e2, p).in_mu2()


def test_semidirect_matches_matrix_product():
    rng = random.Random(4)
    e1 = SemidirectElement(Fraction(3, 7), random_sp(rng, 2, 4, 7))
    e2 = SemidirectElement(Fraction(-7), random_sp(rng, 2, 4, 7))
    assert (e1 * e2).matrix() == la.mul(e1.matrix(), e2.matrix())

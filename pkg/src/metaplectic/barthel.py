"""Lifting automorphisms of Sp(W) to its covers, and the resulting cocycles
on F^x x| Sp(W).

An automorphism is conjugation by a similitude matrix M (g -> M^{-1} g M).
For M = s(y) this is the scaling automorphism, for M in Sp(W) an inner one;
a general M factors as s(lambda_M) h with h symplectic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import linalg as la
from .linalg import Matrix
from .padic import Mu8, hilbert_symbol
from .quadform import HALF_PSI, STANDARD_PSI, gamma_norm, gamma_psi
from .rao import c_pm, c_pr, m_norm
from .symplectic import bruhat_decompose, conj, inverse, s_of, similitude, size

HALF = Fraction(1, 2)


class NotPlusMinusOne(AssertionError):
    pass


class RouteMismatch(AssertionError):
    pass


@dataclass(frozen=True)
class SemidirectElement:
    """[y, g] in F^x x| Sp(W); y stands for s(y) = diag(I, y I)."""

    y: object
    g: Matrix

    def matrix(self) -> Matrix:
        return la.mul(s_of(self.y, size(self.g)), self.g)

    def __mul__(self, other: "SemidirectElement") -> "SemidirectElement":
        return SemidirectElement(self.y * other.y, la.mul(conj_scale(self.g, other.y), other.g))


def conj_scale(g: Matrix, y) -> Matrix:
    """g^y = s(y)^{-1} g s(y)."""
    a, b, c, d = la.blocks(g)
    return la.block(a, la.scale(y, b), la.scale(1 / y, c), d)


def nu_conj(h: Matrix, g: Matrix, p: int) -> Mu8:
    """Lift of conjugation by h in Sp(W)."""
    return c_pr(inverse(h), la.mul(g, h), p) * c_pr(g, h, p)


def nu_scale(y, g: Matrix, p: int) -> Mu8:
    """Lift of conjugation by s(y)."""
    d = bruhat_decompose(g, p)
    det_a = la.det(la.blocks(d.p1)[0]) * la.det(la.blocks(d.p2)[0])
    return Mu8.sign(hilbert_symbol(det_a, y, p)) * gamma_norm(y, HALF_PSI, p) ** (-d.j)


@lru_cache(maxsize=200000)
def nu(M: Matrix, g: Matrix, p: int) -> Mu8:
    """Lift of conjugation by a similitude matrix M."""
    lam = similitude(M)
    m = size(M)
    h = la.mul(s_of(1 / lam, m), M)
    return nu_scale(lam, g, p) * nu_conj(h, conj_scale(g, lam), p)


def nu2(M: Matrix, g: Matrix, p: int) -> Mu8:
    """Lift to the two-fold cover: nu(M, g) m(g) / m(g^M)."""
    v = nu(M, g, p) * m_norm(g, p) / m_norm(conj(g, M), p)
    if not v.in_mu2():
        raise NotPlusMinusOne(f"nu2 value {v} is not a sign")
    return v


def coboundary_check(M: Matrix, g: Matrix, g2: Matrix, p: int) -> bool:
    """c_pr(g, g') = c_pr(g^M, g'^M) nu(M, g) nu(M, g') nu(M, g g')^{-1}."""
    lhs = c_pr(g, g2, p)
    rhs = c_pr(conj(g, M), conj(g2, M), p) * nu(M, g, p) * nu(M, g2, p) / nu(M, la.mul(g, g2), p)
    return lhs == rhs


def coboundary_check2(M: Matrix, g: Matrix, g2: Matrix, p: int) -> bool:
    lhs = c_pm(g, g2, p)
    rhs = c_pm(conj(g, M), conj(g2, M), p) * nu2(M, g, p) * nu2(M, g2, p) / nu2(M, la.mul(g, g2), p)
    return lhs == rhs


def nu_compose_check(M1: Matrix, M2: Matrix, g: Matrix, p: int) -> bool:
    """nu(M1 M2, g) = nu(M1, g) nu(M2, g^{M1})."""
    return nu(la.mul(M1, M2), g, p) == nu(M1, g, p) * nu(M2, conj(g, M1), p)


def c_bpr(e1: SemidirectElement, e2: SemidirectElement, p: int) -> Mu8:
    m = size(e1.g)
    return nu(s_of(e2.y, m), e1.g, p) * c_pr(conj_scale(e1.g, e2.y), e2.g, p)


def c_b(e1: SemidirectElement, e2: SemidirectElement, p: int) -> Mu8:
    """Two-fold Barthel cocycle; both expressions are evaluated and compared."""
    m = size(e1.g)
    g1y = conj_scale(e1.g, e2.y)
    direct = nu2(s_of(e2.y, m), e1.g, p) * c_pm(g1y, e2.g, p)
    relation = (
        m_norm(la.mul(g1y, e2.g), p).inverse() * m_norm(e1.g, p) * m_norm(e2.g, p) * c_bpr(e1, e2, p)
    )
    if direct != relation:
        raise RouteMismatch(f"C_B routes disagree: {direct} vs {relation}")
    if not direct.in_mu2():
        raise NotPlusMinusOne(f"C_B value {direct} is not a sign")
    return direct


# ---------------------------------------------------------------------------
# GL_2 closed forms


def gl2_split(h: Matrix) -> SemidirectElement:
    """h = s(det h) g with g in SL_2."""
    y = la.det(h)
    return SemidirectElement(y, la.mul(s_of(1 / y, 1), h))


def gl2_c_bpr(h1: Matrix, h2: Matrix, p: int) -> Mu8:
    (a1, _), (c1, _) = h1
    c2 = h2[1][0]
    c3 = la.mul(h1, h2)[1][0]
    det1, det2 = la.det(h1), la.det(h2)
    if c1 == 0:
        return Mu8.sign(hilbert_symbol(a1, det2, p))
    v = Mu8.sign(hilbert_symbol(c1 * det1, det2, p)) * gamma_norm(det2, HALF_PSI, p).inverse()
    if c2 != 0 and c3 != 0:
        v = v * gamma_psi(HALF * c1 * c2 * c3 * det2, STANDARD_PSI, p)
    return v


def gl2_nu2(h1: Matrix, y2, p: int) -> Mu8:
    """nu_2(y_2, g_1) from the closed forms: (y_2, a_1) if c_1 = 0, else 1."""
    (a1, _), (c1, _) = h1
    if c1 == 0:
        return Mu8.sign(hilbert_symbol(y2, a1, p))
    return Mu8(0)

"""Rao's cocycles on Sp(W): the eighth-root-of-unity cocycle c_pr, the
normalizing function m and the sign-valued cocycle c_pm."""

from __future__ import annotations

from fractions import Fraction

from . import linalg as la
from .linalg import Matrix
from .padic import Mu8, SquareClass, hilbert_symbol
from .quadform import HALF_PSI, STANDARD_PSI, det_class, gamma_form, gamma_norm, gamma_psi, hasse
from .symplectic import bruhat_decompose, leray_q, size, t_invariant

HALF = Fraction(1, 2)


class InternalIdentityViolation(AssertionError):
    pass


def c_pr(g1: Matrix, g2: Matrix, p: int) -> Mu8:
    """Weil index of half the Leray form of (X*, X* g2^{-1}, X* g1)."""
    return gamma_form(leray_q(g1, g2, p).form.scale(HALF))


def m_from_invariants(x: SquareClass, j: int) -> Mu8:
    """gamma(x, psi^{1/2})^{-1} gamma_{psi^{1/2}}(1)^{-j}, checked against
    (x, 1/2) gamma(x, psi)^{-1} gamma_psi(1/2)^{-j}."""
    p = x.p
    xr = x.representative()
    first = gamma_norm(xr, HALF_PSI, p).inverse() * gamma_psi(Fraction(1), HALF_PSI, p) ** (-j)
    second = (
        Mu8.sign(hilbert_symbol(xr, HALF, p))
        * gamma_norm(xr, STANDARD_PSI, p).inverse()
        * gamma_psi(HALF, STANDARD_PSI, p) ** (-j)
    )
    if first != second:
        raise InternalIdentityViolation(f"normalizer forms disagree at x={x}, j={j}")
    return first


def m_norm(g: Matrix, p: int) -> Mu8:
    d = bruhat_decompose(g, p)
    return m_from_invariants(d.x, d.j)


def c_pm(g1: Matrix, g2: Matrix, p: int) -> Mu8:
    """The sign-valued cocycle built from x, t and the Leray form.

    The doubled form entering the Hilbert-symbol and Hasse factors is taken
    to be the Leray form q itself (the form whose half gives c_pr).  With
    the literal doubling the Hasse factor is off by (2, det q)^(l-1), which
    breaks the cocycle identity once l = 2.
    """
    x1 = bruhat_decompose(g1, p).x
    x2 = bruhat_decompose(g2, p).x
    x3 = bruhat_decompose(la.mul(g1, g2), p).x
    t = t_invariant(g1, g2, p)
    q2 = leray_q(g1, g2, p).form
    minus_one = SquareClass(p, 0, 1 if p % 4 == 1 else -1)
    s = hilbert_symbol(x1, x2, p)
    s *= hilbert_symbol(minus_one * x1 * x2, x3, p)
    if t % 2:
        s *= hilbert_symbol(minus_one, det_class(q2), p)
    if (t * (t - 1) // 2) % 2:
        s *= hilbert_symbol(minus_one, minus_one, p)
    s *= hasse(q2)
    return Mu8.sign(s)


def relation_rhs(g1: Matrix, g2: Matrix, p: int) -> Mu8:
    """m(g1 g2)^{-1} m(g1) m(g2) c_pr(g1, g2)."""
    return m_norm(la.mul(g1, g2), p).inverse() * m_norm(g1, p) * m_norm(g2, p) * c_pr(g1, g2, p)


def relation_check(g1: Matrix, g2: Matrix, p: int) -> bool:
    return c_pm(g1, g2, p) == relation_rhs(g1, g2, p)


# ---------------------------------------------------------------------------
# closed forms on SL_2, used as independent checks of the pipeline


def sl2_x(g: Matrix, p: int) -> SquareClass:
    from .padic import square_class

    (a, _), (c, _) = g
    return square_class(a if c == 0 else c, p)


def sl2_m(g: Matrix, p: int) -> Mu8:
    (a, _), (c, _) = g
    if c == 0:
        return gamma_norm(a, HALF_PSI, p).inverse()
    return gamma_psi(HALF * c, STANDARD_PSI, p).inverse()


def sl2_c_pr(g1: Matrix, g2: Matrix, p: int) -> Mu8:
    c1 = g1[1][0]
    c2 = g2[1][0]
    c3 = la.mul(g1, g2)[1][0]
    if c1 == 0 or c2 == 0 or c3 == 0:
        return Mu8(0)
    return gamma_psi(HALF * c1 * c2 * c3, STANDARD_PSI, p)


def sl2_c_pm(g1: Matrix, g2: Matrix, p: int) -> Mu8:
    x1, x2, x3 = sl2_x(g1, p), sl2_x(g2, p), sl2_x(la.mul(g1, g2), p)
    minus_one = SquareClass(p, 0, 1 if p % 4 == 1 else -1)
    return Mu8.sign(hilbert_symbol(x1, x2, p) * hilbert_symbol(minus_one * x1 * x2, x3, p))

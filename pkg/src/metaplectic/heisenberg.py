"""The Heisenberg group H(W) = W + F and twisted right actions on it.

For p = 3 mod 4 the acting group is the central extension of
F~x |x Sp(W) by F^x attached to the class section cocycle c'; for
p = 1 mod 4 it is the extension of GSp~(W) by F~x_+ attached to the
square root of c''.  In both cases the central subgroup of the projective
quotient acts trivially.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .extended import (
    ExtSemidirect,
    FtildeElement,
    NotInGroup,
    c_prime_case1,
    case_of,
    class_name,
    identity_element,
    iota_rep,
    kappa_scalar,
    plus_element,
    random_gsp_tilde,
    random_scalar,
    random_semidirect,
    sqrt_square,
    square_cover_mul,
)
from .padic import WrongResidueCase
from .symplectic import form


@dataclass(frozen=True)
class HeisElement:
    w: tuple
    t: object

    def __mul__(self, other: "HeisElement") -> "HeisElement":
        return heis_multiply(self, other)


def heis_multiply(h1: HeisElement, h2: HeisElement) -> HeisElement:
    """(w, t)(w', t') = (w + w', t + t' + <w, w'>/2)."""
    w = tuple(a + b for a, b in zip(h1.w, h2.w))
    return HeisElement(w, h1.t + h2.t + form(h1.w, h2.w) / 2)


def heis_identity(m: int) -> HeisElement:
    return HeisElement(tuple(Fraction(0) for _ in range(2 * m)), Fraction(0))


def random_heis(rng: random.Random, m: int) -> HeisElement:
    w = tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(2 * m))
    return HeisElement(w, Fraction(rng.randint(-9, 9), rng.randint(1, 5)))


def _act_vector(w: Sequence, M: la.Matrix, c) -> tuple:
    return tuple(c * x for x in la.row_times(w, M))


# ---------------------------------------------------------------------------
# p = 3 mod 4


def c_prime_case3(s: str, t: str, p: int) -> Fraction:
    """kappa(s) kappa(t) = c'(s, t) kappa(st) for the four class matrices."""
    if case_of(p) != 3:
        raise WrongResidueCase("the class section cocycle table is for p = 3 mod 4")
    pf = Fraction(p)
    table = {
        ("p", "-1"): Fraction(-1),
        ("-p", "-1"): Fraction(-1),
        ("p", "p"): -pf,
        ("-p", "p"): -pf,
        ("p", "-p"): pf,
        ("-p", "-p"): pf,
    }
    return table.get((s, t), Fraction(1))


def c_prime_matrix_check(p: int, m: int) -> int:
    """Class pairs where the table disagrees with the matrix products."""
    bad = 0
    names = ("1", "-1", "p", "-p")
    for s in names:
        for t in names:
            prod = iota_rep(s, p, m) * iota_rep(t, p, m)
            st = class_name(prod.lam, p)
            bad += prod.matrix != la.scale(c_prime_case3(s, t, p), iota_rep(st, p, m).matrix)
    return bad


def a_decompose_case3(y: FtildeElement) -> tuple:
    """t_h = a_h kappa(class); returns (a_h, class name)."""
    name = class_name(y.lam, y.p)
    K = iota_rep(name, y.p, y.m).matrix
    i, j = next((i, j) for i, row in enumerate(K) for j, x in enumerate(row) if x != 0)
    a = y.matrix[i][j] / K[i][j]
    if y.matrix != la.scale(a, K):
        raise NotInGroup("not a scalar multiple of a class representative")
    return a, name


@dataclass(frozen=True)
class ParenElement:
    """(h, eps) with h = [t_h, g_h] and eps in F^x (p = 3 mod 4)."""

    h: ExtSemidirect
    eps: object

    def __mul__(self, other: "ParenElement") -> "ParenElement":
        p = self.h.p
        s = a_decompose_case3(self.h.y)[1]
        t = a_decompose_case3(other.h.y)[1]
        return ParenElement(self.h * other.h, c_prime_case3(s, t, p) * self.eps * other.eps)


CENTER_READINGS = ("square", "linear")


def alpha_case3(x: HeisElement, e: ParenElement, center: str = "square") -> HeisElement:
    """(v, t) -> (a^-1 v h eps, lambda_{a^-1 h} lambda_eps t).

    ``center`` selects lambda_eps: "square" is the similitude eps^2 of the
    scalar eps, "linear" is eps itself.
    """
    a, _ = a_decompose_case3(e.h.y)
    M = la.mul(e.h.y.matrix, e.h.g)
    v = _act_vector(x.w, M, e.eps / a)
    lam = e.h.y.lam / (a * a)
    if center == "square":
        lam_eps = e.eps * e.eps
    elif center == "linear":
        lam_eps = e.eps
    else:
        raise ValueError(f"unknown center reading {center!r}")
    return HeisElement(v, lam * lam_eps * x.t)


def random_paren_case3(rng: random.Random, p: int, m: int) -> ParenElement:
    eps = Fraction(rng.choice([1, -1]) * rng.randint(1, 6), rng.randint(1, 4)) * Fraction(p) ** rng.randint(-1, 1)
    return ParenElement(random_semidirect(rng, p, m, 3), eps)


def paren_central_case3(c, p: int, m: int) -> ParenElement:
    """[c, 1] in F^x x 1."""
    y = FtildeElement(la.scalar(Fraction(c), 2 * m), 1, p)
    return ParenElement(ExtSemidirect(y, la.identity(2 * m)), Fraction(1))


def lemma_a_case3(e1: ParenElement, e2: ParenElement) -> bool:
    """a_h^-1 a_h'^-1 = c'(h, h') a_hh'^-1."""
    a1, s = a_decompose_case3(e1.h.y)
    a2, t = a_decompose_case3(e2.h.y)
    a12, _ = a_decompose_case3((e1.h * e2.h).y)
    return 1 / (a1 * a2) == c_prime_case3(s, t, e1.h.p) / a12


# ---------------------------------------------------------------------------
# p = 1 mod 4


def sqrt_cover(x, eps: int, p: int, m: int) -> FtildeElement:
    """The square root homomorphism F~x2 -> F~x_+: [x, eps] -> (eps sqrt(x), eps)."""
    s = sqrt_square(x, p) * eps
    return FtildeElement(la.scalar(s, 2 * m), eps, p)


def square_map(t: FtildeElement) -> tuple:
    """F~x_+ -> F~x2, t -> lambda~_t."""
    return (t.lam, t.eps)


def c_double_prime_root(g1: FtildeElement, g2: FtildeElement) -> FtildeElement:
    """sqrt(c''(lambda~_g1, lambda~_g2)) as an element of F~x_+."""
    p, m = g1.p, g1.m
    c = c_prime_case1(class_name(g1.lam, p), class_name(g2.lam, p), p)
    return sqrt_cover(c, 1, p, m)


def a_decompose_case1(g: FtildeElement) -> tuple:
    """lambda~_g = [a^2, eps][kappa, 1]; returns (sqrt([a^2, eps]), class name)."""
    if case_of(g.p) != 1:
        raise WrongResidueCase("the F~x_+ decomposition is for p = 1 mod 4")
    name = class_name(g.lam, g.p)
    a2 = g.lam / kappa_scalar(name, g.p)
    return sqrt_cover(a2, g.eps, g.p, g.m), name


@dataclass(frozen=True)
class ParenGSpElement:
    """(g~, k) with g~ in GSp~(W) and k in F~x_+ (p = 1 mod 4)."""

    g: FtildeElement
    k: FtildeElement

    def __mul__(self, other: "ParenGSpElement") -> "ParenGSpElement":
        c = c_double_prime_root(self.g, other.g)
        return ParenGSpElement(self.g * other.g, c * self.k * other.k)


def alpha_case1(x: HeisElement, e: ParenGSpElement) -> HeisElement:
    """(v, t) -> (a^-1 v g~ k, lambda_{a^-1 g~} lambda_k t)."""
    a, _ = a_decompose_case1(e.g)
    sa = a.matrix[0][0]
    sk = e.k.matrix[0][0]
    v = _act_vector(x.w, e.g.matrix, sk / sa)
    return HeisElement(v, e.g.lam / (sa * sa) * sk * sk * x.t)


def lemma_a_case1(g1: FtildeElement, g2: FtildeElement) -> bool:
    """a_g^-1 a_g'^-1 = sqrt(c'') a_gg'^-1 in GSp~(W), signs included."""
    a1, _ = a_decompose_case1(g1)
    a2, _ = a_decompose_case1(g2)
    a12, _ = a_decompose_case1(g1 * g2)
    return a1.inverse() * a2.inverse() == c_double_prime_root(g1, g2) * a12.inverse()


def sqrt_square_roundtrip(t: FtildeElement) -> bool:
    """sqrt(t^2) = t for t in F~x_+, and the square of sqrt(c'') is c''."""
    x, eps = square_map(t)
    return sqrt_cover(x, eps, t.p, t.m) == t


def c_double_prime_square_check(p: int) -> int:
    names = ("1", "z1", "p", "z1*p")
    bad = 0
    for s in names:
        for t in names:
            c = c_prime_case1(s, t, p)
            root = sqrt_cover(c, 1, p, 1)
            bad += square_map(root) != square_cover_mul((c, 1), (1, 1), p)
    return bad


def random_paren_case1(rng: random.Random, p: int, m: int) -> ParenGSpElement:
    return ParenGSpElement(random_gsp_tilde(rng, p, m, 3), plus_element(random_scalar(rng, p), p, m))


def paren_central_case1(s, p: int, m: int) -> ParenGSpElement:
    """An element of F~x_+ placed in the first slot."""
    return ParenGSpElement(plus_element(s, p, m), identity_element(p, m))


def sp_element(g: la.Matrix, p: int) -> ParenElement | ParenGSpElement:
    """g in Sp(W) as an element of the acting group."""
    m = len(g) // 2
    if case_of(p) == 3:
        return ParenElement(ExtSemidirect(identity_element(p, m), g), Fraction(1))
    return ParenGSpElement(FtildeElement(g, 1, p), identity_element(p, m))


def alpha(x: HeisElement, e) -> HeisElement:
    if isinstance(e, ParenElement):
        return alpha_case3(x, e)
    return alpha_case1(x, e)


def random_paren(rng: random.Random, p: int, m: int):
    if case_of(p) == 3:
        return random_paren_case3(rng, p, m)
    return random_paren_case1(rng, p, m)


"""Symplectic and similitude matrices, Bruhat cells and Rao invariants.

Vectors are rows and groups act on the right.  In the basis
(e_1..e_m, e_1*..e_m*) the form is <u, v> = u J v^T with J = [[0, I], [-I, 0]],
so g is symplectic when g J g^T = J.  P is the Siegel parabolic stabilizing
X* (zero lower-left block).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import linalg as la
from .linalg import Matrix
from .padic import SquareClass, square_class, valuation
from .quadform import DiagQuadForm, diagonalize

SpElement = Matrix
GSpElement = Matrix


class NotSymplectic(ValueError):
    pass


class NonIntegerT(ArithmeticError):
    pass


PIVOT_STRATEGIES = ("min_valuation", "last")


def J(m: int) -> Matrix:
    return la.block(la.zeros(m), la.identity(m), la.neg(la.identity(m)), la.zeros(m))


def form(u: Sequence, v: Sequence):
    """<u, v> = u J v^T."""
    m = len(u) // 2
    return la.dot(u[:m], v[m:]) - la.dot(u[m:], v[:m])


def size(g: Matrix) -> int:
    return len(g) // 2


def similitude(g: Matrix):
    """lambda_g with g J g^T = lambda_g J."""
    # (g J g^T)_{0, m} = <row_0, row_m>
    return form(g[0], g[size(g)])


def is_similitude(g: Matrix) -> bool:
    m = size(g)
    lam = similitude(g)
    if lam == 0:
        return False
    G = la.mul(la.mul(g, J(m)), la.transpose(g))
    return G == la.scale(lam, J(m))


def is_symplectic(g: Matrix) -> bool:
    return la.mul(la.mul(g, J(size(g))), la.transpose(g)) == J(size(g))


def in_P(g: Matrix) -> bool:
    return la.is_zero(la.blocks(g)[2])


def m_of(A: Matrix) -> Matrix:
    """Levi element diag(A, A^{-T})."""
    k = len(A)
    return la.block(A, la.zeros(k), la.zeros(k), la.transpose(la.inverse(A)))


def n_of(B: Matrix) -> Matrix:
    """Unipotent [[I, B], [0, I]] for symmetric B."""
    k = len(B)
    return la.block(la.identity(k), B, la.zeros(k), la.identity(k))


def s_of(y, m: int) -> Matrix:
    """diag(I, y I), of similitude y."""
    return la.block(la.identity(m), la.zeros(m), la.zeros(m), la.scalar(y, m))


def omega_S(S: Sequence[int], m: int) -> Matrix:
    """e_i -> -e_i*, e_i* -> e_i for i in S (1-based); identity elsewhere."""
    S = set(S)
    ind = [1 if i + 1 in S else 0 for i in range(m)]
    a = la.diag([1 - t for t in ind])
    b = la.diag([-t for t in ind])
    c = la.diag(ind)
    return la.block(a, b, c, a)


def omega(m: int) -> Matrix:
    return omega_S(range(1, m + 1), m)


def conj(g: Matrix, y: Matrix) -> Matrix:
    """g^y = y^{-1} g y."""
    return la.mul_many(la.inverse(y), g, y)


def inverse(g: Matrix) -> Matrix:
    """Inverse of a symplectic matrix: -J g^T J."""
    m = size(g)
    a, b, c, d = la.blocks(g)
    return la.block(la.transpose(d), la.neg(la.transpose(b)), la.neg(la.transpose(c)), la.transpose(a))


# ---------------------------------------------------------------------------
# Bruhat decomposition


@dataclass(frozen=True)
class BruhatDecomp:
    p1: Matrix
    S: tuple
    p2: Matrix
    x: SquareClass
    j: int

    def reconstruct(self) -> Matrix:
        return la.mul_many(self.p1, omega_S(self.S, size(self.p1)), self.p2)


def _reduce_to_E(c: Matrix, p: int, strategy: str):
    """Find invertible D, A with D c A = diag(I_r, 0); returns (D, A, r)."""
    k = len(c)
    M = [list(r) for r in c]
    D = [list(r) for r in la.identity(k)]
    A = [list(r) for r in la.identity(k)]
    r = 0
    while True:
        cands = [(i, j) for i in range(r, k) for j in range(r, k) if M[i][j] != 0]
        if not cands:
            break
        if strategy == "min_valuation":
            i, j = min(cands, key=lambda ij: (valuation(M[ij[0]][ij[1]], p), ij))
        elif strategy == "last":
            i, j = cands[-1]
        else:
            raise ValueError(f"unknown pivot strategy {strategy!r}")
        M[r], M[i] = M[i], M[r]
        D[r], D[i] = D[i], D[r]
        for row in M:
            row[r], row[j] = row[j], row[r]
        for row in A:
            row[r], row[j] = row[j], row[r]
        pv = M[r][r]
        M[r] = [x / pv for x in M[r]]
        D[r] = [x / pv for x in D[r]]
        for i2 in range(k):
            if i2 != r and M[i2][r] != 0:
                f = M[i2][r]
                M[i2] = [x - f * y for x, y in zip(M[i2], M[r])]
                D[i2] = [x - f * y for x, y in zip(D[i2], D[r])]
        for j2 in range(k):
            if j2 != r and M[r][j2] != 0:
                f = M[r][j2]
                for row in M:
                    row[j2] = row[j2] - f * row[r]
                for row in A:
                    row[j2] = row[j2] - f * row[r]
        r += 1
    return la.mat(D), la.mat(A), r


@lru_cache(maxsize=200000)
def bruhat_decompose(g: Matrix, p: int, strategy: str = "min_valuation") -> BruhatDecomp:
    """g = p1 omega_S p2 with p1, p2 in P and S = {1..rank(c)}."""
    m = size(g)
    _, _, c, _ = la.blocks(g)
    Dm, Am, r = _reduce_to_E(c, p, strategy)
    pL = m_of(la.transpose(la.inverse(Dm)))
    pR = m_of(Am)
    g1 = la.mul_many(pL, g, pR)
    _, _, c1, d1 = la.blocks(g1)
    Y = [[la.ZERO] * m for _ in range(m)]
    for i in range(r):
        for j in range(m):
            Y[i][j] = -d1[i][j]
            Y[j][i] = -d1[i][j]
    nY = n_of(la.mat(Y))
    g2 = la.mul(g1, nY)
    d2 = la.blocks(g2)[3]
    Z = [list(row) for row in la.identity(m)]
    for i in range(r, m):
        for j in range(r, m):
            Z[i][j] = d2[j][i]
    mZ = m_of(la.mat(Z))
    g3 = la.mul(g2, mZ)
    S = tuple(range(1, r + 1))
    w = omega_S(S, m)
    q1 = la.mul(g3, inverse(w))
    if not in_P(q1):
        raise ArithmeticError("Bruhat reduction did not reach the parabolic")
    P1 = la.mul(inverse(pL), q1)
    P2 = la.mul_many(inverse(mZ), inverse(nY), inverse(pR))
    xdet = la.det(la.blocks(P1)[3]) * la.det(la.blocks(P2)[3])
    return BruhatDecomp(P1, S, P2, square_class(xdet, p), r)


def x_invariant(g: Matrix, p: int, strategy: str = "min_valuation") -> SquareClass:
    return bruhat_decompose(g, p, strategy).x


def j_invariant(g: Matrix, p: int) -> int:
    return bruhat_decompose(g, p).j


# ---------------------------------------------------------------------------
# Leray invariant and t


@dataclass(frozen=True)
class LerayData:
    form: DiagQuadForm
    l: int


def leray_gram(g1: Matrix, g2: Matrix) -> Matrix:
    """Gram matrix of Q(x) = <x_1, x_3> on l2 cap (l1 + l3) (radical included).

    l1 = X*, l2 = X* g2^{-1}, l3 = X* g1, and x = x_1 + x_3 with x_i in l_i.
    """
    m = size(g1)
    L1 = tuple(la.identity(2 * m)[m:])
    L2 = tuple(inverse(g2)[m:])
    L3 = tuple(g1[m:])
    ker = la.left_kernel(la.vstack(L2, L1, L3))
    x1s, x3s = [], []
    for vec in ker:
        beta = vec[m:2 * m]
        gam = vec[2 * m:]
        x1s.append(tuple(-t for t in la.row_times(beta, L1)))
        x3s.append(tuple(-t for t in la.row_times(gam, L3)))
    n = len(ker)
    return tuple(tuple(form(x1s[i], x3s[j]) for j in range(n)) for i in range(n))


@lru_cache(maxsize=200000)
def leray_q(g1: Matrix, g2: Matrix, p: int, strategy: str = "min_valuation") -> LerayData:
    G = leray_gram(g1, g2)
    Q = diagonalize(G, p, strategy)
    return LerayData(Q, Q.dim)


def t_invariant(g1: Matrix, g2: Matrix, p: int) -> int:
    s1 = bruhat_decompose(g1, p).j
    s2 = bruhat_decompose(g2, p).j
    s3 = bruhat_decompose(la.mul(g1, g2), p).j
    l = leray_q(g1, g2, p).l
    twice = s1 + s2 - s3 - l
    if twice % 2:
        raise NonIntegerT(f"odd value {twice} for 2t")
    return twice // 2


# ---------------------------------------------------------------------------
# random elements


def _random_symmetric(rng: random.Random, m: int) -> Matrix:
    B = [[0] * m for _ in range(m)]
    for i in range(m):
        for j in range(i, m):
            B[i][j] = B[j][i] = rng.randint(-3, 3)
    return la.mat(B)


def _random_invertible(rng: random.Random, m: int, p: int) -> Matrix:
    while True:
        A = la.mat([[rng.randint(-3, 3) for _ in range(m)] for _ in range(m)])
        d = la.det(A)
        if d != 0 and abs(d) <= 9:
            break
    if rng.random() < 0.4:
        A = la.mul(A, la.diag([Fraction(p) ** rng.randint(-1, 1) for _ in range(m)]))
    return A


def random_sp(rng: random.Random, m: int, word_len: int = 6, p: int = 3) -> Matrix:
    """Random word in n(b), m(a) and omega_S; all entries exact."""
    g = la.identity(2 * m)
    for _ in range(word_len):
        kind = rng.randrange(3)
        if kind == 0:
            h = n_of(_random_symmetric(rng, m))
        elif kind == 1:
            h = m_of(_random_invertible(rng, m, p))
        else:
            S = [i for i in range(1, m + 1) if rng.random() < 0.5] or [rng.randint(1, m)]
            h = omega_S(S, m)
        g = la.mul(g, h)
    return g


def random_sl2(rng: random.Random, p: int, allow_zero_c: bool = True) -> Matrix:
    """Random element of SL_2(Q) with small height and assorted valuations."""
    def rnd():
        x = Fraction(rng.choice([1, 2, 3, 4, 5, 6, 7, 10, 11, 12])) * rng.choice([1, -1])
        return x * Fraction(p) ** rng.randint(-2, 2)

    if allow_zero_c and rng.random() < 0.3:
        a = rnd()
        b = rng.choice([Fraction(0), rnd()])
        return la.mat([[a, b], [0, 1 / a]])
    c = rnd()
    a = rng.choice([Fraction(0), rnd()])
    d = rng.choice([Fraction(0), rnd()])
    # b from ad - bc = 1
    b = (a * d - 1) / c
    return la.mat([[a, b], [c, d]])

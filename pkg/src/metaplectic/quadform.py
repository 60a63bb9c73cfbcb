"""Quadratic forms over Q_p and Weil indices.

The additive character is psi(x) = exp(2 pi i {x}_p), of conductor Z_p; the
twist psi^b is x -> psi(b x).  Weil indices are returned as ``Mu8`` values.
The constant attached to an odd-valuation argument is read off a numeric
Gauss sum once per prime and snapped to the nearest eighth root of unity.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .padic import (
    Mu8,
    PadicNumber,
    PrecisionExhausted,
    SquareClass,
    ZeroArgument,
    hilbert_symbol,
    square_class,
    unit_residue,
    valuation,
)


@dataclass(frozen=True)
class DiagQuadForm:
    """Diagonal form <a_1, ..., a_l> with nonzero coefficients."""

    coeffs: tuple
    p: int

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def scale(self, c) -> "DiagQuadForm":
        return DiagQuadForm(tuple(a * c for a in self.coeffs), self.p)


@dataclass(frozen=True)
class PsiCharacter:
    """The character psi^twist."""

    twist: object = Fraction(1)

    def __post_init__(self):
        if self.twist == 0:
            raise ZeroArgument("psi^0 is trivial")


STANDARD_PSI = PsiCharacter(Fraction(1))
HALF_PSI = PsiCharacter(Fraction(1, 2))


def _is_zero(x) -> bool:
    if isinstance(x, PadicNumber):
        return x.is_zero()
    return x == 0


def diagonalize(G: Sequence[Sequence], p: int, strategy: str = "min_valuation") -> DiagQuadForm:
    """Diagonalize a symmetric matrix by congruence, discarding the radical.

    ``strategy`` selects the pivot rule: ``min_valuation`` picks the diagonal
    entry of least valuation and splits hyperbolic pairs with e_i + e_j;
    ``last`` picks the last nonzero diagonal entry and uses e_i - e_j.
    """
    A = [[Fraction(x) if isinstance(x, int) else x for x in row] for row in G]
    n = len(A)
    for i in range(n):
        for j in range(i):
            if A[i][j] != A[j][i]:
                raise ValueError("Gram matrix is not symmetric")
    idx = list(range(n))
    coeffs = []
    while idx:
        diag = [i for i in idx if not _is_zero(A[i][i])]
        if not diag:
            pair = next(((i, j) for i in idx for j in idx if i < j and not _is_zero(A[i][j])), None)
            if pair is None:
                break
            i, j = pair
            sign = 1 if strategy == "min_valuation" else -1
            # replace basis vector e_i by e_i + sign * e_j
            for r in range(n):
                A[i][r] = A[i][r] + sign * A[j][r]
            for r in range(n):
                A[r][i] = A[r][i] + sign * A[r][j]
            diag = [i]
        if strategy == "min_valuation":
            piv = min(diag, key=lambda i: valuation(A[i][i], p))
        elif strategy == "last":
            piv = diag[-1]
        else:
            raise ValueError(f"unknown pivot strategy {strategy!r}")
        a = A[piv][piv]
        coeffs.append(a)
        rest = [i for i in idx if i != piv]
        for i in rest:
            f = A[i][piv] / a
            if _is_zero(f):
                continue
            for j in rest:
                A[i][j] = A[i][j] - f * A[piv][j]
        for i in rest:
            A[i][piv] = A[piv][i] = 0 * a
        idx = rest
    return DiagQuadForm(tuple(coeffs), p)


def hasse(Q: DiagQuadForm) -> int:
    """Product of (a_i, a_j) over i < j."""
    s = 1
    c = Q.coeffs
    for i in range(len(c)):
        for j in range(i + 1, len(c)):
            s *= hilbert_symbol(c[i], c[j], Q.p)
    return s


def det_class(Q: DiagQuadForm) -> SquareClass:
    cls = SquareClass(Q.p, 0, 1)
    for a in Q.coeffs:
        cls = cls * square_class(a, Q.p)
    return cls


# ---------------------------------------------------------------------------
# Weil indices


def gauss_sum_oracle(a, p: int) -> complex:
    """Normalized integral of psi(a x^2) over a large lattice, numerically.

    With a = u p^v and x = y / p^n, psi(a x^2) only depends on y modulo
    p^s, s = 2n - v; n is taken minimal with s >= 2.
    """
    v = valuation(a, p)
    u = unit_residue(a, p)
    n = max(0, -(-(v + 2) // 2))
    s = 2 * n - v
    mod = p ** s
    total = 0j
    for y in range(mod):
        total += cmath.exp(2j * cmath.pi * ((u * y * y) % mod) / mod)
    return total / abs(total)


def snap_mu8(z: complex, tol: float = 1e-9) -> Mu8:
    best = min(range(8), key=lambda e: abs(z - cmath.exp(2j * cmath.pi * e / 8)))
    if abs(z - cmath.exp(2j * cmath.pi * best / 8)) > tol:
        raise ValueError(f"{z} is not an eighth root of unity")
    return Mu8(best)


@lru_cache(maxsize=None)
def kappa(p: int) -> Mu8:
    """Normalized quadratic Gauss sum of F_p, calibrated numerically."""
    z = sum(cmath.exp(2j * cmath.pi * (x * x % p) / p) for x in range(p)) / p ** 0.5
    return snap_mu8(z)


def gamma_psi(a, chi: PsiCharacter = STANDARD_PSI, p: int | None = None) -> Mu8:
    """Weil index of v -> a v^2 with respect to psi^twist."""
    if p is None:
        p = a.p
    if _is_zero(a):
        raise ZeroArgument("gamma_psi of zero")
    b = a * chi.twist
    v = valuation(b, p)
    if v % 2 == 0:
        return Mu8(0)
    e = kappa(p)
    if pow(unit_residue(b, p), (p - 1) // 2, p) != 1:
        e = e * Mu8(4)
    return e


def gamma_psi_class(cls: SquareClass, chi: PsiCharacter = STANDARD_PSI) -> Mu8:
    return gamma_psi(cls.representative(), chi, cls.p)


def gamma_norm(a, chi: PsiCharacter = STANDARD_PSI, p: int | None = None) -> Mu8:
    """gamma(a, psi) = gamma_psi(a) / gamma_psi(1)."""
    if p is None:
        p = a.p
    return gamma_psi(a, chi, p) / gamma_psi(Fraction(1), chi, p)


def gamma_form(Q: DiagQuadForm, chi: PsiCharacter = STANDARD_PSI) -> Mu8:
    out = Mu8(0)
    for a in Q.coeffs:
        out = out * gamma_psi(a, chi, Q.p)
    return out


__all__ = [
    "DiagQuadForm",
    "PsiCharacter",
    "STANDARD_PSI",
    "HALF_PSI",
    "PrecisionExhausted",
    "diagonalize",
    "hasse",
    "det_class",
    "gauss_sum_oracle",
    "snap_mu8",
    "kappa",
    "gamma_psi",
    "gamma_psi_class",
    "gamma_norm",
    "gamma_form",
]

"""Extended groups over GSp(W) and their covering cocycles.

For p = 3 mod 4 (case 3) the group F~x is generated inside GSp(W) by the
section iota of F^x; each element is a scalar times one of the four class
representatives kappa(1) = I, kappa(-1) = diag(I, -I), kappa(p) and
kappa(-p).  D = F~x cap Sp(W) = {+-I}.

For p = 1 mod 4 (case 1) everything lives in GSp~(W), the sign extension
of GSp(W) pulled back along the similitude factor, whose elements are pairs
(matrix, eps).  The group F^~x is generated by iota(F~x) and
D = F^~x cap Sp(W) is infinite cyclic.  Modulo F~x_+ D^2 it becomes the
dihedral group D4 = <a, b>, a the image of iota(z1 p), b that of iota(z1).

Matrix entries stay exact (rationals, or elements of Q(z1) in case 1).
Section values that are not exact (square roots of non-square principal
units, odd-order roots of unity) come back as ``PadicNumber`` entries and
are only used outside the exact identity checks.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

from . import linalg as la
from .barthel import NotPlusMinusOne, RouteMismatch, nu, nu2
from .linalg import Matrix
from .padic import (
    Cyclo,
    Mu8,
    NotASquareInDomain,
    PadicNumber,
    SquareClass,
    WrongResidueCase,
    c_sqrt_exponents,
    decompose,
    get_context,
    hilbert_symbol,
    sqrt_canonical,
    sqrt_f2_exponent,
    sqrt_u1,
    square_class,
    teichmuller,
    unit_residue,
    valuation,
    zeta1_exponent,
    zeta_exponent,
)
from .quadform import HALF_PSI, STANDARD_PSI, gamma_norm, gamma_psi
from .rao import c_pm, c_pr, m_norm
from .symplectic import bruhat_decompose, is_symplectic, random_sp, similitude

HALF = Fraction(1, 2)
CLASS_NAMES_CASE3 = ("1", "-1", "p", "-p")
CLASS_NAMES_CASE1 = ("1", "z1", "p", "z1*p")


class DomainError(ValueError):
    pass


class NotInGroup(ValueError):
    pass


class FeasibleUnexpectedly(AssertionError):
    pass


class TagMismatch(ValueError):
    pass


def case_of(p: int) -> int:
    return get_context(p).case


def class_names(p: int) -> tuple:
    return CLASS_NAMES_CASE1 if case_of(p) == 1 else CLASS_NAMES_CASE3


def _entry(x):
    """Unwrap exact p-adic numbers into plain matrix entries."""
    if isinstance(x, PadicNumber) and x.is_exact:
        return x.exact
    return x


def _pow_matrix(M: Matrix, n: int) -> Matrix:
    if n < 0:
        M, n = la.inverse(M), -n
    out = la.identity(len(M))
    for _ in range(n):
        out = la.mul(out, M)
    return out


@lru_cache(maxsize=100000)
def _inverse(M: Matrix) -> Matrix:
    return la.inverse(M)


@lru_cache(maxsize=200000)
def conj_by(g: Matrix, Y: Matrix) -> Matrix:
    """g^y = y^{-1} g y."""
    return la.mul_many(_inverse(Y), g, Y)


# ---------------------------------------------------------------------------
# scalar square roots and the class section on F^x


def sqrt_square(a2, p: int):
    """The fixed square root of a square: f^2 by table, U_1 by Hensel, p^2 -> -p."""
    ctx = get_context(p)
    e, u, v = decompose(a2, ctx)
    if v % 2 or e % 2:
        raise NotASquareInDomain("not a square")
    f = sqrt_canonical(teichmuller(pow(ctx.generator, e, p), ctx), "f2", ctx)
    r = f * sqrt_u1(u, ctx) * PadicNumber(p, exact=Fraction(-p) ** (v // 2))
    return _entry(r)


def plus_sign(s, p: int) -> int:
    """s / sqrt(s^2), read off residues."""
    ctx = get_context(p)
    e = zeta_exponent(s, ctx)
    w = valuation(s, p)
    i, j = sqrt_f2_exponent((2 * e) % (p - 1), ctx)
    root_res = pow(ctx.generator, (ctx.alpha * i + ctx.beta * j) % (p - 1), p)
    if (i + w) % 2:
        root_res = -root_res % p
    q = unit_residue(s, p) * pow(root_res, -1, p) % p
    if q == 1:
        return 1
    if q == p - 1:
        return -1
    raise ArithmeticError("s / sqrt(s^2) is not a sign")


def kappa_scalar(name: str, p: int):
    """Representative of a square class in F^x (case 1 section on F^x/F^x2)."""
    return SquareClass.from_name(name, p).representative()


def class_name(a, p: int) -> str:
    return square_class(a, p).name


def c_prime_case1(s: str, t: str, p: int):
    """kappa(s) kappa(t) = c'(s, t) kappa(st) in F^x."""
    prod = kappa_scalar(s, p) * kappa_scalar(t, p)
    return _entry(prod / kappa_scalar(class_name(prod, p), p))


def _c_sqrt_squares(x, y, p: int) -> int:
    """c_sqrt on F^x2 through the f^2 components."""
    ctx = get_context(p)
    return c_sqrt_exponents(zeta_exponent(x, ctx), zeta_exponent(y, ctx), ctx)


def c_triple(l1, l2, p: int) -> int:
    """The sign cocycle on F^x: c_sqrt(a1^2, a2^2) c_sqrt(a1^2 a2^2, c'(t1, t2))
    for l_i = a_i^2 kappa(t_i).  Identically 1 when p = 3 mod 4."""
    if case_of(p) == 3:
        return 1
    s, t = class_name(l1, p), class_name(l2, p)
    sq1 = l1 / kappa_scalar(s, p)
    sq2 = l2 / kappa_scalar(t, p)
    return _c_sqrt_squares(sq1, sq2, p) * _c_sqrt_squares(sq1 * sq2, c_prime_case1(s, t, p), p)


def c_triple_closed(l1, l2, p: int) -> int:
    """Closed form through the z1-exponents e = 2i + l of the two arguments."""
    ctx = get_context(p)
    half = 1 << (ctx.k - 1)
    e1, e2 = zeta1_exponent(l1, ctx), zeta1_exponent(l2, ctx)
    i1, b1 = divmod(e1, 2)
    i2, b2 = divmod(e2, 2)
    v = -1 if i1 + i2 >= half else 1
    if b1 and b2 and ((i1 + i2) % half) + 1 >= half:
        v = -v
    return v


# c'' on classes, valued in F~x2 = {[x, eps]} with [x, e][y, e'] = [xy, c_sqrt(x, y) e e']


def square_cover_mul(x: tuple, y: tuple, p: int) -> tuple:
    return (_entry(x[0] * y[0]), _c_sqrt_squares(x[0], y[0], p) * x[1] * y[1])


def c_double_prime(s: str, t: str, p: int) -> tuple:
    return (c_prime_case1(s, t, p), 1)


def c_double_prime_check(p: int) -> int:
    """Number of class triples violating the cocycle identity for c''."""
    names = CLASS_NAMES_CASE1
    bad = 0
    for s in names:
        for t in names:
            for u in names:
                st = class_name(kappa_scalar(s, p) * kappa_scalar(t, p), p)
                tu = class_name(kappa_scalar(t, p) * kappa_scalar(u, p), p)
                lhs = square_cover_mul(c_double_prime(s, t, p), c_double_prime(st, u, p), p)
                rhs = square_cover_mul(c_double_prime(s, tu, p), c_double_prime(t, u, p), p)
                bad += lhs != rhs
    return bad


# ---------------------------------------------------------------------------
# elements of F~x (case 3) and of GSp~(W) (case 1)


@dataclass(frozen=True)
class FtildeElement:
    """Element of F~x (case 3, eps = 1) or of GSp~(W) (case 1).

    ``word`` records the iota-generators it was built from; equality uses
    only the matrix and the sign.
    """

    matrix: Matrix
    eps: int
    p: int
    word: tuple = field(default=(), compare=False, hash=False)

    @cached_property
    def lam(self):
        return similitude(self.matrix)

    @property
    def m(self) -> int:
        return len(self.matrix) // 2

    def __mul__(self, other: "FtildeElement") -> "FtildeElement":
        eps = c_triple(self.lam, other.lam, self.p) * self.eps * other.eps
        return FtildeElement(la.mul(self.matrix, other.matrix), eps, self.p, self.word + other.word)

    def inverse(self) -> "FtildeElement":
        lam = self.lam
        eps = c_triple(lam, 1 / lam, self.p) * self.eps
        return FtildeElement(_inverse(self.matrix), eps, self.p, tuple(("inv", w) for w in reversed(self.word)))

    def __pow__(self, n: int) -> "FtildeElement":
        base = self if n >= 0 else self.inverse()
        out = identity_element(self.p, self.m)
        for _ in range(abs(n)):
            out = out * base
        return out

    def is_symplectic(self) -> bool:
        return self.eps == 1 and is_symplectic(self.matrix)


GSpTildeElement = FtildeElement


def identity_element(p: int, m: int) -> FtildeElement:
    return FtildeElement(la.identity(2 * m), 1, p)


def scalar_element(c, p: int, m: int, eps: int = 1) -> FtildeElement:
    return FtildeElement(la.scalar(_entry(c), 2 * m), eps, p, (("scalar", c, eps),))


def _omega_like(c, m: int) -> Matrix:
    """[[0, -I], [c I, 0]], of similitude c."""
    return la.block(la.zeros(m), la.neg(la.identity(m)), la.scalar(c, m), la.zeros(m))


def iota_rep(name: str, p: int, m: int) -> FtildeElement:
    """iota of the fixed class representatives."""
    if case_of(p) == 3:
        mats = {
            "1": la.identity(2 * m),
            "-1": la.block(la.identity(m), la.zeros(m), la.zeros(m), la.neg(la.identity(m))),
            "p": _omega_like(Fraction(p), m),
            "-p": _omega_like(Fraction(-p), m),
        }
    else:
        z1 = get_context(p).zeta1
        mats = {
            "1": la.identity(2 * m),
            "z1": _omega_like(z1, m),
            "p": _omega_like(Fraction(p), m),
            "z1*p": la.mul(_omega_like(z1, m), _omega_like(Fraction(p), m)),
        }
    if name not in mats:
        raise DomainError(f"unknown class representative {name!r}")
    return FtildeElement(mats[name], 1, p, (("iota", name),))


def iota_f1(e: int, eps: int, p: int, m: int) -> FtildeElement:
    """Case 1 section on f~1: (z1^(2i-1), 1) -> (-z1)^(i-1) [[0,-I],[z1 I,0]],
    (z1^(2i), 1) -> (-z1)^i, (1, eps) -> (eps, eps)."""
    ctx = get_context(p)
    if ctx.case != 1:
        raise WrongResidueCase("f~1 only exists for p = 1 mod 4")
    z1 = ctx.zeta1
    e %= 1 << ctx.k
    if e % 2:
        i = (e + 1) // 2
        M = la.scale((-z1) ** (i - 1) if i > 1 else Fraction(1), _omega_like(z1, m))
    else:
        i = e // 2
        M = la.scalar(_entry((-z1) ** i) if i else Fraction(1), 2 * m)
    return FtildeElement(la.scale(Fraction(eps), M), eps, p, (("iota_f1", e, eps),))


def iota(a, p: int, m: int, eps: int = 1) -> FtildeElement:
    """The section iota on F^x (case 3) or on F~x = {[a, eps]} (case 1)."""
    ctx = get_context(p)
    if a == 0:
        raise DomainError("iota of zero")
    e, u, v = decompose(a, ctx)
    out = identity_element(p, m)
    if ctx.case == 3:
        if eps != 1:
            raise DomainError("no sign component for p = 3 mod 4")
        if e % 2:
            # zeta^e = (-1) zeta^(e - l) with zeta^l = -1
            out = out * iota_rep("-1", p, m)
            e = (e - ctx.l) % (p - 1)
        if e:
            root = sqrt_canonical(teichmuller(pow(ctx.generator, e, p), ctx), "f2", ctx)
            out = out * scalar_element(root, p, m)
    else:
        e1 = e % (1 << ctx.k)
        out = out * iota_f1(e1, eps, p, m)
        # remaining odd-order part zeta2^j: the root of unity zeta^e / z1^e1
        rest = (pow(ctx.generator, e, p) * pow(ctx.zeta1_residue, -e1, p)) % p
        if rest != 1:
            x = teichmuller(rest, ctx)
            out = out * scalar_element(sqrt_canonical(x, "f2", ctx), p, m)
    if u != PadicNumber(p, exact=Fraction(1)):
        out = out * scalar_element(sqrt_u1(u, ctx), p, m)
    if v:
        out = out * iota_rep("p", p, m) ** v
    return FtildeElement(out.matrix, out.eps, p, (("iota", a, eps),))


def plus_element(s, p: int, m: int) -> FtildeElement:
    """The element of F~x_+ = sqrt(F~x2) lying over the scalar s."""
    if case_of(p) == 3:
        return scalar_element(s, p, m)
    return FtildeElement(la.scalar(_entry(s), 2 * m), plus_sign(s, p), p, (("plus", s),))


def in_plus(x: FtildeElement) -> bool:
    a = x.matrix
    s = a[0][0]
    if a != la.scalar(s, len(a)):
        return False
    return case_of(x.p) == 3 or x.eps == plus_sign(s, x.p)


def d_generator(p: int, m: int) -> FtildeElement:
    """Generator of D = F~x cap Sp(W): -I (case 3), diag(z1/p, p/z1) (case 1)."""
    if case_of(p) == 3:
        return FtildeElement(la.scalar(Fraction(-1), 2 * m), 1, p, (("delta",),))
    z1 = get_context(p).zeta1
    top = _entry(z1 / p)
    bottom = _entry(Fraction(p) / z1)
    M = la.diag([top] * m + [bottom] * m)
    return FtildeElement(M, 1, p, (("delta",),))


def lambda_tilde(h: FtildeElement) -> tuple:
    return (h.lam, h.eps)


# ---------------------------------------------------------------------------
# closed forms for nu on the class representatives


def _gamma_or_one(x, p: int) -> Mu8:
    return gamma_psi(x, STANDARD_PSI, p) if x != 0 else Mu8(0)


def nu_sl2_closed(name: str, g: Matrix, p: int) -> Mu8:
    """nu(iota(rep), g) for g in SL_2 and p = 3 mod 4, by cases on c.

    For lambda = +-p and c != 0 the last factor is gamma_psi(cd / (2 lambda)).
    """
    (a, b), (c, d) = g
    if name == "1":
        return Mu8(0)
    lam = Fraction(kappa_scalar(name, p))
    odd = name != "-1"
    if c == 0:
        v = Mu8.sign(hilbert_symbol(a, lam, p))
        return v * _gamma_or_one(HALF * a * b * lam, p) if odd else v
    v = Mu8.sign(hilbert_symbol(c, lam, p)) * gamma_norm(lam, HALF_PSI, p).inverse()
    if odd:
        v = v * _gamma_or_one(HALF * b * d * lam, p) * _gamma_or_one(HALF * c * d / lam, p)
    return v


def nu_omega_closed(y: FtildeElement, S: tuple) -> Mu8:
    """nu(y, omega_S) = gamma(lambda_y, psi^(1/2))^(-|S|)."""
    return gamma_norm(y.lam, HALF_PSI, y.p) ** (-len(S))


def nu_levi_closed(y: FtildeElement, A: Matrix) -> Mu8:
    """nu(y, m(A)) = (det A, lambda_y)."""
    return Mu8.sign(hilbert_symbol(la.det(A), y.lam, y.p))


def nu_diag_closed(g: Matrix, p: int, m: int) -> Mu8:
    """nu(iota(z1 p), g) = (det a1 a2, z1 p) gamma(z1 p, psi^(1/2))^(-|S|)."""
    y = iota_rep("z1*p", p, m)
    dec = bruhat_decompose(g, p)
    det_a = la.det(la.blocks(dec.p1)[0]) * la.det(la.blocks(dec.p2)[0])
    return Mu8.sign(hilbert_symbol(det_a, y.lam, p)) * gamma_norm(y.lam, HALF_PSI, p) ** (-dec.j)


# ---------------------------------------------------------------------------
# the D4 quotient (case 1)


@dataclass(frozen=True)
class D4Element:
    """b^refl a^rot in D4 = <a, b | a^4 = b^2 = 1, ba = a^{-1}b>."""

    rot: int = 0
    refl: int = 0

    def __post_init__(self):
        object.__setattr__(self, "rot", self.rot % 4)
        object.__setattr__(self, "refl", self.refl % 2)

    def __mul__(self, other: "D4Element") -> "D4Element":
        # a^r b = b a^{-r}
        sign = -1 if other.refl else 1
        return D4Element(sign * self.rot + other.rot, self.refl + other.refl)

    def inverse(self) -> "D4Element":
        if self.refl:
            return self
        return D4Element(-self.rot, 0)

    def __repr__(self):
        parts = (["b"] if self.refl else []) + ([f"a^{self.rot}"] if self.rot else [])
        return "".join(parts) or "1"

    @staticmethod
    def all() -> list["D4Element"]:
        return [D4Element(r, s) for s in (0, 1) for r in range(4)]


D4_A = D4Element(1, 0)
D4_B = D4Element(0, 1)
_REP_IMAGE = {"1": D4Element(), "z1": D4_B, "p": D4_B * D4_A, "z1*p": D4_A}


def c_d4(u: D4Element, v: D4Element) -> Mu8:
    """1 on (x, a^k); i^l on (a^l, b a^k) and (b a^l, b a^k)."""
    if not v.refl:
        return Mu8(0)
    return Mu8(2 * u.rot)


def c_d4_check() -> int:
    bad = 0
    els = D4Element.all()
    for x in els:
        for y in els:
            for z in els:
                bad += c_d4(x, y) * c_d4(x * y, z) != c_d4(x, y * z) * c_d4(y, z)
    return bad


@dataclass(frozen=True)
class D4Decomposition:
    power: int
    plus: FtildeElement
    rep: str
    image: D4Element


def d4_decompose(x: FtildeElement) -> D4Decomposition:
    """x = delta^n t iota(rep) with t in F~x_+."""
    p, m = x.p, x.m
    if case_of(p) != 1:
        raise WrongResidueCase("the D4 quotient is a p = 1 mod 4 construction")
    rep = class_name(x.lam, p)
    r = x * iota_rep(rep, p, m).inverse()
    R = r.matrix
    alpha, beta = R[0][0], R[m][m]
    if R != la.diag([alpha] * m + [beta] * m):
        raise NotInGroup("not in F^~x: residual part is not block scalar")
    ratio = alpha / beta
    v = valuation(ratio, p)
    if v % 2:
        raise NotInGroup("residual ratio has odd valuation")
    n = -v // 2
    delta = d_generator(p, m)
    delta_ratio = delta.matrix[0][0] / delta.matrix[m][m]
    if ratio != (delta_ratio ** n if n else 1):
        raise NotInGroup("residual ratio is not a power of the D ratio")
    t = delta ** (-n) * r
    if not in_plus(t):
        raise NotInGroup("central part does not lie in F~x_+")
    return D4Decomposition(n, t, rep, D4Element(2 * n, 0) * _REP_IMAGE[rep])


def quotient_to_d4(x: FtildeElement) -> D4Element:
    return d4_decompose(x).image


def c_hat(y1: FtildeElement, y2: FtildeElement, m: int) -> Mu8:
    """The cocycle on F^~x pulled back from D4; trivial for even m."""
    if m % 2 == 0 or case_of(y1.p) == 3:
        return Mu8(0)
    return c_d4(quotient_to_d4(y1), quotient_to_d4(y2))


# infeasibility of a sign-valued extension to D4


@dataclass(frozen=True)
class InfeasibilityCertificate:
    """Equations whose sum has zero left side and right side 1 over F_2."""

    equations: tuple
    rank: int
    augmented_rank: int


def _d4_index(x: D4Element) -> int:
    return x.refl * 4 + x.rot


def _d4_equations(constraints: dict) -> list[tuple[int, int, str]]:
    els = D4Element.all()
    eqs = []

    def var(x, y):
        return 1 << (_d4_index(x) * 8 + _d4_index(y))

    for x in els:
        for y in els:
            for z in els:
                row = var(x, y) ^ var(x * y, z) ^ var(x, y * z) ^ var(y, z)
                eqs.append((row, 0, f"cocycle({x},{y},{z})"))
    for (x, y), val in constraints.items():
        eqs.append((var(x, y), val, f"c({x},{y})={'-1' if val else '1'}"))
    return eqs


def solve_f2(eqs: list[tuple[int, int, str]]):
    """Gaussian elimination over F_2 with bitmask rows.

    Returns (feasible, rank, augmented_rank, witness) where the witness lists
    the labels of the equations summing to 0 = 1.
    """
    pivots: dict[int, tuple[int, int, int]] = {}
    rank = 0
    witness = None
    for idx, (row, rhs, _) in enumerate(eqs):
        combo = 1 << idx
        while row:
            top = row.bit_length() - 1
            if top not in pivots:
                pivots[top] = (row, rhs, combo)
                rank += 1
                break
            prow, prhs, pcombo = pivots[top]
            row ^= prow
            rhs ^= prhs
            combo ^= pcombo
        else:
            if rhs and witness is None:
                witness = [eqs[i][2] for i in range(len(eqs)) if combo >> i & 1]
    aug = rank + (1 if witness is not None else 0)
    return witness is None, rank, aug, witness


def d4_sign_constraints(kind: str = "lemma") -> dict:
    """Values forced on <a^2> x D4 and D4 x <a^2> (1 encodes -1)."""
    a2 = D4Element(2, 0)
    out = {}
    for y in D4Element.all():
        if kind == "lemma":
            out[(a2, y)] = y.refl
        else:
            out[(a2, y)] = 0
        out[(y, a2)] = 0
    return out


def no_mu2_extension() -> InfeasibilityCertificate:
    feasible, rank, aug, witness = solve_f2(_d4_equations(d4_sign_constraints("lemma")))
    if feasible:
        raise FeasibleUnexpectedly("a sign-valued extension exists")
    return InfeasibilityCertificate(tuple(witness), rank, aug)


def d4_system_feasible(kind: str) -> bool:
    return solve_f2(_d4_equations(d4_sign_constraints(kind)))[0]


# ---------------------------------------------------------------------------
# F~x |x Sp(W) and its cocycles


@dataclass(frozen=True)
class ExtSemidirect:
    """[y, g] with y in F~x (F^~x in case 1) and g in Sp(W)."""

    y: FtildeElement
    g: Matrix

    def __mul__(self, other: "ExtSemidirect") -> "ExtSemidirect":
        return ExtSemidirect(self.y * other.y, la.mul(conj_by(self.g, other.y.matrix), other.g))

    def image(self) -> FtildeElement:
        """The element y g of GSp(W) (resp. GSp~(W))."""
        return FtildeElement(la.mul(self.y.matrix, self.g), self.y.eps, self.y.p)

    @property
    def p(self) -> int:
        return self.y.p


def nu_ext(y: FtildeElement, g: Matrix) -> Mu8:
    return nu(y.matrix, g, y.p)


def c_tilde_M(e1: ExtSemidirect, e2: ExtSemidirect) -> Mu8:
    p = e1.p
    return nu(e2.y.matrix, e1.g, p) * c_pr(conj_by(e1.g, e2.y.matrix), e2.g, p)


def _m_ratio(e1: ExtSemidirect, e2: ExtSemidirect) -> Mu8:
    p = e1.p
    g1y = conj_by(e1.g, e2.y.matrix)
    return m_norm(la.mul(g1y, e2.g), p).inverse() * m_norm(e1.g, p) * m_norm(e2.g, p)


def c_bar_M(e1: ExtSemidirect, e2: ExtSemidirect) -> Mu8:
    """Two-fold cocycle, evaluated through nu_2 and through the m-relation."""
    p = e1.p
    g1y = conj_by(e1.g, e2.y.matrix)
    direct = nu2(e2.y.matrix, e1.g, p) * c_pm(g1y, e2.g, p)
    relation = c_tilde_M(e1, e2) * _m_ratio(e1, e2)
    if direct != relation:
        raise RouteMismatch(f"two-fold cocycle routes disagree: {direct} vs {relation}")
    if not direct.in_mu2():
        raise NotPlusMinusOne(f"two-fold cocycle value {direct} is not a sign")
    return direct


def modified_cocycle(e1: ExtSemidirect, e2: ExtSemidirect, tag: str) -> Mu8:
    """C_tilde_M or C_bar_M divided by the D4 cocycle of (y1, y2)."""
    m = e1.y.m
    if tag in ("8-fold", "C_ttilde_M"):
        base = c_tilde_M(e1, e2)
    elif tag in ("2-fold", "C_bbar_M"):
        base = c_bar_M(e1, e2)
    else:
        raise TagMismatch(f"unknown modification tag {tag!r}")
    return base / c_hat(e1.y, e2.y, m)


def c_ttilde_M(e1: ExtSemidirect, e2: ExtSemidirect) -> Mu8:
    return modified_cocycle(e1, e2, "8-fold")


def c_bbar_M(e1: ExtSemidirect, e2: ExtSemidirect) -> Mu8:
    return modified_cocycle(e1, e2, "2-fold")


def delta_element(n: int, p: int, m: int) -> ExtSemidirect:
    """[delta^n, delta^-n] in Delta_D."""
    d = d_generator(p, m) ** n
    return ExtSemidirect(d, _inverse(d.matrix))


# GSp~(W) and the cocycles on it (case 1)


@lru_cache(maxsize=100000)
def section(h: FtildeElement) -> ExtSemidirect:
    """h = y g with y = iota(lambda~_h) and g in Sp(W)."""
    y = iota(h.lam, h.p, h.m, h.eps)
    g = y.inverse() * h
    if not g.is_symplectic():
        raise NotInGroup("y^-1 h is not in Sp(W)")
    return ExtSemidirect(y, g.matrix)


def c_M(h1: FtildeElement, h2: FtildeElement) -> Mu8:
    return c_ttilde_M(section(h1), section(h2))


def section_defect(h1: FtildeElement, h2: FtildeElement) -> ExtSemidirect:
    """d in Delta_D with s(h1) s(h2) = d s(h1 h2)."""
    prod = section(h1) * section(h2)
    s12 = section(h1 * h2)
    yd = prod.y * s12.y.inverse()
    d = ExtSemidirect(yd, _inverse(yd.matrix))
    if not d.y.is_symplectic() or d * s12 != prod:
        raise NotInGroup("section defect is not in Delta_D")
    return d


def c_bar(h1: FtildeElement, h2: FtildeElement) -> Mu8:
    """Two-fold cocycle on GSp~(W) through the iota section.

    The value of the two-fold cocycle on the section pair is divided by its
    value on (d, s(h1 h2)), where d in Delta_D is the section defect; that
    factor is (t^m, x(g_12)) and is trivial for even m.  Both the direct
    value and the route through C_M are computed and compared.
    """
    s1, s2 = section(h1), section(h2)
    s12 = section(h1 * h2)
    d = section_defect(h1, h2)
    correction = c_bbar_M(d, s12)
    t = d.y.matrix[0][0]
    closed = Mu8.sign(hilbert_symbol(t ** s12.y.m, bruhat_decompose(s12.g, h1.p).x.representative(), h1.p))
    if correction != closed:
        raise RouteMismatch(f"defect correction disagrees with its closed form: {correction} vs {closed}")
    direct = c_bbar_M(s1, s2) / correction
    relation = c_M(h1, h2) * _m_ratio(s1, s2) / closed
    if direct != relation:
        raise RouteMismatch(f"two-fold cocycle routes disagree: {direct} vs {relation}")
    return direct


def c_bar_uncorrected(h1: FtildeElement, h2: FtildeElement) -> Mu8:
    """The two-fold cocycle on the section pair, without the defect factor."""
    return c_bbar_M(section(h1), section(h2))


SEMIDIRECT_COCYCLES = {
    "C_tilde_M": c_tilde_M,
    "C_bar_M": c_bar_M,
    "C_ttilde_M": c_ttilde_M,
    "C_bbar_M": c_bbar_M,
}
GSP_COCYCLES = {"C_M": c_M, "C_bar": c_bar}
CASE1_ONLY = ("C_ttilde_M", "C_bbar_M", "C_M", "C_bar")


# ---------------------------------------------------------------------------
# covering elements


@dataclass(frozen=True)
class CoveringElement:
    """([y, g], eps) with multiplication twisted by the cocycle named in ``tag``.

    For the tags C_M and C_bar the pair (y, g) stands for y g in GSp~(W).
    """

    y: FtildeElement
    g: Matrix
    eps: Mu8
    tag: str

    def base(self) -> ExtSemidirect:
        return ExtSemidirect(self.y, self.g)


def _check_tags(x: CoveringElement, z: CoveringElement) -> None:
    if x.tag != z.tag:
        raise TagMismatch(f"cannot multiply {x.tag} by {z.tag}")


def cover_multiply(x: CoveringElement, z: CoveringElement) -> CoveringElement:
    _check_tags(x, z)
    tag = x.tag
    if tag in SEMIDIRECT_COCYCLES:
        e1, e2 = x.base(), z.base()
        prod = e1 * e2
        return CoveringElement(prod.y, prod.g, SEMIDIRECT_COCYCLES[tag](e1, e2) * x.eps * z.eps, tag)
    if tag in GSP_COCYCLES:
        h1, h2 = x.base().image(), z.base().image()
        s = section(h1 * h2)
        return CoveringElement(s.y, s.g, GSP_COCYCLES[tag](h1, h2) * x.eps * z.eps, tag)
    raise TagMismatch(f"unknown cocycle tag {tag!r}")


def reduce_pgmp(x: CoveringElement) -> CoveringElement:
    """Canonical representative modulo the central subgroup.

    Case 3: [c kappa, g] -> [kappa, g] (quotient by F^x x 1).
    Case 1: y = delta^n t iota(rep) -> [iota(rep), (delta^n)^iota(rep) g]
    (quotient by Delta_D and F~x_+).
    """
    p, m = x.y.p, x.y.m
    if case_of(p) == 3:
        name = class_name(x.y.lam, p)
        rep = iota_rep(name, p, m)
        scal = x.y.matrix[0][0] / rep.matrix[0][0] if rep.matrix[0][0] != 0 else x.y.matrix[0][m] / rep.matrix[0][m]
        if x.y.matrix != la.scale(scal, rep.matrix):
            raise NotInGroup("y is not a scalar times a class representative")
        return CoveringElement(rep, x.g, x.eps, x.tag)
    dec = d4_decompose(x.y)
    rep = iota_rep(dec.rep, p, m)
    dn = d_generator(p, m) ** dec.power
    g = la.mul(conj_by(dn.matrix, rep.matrix), x.g)
    return CoveringElement(rep, g, x.eps, x.tag)


PGMP_TAGS = {3: ("C_tilde_M", "C_bar_M"), 1: ("C_M", "C_bar")}


def pgmp_multiply(x: CoveringElement, z: CoveringElement) -> CoveringElement:
    """Product in PGMp (8-fold tags) or its two-fold variant.

    For p = 1 mod 4 the unmodified semidirect cocycles are not trivial on
    Delta_D when m is odd, so only the tags C_M and C_bar are accepted.
    """
    _check_tags(x, z)
    if x.tag not in PGMP_TAGS[case_of(x.y.p)]:
        raise TagMismatch(f"{x.tag} does not descend to the projective group for p = {x.y.p}")
    return reduce_pgmp(cover_multiply(reduce_pgmp(x), reduce_pgmp(z)))


def pgmp_identity(p: int, m: int, tag: str) -> CoveringElement:
    return CoveringElement(identity_element(p, m), la.identity(2 * m), Mu8(0), tag)


def pgmp_class(x: CoveringElement) -> SquareClass:
    return square_class(x.y.lam, x.y.p)


# ---------------------------------------------------------------------------
# centers


@dataclass(frozen=True)
class CenterReport:
    trials: int
    failures: int
    witness_value: Mu8 | None


def commutes(x: ExtSemidirect, z: ExtSemidirect, cocycle) -> bool:
    xz, zx = x * z, z * x
    if xz.y != zx.y or xz.g != zx.g:
        return False
    return cocycle(x, z) == cocycle(z, x)


def center_witness(p: int, m: int) -> Mu8:
    """C_tilde_M([1, -I], [y2, g2]) with lambda_{y2} = p; predicted (p, (-1)^m)."""
    x = ExtSemidirect(identity_element(p, m), la.scalar(Fraction(-1), 2 * m))
    z = ExtSemidirect(iota_rep("p", p, m), la.identity(2 * m))
    return c_tilde_M(x, z) / c_tilde_M(z, x)


def center_check(p: int, m: int, samples: int, rng: random.Random, two_fold: bool = False) -> CenterReport:
    """Claimed central elements against random elements of the semidirect cover.

    Case 3: [c, 1] for c in F^x, plus [c, -1] when m is even (8-fold);
    [c, 1] for the two-fold cover.  Case 1: [t, +-1] for t in F~x_+.
    """
    cocycle = c_bar_M if two_fold else c_tilde_M
    failures = 0
    for _ in range(samples):
        c = random_scalar(rng, p)
        t = scalar_element(c, p, m) if case_of(p) == 3 else plus_element(c, p, m)
        signs = [1]
        if not two_fold and (case_of(p) == 1 or m % 2 == 0):
            signs.append(-1)
        z = random_semidirect(rng, p, m)
        for s in signs:
            x = ExtSemidirect(t, la.scalar(Fraction(s), 2 * m))
            failures += not commutes(x, z, cocycle)
    witness = center_witness(p, m) if case_of(p) == 3 and m % 2 and not two_fold else None
    return CenterReport(samples, failures, witness)


def plus_trivial_check(p: int, m: int, samples: int, rng: random.Random) -> int:
    """Failures of C_M(t, h) = 1 = C_M(h, t) and the same for C_bar, t in F~x_+."""
    require_case(p, "C_M")
    failures = 0
    for _ in range(samples):
        t = plus_element(random_scalar(rng, p), p, m)
        h = random_gsp_tilde(rng, p, m, 3)
        values = (c_M(t, h), c_M(h, t), c_bar(t, h), c_bar(h, t))
        failures += any(v != 1 for v in values)
    return failures


def delta_normal_check(n: int, e2: ExtSemidirect, eps: Mu8) -> bool:
    """([y2, g2], eps)^-1 ([y1, g1], 1) ([y2, g2], eps) = ([y1^y2, g1^y2], 1)
    in the two-fold semidirect cover, for [y1, g1] = [delta^n, delta^-n]."""
    d = delta_element(n, e2.p, e2.y.m)
    y1c = e2.y.inverse() * d.y * e2.y
    conj = CoveringElement(y1c, conj_by(d.g, e2.y.matrix), Mu8(0), "C_bbar_M")
    left = cover_multiply(CoveringElement(d.y, d.g, Mu8(0), "C_bbar_M"), CoveringElement(e2.y, e2.g, eps, "C_bbar_M"))
    right = cover_multiply(CoveringElement(e2.y, e2.g, eps, "C_bbar_M"), conj)
    return left == right


# ---------------------------------------------------------------------------
# sampling


def random_scalar(rng: random.Random, p: int):
    """Random exact scalar whose fixed square root of s^2 is again exact."""
    ctx = get_context(p)
    num = 1 + p * rng.randint(-3, 3)
    den = 1 + p * rng.randint(0, 3)
    s = Fraction(num, den) * Fraction(p) ** rng.randint(-2, 2)
    if num == 0:
        s = Fraction(p)
    s = s * rng.choice([1, -1])
    if ctx.case == 1 and rng.random() < 0.5:
        s = _entry(ctx.zeta1 ** rng.randint(1, (1 << ctx.k) - 1) * s)
    return s


def random_ftilde(rng: random.Random, p: int, m: int) -> FtildeElement:
    """delta^n t kappa with kappa a class representative and t central."""
    name = rng.choice(class_names(p))
    t = plus_element(random_scalar(rng, p), p, m)
    n = rng.randint(-2, 2)
    return d_generator(p, m) ** n * t * iota_rep(name, p, m)


def random_semidirect(rng: random.Random, p: int, m: int, word_len: int = 4) -> ExtSemidirect:
    return ExtSemidirect(random_ftilde(rng, p, m), random_sp(rng, m, word_len, p))


def random_gsp_tilde(rng: random.Random, p: int, m: int, word_len: int = 4) -> FtildeElement:
    return random_semidirect(rng, p, m, word_len).image()


def random_covering(rng: random.Random, p: int, m: int, tag: str, word_len: int = 4) -> CoveringElement:
    e = random_semidirect(rng, p, m, word_len)
    eps = Mu8(rng.randrange(8))
    if tag in ("C_bar_M",):
        eps = Mu8(4 * rng.randrange(2))
    elif tag in ("C_bbar_M", "C_bar"):
        eps = Mu8(2 * rng.randrange(4))
    if tag in GSP_COCYCLES:
        s = section(e.image())
        return CoveringElement(s.y, s.g, eps, tag)
    return CoveringElement(e.y, e.g, eps, tag)


def require_case(p: int, tag: str) -> None:
    if tag in CASE1_ONLY and case_of(p) != 1:
        raise WrongResidueCase(f"{tag} is only defined for p = 1 mod 4")


def delta_d_values(e1: ExtSemidirect, e2: ExtSemidirect, n: int) -> dict:
    """Predicted Delta_D values for [y1, g1] = [delta^n, delta^-n] against e2."""
    p = e2.p
    m = e2.y.m
    d = d_generator(p, m) ** n
    t = d.matrix[0][0]
    tm = t ** m
    lam = e2.y.lam
    dec = bruhat_decompose(e2.g, p)
    det_a = la.det(la.blocks(dec.p1)[0]) * la.det(la.blocks(dec.p2)[0])
    return {
        "tilde_left": Mu8.sign(hilbert_symbol(tm, lam, p)),
        "tilde_right": Mu8(0),
        "bar_left": Mu8.sign(hilbert_symbol(tm, lam, p) * hilbert_symbol(tm, det_a, p)),
        "bar_right": Mu8.sign(hilbert_symbol(tm, det_a, p)),
        "bbar": Mu8.sign(hilbert_symbol(tm, dec.x.representative(), p)),
    }

"""Arithmetic in Q_p for odd p.

Two kinds of values live here.  Group-element matrix entries are exact:
rationals (``fractions.Fraction``) or, when p = 1 mod 4, elements of the
cyclotomic field Q(zeta_{2^k}) (``Cyclo``), which embeds into Q_p by sending
the generator to the Teichmueller lift of order 2^k.  Constants that are not
exact in either field (square roots of units, odd-order roots of unity) are
``PadicNumber`` values with capped relative precision.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Union

import sympy


class PadicError(ArithmeticError):
    pass


class PrecisionExhausted(PadicError):
    pass


class NotAUnit(PadicError):
    pass


class ZeroArgument(PadicError):
    pass


class NotASquareInDomain(PadicError):
    pass


class NotInF2(PadicError):
    pass


class ZeroResidue(PadicError):
    pass


class WrongResidueCase(PadicError):
    pass


DEFAULT_PRECISION = 32


def _v2(n: int) -> int:
    return (n & -n).bit_length() - 1


def _vp_int(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class PrimeContext:
    """Canonical choices attached to an odd prime p.

    The uniformizer is p, zeta is the Teichmueller lift of the smallest
    primitive root, and zeta = zeta1 * zeta2 with zeta1 of order 2^k and
    zeta2 of odd order l.
    """

    p: int
    N: int = DEFAULT_PRECISION
    k: int = field(init=False)
    l: int = field(init=False)
    generator: int = field(init=False)
    alpha: int = field(init=False)
    beta: int = field(init=False)
    _dlog: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        p = self.p
        if p < 3 or p % 2 == 0 or not sympy.isprime(p):
            raise ValueError(f"p must be an odd prime, got {p}")
        if self.N < 2:
            raise ValueError("precision must be at least 2 digits")
        k = _v2(p - 1)
        l = (p - 1) >> k
        g = int(sympy.primitive_root(p))
        # zeta1 = zeta^alpha, zeta2 = zeta^beta with alpha + beta = 1 mod p-1
        two_k = 1 << k
        alpha = l * pow(l, -1, two_k) % (p - 1) if p > 3 else 1
        beta = (1 - alpha) % (p - 1)
        dlog = {}
        x = 1
        for e in range(p - 1):
            dlog[x] = e
            x = x * g % p
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "l", l)
        object.__setattr__(self, "generator", g)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "_dlog", dlog)

    @property
    def case(self) -> int:
        """1 when p = 1 mod 4, 3 when p = 3 mod 4."""
        return 1 if self.p % 4 == 1 else 3

    @property
    def cyclo_degree(self) -> int:
        return 1 << (self.k - 1)

    def dlog(self, residue: int) -> int:
        r = residue % self.p
        if r == 0:
            raise ZeroResidue("zero residue has no discrete logarithm")
        return self._dlog[r]

    @property
    def zeta1_residue(self) -> int:
        return pow(self.generator, self.alpha, self.p)

    def teich_mod(self, residue: int, M: int) -> int:
        pm = self.p ** M
        return pow(residue % self.p, self.p ** (M - 1), pm)

    @property
    def zeta(self) -> "PadicNumber":
        return teichmuller(self.generator, self)

    @property
    def zeta1(self):
        """Exact zeta1: the cyclotomic generator in case 1, -1 in case 3."""
        if self.case == 3:
            return Fraction(-1)
        return Cyclo.gen(self.p)

    @property
    def zeta2(self) -> "PadicNumber":
        return teichmuller(pow(self.generator, self.beta, self.p), self)


_precision = [DEFAULT_PRECISION]


def set_precision(N: int) -> None:
    """Default number of p-adic digits for approximate values."""
    if N < 2:
        raise ValueError("precision must be at least 2 digits")
    _precision[0] = N


@lru_cache(maxsize=None)
def _context(p: int, N: int) -> PrimeContext:
    return PrimeContext(p, N)


def get_context(p: int, N: int | None = None) -> PrimeContext:
    return _context(p, _precision[0] if N is None else N)


# ---------------------------------------------------------------------------
# exact cyclotomic field Q(zeta_{2^k})


class Cyclo:
    """Exact element of Q(zeta) with zeta a primitive 2^k-th root of unity.

    Coefficients are with respect to 1, zeta, ..., zeta^{d-1}, d = 2^{k-1},
    using zeta^d = -1.  Values whose only nonzero coefficient is the constant
    one are demoted to ``Fraction`` by ``make``.
    """

    __slots__ = ("c", "p", "_hash")

    def __init__(self, coeffs, p: int):
        self.c = tuple(x if type(x) is Fraction else Fraction(x) for x in coeffs)
        self.p = p
        self._hash = None

    @staticmethod
    def make(coeffs, p: int):
        coeffs = [x if type(x) is Fraction else Fraction(x) for x in coeffs]
        if not any(coeffs[1:]):
            return coeffs[0]
        return Cyclo(coeffs, p)

    @staticmethod
    def gen(p: int) -> "Cyclo":
        d = get_context(p).cyclo_degree
        if d < 2:
            raise WrongResidueCase("cyclotomic generator needs p = 1 mod 4")
        return Cyclo([0, 1] + [0] * (d - 2), p)

    @staticmethod
    def root_power(e: int, p: int):
        """zeta1^e as an exact value."""
        ctx = get_context(p)
        d = ctx.cyclo_degree
        e %= 2 * d
        sign = 1
        if e >= d:
            e -= d
            sign = -1
        coeffs = [0] * d
        coeffs[e] = sign
        return Cyclo.make(coeffs, p)

    @property
    def degree(self) -> int:
        return len(self.c)

    def _coerce(self, other):
        if isinstance(other, Cyclo):
            if other.p != self.p:
                raise ValueError("mixing cyclotomic values for different primes")
            return other.c
        if isinstance(other, (int, Fraction)):
            return (Fraction(other),) + (Fraction(0),) * (len(self.c) - 1)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Cyclo.make([a + b for a, b in zip(self.c, o)], self.p)

    __radd__ = __add__

    def __bool__(self):
        return any(self.c)

    def __neg__(self):
        return Cyclo([-a for a in self.c], self.p)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Cyclo.make([a - b for a, b in zip(self.c, o)], self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Cyclo.make([b - a for a, b in zip(self.c, o)], self.p)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Fraction(0)
            return Cyclo([a * other for a in self.c], self.p)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = len(self.c)
        out = [Fraction(0)] * d
        for i, a in enumerate(self.c):
            if a == 0:
                continue
            for j, b in enumerate(o):
                if b == 0:
                    continue
                t = i + j
                if t >= d:
                    out[t - d] -= a * b
                else:
                    out[t] += a * b
        return Cyclo.make(out, self.p)

    __rmul__ = __mul__

    def conjugate(self, j: int):
        """Galois conjugate zeta -> zeta^j for odd j."""
        d = len(self.c)
        out = [Fraction(0)] * d
        for i, a in enumerate(self.c):
            e = (i * j) % (2 * d)
            if e >= d:
                out[e - d] -= a
            else:
                out[e] += a
        return Cyclo.make(out, self.p)

    def inverse(self):
        d = len(self.c)
        prod = Fraction(1)
        for j in range(3, 2 * d, 2):
            prod = prod * self.conjugate(j)
        norm = self * prod
        if isinstance(norm, Cyclo):
            raise ArithmeticError("norm did not land in Q")
        if norm == 0:
            raise ZeroDivisionError("inverse of zero")
        return prod * (Fraction(1) / norm)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclo.make([a / other for a in self.c], self.p)
        if isinstance(other, Cyclo):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = Fraction(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Cyclo):
            return self.p == other.p and self.c == other.c
        if isinstance(other, (int, Fraction)):
            return all(x == 0 for x in self.c[1:]) and self.c[0] == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("cyclo", self.p, self.c))
        return self._hash

    def __repr__(self):
        terms = []
        for i, a in enumerate(self.c):
            if a == 0:
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if i == 0:
                terms.append(str(a))
            elif a == 1:
                terms.append(mono)
            elif a == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{a}*{mono}")
        return "(" + " + ".join(terms) + ")"

    def _integer_poly(self):
        den = 1
        for a in self.c:
            den = den * a.denominator // gcd(den, a.denominator)
        return [int(a * den) for a in self.c], den

    def embed(self, M: int):
        """Return (valuation, unit mod p^M) under the Teichmueller embedding."""
        ctx = get_context(self.p)
        poly, den = self._integer_poly()
        vden = _vp_int(den, self.p)
        uden = den // self.p ** vden
        prec = M + 2
        while True:
            pm = self.p ** prec
            z = ctx.teich_mod(ctx.zeta1_residue, prec)
            acc = 0
            zp = 1
            for a in poly:
                acc = (acc + a * zp) % pm
                zp = zp * z % pm
            if acc != 0:
                v = _vp_int(acc, self.p)
                if prec - v >= M:
                    unit = (acc // self.p ** v) * pow(uden, -1, self.p ** M) % self.p ** M
                    return v - vden, unit
            prec *= 2


Exact = Union[int, Fraction, Cyclo]


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, Cyclo))


def exact_valuation(x: Exact, p: int) -> int:
    if isinstance(x, Cyclo):
        return x.embed(1)[0]
    x = Fraction(x)
    if x == 0:
        raise ZeroArgument("valuation of zero")
    return _vp_int(abs(x.numerator), p) - _vp_int(x.denominator, p)


def exact_unit(x: Exact, p: int, M: int = 1) -> tuple[int, int]:
    """(valuation, unit part mod p^M) of a nonzero exact value."""
    if isinstance(x, Cyclo):
        return x.embed(M)
    x = Fraction(x)
    if x == 0:
        raise ZeroArgument("unit part of zero")
    vn = _vp_int(abs(x.numerator), p)
    vd = _vp_int(x.denominator, p)
    pm = p ** M
    u = (x.numerator // p ** vn) * pow(x.denominator // p ** vd, -1, pm) % pm
    return vn - vd, u


# ---------------------------------------------------------------------------
# capped-precision values


class PadicNumber:
    """Element of Q_p, either exact or known to a number of relative digits.

    An approximate value is p^val * unit with unit known modulo p^digits.
    ``digits == 0`` encodes O(p^val): nothing is known beyond the fact that
    the value is divisible by p^val.
    """

    __slots__ = ("p", "exact", "val", "unit", "digits")

    def __init__(self, p: int, exact=None, val: int = 0, unit: int = 0, digits: int = 0):
        self.p = p
        self.exact = exact
        self.val = val
        self.unit = unit
        self.digits = digits

    @classmethod
    def of(cls, x, p: int) -> "PadicNumber":
        if isinstance(x, PadicNumber):
            return x
        if isinstance(x, int):
            x = Fraction(x)
        if not _is_exact(x):
            raise TypeError(f"cannot build a p-adic number from {type(x).__name__}")
        return cls(p, exact=x)

    @classmethod
    def approx(cls, p: int, val: int, unit: int, digits: int) -> "PadicNumber":
        if digits > 0:
            unit %= p ** digits
            if unit % p == 0:
                raise NotAUnit("unit part of an approximate value must be a unit")
        else:
            unit = 0
        return cls(p, exact=None, val=val, unit=unit, digits=digits)

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def __bool__(self):
        return not self.is_zero()

    def is_zero(self) -> bool:
        if self.is_exact:
            return self.exact == 0
        if self.digits == 0:
            raise PrecisionExhausted("all known digits are zero")
        return False

    def valuation(self):
        if self.is_exact:
            if self.exact == 0:
                return float("inf")
            return exact_valuation(self.exact, self.p)
        if self.digits == 0:
            raise PrecisionExhausted("all known digits are zero")
        return self.val

    def unit_mod(self, M: int) -> int:
        """Unit part modulo p^M."""
        if self.is_exact:
            return exact_unit(self.exact, self.p, M)[1]
        if self.digits == 0:
            raise PrecisionExhausted("all known digits are zero")
        if M > self.digits:
            raise PrecisionExhausted(f"only {self.digits} digits known")
        return self.unit % self.p ** M

    def residue(self) -> int:
        return self.unit_mod(1)

    def to_approx(self, N: int = DEFAULT_PRECISION) -> "PadicNumber":
        if not self.is_exact:
            return self
        if self.exact == 0:
            return PadicNumber(self.p, None, val=10 ** 9, unit=0, digits=0)
        v, u = exact_unit(self.exact, self.p, N)
        return PadicNumber.approx(self.p, v, u, N)

    # arithmetic -----------------------------------------------------------

    def _lift(self, other) -> "PadicNumber":
        if isinstance(other, PadicNumber):
            if other.p != self.p:
                raise ValueError("mixing different primes")
            return other
        return PadicNumber.of(other, self.p)

    def __mul__(self, other):
        other = self._lift(other)
        if self.is_exact and other.is_exact:
            return PadicNumber(self.p, exact=self.exact * other.exact)
        if (self.is_exact and self.exact == 0) or (other.is_exact and other.exact == 0):
            return PadicNumber(self.p, exact=Fraction(0))
        a, b = self.to_approx(), other.to_approx()
        digits = min(a.digits, b.digits)
        return PadicNumber.approx(self.p, a.val + b.val, a.unit * b.unit, digits)

    __rmul__ = __mul__

    def inverse(self) -> "PadicNumber":
        if self.is_exact:
            if self.exact == 0:
                raise ZeroDivisionError("inverse of zero")
            x = self.exact
            return PadicNumber(self.p, exact=(x.inverse() if isinstance(x, Cyclo) else 1 / Fraction(x)))
        if self.digits == 0:
            raise PrecisionExhausted("cannot invert O(p^n)")
        return PadicNumber.approx(self.p, -self.val, pow(self.unit, -1, self.p ** self.digits), self.digits)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __neg__(self):
        if self.is_exact:
            return PadicNumber(self.p, exact=-self.exact)
        return PadicNumber.approx(self.p, self.val, -self.unit, self.digits)

    def __add__(self, other):
        other = self._lift(other)
        if self.is_exact and other.is_exact:
            return PadicNumber(self.p, exact=self.exact + other.exact)
        if self.is_exact and self.exact == 0:
            return other
        if other.is_exact and other.exact == 0:
            return self
        a, b = self.to_approx(), other.to_approx()
        p = self.p
        abs_prec = min(a.val + a.digits, b.val + b.digits)
        vmin = min(a.val, b.val)
        width = abs_prec - vmin
        if width <= 0:
            return PadicNumber(p, None, val=abs_prec, unit=0, digits=0)
        mod = p ** width
        total = (a.unit * p ** (a.val - vmin) + b.unit * p ** (b.val - vmin)) % mod
        if total == 0:
            return PadicNumber(p, None, val=abs_prec, unit=0, digits=0)
        s = _vp_int(total, p)
        return PadicNumber.approx(p, vmin + s, total // p ** s, width - s)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) + (-self)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = PadicNumber(self.p, exact=Fraction(1))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, (PadicNumber, int, Fraction, Cyclo)):
            return NotImplemented
        other = self._lift(other)
        if self.is_exact and other.is_exact:
            return self.exact == other.exact
        diff = self - other
        if diff.is_exact:
            return diff.exact == 0
        return diff.digits == 0

    def __hash__(self):
        if self.is_exact:
            return hash(self.exact)
        raise TypeError("approximate p-adic numbers are not hashable")

    def __repr__(self):
        if self.is_exact:
            return f"PadicNumber({self.exact}, p={self.p})"
        if self.digits == 0:
            return f"O({self.p}^{self.val})"
        return f"PadicNumber({self.p}^{self.val}*{self.unit} + O(p^{self.val + self.digits}))"


Scalar = Union[int, Fraction, Cyclo, PadicNumber]


def _as_padic(x, p: int) -> PadicNumber:
    return x if isinstance(x, PadicNumber) else PadicNumber.of(x, p)


def valuation(x: Scalar, p: int | None = None):
    """p-adic valuation; infinity for an exact zero."""
    if p is None:
        p = x.p
    return _as_padic(x, p).valuation()


def unit_residue(x: Scalar, p: int | None = None) -> int:
    if p is None:
        p = x.p
    return _as_padic(x, p).residue()


# ---------------------------------------------------------------------------
# roots of unity


class Mu8:
    """Eighth root of unity exp(2*pi*i*exponent/8)."""

    __slots__ = ("exponent",)

    def __init__(self, exponent: int = 0):
        self.exponent = exponent % 8

    @classmethod
    def sign(cls, s: int) -> "Mu8":
        if s not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {s}")
        return cls(0 if s == 1 else 4)

    def __mul__(self, other):
        if isinstance(other, int) and other in (1, -1):
            other = Mu8.sign(other)
        if not isinstance(other, Mu8):
            return NotImplemented
        return Mu8(self.exponent + other.exponent)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, int) and other in (1, -1):
            other = Mu8.sign(other)
        return Mu8(self.exponent - other.exponent)

    def __rtruediv__(self, other):
        if isinstance(other, int) and other in (1, -1):
            return Mu8.sign(other) / self
        return NotImplemented

    def inverse(self) -> "Mu8":
        return Mu8(-self.exponent)

    def __pow__(self, n: int):
        return Mu8(self.exponent * n)

    def __eq__(self, other):
        if isinstance(other, int) and other in (1, -1):
            other = Mu8.sign(other)
        if not isinstance(other, Mu8):
            return NotImplemented
        return self.exponent == other.exponent

    def __hash__(self):
        return hash(("mu8", self.exponent))

    def __repr__(self):
        return f"Mu8({self.exponent})"

    @property
    def order(self) -> int:
        return 8 // gcd(8, self.exponent) if self.exponent else 1

    def in_mu4(self) -> bool:
        return self.exponent % 2 == 0

    def in_mu2(self) -> bool:
        return self.exponent % 4 == 0

    def to_sign(self) -> int:
        if not self.in_mu2():
            raise ValueError(f"{self} is not a sign")
        return 1 if self.exponent == 0 else -1

    def __complex__(self):
        import cmath

        return cmath.exp(2j * cmath.pi * self.exponent / 8)


ONE = Mu8(0)


# ---------------------------------------------------------------------------
# Legendre symbols, Hilbert symbols, square classes


def _legendre_residue(r: int, p: int) -> int:
    r %= p
    if r == 0:
        raise NotAUnit("zero residue")
    return 1 if pow(r, (p - 1) // 2, p) == 1 else -1


def legendre(u: Scalar, p: int | None = None) -> int:
    """Quadratic residue symbol of a unit."""
    if p is None:
        p = u.p
    x = _as_padic(u, p)
    if x.valuation() != 0:
        raise NotAUnit("legendre symbol needs a unit")
    return _legendre_residue(x.residue(), p)


def _val_and_legendre(x, p: int) -> tuple[int, int]:
    if isinstance(x, SquareClass):
        return x.parity, x.chi
    y = _as_padic(x, p)
    if y.is_exact and y.exact == 0:
        raise ZeroArgument("zero has no square class")
    return y.valuation(), _legendre_residue(y.residue(), p)


def hilbert_symbol(a, b, p: int | None = None) -> int:
    """(a, b)_F for F = Q_p, p odd."""
    if p is None:
        p = a.p if hasattr(a, "p") else b.p
    va, ua = _val_and_legendre(a, p)
    vb, ub = _val_and_legendre(b, p)
    sign = -1 if (va * vb * ((p - 1) // 2)) % 2 else 1
    if vb % 2:
        sign *= ua
    if va % 2:
        sign *= ub
    return sign


@dataclass(frozen=True)
class SquareClass:
    """Class in F^x / F^x2 as (valuation parity, Legendre symbol of unit)."""

    p: int
    parity: int
    chi: int

    def __post_init__(self):
        object.__setattr__(self, "parity", self.parity % 2)
        if self.chi not in (1, -1):
            raise ValueError("chi must be +1 or -1")

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        if not isinstance(other, SquareClass):
            return NotImplemented
        # the unit of p^a u * p^b v is u*v; the uniformizer is p itself
        return SquareClass(self.p, self.parity + other.parity, self.chi * other.chi)

    def inverse(self) -> "SquareClass":
        return self

    @property
    def name(self) -> str:
        p = self.p
        if p % 4 == 3:
            return {(0, 1): "1", (0, -1): "-1", (1, 1): "p", (1, -1): "-p"}[(self.parity, self.chi)]
        return {(0, 1): "1", (0, -1): "z1", (1, 1): "p", (1, -1): "z1*p"}[(self.parity, self.chi)]

    def representative(self):
        """Exact representative from the fixed set of four."""
        ctx = get_context(self.p)
        unit = Fraction(1) if self.chi == 1 else (Fraction(-1) if ctx.case == 3 else ctx.zeta1)
        return unit * self.p if self.parity else unit

    def __repr__(self):
        return f"SquareClass({self.name}, p={self.p})"

    @staticmethod
    def all(p: int) -> list["SquareClass"]:
        return [SquareClass(p, v, c) for v in (0, 1) for c in (1, -1)]

    @staticmethod
    def from_name(name: str, p: int) -> "SquareClass":
        for s in SquareClass.all(p):
            if s.name == name:
                return s
        raise ValueError(f"unknown square class {name!r} for p={p}")


def square_class(a: Scalar, p: int | None = None) -> SquareClass:
    if p is None:
        p = a.p
    v, chi = _val_and_legendre(a, p)
    return SquareClass(p, v, chi)


# ---------------------------------------------------------------------------
# Teichmueller lifts and the structure F^x = f x U_1 x <p>


def teichmuller(c: int, ctx: PrimeContext) -> PadicNumber:
    """The (p-1)-th root of unity congruent to c mod p.

    Exact when the lift lies in Q (that is +-1) or, for p = 1 mod 4, in
    Q(zeta1); otherwise an approximation to ``ctx.N`` digits.
    """
    p = ctx.p
    c %= p
    if c == 0:
        raise ZeroResidue("no Teichmueller lift of 0")
    if c == 1:
        return PadicNumber(p, exact=Fraction(1))
    if c == p - 1:
        return PadicNumber(p, exact=Fraction(-1))
    e = ctx.dlog(c)
    if ctx.case == 1 and e % ctx.l == 0:
        # c = zeta1^j with alpha*j = e mod p-1; alpha = 1 mod 2^k
        j = (e // ctx.l) * ctx.l % (1 << ctx.k)
        return PadicNumber(p, exact=Cyclo.root_power(j, p))
    return PadicNumber.approx(p, 0, ctx.teich_mod(c, ctx.N), ctx.N)


def zeta_split(ctx: PrimeContext) -> tuple[PadicNumber, PadicNumber]:
    if ctx.case != 1:
        raise WrongResidueCase("zeta1/zeta2 splitting is only used for p = 1 mod 4")
    return PadicNumber(ctx.p, exact=ctx.zeta1), ctx.zeta2


def zeta_exponent(x: Scalar, ctx: PrimeContext) -> int:
    """e with x / (zeta^e p^v) in U_1."""
    return ctx.dlog(unit_residue(x, ctx.p))


def zeta1_exponent(x: Scalar, ctx: PrimeContext) -> int:
    """Exponent of zeta1 in the Teichmueller component of x, mod 2^k."""
    return zeta_exponent(x, ctx) % (1 << ctx.k)


def decompose(x: Scalar, ctx: PrimeContext) -> tuple[int, PadicNumber, int]:
    """Write x = zeta^e * u * p^v with u in U_1; returns (e, u, v)."""
    y = _as_padic(x, ctx.p)
    v = y.valuation()
    e = ctx.dlog(y.residue())
    t = teichmuller(pow(ctx.generator, e, ctx.p), ctx)
    u = y / (t * PadicNumber(ctx.p, exact=Fraction(ctx.p) ** v))
    return e, u, v


def sqrt_u1(u: Scalar, ctx: PrimeContext) -> PadicNumber:
    """The square root congruent to 1 mod p of u in U_1."""
    p = ctx.p
    x = _as_padic(u, p)
    if x.valuation() != 0 or x.residue() != 1:
        raise NotASquareInDomain("not a principal unit")
    if x.is_exact and not isinstance(x.exact, Cyclo):
        q = Fraction(x.exact)
        rn, rd = isqrt(max(q.numerator, 0)), isqrt(q.denominator)
        if q > 0 and rn * rn == q.numerator and rd * rd == q.denominator:
            r = Fraction(rn, rd)
            if exact_unit(r, p)[1] != 1:
                r = -r
            return PadicNumber(p, exact=r)
    a = x.to_approx(ctx.N)
    digits = a.digits
    pm = p ** digits
    root = pow(a.unit, (p ** (digits - 1) + 1) // 2, pm)
    return PadicNumber.approx(p, 0, root, digits)


def sqrt_f2_exponent(e: int, ctx: PrimeContext) -> tuple[int, int]:
    """For zeta^e in f^2, return (i, j) with the root (-zeta1)^i zeta2^j."""
    if e % 2:
        raise NotInF2("odd power of zeta is not a square")
    two_k = 1 << ctx.k
    i = (e % two_k) // 2
    j = (e * pow(2, -1, ctx.l)) % ctx.l if ctx.l > 1 else 0
    return i, j


def sqrt_canonical(a: Scalar, domain: str, ctx: PrimeContext) -> PadicNumber:
    """Fixed square root on U_1, on <p^2>, or on f^2."""
    p = ctx.p
    x = _as_padic(a, p)
    if domain == "U1":
        return sqrt_u1(x, ctx)
    if domain == "pi2":
        if not x.is_exact:
            raise NotASquareInDomain("powers of the uniformizer are exact")
        v = x.valuation()
        if v % 2 or x.exact != Fraction(p) ** v:
            raise NotASquareInDomain("not an even power of the uniformizer")
        return PadicNumber(p, exact=Fraction(-p) ** (v // 2))
    if domain == "f2":
        if x.valuation() != 0:
            raise NotASquareInDomain("not a unit")
        e = ctx.dlog(x.residue())
        if e % 2:
            raise NotASquareInDomain("not in f^2")
        if x != teichmuller(x.residue(), ctx):
            raise NotASquareInDomain("not a root of unity")
        i, j = sqrt_f2_exponent(e, ctx)
        part1 = PadicNumber(p, exact=(-ctx.zeta1) ** i if i else Fraction(1))
        if j == 0:
            return part1
        return part1 * teichmuller(pow(ctx.generator, ctx.beta * j, p), ctx)
    raise ValueError(f"unknown square-root domain {domain!r}")


def c_sqrt_exponents(e1: int, e2: int, ctx: PrimeContext) -> int:
    """c_sqrt on zeta^e1, zeta^e2 (both even) as a sign."""
    i1, _ = sqrt_f2_exponent(e1, ctx)
    i2, _ = sqrt_f2_exponent(e2, ctx)
    return -1 if i1 + i2 >= (1 << (ctx.k - 1)) else 1


def c_sqrt(a: Scalar, b: Scalar, ctx: PrimeContext) -> int:
    """Cocycle of the fixed square root on f^2; identically 1 when p = 3 mod 4."""
    exps = []
    for x in (a, b):
        y = _as_padic(x, ctx.p)
        if y.valuation() != 0:
            raise NotInF2("not a unit")
        e = ctx.dlog(y.residue())
        if e % 2:
            raise NotInF2("odd power of zeta")
        exps.append(e)
    return c_sqrt_exponents(exps[0], exps[1], ctx)

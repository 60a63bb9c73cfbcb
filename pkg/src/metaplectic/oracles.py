"""Brute-force oracles, independent of the closed formulas they check."""

from __future__ import annotations

from .padic import SquareClass


def hilbert_by_solubility(a: int, b: int, p: int) -> int:
    """1 if z^2 = a x^2 + b y^2 has a primitive solution modulo p^2, else -1.

    For a, b integers of valuation 0 or 1 (any square class has such a
    representative) a primitive solution modulo p^2 lifts to Q_p by Hensel's
    lemma, and every solution over Q_p scales to a primitive one.
    """
    if a % (p * p) == 0 or b % (p * p) == 0:
        raise ValueError("arguments must have valuation 0 or 1")
    mod = p * p
    squares = {z * z % mod for z in range(mod)}
    for x in range(mod):
        for y in range(mod):
            if x % p == 0 and y % p == 0:
                continue
            if (a * x * x + b * y * y) % mod in squares:
                return 1
    return -1


def integer_class_rep(c: SquareClass) -> int:
    """An integer of valuation 0 or 1 in the square class c."""
    p = c.p
    unit = 1 if c.chi == 1 else next(u for u in range(2, p) if pow(u, (p - 1) // 2, p) == p - 1)
    return unit * p if c.parity else unit


def hilbert_grid_oracle(p: int) -> dict:
    """(class, class) -> symbol, by solubility, over the four square classes."""
    out = {}
    for s in SquareClass.all(p):
        for t in SquareClass.all(p):
            out[(s.name, t.name)] = hilbert_by_solubility(integer_class_rep(s), integer_class_rep(t), p)
    return out


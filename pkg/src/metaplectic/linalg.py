"""Exact dense matrices as tuples of tuples.

Entries are ``Fraction`` or ``Cyclo`` values; matrices are immutable and
hashable so that decompositions can be memoized on them.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

Matrix = tuple

ZERO = Fraction(0)
ONE = Fraction(1)


def _coerce(x):
    return Fraction(x) if isinstance(x, int) else x


def mat(rows: Iterable[Iterable]) -> Matrix:
    return tuple(tuple(_coerce(x) for x in row) for row in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def zeros(n: int, m: Optional[int] = None) -> Matrix:
    m = n if m is None else m
    return tuple(tuple(ZERO for _ in range(m)) for _ in range(n))


def diag(entries: Sequence) -> Matrix:
    n = len(entries)
    return tuple(tuple(_coerce(entries[i]) if i == j else ZERO for j in range(n)) for i in range(n))


def scalar(c, n: int) -> Matrix:
    return diag([c] * n)


def transpose(A: Matrix) -> Matrix:
    return tuple(zip(*A)) if A else A


def mul(A: Matrix, B: Matrix) -> Matrix:
    Bt = transpose(B)
    out = []
    for row in A:
        nz = [(i, x) for i, x in enumerate(row) if x]
        out_row = []
        for col in Bt:
            s = ZERO
            for i, x in nz:
                y = col[i]
                if y:
                    s = s + x * y
            out_row.append(s)
        out.append(tuple(out_row))
    return tuple(out)


def mul_many(*mats: Matrix) -> Matrix:
    out = mats[0]
    for M in mats[1:]:
        out = mul(out, M)
    return out


def add(A: Matrix, B: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(A, B))


def sub(A: Matrix, B: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(A, B))


def scale(c, A: Matrix) -> Matrix:
    return tuple(tuple(c * x for x in row) for row in A)


def neg(A: Matrix) -> Matrix:
    return tuple(tuple(-x for x in row) for row in A)


def is_zero(A: Matrix) -> bool:
    return all(x == 0 for row in A for x in row)


def block(a: Matrix, b: Matrix, c: Matrix, d: Matrix) -> Matrix:
    top = tuple(ra + rb for ra, rb in zip(a, b))
    bottom = tuple(rc + rd for rc, rd in zip(c, d))
    return top + bottom


def blocks(M: Matrix) -> tuple[Matrix, Matrix, Matrix, Matrix]:
    m = len(M) // 2
    a = tuple(row[:m] for row in M[:m])
    b = tuple(row[m:] for row in M[:m])
    c = tuple(row[:m] for row in M[m:])
    d = tuple(row[m:] for row in M[m:])
    return a, b, c, d


def vstack(*mats: Matrix) -> Matrix:
    out = ()
    for M in mats:
        out = out + tuple(M)
    return out


def det(A: Matrix):
    n = len(A)
    M = [list(r) for r in A]
    sign = 1
    result = ONE
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return ZERO
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            sign = -sign
        pv = M[col][col]
        result = result * pv
        for r in range(col + 1, n):
            f = M[r][col] / pv
            if f != 0:
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return result if sign == 1 else -result


def inverse(A: Matrix) -> Matrix:
    n = len(A)
    M = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(A)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        M[col] = [x / pv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return tuple(tuple(row[n:]) for row in M)


def row_reduce(A: Matrix, choose: Optional[Callable] = None) -> tuple[list, list]:
    """Reduced row echelon form; returns (rows, pivot columns)."""
    M = [list(r) for r in A]
    nrows = len(M)
    ncols = len(M[0]) if M else 0
    pivots = []
    r = 0
    for col in range(ncols):
        cands = [i for i in range(r, nrows) if M[i][col] != 0]
        if not cands:
            continue
        piv = choose(cands, col, M) if choose else cands[0]
        M[r], M[piv] = M[piv], M[r]
        pv = M[r][col]
        M[r] = [x / pv for x in M[r]]
        for i in range(nrows):
            if i != r and M[i][col] != 0:
                f = M[i][col]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    return M, pivots


def rank(A: Matrix) -> int:
    if not A:
        return 0
    return len(row_reduce(A)[1])


def left_kernel(A: Matrix) -> list[tuple]:
    """Basis of {x : x A = 0} as row vectors."""
    n = len(A)
    ncols = len(A[0])
    aug = [list(A[i]) + [ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    M, pivots = row_reduce(tuple(tuple(r) for r in aug))
    out = []
    for row in M:
        if all(x == 0 for x in row[:ncols]):
            out.append(tuple(row[ncols:]))
    return out


def row_times(v: Sequence, A: Matrix) -> tuple:
    cols = transpose(A)
    return tuple(sum((x * y for x, y in zip(v, col) if x != 0 and y != 0), ZERO) for col in cols)


def dot(u: Sequence, v: Sequence):
    return sum((x * y for x, y in zip(u, v) if x != 0 and y != 0), ZERO)


def fmt(A: Matrix) -> str:
    return "[" + ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in A) + "]"

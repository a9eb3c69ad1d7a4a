"""Exact arbitrary-precision integer matrix arithmetic.

Matrices are tuples of tuples of Python ints.  Everything here is exact:
determinants are fraction-free, the characteristic polynomial uses the
trace recurrence whose divisions are integral, and the Smith normal form
returns unimodular transforms with U @ M @ V equal to the diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import ValidationError

Matrix = tuple[tuple[int, ...], ...]


def as_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    out = []
    width = None
    for r, row in enumerate(rows):
        vals = []
        for c, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, int):
                raise ValidationError(f"entry [{r+1}][{c+1}] must be an integer, got {x!r}")
            vals.append(x)
        if width is None:
            width = len(vals)
        elif len(vals) != width:
            raise ValidationError(f"ragged matrix: row {r+1} has {len(vals)} entries, expected {width}")
        out.append(tuple(vals))
    if not out or width == 0:
        raise ValidationError("matrix must have at least one row and one column")
    return tuple(out)


def shape(m: Matrix) -> tuple[int, int]:
    return (len(m), len(m[0]))


def is_square(m: Matrix) -> bool:
    r, c = shape(m)
    return r == c


def is_nonneg(m: Matrix) -> bool:
    return all(x >= 0 for row in m for x in row)


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zeros(r: int, c: int) -> Matrix:
    return tuple(tuple(0 for _ in range(c)) for _ in range(r))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    ra, ca = shape(a)
    rb, cb = shape(b)
    if ca != rb:
        raise ValidationError(f"cannot multiply {ra}x{ca} by {rb}x{cb}")
    bt = tuple(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    if shape(a) != shape(b):
        raise ValidationError("shape mismatch in addition")
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    if shape(a) != shape(b):
        raise ValidationError("shape mismatch in subtraction")
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def scalar_mul(k: int, a: Matrix) -> Matrix:
    return tuple(tuple(k * x for x in row) for row in a)


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def mat_pow(a: Matrix, k: int) -> Matrix:
    if not is_square(a):
        raise ValidationError("powers need a square matrix")
    if k < 0:
        raise ValidationError("negative matrix powers are not defined here")
    result = identity(len(a))
    base = a
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base) if k > 1 else base
        k >>= 1
    return result


def mat_vec(a: Matrix, v: Sequence[int]) -> tuple[int, ...]:
    r, c = shape(a)
    if len(v) != c:
        raise ValidationError(f"vector length {len(v)} does not match {r}x{c}")
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def trace(a: Matrix) -> int:
    if not is_square(a):
        raise ValidationError("trace needs a square matrix")
    return sum(a[i][i] for i in range(len(a)))


def det(a: Matrix) -> int:
    """Fraction-free Gaussian elimination (Bareiss)."""
    if not is_square(a):
        raise ValidationError("determinant needs a square matrix")
    n = len(a)
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def charpoly(a: Matrix) -> tuple[int, ...]:
    """Monic characteristic polynomial det(xI - A), coefficients in
    descending degree.  Trace recurrence; every division is exact."""
    if not is_square(a):
        raise ValidationError("characteristic polynomial needs a square matrix")
    n = len(a)
    coeffs = [1]
    m = zeros(n, n)
    for k in range(1, n + 1):
        m = mat_mul(a, mat_add(m, scalar_mul(coeffs[-1], identity(n)))) if k > 1 \
            else a
        ck = -trace(m)
        if ck % k:
            raise AssertionError("trace recurrence division must be exact")
        coeffs.append(ck // k)
    return tuple(coeffs)


def poly_eval(coeffs: Sequence[int], x: int) -> int:
    acc = 0
    for c in coeffs:
        acc = acc * x + c
    return acc


# ---------------------------------------------------------------------------
# Smith normal form

@dataclass(frozen=True)
class SmithForm:
    factors: tuple[int, ...]
    U: Matrix
    V: Matrix
    D: Matrix


def smith_normal_form(m: Matrix) -> SmithForm:
    """Invariant factors d1 | d2 | ... (nonnegative, zeros trailing) with
    unimodular U, V satisfying U @ M @ V = diag(factors).  Pivoting takes
    the smallest nonzero absolute value; arbitrary precision throughout.
    """
    rows, cols = shape(m)
    a = [list(r) for r in m]
    u = [list(r) for r in identity(rows)]
    v = [list(r) for r in identity(cols)]

    def swap_rows(i, j):
        if i != j:
            a[i], a[j] = a[j], a[i]
            u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        if i != j:
            for row in a:
                row[i], row[j] = row[j], row[i]
            for row in v:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):
        for row in a:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    size = min(rows, cols)
    for s in range(size):
        while True:
            # smallest-|nonzero| pivot in the trailing block
            pivot = None
            for i in range(s, rows):
                for j in range(s, cols):
                    if a[i][j] and (pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                break
            swap_rows(s, pivot[0])
            swap_cols(s, pivot[1])
            if a[s][s] < 0:
                negate_row(s)
            dirty = False
            for i in range(s + 1, rows):
                if a[i][s]:
                    add_row(i, s, -(a[i][s] // a[s][s]))
                    if a[i][s]:
                        dirty = True
            for j in range(s + 1, cols):
                if a[s][j]:
                    add_col(j, s, -(a[s][j] // a[s][s]))
                    if a[s][j]:
                        dirty = True
            if dirty:
                continue
            # divisibility: fold any non-multiple into the pivot's row
            offender = None
            for i in range(s + 1, rows):
                for j in range(s + 1, cols):
                    if a[i][j] % a[s][s]:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            add_row(s, offender, 1)

    factors = tuple(a[i][i] for i in range(size))
    res = SmithForm(factors, tuple(map(tuple, u)), tuple(map(tuple, v)),
                    tuple(map(tuple, a)))
    assert mat_mul(mat_mul(res.U, m), res.V) == res.D
    assert abs(det(res.U)) == 1 and abs(det(res.V)) == 1
    for x, y in zip(factors, factors[1:]):
        assert (x == 0 and y == 0) or (x != 0 and y % x == 0)
    return res

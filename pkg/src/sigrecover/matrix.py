"""Dense exact matrices over the rationals.

Elimination is fraction-free: rows are first scaled to integers, then reduced
with Bareiss' update so every intermediate entry is a minor of the input and
never needs a gcd.  Rationals only reappear in back substitution.

Indices in the public API (``A[i, j]``, :func:`basis_unit`) are 1-based.
"""

from __future__ import annotations

import random
from typing import Iterable, Sequence

import gmpy2
import numpy as np
from gmpy2 import mpq, mpz

from .exact import ONE, ZERO, format_scalar, scalar, tally


class SingularMatrix(ArithmeticError):
    """Raised when inverting a matrix with zero determinant."""


class SolveError(ArithmeticError):
    pass


class InconsistentSystem(SolveError):
    """``M x = b`` has no solution."""


class UnderdeterminedSystem(SolveError):
    """``M x = b`` is consistent but the solution is not unique."""


def _object_array(rows: Iterable[Iterable], shape: tuple[int, int] | None = None) -> np.ndarray:
    rows = [[scalar(v) for v in row] for row in rows]
    if shape is None:
        if not rows or not rows[0]:
            raise ValueError("matrix must have at least one row and one column")
        shape = (len(rows), len(rows[0]))
    if any(len(r) != shape[1] for r in rows) or len(rows) != shape[0]:
        raise ValueError("ragged matrix rows")
    out = np.empty(shape, dtype=object)
    for i, row in enumerate(rows):
        out[i, :] = row
    return out


class Matrix:
    """An immutable ``rows x cols`` matrix of exact rationals."""

    __slots__ = ("_a",)

    def __init__(self, rows: Iterable[Iterable] | np.ndarray):
        if isinstance(rows, np.ndarray):
            if rows.ndim != 2 or 0 in rows.shape:
                raise ValueError("expected a non-empty 2-d array")
            a = np.empty(rows.shape, dtype=object)
            a[...] = [[scalar(v) for v in row] for row in rows.tolist()]
        else:
            a = _object_array(rows)
        self._a = a

    @classmethod
    def _wrap(cls, a: np.ndarray) -> "Matrix":
        m = cls.__new__(cls)
        m._a = a
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        a = np.empty((rows, cols), dtype=object)
        a.fill(ZERO)
        return cls._wrap(a)

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape

    @property
    def nrows(self) -> int:
        return self._a.shape[0]

    @property
    def ncols(self) -> int:
        return self._a.shape[1]

    @property
    def is_square(self) -> bool:
        return self._a.shape[0] == self._a.shape[1]

    @property
    def array(self) -> np.ndarray:
        """A copy of the entries as a 0-based numpy object array."""
        return self._a.copy()

    def __getitem__(self, idx: tuple[int, int]) -> mpq:
        i, j = idx
        if not (1 <= i <= self.nrows and 1 <= j <= self.ncols):
            raise IndexError(f"index ({i}, {j}) out of range for {self.shape} matrix")
        return self._a[i - 1, j - 1]

    def tolist(self) -> list[list[mpq]]:
        return self._a.tolist()

    def row(self, i: int) -> list[mpq]:
        return self._a[i - 1, :].tolist()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and bool((self._a == other._a).all())

    def __hash__(self) -> int:
        return hash((self.shape, tuple(self._a.flat)))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_scalar(v) for v in row) for row in self._a.tolist())
        return f"Matrix([{body}])"

    def __str__(self) -> str:
        cells = [[format_scalar(v) for v in row] for row in self._a.tolist()]
        width = max(len(c) for row in cells for c in row)
        return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)

    @property
    def T(self) -> "Matrix":
        return Matrix._wrap(self._a.T.copy())

    def __add__(self, other: "Matrix") -> "Matrix":
        _same_shape(self, other)
        return Matrix._wrap(self._a + other._a)

    def __sub__(self, other: "Matrix") -> "Matrix":
        _same_shape(self, other)
        return Matrix._wrap(self._a - other._a)

    def __neg__(self) -> "Matrix":
        return Matrix._wrap(-self._a)

    def __mul__(self, c) -> "Matrix":
        if isinstance(c, Matrix):
            raise TypeError("use @ for matrix products")
        c = scalar(c)
        tally(self._a.size)
        out = np.empty(self.shape, dtype=object)
        out[...] = [[c * v for v in row] for row in self._a.tolist()]
        return Matrix._wrap(out)

    __rmul__ = __mul__

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        tally(self.nrows * self.ncols * other.ncols)
        return Matrix._wrap(np.dot(self._a, other._a))

    def apply(self, v: Sequence) -> list[mpq]:
        """Matrix-vector product."""
        if len(v) != self.ncols:
            raise ValueError("vector length does not match column count")
        tally(self._a.size)
        vec = [scalar(x) for x in v]
        return [sum((a * x for a, x in zip(row, vec)), ZERO) for row in self._a.tolist()]

    def det(self) -> mpq:
        return det(self)

    def inverse(self) -> "Matrix":
        return inverse(self)

    def rank(self) -> int:
        return rank(self)


def _same_shape(a: Matrix, b: Matrix) -> None:
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")


# -- constructors --------------------------------------------------------------


def identity(d: int) -> Matrix:
    if d < 1:
        raise ValueError("dimension must be positive")
    a = np.empty((d, d), dtype=object)
    a.fill(ZERO)
    for i in range(d):
        a[i, i] = ONE
    return Matrix._wrap(a)


def basis_unit(d: int, i: int, j: int) -> Matrix:
    """The standard basis matrix E_ij (1-based) of size ``d x d``."""
    if not (1 <= i <= d and 1 <= j <= d):
        raise IndexError(f"basis index ({i}, {j}) out of range for d={d}")
    m = Matrix.zeros(d, d)
    m._a[i - 1, j - 1] = ONE
    return m


def diagonal(values: Sequence) -> Matrix:
    d = len(values)
    m = Matrix.zeros(d, d)
    for i, v in enumerate(values):
        m._a[i, i] = scalar(v)
    return m


def direct_sum(a: Matrix, b: Matrix) -> Matrix:
    """Block-diagonal matrix ``a ⊕ b``."""
    if not (a.is_square and b.is_square):
        raise ValueError("direct sum needs square blocks")
    n, m = a.nrows, b.nrows
    out = Matrix.zeros(n + m, n + m)
    out._a[:n, :n] = a._a
    out._a[n:, n:] = b._a
    return out


def random_invertible(
    d: int,
    s: int = 1,
    range_bound: int = 5,
    rng: random.Random | int | None = None,
) -> Matrix:
    """Sample ``I_{s-1} ⊕ W`` with integer ``W`` uniform in ``[-range_bound, range_bound]``.

    ``W`` is redrawn until it is invertible.  Passing an int seeds a private
    generator, so the result only depends on the seed.
    """
    if d < 1 or not 1 <= s <= d:
        raise ValueError(f"need d >= 1 and 1 <= s <= d, got d={d}, s={s}")
    if range_bound < 1:
        raise ValueError("range_bound must be at least 1")
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    n = d - s + 1
    while True:
        w = Matrix([[rng.randint(-range_bound, range_bound) for _ in range(n)] for _ in range(n)])
        if det(w) != 0:
            break
    if s == 1:
        return w
    return direct_sum(identity(s - 1), w)


# -- fraction-free elimination ---------------------------------------------------


def _integer_rows(rows: list[list[mpq]]) -> tuple[list[list[mpz]], list[mpz]]:
    """Scale each row by the lcm of its denominators."""
    out, scales = [], []
    for row in rows:
        l = mpz(1)
        for v in row:
            l = gmpy2.lcm(l, v.denominator)
        out.append([v.numerator * (l // v.denominator) for v in row])
        scales.append(l)
    return out, scales


def _bareiss(rows: list[list[mpz]], pivot_cols: int) -> tuple[list[int], int]:
    """In-place fraction-free row echelon form.

    Pivots are searched only in the first ``pivot_cols`` columns; the rest
    (right-hand sides) are carried along.  Returns the pivot columns and the
    sign of the row permutation.
    """
    m = len(rows)
    n = len(rows[0]) if rows else 0
    prev = mpz(1)
    sign = 1
    r = 0
    pivots = []
    for c in range(pivot_cols):
        if r == m:
            break
        p = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            rows[p], rows[r] = rows[r], rows[p]
            sign = -sign
        top = rows[r]
        piv = top[c]
        for i in range(r + 1, m):
            row = rows[i]
            f = row[c]
            if f == 0:
                if piv != prev:
                    for j in range(c + 1, n):
                        row[j] = row[j] * piv // prev
                    tally(n - c - 1)
                continue
            for j in range(c + 1, n):
                row[j] = (piv * row[j] - f * top[j]) // prev
            row[c] = mpz(0)
            tally(2 * (n - c - 1))
        prev = piv
        pivots.append(c)
        r += 1
    return pivots, sign


def _check(m: Matrix) -> list[list[mpq]]:
    return m._a.tolist()


def det(m: Matrix) -> mpq:
    if not m.is_square:
        raise ValueError("determinant of a non-square matrix")
    rows, scales = _integer_rows(_check(m))
    n = m.nrows
    pivots, sign = _bareiss(rows, n)
    if len(pivots) < n:
        return ZERO
    denom = mpz(1)
    for l in scales:
        denom *= l
    return mpq(sign * rows[n - 1][n - 1], denom)


def rank(m: Matrix) -> int:
    rows, _ = _integer_rows(_check(m))
    pivots, _ = _bareiss(rows, m.ncols)
    return len(pivots)


def _back_substitute(rows: list[list[mpz]], n: int) -> list[list[mpq]]:
    """Solve the upper-triangular ``n x n`` leading block for every RHS column."""
    k = len(rows[0]) - n
    sol = [[ZERO] * k for _ in range(n)]
    for col in range(k):
        for i in range(n - 1, -1, -1):
            row = rows[i]
            acc = mpq(row[n + col])
            for j in range(i + 1, n):
                if row[j]:
                    acc -= row[j] * sol[j][col]
            tally(n - i)
            sol[i][col] = acc / row[i]
    return sol


def solve(m: Matrix, b: Sequence) -> list[mpq]:
    """Unique exact solution of ``m x = b``.

    Raises :class:`InconsistentSystem` when no solution exists and
    :class:`UnderdeterminedSystem` when the solution is not unique.
    """
    if len(b) != m.nrows:
        raise ValueError("right-hand side length does not match row count")
    aug = [row + [scalar(v)] for row, v in zip(_check(m), b)]
    rows, _ = _integer_rows(aug)
    n = m.ncols
    pivots, _ = _bareiss(rows, n)
    r = len(pivots)
    if any(rows[i][n] != 0 for i in range(r, len(rows))):
        raise InconsistentSystem(f"rank(M)={r} < rank(M|B)")
    if r < n:
        raise UnderdeterminedSystem(f"rank(M)={r} < {n} unknowns")
    return [v[0] for v in _back_substitute(rows[:n], n)]


def inverse(m: Matrix) -> Matrix:
    if not m.is_square:
        raise ValueError("inverse of a non-square matrix")
    n = m.nrows
    rows, scales = _integer_rows(_check(m))
    # rows = L m with L = diag(scales), so m^{-1} = rows^{-1} L
    for i, row in enumerate(rows):
        row.extend(scales[i] if j == i else mpz(0) for j in range(n))
    pivots, _ = _bareiss(rows, n)
    if len(pivots) < n:
        raise SingularMatrix("matrix is singular")
    return Matrix(_back_substitute(rows, n))

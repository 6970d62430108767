"""Exact rational linear algebra.

Every quantity here is a :class:`fractions.Fraction` or a Python ``int``; no
floating point is used anywhere in this module.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Iterable, Sequence

import gmpy2

__all__ = [
    "Rational",
    "Matrix",
    "SymmetricForm",
    "HNF",
    "NotPositiveDefinite",
    "Singular",
    "to_rational",
    "format_rational",
    "canonical",
    "ldlt",
    "det",
    "invert",
    "hnf",
    "psd_rank",
]

Rational = Fraction

_RATIONAL_RE = re.compile(r"^\s*[+-]?\d+\s*(/\s*\d+\s*)?$")


class NotPositiveDefinite(ValueError):
    """A symmetric form failed the positive-definiteness check."""


class Singular(ValueError):
    """A matrix that must be invertible has zero determinant."""


def to_rational(x) -> Fraction:
    """Convert an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats and decimal strings are rejected: values entering the library must
    already be exact.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        if not _RATIONAL_RE.match(x):
            raise ValueError(f"not an exact rational literal: {x!r}")
        value = Fraction(x.replace(" ", ""))
        return value
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def format_rational(x: Fraction | int) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


# gmpy2.mpq is used as a faster exact rational inside hot loops only; every
# value crossing a public boundary is a Fraction.
def fast(x: Fraction):
    return gmpy2.mpq(x.numerator, x.denominator)


def slow(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def canonical(v: Iterable[int]) -> tuple[int, ...]:
    """Representative of ``±v`` whose first nonzero coordinate is positive."""
    v = tuple(int(c) for c in v)
    for c in v:
        if c:
            return v if c > 0 else tuple(-x for x in v)
    return v


class Matrix:
    """Immutable dense matrix with Fraction entries."""

    __slots__ = ("_rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable]):
        rows = tuple(tuple(to_rational(x) for x in row) for row in rows)
        if not rows or not rows[0]:
            raise ValueError("matrix must have at least one row and column")
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix rows")
        self._rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def diag(cls, entries: Sequence) -> Matrix:
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> Matrix:
        return cls([[0] * ncols for _ in range(nrows)])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> Matrix:
        return cls(zip(*columns))

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._rows

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._rows[i]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self._rows)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self._rows[i][j]

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    @property
    def T(self) -> Matrix:
        return Matrix(zip(*self._rows))

    def __matmul__(self, other: Matrix) -> Matrix:
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other._rows))
        return Matrix(
            [[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols] for r in self._rows]
        )

    def __add__(self, other: Matrix) -> Matrix:
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)])

    def __sub__(self, other: Matrix) -> Matrix:
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)])

    def __rmul__(self, c) -> Matrix:
        c = to_rational(c)
        return Matrix([[c * a for a in r] for r in self._rows])

    def __neg__(self) -> Matrix:
        return Matrix([[-a for a in r] for r in self._rows])

    def __eq__(self, other) -> bool:
        if isinstance(other, SymmetricForm):
            other = other.matrix
        if not isinstance(other, Matrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def apply(self, v: Sequence) -> tuple[Fraction, ...]:
        return tuple(sum((a * b for a, b in zip(r, v)), Fraction(0)) for r in self._rows)

    def is_upper_triangular(self) -> bool:
        return all(self._rows[i][j] == 0 for i in range(self.nrows) for j in range(min(i, self.ncols)))

    def to_json(self) -> list[list[str]]:
        return [[format_rational(x) for x in r] for r in self._rows]

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(format_rational(x) for x in r) + "]" for r in self._rows)
        return f"Matrix([{body}])"


class SymmetricForm:
    """Positive-definite symmetric rational matrix (a Gram form).

    Construction checks symmetry and certifies positive definiteness with an
    exact LDLᵀ factorization, which is cached.
    """

    __slots__ = ("matrix", "n", "_ldlt")

    def __init__(self, rows):
        m = rows if isinstance(rows, Matrix) else Matrix(rows)
        if not m.is_square():
            raise ValueError("Gram form must be square")
        if m.nrows < 1:
            raise ValueError("Gram form must have dimension >= 1")
        for i in range(m.nrows):
            for j in range(i):
                if m[i, j] != m[j, i]:
                    raise ValueError(f"Gram form is not symmetric at ({i}, {j})")
        self.matrix = m
        self.n = m.nrows
        self._ldlt = ldlt(m)

    @classmethod
    def from_upper(cls, n: int, upper: Sequence) -> SymmetricForm:
        """Build from the row-major upper triangle (n(n+1)/2 entries)."""
        upper = [to_rational(x) for x in upper]
        if len(upper) != n * (n + 1) // 2:
            raise ValueError("wrong number of upper-triangle entries")
        rows = [[Fraction(0)] * n for _ in range(n)]
        it = iter(upper)
        for i in range(n):
            for j in range(i, n):
                rows[i][j] = rows[j][i] = next(it)
        return cls(rows)

    @classmethod
    def from_basis(cls, basis: Matrix | Sequence) -> SymmetricForm:
        a = basis if isinstance(basis, Matrix) else Matrix(basis)
        return cls(a.T @ a)

    @classmethod
    def identity(cls, n: int) -> SymmetricForm:
        return cls(Matrix.identity(n))

    @classmethod
    def diag(cls, entries: Sequence) -> SymmetricForm:
        return cls(Matrix.diag(entries))

    @property
    def factors(self) -> tuple[Matrix, tuple[Fraction, ...]]:
        return self._ldlt

    def __getitem__(self, ij):
        return self.matrix[ij]

    def value(self, v: Sequence[int]) -> Fraction:
        """The quadratic form ᵗv·Q·v."""
        rows = self.matrix.rows
        total = Fraction(0)
        for i, vi in enumerate(v):
            if not vi:
                continue
            r = rows[i]
            total += vi * (r[i] * vi + 2 * sum((r[j] * v[j] for j in range(i + 1, self.n) if v[j]), Fraction(0)))
        return total

    def bilinear(self, u: Sequence[int], v: Sequence[int]) -> Fraction:
        return sum((ui * x for ui, x in zip(u, self.matrix.apply(v))), Fraction(0))

    def det(self) -> Fraction:
        d = Fraction(1)
        for x in self._ldlt[1]:
            d *= x
        return d

    def scaled(self, c) -> SymmetricForm:
        return SymmetricForm(to_rational(c) * self.matrix)

    def transform(self, u: Matrix | Sequence) -> SymmetricForm:
        """The form ᵗU·Q·U (change of basis by U)."""
        u = u if isinstance(u, Matrix) else Matrix(u)
        return SymmetricForm(u.T @ self.matrix @ u)

    def upper(self) -> tuple[Fraction, ...]:
        return tuple(self.matrix[i, j] for i in range(self.n) for j in range(i, self.n))

    def to_json(self) -> list[list[str]]:
        return self.matrix.to_json()

    def __eq__(self, other) -> bool:
        if isinstance(other, SymmetricForm):
            return self.matrix == other.matrix
        if isinstance(other, Matrix):
            return self.matrix == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.matrix)

    def __repr__(self) -> str:
        return f"SymmetricForm({self.matrix!r})"


def ldlt(q: Matrix | SymmetricForm) -> tuple[Matrix, tuple[Fraction, ...]]:
    """Exact LDLᵀ factorization of a symmetric matrix.

    Returns the lower unitriangular ``L`` and the pivots ``D`` with
    ``L·diag(D)·ᵗL == q``. Raises :class:`NotPositiveDefinite` as soon as a
    pivot is not strictly positive.
    """
    if isinstance(q, SymmetricForm):
        return q.factors
    n = q.nrows
    a = [list(r) for r in q.rows]
    L = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    D: list[Fraction] = []
    for j in range(n):
        dj = a[j][j] - sum((L[j][k] * L[j][k] * D[k] for k in range(j)), Fraction(0))
        if dj <= 0:
            raise NotPositiveDefinite(f"pivot {j} is {dj}, form is not positive definite")
        D.append(dj)
        for i in range(j + 1, n):
            s = a[i][j] - sum((L[i][k] * L[j][k] * D[k] for k in range(j)), Fraction(0))
            L[i][j] = s / dj
    return Matrix(L), tuple(D)


def det(m: Matrix) -> Fraction:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if not m.is_square():
        raise ValueError("determinant of a non-square matrix")
    n = m.nrows
    # scale each row to integers, then undo the scaling at the end
    scale = Fraction(1)
    a = []
    for r in m.rows:
        den = reduce(lcm, (x.denominator for x in r), 1)
        scale /= den
        a.append([int(x * den) for x in r])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1] * scale


def invert(m: Matrix) -> Matrix:
    """Exact inverse by Gauss-Jordan elimination; raises :class:`Singular`."""
    if not m.is_square():
        raise ValueError("inverse of a non-square matrix")
    n = m.nrows
    a = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m.rows)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            raise Singular("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return Matrix([r[n:] for r in a])


class HNF:
    """Column-style Hermite normal form of an integer span.

    ``columns`` is the echelon basis: pivot rows strictly increase, pivots are
    positive, and every entry to the left of a pivot (same row, earlier
    column) lies in ``[0, pivot)``.
    """

    __slots__ = ("n", "columns", "pivots")

    def __init__(self, n: int, columns: tuple[tuple[int, ...], ...], pivots: tuple[int, ...]):
        self.n = n
        self.columns = columns
        self.pivots = pivots

    @property
    def rank(self) -> int:
        return len(self.columns)

    @property
    def index(self) -> int | None:
        """Index of the span in Z^n, or ``None`` when the rank is deficient."""
        if self.rank < self.n:
            return None
        idx = 1
        for c, p in zip(self.columns, self.pivots):
            idx *= c[p]
        return idx

    def matrix(self) -> Matrix:
        return Matrix.from_columns(self.columns)

    def __eq__(self, other) -> bool:
        return isinstance(other, HNF) and (self.n, self.columns) == (other.n, other.columns)

    def __repr__(self) -> str:
        return f"HNF(n={self.n}, rank={self.rank}, columns={list(self.columns)})"


def hnf(vectors: Sequence[Sequence[int]]) -> HNF:
    """Hermite normal form of the integer span of ``vectors``."""
    if not vectors:
        raise ValueError("hnf needs at least one vector")
    n = len(vectors[0])
    work = [list(map(int, v)) for v in vectors]
    if any(len(v) != n for v in work):
        raise ValueError("vectors must share a common length")
    work = [v for v in work if any(v)]
    basis: list[list[int]] = []
    pivots: list[int] = []
    for row in range(n):
        active = [v for v in work if v[row]]
        if not active:
            continue
        rest = [v for v in work if not v[row]]
        # Euclid on the row entries until a single vector is left
        while len(active) > 1:
            active.sort(key=lambda v: abs(v[row]))
            piv = active[0]
            nxt = [piv]
            for v in active[1:]:
                q = v[row] // piv[row]
                w = [a - q * b for a, b in zip(v, piv)]
                if w[row]:
                    nxt.append(w)
                elif any(w):
                    rest.append(w)
            active = nxt
        piv = active[0]
        if piv[row] < 0:
            piv = [-x for x in piv]
        basis.append(piv)
        pivots.append(row)
        work = rest
    # reduce entries left of each pivot into [0, pivot)
    for j, p in enumerate(pivots):
        d = basis[j][p]
        for i in range(j):
            q = basis[i][p] // d
            if q:
                basis[i] = [a - q * b for a, b in zip(basis[i], basis[j])]
    return HNF(n, tuple(tuple(c) for c in basis), tuple(pivots))


def psd_rank(m: Matrix) -> int:
    """Rank of a symmetric positive semidefinite matrix.

    Uses symmetric elimination with diagonal pivoting; raises ``ValueError``
    if the matrix is not symmetric or turns out not to be PSD.
    """
    if not m.is_square():
        raise ValueError("psd_rank needs a square matrix")
    n = m.nrows
    a = [list(r) for r in m.rows]
    for i in range(n):
        for j in range(i):
            if a[i][j] != a[j][i]:
                raise ValueError("matrix is not symmetric")
    active = list(range(n))
    rank = 0
    while active:
        p = max(active, key=lambda i: a[i][i])
        d = a[p][p]
        if d < 0:
            raise ValueError("matrix is not positive semidefinite")
        if d == 0:
            # a PSD matrix with zero diagonal on the remaining block is zero
            if any(a[i][j] != 0 for i in active for j in active):
                raise ValueError("matrix is not positive semidefinite")
            break
        active.remove(p)
        rank += 1
        for i in active:
            f = a[i][p] / d
            if f:
                for j in active:
                    a[i][j] -= f * a[p][j]
    return rank

"""Exact rational matrices.

Scalars are ``fractions.Fraction``; a ``Matrix`` is an immutable dense grid of
them. Elimination always pivots on the first nonzero entry scanning down a
column, so echelon forms and kernel bases are reproducible.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction, str]

ZERO = Fraction(0)
ONE = Fraction(1)


class Singular(ArithmeticError):
    """Raised when inverting a matrix that has no inverse."""


class NoSolution(ArithmeticError):
    """Raised when a right-hand side is outside the column space."""


def rational(x: Scalar) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction.

    Floats are rejected so that inexact values cannot leak in.
    """
    if type(x) is Fraction:
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        text = x.strip()
        if "/" in text:
            p, q = text.split("/", 1)
            den = int(q)
            if den == 0:
                raise ValueError(f"zero denominator in {x!r}")
            return Fraction(int(p), den)
        return Fraction(int(text))
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


def format_rational(q: Fraction) -> str:
    """"p/q" or "p" when the denominator is 1."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class Matrix:
    """Immutable dense matrix over the rationals."""

    __slots__ = ("rows", "cols", "_e", "_nz")

    def __init__(self, entries: Iterable[Iterable[Scalar]], cols: int | None = None):
        grid = tuple(tuple(x if type(x) is Fraction else rational(x) for x in row) for row in entries)
        if grid:
            width = len(grid[0])
            if any(len(r) != width for r in grid):
                raise ValueError("ragged matrix rows")
        else:
            width = cols or 0
        if cols is not None and grid and width != cols:
            raise ValueError("column count mismatch")
        self.rows = len(grid)
        self.cols = width
        self._e = grid
        self._nz = None

    def _sparse(self) -> tuple:
        # nonzero (column, entry) pairs per row, built on first use
        if self._nz is None:
            self._nz = tuple(tuple((j, a) for j, a in enumerate(r) if a) for r in self._e)
        return self._nz

    # constructors

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls([[ZERO] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def diag(cls, values: Sequence[Scalar]) -> "Matrix":
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Scalar]], rows: int | None = None) -> "Matrix":
        if not columns:
            return cls.zeros(rows or 0, 0)
        n = len(columns[0])
        return cls([[columns[j][i] for j in range(len(columns))] for i in range(n)])

    @classmethod
    def column(cls, values: Sequence[Scalar]) -> "Matrix":
        return cls([[v] for v in values], cols=1)

    @classmethod
    def block(cls, blocks: Sequence[Sequence["Matrix"]]) -> "Matrix":
        out = []
        for brow in blocks:
            height = brow[0].rows
            for i in range(height):
                line: list[Fraction] = []
                for b in brow:
                    if b.rows != height:
                        raise ValueError("block heights differ")
                    line.extend(b._e[i])
                out.append(line)
        return cls(out, cols=sum(b.cols for b in blocks[0]))

    # access

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self._e[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._e[i]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self._e)

    def columns(self) -> list[tuple[Fraction, ...]]:
        return [self.col(j) for j in range(self.cols)]

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._e]

    def submatrix(self, rows: range | Sequence[int], cols: range | Sequence[int]) -> "Matrix":
        return Matrix([[self._e[i][j] for j in cols] for i in rows], cols=len(cols))

    # arithmetic

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Matrix) and self.shape == other.shape and self._e == other._e

    def __hash__(self) -> int:
        return hash((self.shape, self._e))

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(format_rational(x) for x in r) + "]" for r in self._e)
        return f"Matrix([{body}])"

    def _same_shape(self, other: "Matrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._e, other._e)], cols=self.cols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self._e, other._e)], cols=self.cols)

    def __neg__(self) -> "Matrix":
        return Matrix([[-a for a in r] for r in self._e], cols=self.cols)

    def scale(self, k: Scalar) -> "Matrix":
        k = rational(k)
        return Matrix([[k * a for a in r] for r in self._e], cols=self.cols)

    def __rmul__(self, k: Scalar) -> "Matrix":
        return self.scale(k)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        orows = other._sparse()
        out = []
        for r in self._sparse():
            line = [ZERO] * other.cols
            for k, a in r:
                for j, b in orows[k]:
                    line[j] += a * b
            out.append(line)
        return Matrix(out, cols=other.cols)

    def apply(self, v: Sequence[Fraction]) -> tuple[Fraction, ...]:
        """Matrix times a plain vector."""
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        out = []
        for r in self._sparse():
            s = ZERO
            for j, a in r:
                b = v[j]
                if b:
                    s += a * b
            out.append(s)
        return tuple(out)

    @property
    def T(self) -> "Matrix":
        return Matrix([list(c) for c in self.columns()], cols=self.rows)

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return Matrix([r + s for r, s in zip(self._e, other._e)], cols=self.cols + other.cols)

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise ValueError("column count mismatch")
        return Matrix(self._e + other._e, cols=self.cols)

    def is_zero(self) -> bool:
        return all(not a for r in self._e for a in r)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def rank(self) -> int:
        return len(rref(self)[1])


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = [list(r) for r in m._e]
    rows, cols = m.rows, m.cols
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = ONE / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return Matrix(a, cols=cols), pivots


def kernel(m: Matrix) -> Matrix:
    """Null space basis as columns, one per free variable."""
    red, pivots = rref(m)
    free = [j for j in range(m.cols) if j not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * m.cols
        v[f] = ONE
        for i, p in enumerate(pivots):
            v[p] = -red[i, f]
        basis.append(v)
    return Matrix.from_columns(basis, rows=m.cols) if basis else Matrix.zeros(m.cols, 0)


def invert(m: Matrix) -> Matrix:
    if not m.is_square():
        raise ValueError("only square matrices can be inverted")
    n = m.rows
    red, pivots = rref(m.hstack(Matrix.identity(n)))
    if sum(1 for p in pivots if p < n) != n:
        raise Singular("matrix is singular")
    return red.submatrix(range(n), range(n, 2 * n))


def solve(m: Matrix, b: Matrix) -> Matrix:
    """Some x with m @ x = b; free variables are set to zero."""
    if b.rows != m.rows:
        raise ValueError("right-hand side has the wrong number of rows")
    red, pivots = rref(m.hstack(b))
    if any(p >= m.cols for p in pivots):
        raise NoSolution("right-hand side is not in the column space")
    x = [[ZERO] * b.cols for _ in range(m.cols)]
    for i, p in enumerate(pivots):
        x[p] = list(red.row(i)[m.cols:])
    return Matrix(x, cols=b.cols)


def same_column_space(a: Matrix, b: Matrix) -> bool:
    """True when the two column spans coincide."""
    if a.rows != b.rows:
        return False
    ra = a.rank()
    return ra == b.rank() and a.hstack(b).rank() == ra


# plain vectors are tuples of Fractions

Vector = tuple


def vec(values: Iterable[Scalar]) -> Vector:
    return tuple(rational(x) for x in values)


def zero_vec(n: int) -> Vector:
    return (ZERO,) * n


def unit_vec(n: int, i: int) -> Vector:
    return tuple(ONE if k == i else ZERO for k in range(n))


def vadd(*vs: Vector) -> Vector:
    out = [rational(a) for a in vs[0]]
    for v in vs[1:]:
        for i, b in enumerate(v):
            if b:
                out[i] += b
    return tuple(out)


def vsub(x: Vector, y: Vector) -> Vector:
    return tuple(a - b if b else a for a, b in zip(x, y))


def vscale(k: Scalar, x: Vector) -> Vector:
    k = rational(k)
    return tuple(k * a if a else ZERO for a in x)


def is_zero_vec(x: Vector) -> bool:
    return not any(x)

"""Lie algebras as structure constants, bilinear forms, subspaces and maps.

Every verification returns a ``Report`` whose failures name the check, the
basis indices that witness it and the two sides that disagreed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence

from .exact_linalg import (
    ZERO,
    Matrix,
    Scalar,
    Singular,
    Vector,
    invert,
    kernel,
    rational,
    rref,
    same_column_space,
    unit_vec,
    zero_vec,
)


class DegenerateForm(ValueError):
    """A form (or its restriction to a subspace) is degenerate."""


@dataclass(frozen=True)
class Failure:
    check: str
    witness: tuple
    lhs: Any
    rhs: Any


@dataclass
class Report:
    """Outcome of a batch of exact checks."""

    checks: list[str] = field(default_factory=list)
    failures: list[Failure] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def expect(self, check: str, witness: tuple, lhs: Any, rhs: Any) -> bool:
        """Record the check and a failure when ``lhs != rhs``."""
        self.touch(check)
        if lhs != rhs:
            self.failures.append(Failure(check, tuple(witness), lhs, rhs))
            return False
        return True

    def touch(self, check: str) -> None:
        if check not in self.checks:
            self.checks.append(check)

    def merge(self, other: "Report") -> "Report":
        for c in other.checks:
            self.touch(c)
        self.failures.extend(other.failures)
        return self

    def failed_checks(self) -> list[str]:
        seen: list[str] = []
        for f in self.failures:
            if f.check not in seen:
                seen.append(f.check)
        return seen

    def results(self) -> dict[str, bool]:
        bad = set(self.failed_checks())
        return {c: c not in bad for c in self.checks}

    def first(self) -> Failure | None:
        return self.failures[0] if self.failures else None


class CheckFailed(ValueError):
    """Raised when a construction is refused because a check failed."""

    def __init__(self, message: str, report: Report):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class LieAlgebra:
    """Structure constants ``c[i][j][k]`` with ``[e_i, e_j] = sum_k c[i][j][k] e_k``."""

    dim: int
    c: tuple
    name: str = "g"
    basis: tuple = ()

    def __post_init__(self):
        n = self.dim
        if len(self.c) != n or any(len(row) != n or any(len(v) != n for v in row) for row in self.c):
            raise ValueError("structure constants must be an n x n x n table")
        table = tuple(tuple(tuple(rational(x) for x in self.c[i][j]) for j in range(n)) for i in range(n))
        object.__setattr__(self, "c", table)
        names = tuple(self.basis) if self.basis else tuple(f"e{i}" for i in range(n))
        if len(names) != n:
            raise ValueError("basis names do not match the dimension")
        object.__setattr__(self, "basis", names)

    @classmethod
    def from_brackets(
        cls,
        basis: Sequence[str],
        brackets: Mapping[tuple[str, str], Mapping[str, Scalar]],
        name: str = "g",
    ) -> "LieAlgebra":
        """Build from a sparse table of ``[x, y]`` values; ``[y, x]`` is filled in."""
        n = len(basis)
        index = {b: i for i, b in enumerate(basis)}
        c = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
        for (x, y), value in brackets.items():
            i, j = index[x], index[y]
            for z, q in value.items():
                q = rational(q)
                c[i][j][index[z]] += q
                if i != j:
                    c[j][i][index[z]] -= q
        return cls(n, c, name, tuple(basis))

    @classmethod
    def abelian(cls, n: int, name: str = "abelian") -> "LieAlgebra":
        return cls(n, [[[0] * n for _ in range(n)] for _ in range(n)], name)

    def bracket(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> Vector:
        return bracket(self, x, y)

    def bracket_basis(self, i: int, j: int) -> Vector:
        return self.c[i][j]

    def ad(self, x: Sequence[Fraction]) -> Matrix:
        """Matrix of ``ad_x`` (column j is ``[x, e_j]``)."""
        n = self.dim
        return Matrix.from_columns([self.bracket(x, unit_vec(n, j)) for j in range(n)], rows=n)

    @cached_property
    def nonzero(self) -> tuple:
        """``nonzero[i][j]`` lists the pairs ``(k, c_ij^k)`` with nonzero constant."""
        n = self.dim
        return tuple(tuple(tuple((k, v) for k, v in enumerate(self.c[i][j]) if v) for j in range(n)) for i in range(n))

    def is_abelian(self) -> bool:
        return all(not x for row in self.c for v in row for x in v)


def bracket(a: LieAlgebra, x: Sequence[Fraction], y: Sequence[Fraction]) -> Vector:
    n = a.dim
    if len(x) != n or len(y) != n:
        raise ValueError(f"vectors must have length {n}")
    out = [ZERO] * n
    for i, xi in enumerate(x):
        if not xi:
            continue
        nzi = a.nonzero[i]
        for j, yj in enumerate(y):
            if not yj or not nzi[j]:
                continue
            w = xi * yj
            for k, ck in nzi[j]:
                out[k] += w * ck
    return tuple(out)


def check_antisymmetry(a: LieAlgebra) -> Report:
    rep = Report()
    rep.touch("antisymmetry")
    n = a.dim
    for i in range(n):
        for j in range(i, n):
            for k in range(n):
                rep.expect("antisymmetry", (i, j, k), a.c[i][j][k], -a.c[j][i][k])
    return rep


def check_jacobi(a: LieAlgebra) -> Report:
    """Antisymmetry and the Jacobi identity on all basis triples.

    A failure witness is ``(i, j, l, k)``: component ``k`` of the cyclic sum
    for ``(e_i, e_j, e_l)``. With antisymmetry in place the cyclic sum is
    alternating, so only ``i < j < l`` is visited.
    """
    rep = check_antisymmetry(a)
    rep.touch("jacobi")
    n = a.dim
    nz = a.nonzero
    if rep.passed:
        triples = ((i, j, l) for i in range(n) for j in range(i + 1, n) for l in range(j + 1, n))
    else:
        triples = ((i, j, l) for i in range(n) for j in range(n) for l in range(n))
    for i, j, l in triples:
        s = [ZERO] * n
        for x, y, z in ((i, j, l), (j, l, i), (l, i, j)):
            for m, v in nz[x][y]:
                for k, w in nz[m][z]:
                    s[k] += v * w
        for k, v in enumerate(s):
            if v:
                rep.failures.append(Failure("jacobi", (i, j, l, k), v, ZERO))
    return rep


@dataclass(frozen=True)
class BilinearForm:
    """Symmetric nondegenerate form given by its Gram matrix."""

    gram: Matrix

    def __post_init__(self):
        g = self.gram if isinstance(self.gram, Matrix) else Matrix(self.gram)
        object.__setattr__(self, "gram", g)
        if not g.is_square() or g != g.T:
            raise ValueError("Gram matrix must be square and symmetric")
        try:
            invert(g)
        except Singular:
            raise DegenerateForm("bilinear form is degenerate") from None

    @property
    def dim(self) -> int:
        return self.gram.rows

    def pair(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> Fraction:
        gy = self.gram.apply(y)
        return sum((a * b for a, b in zip(x, gy)), ZERO)

    def restrict(self, s: "Subspace") -> Matrix:
        return s.basis.T @ self.gram @ s.basis

    def cross(self, s: "Subspace", t: "Subspace") -> Matrix:
        """Matrix of pairings ``(s_a, t_b)``."""
        return s.basis.T @ self.gram @ t.basis


def check_ad_invariance(a: LieAlgebra, f: BilinearForm) -> Report:
    """``([e_i, e_j], e_l) + (e_j, [e_i, e_l]) = 0`` on all basis triples."""
    if f.dim != a.dim:
        raise ValueError("form and algebra dimensions differ")
    rep = Report()
    rep.touch("form-invariance")
    n = a.dim
    g = f.gram
    # M_i = ad_i^T G must be skew for every i
    rows = [g.row(k) for k in range(n)]
    for i in range(n):
        m = []
        for j in range(n):
            row = [ZERO] * n
            for k, v in a.nonzero[i][j]:
                row = [x + v * y for x, y in zip(row, rows[k])]
            m.append(row)
        for j in range(n):
            for l in range(j, n):
                lhs, rhs = m[j][l], -m[l][j]
                if lhs != rhs:
                    rep.failures.append(Failure("form-invariance", (i, j, l), lhs, rhs))
    return rep


@dataclass(frozen=True)
class Subspace:
    """Column span of a full-rank basis matrix."""

    basis: Matrix

    def __post_init__(self):
        b = self.basis if isinstance(self.basis, Matrix) else Matrix(self.basis)
        object.__setattr__(self, "basis", b)
        if b.rank() != b.cols:
            raise ValueError("subspace basis columns are linearly dependent")

    @classmethod
    def whole(cls, n: int) -> "Subspace":
        return cls(Matrix.identity(n))

    @classmethod
    def span(cls, vectors: Sequence[Sequence[Scalar]], ambient_dim: int | None = None) -> "Subspace":
        if not vectors:
            return cls(Matrix.zeros(ambient_dim or 0, 0))
        return cls(Matrix.from_columns(vectors))

    @property
    def ambient_dim(self) -> int:
        return self.basis.rows

    @property
    def dim(self) -> int:
        return self.basis.cols

    def vector(self, coords: Sequence[Fraction]) -> Vector:
        """Ambient vector with the given coordinates in this basis."""
        return self.basis.apply(coords)

    @cached_property
    def _left_inverse(self) -> tuple[list[int], Matrix]:
        # independent rows of the basis and the inverse of that square block
        _, rows = rref(self.basis.T)
        if not rows:
            return rows, Matrix.zeros(0, 0)
        return rows, invert(self.basis.submatrix(rows, range(self.dim)))

    def coords(self, v: Sequence[Fraction]) -> Vector:
        """Coordinates of an ambient vector; ``ValueError`` if outside."""
        if len(v) != self.ambient_dim:
            raise ValueError("vector length mismatch")
        rows, inv = self._left_inverse
        if not rows:
            if any(v):
                raise ValueError("vector does not lie in the subspace")
            return ()
        c = inv.apply([v[i] for i in rows])
        if self.basis.apply(c) != tuple(v):
            raise ValueError("vector does not lie in the subspace")
        return c

    def contains(self, v: Sequence[Fraction]) -> bool:
        try:
            self.coords(v)
        except ValueError:
            return False
        return True

    def same_as(self, other: "Subspace") -> bool:
        return same_column_space(self.basis, other.basis)


@dataclass(frozen=True)
class LinearMap:
    """Map between based subspaces; ``coeffs`` is target-dim x source-dim."""

    source: Subspace
    target: Subspace
    coeffs: Matrix

    def __post_init__(self):
        m = self.coeffs if isinstance(self.coeffs, Matrix) else Matrix(self.coeffs)
        object.__setattr__(self, "coeffs", m)
        if m.shape != (self.target.dim, self.source.dim):
            raise ValueError(
                f"map coefficients have shape {m.shape}, expected {(self.target.dim, self.source.dim)}"
            )

    def __call__(self, coords: Sequence[Fraction]) -> Vector:
        return self.coeffs.apply(coords)

    def with_coeffs(self, coeffs: Matrix) -> "LinearMap":
        return LinearMap(self.source, self.target, coeffs)


def is_isotropic(f: BilinearForm, s: Subspace) -> bool:
    return f.restrict(s).is_zero()


def is_lagrangian(f: BilinearForm, s: Subspace) -> bool:
    return 2 * s.dim == f.dim and is_isotropic(f, s)


def orthogonal_complement(f: BilinearForm, s: Subspace) -> Subspace:
    k = kernel(s.basis.T @ f.gram)
    return Subspace(k)


def adjoint(coeffs: Matrix, pair_src: Matrix, pair_tgt: Matrix) -> Matrix:
    """Adjoint of a matrix with respect to two pairings.

    Solves ``(M x, y)_tgt = (x, N y)_src`` for ``N``, where the pairings are
    given by their matrices. Raises ``DegenerateForm`` if ``pair_src`` is
    singular.
    """
    try:
        inv = invert(pair_src)
    except Singular:
        raise DegenerateForm("restricted pairing is degenerate") from None
    return inv @ coeffs.T @ pair_tgt


def transpose_map(m: LinearMap, f: BilinearForm) -> LinearMap:
    """Transpose of ``m`` relative to the ambient form ``f``.

    Two situations occur. When source and target are isotropic and paired
    nondegenerately (a Lagrangian pair, as for maps ``g+ -> g-``), the
    transpose is again a map source -> target with ``(m x, y) = (x, m^T y)``
    for ``x, y`` in the source. Otherwise the form must restrict
    nondegenerately to both spaces and the transpose goes target -> source.
    """
    s, t = m.source, m.target
    cross = f.cross(s, t)
    if s.dim == t.dim and is_isotropic(f, s) and is_isotropic(f, t):
        try:
            invert(cross)
        except Singular:
            raise DegenerateForm("source and target are not dually paired") from None
        # (M x, y) = x^T M^T P^T y  and  (x, N y) = x^T P N y
        return LinearMap(s, t, adjoint(m.coeffs, cross, cross.T))
    rt = f.restrict(t)
    try:
        invert(rt)
    except Singular:
        raise DegenerateForm("form restricted to the target is degenerate") from None
    return LinearMap(t, s, adjoint(m.coeffs, f.restrict(s), rt))


def sym_skew_split(m: LinearMap, f: BilinearForm) -> tuple[LinearMap, LinearMap]:
    """``m = G + B`` with ``G`` symmetric and ``B`` skew relative to ``f``."""
    mt = transpose_map(m, f)
    if mt.source != m.source or mt.target != m.target:
        raise ValueError("symmetric/skew split needs a transpose with the same source and target")
    half = Fraction(1, 2)
    return (
        m.with_coeffs((m.coeffs + mt.coeffs).scale(half)),
        m.with_coeffs((m.coeffs - mt.coeffs).scale(half)),
    )


def opposite(a: LieAlgebra) -> LieAlgebra:
    n = a.dim
    c = [[[-x for x in a.c[i][j]] for j in range(n)] for i in range(n)]
    return LieAlgebra(n, c, a.name + "^op", a.basis)


def complementary(first: Subspace, second: Subspace) -> Matrix:
    """Inverse of the joined basis; raises ``ValueError`` if not complementary."""
    joined = first.basis.hstack(second.basis)
    if not joined.is_square():
        raise ValueError("subspaces are not complementary")
    try:
        return invert(joined)
    except Singular:
        raise ValueError("subspaces are not complementary") from None


def projector(split: tuple[Subspace, Subspace], which: int) -> LinearMap:
    """Projection onto ``split[which]`` along the other subspace."""
    first, second = split
    inv = complementary(first, second)
    n, d = first.ambient_dim, first.dim
    keep = [1 if (i < d) == (which == 0) else 0 for i in range(n)]
    p = first.basis.hstack(second.basis) @ Matrix.diag(keep) @ inv
    whole = Subspace.whole(n)
    return LinearMap(whole, whole, p)


def split_coords(first: Subspace, second: Subspace, v: Sequence[Fraction]) -> tuple[Vector, Vector]:
    """Coordinates of ``v`` along ``first`` and ``second``."""
    c = complementary(first, second).apply(v)
    return c[: first.dim], c[first.dim:]


def graph(source: Subspace, target: Subspace, coeffs: Matrix) -> Subspace:
    """``{x + M x}`` for ``x`` in ``source``, as a subspace of the ambient space."""
    return Subspace(source.basis + target.basis @ coeffs)


def restrict_algebra(a: LieAlgebra, s: Subspace, name: str | None = None, basis: Iterable[str] = ()) -> LieAlgebra:
    """Structure constants of a subalgebra in its own basis.

    Raises ``ValueError`` if the subspace is not closed under the bracket.
    """
    d = s.dim
    cols = s.basis.columns()
    c = [[s.coords(a.bracket(cols[i], cols[j])) for j in range(d)] for i in range(d)]
    return LieAlgebra(d, c, name or a.name, tuple(basis))


def check_subalgebra(a: LieAlgebra, s: Subspace, label: str) -> Report:
    rep = Report()
    rep.touch(label)
    cols = s.basis.columns()
    for i in range(s.dim):
        for j in range(i + 1, s.dim):
            v = a.bracket(cols[i], cols[j])
            if not s.contains(v):
                rep.failures.append(Failure(label, (i, j), v, "outside subspace"))
    return rep


def direct_sum(a: LieAlgebra, b: LieAlgebra, name: str | None = None) -> LieAlgebra:
    n, m = a.dim, b.dim
    c = [[list(zero_vec(n + m)) for _ in range(n + m)] for _ in range(n + m)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                c[i][j][k] = a.c[i][j][k]
    for i in range(m):
        for j in range(m):
            for k in range(m):
                c[n + i][n + j][n + k] = b.c[i][j][k]
    return LieAlgebra(n + m, c, name or f"{a.name}+{b.name}", a.basis + b.basis)

"""Complex product structures {E, J, F} on a quadratic vector space.

All operators are stored in ambient coordinates. Block forms are written in an
adapted basis (first subspace, then second) and conjugated back.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact_linalg import Matrix, Singular, Vector, invert, kernel, rational
from .lie_core import (
    BilinearForm,
    LieAlgebra,
    LinearMap,
    Report,
    Subspace,
    complementary,
    graph,
    is_lagrangian,
    transpose_map,
)


@dataclass(frozen=True)
class ComplexProductStructure:
    E: Matrix
    J: Matrix
    F: Matrix
    form: BilinearForm

    @property
    def dim(self) -> int:
        return self.E.rows


@dataclass(frozen=True)
class DoubleSplitting:
    Fplus: Subspace
    Fminus: Subspace
    Eplus: Subspace
    Eminus: Subspace
    form: BilinearForm


def from_blocks(block: Matrix, first: Subspace, second: Subspace) -> Matrix:
    """Ambient matrix of an operator given in the adapted basis."""
    p = first.basis.hstack(second.basis)
    return p @ block @ complementary(first, second)


def to_blocks(op: Matrix, first: Subspace, second: Subspace) -> Matrix:
    """Matrix of an ambient operator in the adapted basis."""
    p = first.basis.hstack(second.basis)
    return complementary(first, second) @ op @ p


def _check_orthogonal_pair(form: BilinearForm, a: Subspace, b: Subspace) -> None:
    complementary(a, b)
    if not form.cross(a, b).is_zero():
        raise ValueError("subspaces are not orthogonal")


def _check_lagrangian_pair(form: BilinearForm, a: Subspace, b: Subspace) -> None:
    complementary(a, b)
    if not (is_lagrangian(form, a) and is_lagrangian(form, b)):
        raise ValueError("subspaces are not Lagrangian")


def _check_metric(G: LinearMap, form: BilinearForm) -> Matrix:
    """Validate symmetry and invertibility of G; return G^{-1}."""
    if transpose_map(G, form).coeffs != G.coeffs:
        raise ValueError("G is not symmetric")
    try:
        return invert(G.coeffs)
    except Singular:
        raise ValueError("G is singular") from None


def _check_twist(B: LinearMap, form: BilinearForm) -> None:
    if transpose_map(B, form).coeffs != -B.coeffs:
        raise ValueError("B is not skew-symmetric")


def cps_from_anti_isometry(
    Eplus: Subspace, Eminus: Subspace, phi: LinearMap, form: BilinearForm
) -> tuple[ComplexProductStructure, DoubleSplitting]:
    """Structure whose E has eigenspaces E+/E- and whose F swaps them via phi."""
    _check_orthogonal_pair(form, Eplus, Eminus)
    try:
        phi_inv = invert(phi.coeffs)
    except Singular:
        raise ValueError("phi is not invertible") from None
    if transpose_map(phi, form).coeffs != -phi_inv:
        raise ValueError("phi does not satisfy phi^T = -phi^{-1}")
    n = Eplus.dim
    eye, zero = Matrix.identity(n), Matrix.zeros(n, n)
    e = Matrix.block([[eye, zero], [zero, -eye]])
    f = Matrix.block([[zero, phi_inv], [phi.coeffs, zero]])
    j = f @ e
    c = ComplexProductStructure(
        from_blocks(e, Eplus, Eminus),
        from_blocks(j, Eplus, Eminus),
        from_blocks(f, Eplus, Eminus),
        form,
    )
    split = DoubleSplitting(
        graph(Eplus, Eminus, phi.coeffs), graph(Eplus, Eminus, -phi.coeffs), Eplus, Eminus, form
    )
    return c, split


def cps_from_metric(
    Fplus: Subspace, Fminus: Subspace, G: LinearMap, form: BilinearForm
) -> tuple[ComplexProductStructure, DoubleSplitting]:
    """Structure whose F has eigenspaces F+/F- and whose E has eigenspaces graph(+-G)."""
    _check_lagrangian_pair(form, Fplus, Fminus)
    g_inv = _check_metric(G, form)
    n = Fplus.dim
    eye, zero = Matrix.identity(n), Matrix.zeros(n, n)
    e = Matrix.block([[zero, g_inv], [G.coeffs, zero]])
    f = Matrix.block([[eye, zero], [zero, -eye]])
    j = f @ e
    c = ComplexProductStructure(
        from_blocks(e, Fplus, Fminus),
        from_blocks(j, Fplus, Fminus),
        from_blocks(f, Fplus, Fminus),
        form,
    )
    split = DoubleSplitting(
        Fplus, Fminus, graph(Fplus, Fminus, G.coeffs), graph(Fplus, Fminus, -G.coeffs), form
    )
    return c, split


def gauge_splitting(G: LinearMap, B: LinearMap, form: BilinearForm) -> tuple[Subspace, Subspace]:
    """The orthogonal pair graph(B + G), graph(B - G) over F+."""
    _check_lagrangian_pair(form, G.source, G.target)
    _check_metric(G, form)
    _check_twist(B, form)
    return (
        graph(G.source, G.target, B.coeffs + G.coeffs),
        graph(G.source, G.target, B.coeffs - G.coeffs),
    )


def gauged_blocks(G: Matrix, B: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Block matrices of E_B, J_B, F_B in the Lagrangian splitting F+ + F-."""
    gi = invert(G)
    n = G.rows
    eye = Matrix.identity(n)
    zero = Matrix.zeros(n, n)
    bgb = B @ gi @ B
    e = Matrix.block([[-(gi @ B), gi], [G - bgb, B @ gi]])
    j = Matrix.block([[-(gi @ B), gi], [-G - bgb, B @ gi]])
    f = Matrix.block([[eye, zero], [B.scale(2), -eye]])
    return e, j, f


def cps_gauged(G: LinearMap, B: LinearMap, form: BilinearForm) -> ComplexProductStructure:
    gauge_splitting(G, B, form)
    e, j, f = gauged_blocks(G.coeffs, B.coeffs)
    fp, fm = G.source, G.target
    return ComplexProductStructure(from_blocks(e, fp, fm), from_blocks(j, fp, fm), from_blocks(f, fp, fm), form)


def _expect_matrix(rep: Report, check: str, lhs: Matrix, rhs: Matrix) -> None:
    rep.touch(check)
    for i in range(lhs.rows):
        for j in range(lhs.cols):
            if lhs[i, j] != rhs[i, j]:
                rep.expect(check, (i, j), lhs[i, j], rhs[i, j])


def verify_cps(c: ComplexProductStructure) -> Report:
    n = c.dim
    eye = Matrix.identity(n)
    q = c.form.gram
    E, J, F = c.E, c.J, c.F
    rep = Report()
    _expect_matrix(rep, "E-squared-identity", E @ E, eye)
    _expect_matrix(rep, "J-squared-minus-identity", J @ J, -eye)
    _expect_matrix(rep, "E-J-anticommute", E @ J + J @ E, Matrix.zeros(n, n))
    _expect_matrix(rep, "F-equals-JE", F, J @ E)
    _expect_matrix(rep, "F-squared-identity", F @ F, eye)
    _expect_matrix(rep, "E-symmetric", E.T @ q, q @ E)
    _expect_matrix(rep, "J-symmetric", J.T @ q, q @ J)
    _expect_matrix(rep, "F-skew", F.T @ q, -(q @ F))
    return rep


def eigenspace(op: Matrix, eigenvalue) -> Subspace:
    """Eigenspace of an involution for the eigenvalue +1 or -1."""
    ev = rational(eigenvalue)
    if ev not in (1, -1):
        raise ValueError("only the eigenvalues +1 and -1 are supported")
    n = op.rows
    if op @ op != Matrix.identity(n):
        raise ValueError("operator is not an involution")
    return Subspace(kernel(op - Matrix.identity(n).scale(ev)))


def dual_gauge_data(G: LinearMap, B: LinearMap) -> tuple[LinearMap, LinearMap]:
    """Maps F- -> F+ with (B +- G)(Bt +- Gt) = I.

    Raises ``Singular`` when G - B G^{-1} B is not invertible.
    """
    g, b = G.coeffs, B.coeffs
    gi = invert(g)
    k = g - b @ gi @ b
    try:
        ki = invert(k)
    except Singular:
        raise Singular("G - B G^-1 B is singular") from None
    gt, bt = ki, -(gi @ b @ ki)
    eye = Matrix.identity(g.rows)
    for s in (1, -1):
        h, ht = b + g.scale(s), bt + gt.scale(s)
        if h @ ht != eye or ht @ h != eye:
            raise ArithmeticError("dual gauge relations failed")
    return LinearMap(G.target, G.source, gt), LinearMap(G.target, G.source, bt)


def nijenhuis_defect(a: LieAlgebra, op: Matrix, kind: str) -> dict[tuple[int, int], Vector]:
    """Defect vectors N(e_i, e_j) of a product (op^2 = I) or complex (op^2 = -I) structure."""
    n = a.dim
    eye = Matrix.identity(n)
    if kind == "product":
        sign = 1
        ok = op @ op == eye
    elif kind == "complex":
        sign = -1
        ok = op @ op == -eye
    else:
        raise ValueError("kind must be 'product' or 'complex'")
    if not ok:
        raise ValueError(f"operator square does not match a {kind} structure")
    cols = op.columns()
    out = {}
    for i in range(n):
        for j in range(n):
            ei = tuple(Fraction(int(k == i)) for k in range(n))
            ej = tuple(Fraction(int(k == j)) for k in range(n))
            inner = tuple(
                x + y for x, y in zip(a.bracket(cols[i], ej), a.bracket(ei, cols[j]))
            )
            e_inner = op.apply(inner)
            outer = a.bracket(cols[i], cols[j])
            plain = a.c[i][j]
            out[(i, j)] = tuple(o - e + sign * p for o, e, p in zip(outer, e_inner, plain))
    return out


def is_integrable(defects: dict[tuple[int, int], Vector]) -> bool:
    return all(not any(v) for v in defects.values())


def nonzero_defects(defects: dict[tuple[int, int], Vector]) -> list[tuple[int, int]]:
    return [k for k, v in defects.items() if any(v)]


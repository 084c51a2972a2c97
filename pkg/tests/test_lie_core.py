from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from families import BORROW, HEISENBERG, SL2, invertible, sl2_automorphism
from manin_forge.exact_linalg import Matrix, invert, unit_vec
from manin_forge.lie_core import (
    BilinearForm,
    DegenerateForm,
    LieAlgebra,
    LinearMap,
    Subspace,
    check_ad_invariance,
    check_antisymmetry,
    check_jacobi,
    check_subalgebra,
    direct_sum,
    graph,
    is_lagrangian,
    opposite,
    orthogonal_complement,
    projector,
    restrict_algebra,
    sym_skew_split,
    transpose_map,
)

F = Fraction


def transported(a: LieAlgebra, p: Matrix) -> LieAlgebra:
    """Structure constants of ``a`` in the basis given by the columns of ``p``."""
    pinv = invert(p)
    cols = p.columns()
    n = a.dim
    return LieAlgebra(n, [[pinv.apply(a.bracket(cols[i], cols[j])) for j in range(n)] for i in range(n)], a.name)


def killing(a: LieAlgebra) -> Matrix:
    """Trace form ``tr(ad_x ad_y)`` computed directly from ad matrices."""
    n = a.dim
    ads = [a.ad(unit_vec(n, i)) for i in range(n)]
    return Matrix([[sum((ads[i] @ ads[j])[k, k] for k in range(n)) for j in range(n)] for i in range(n)])


def perturbed_constant(a: LieAlgebra, i: int, j: int, k: int, d, antisymmetric: bool = True) -> LieAlgebra:
    c = [[list(v) for v in row] for row in a.c]
    c[i][j][k] += d
    if antisymmetric and i != j:
        c[j][i][k] -= d
    return LieAlgebra(a.dim, c, a.name, a.basis)


algebras = st.sampled_from([SL2, BORROW, HEISENBERG, direct_sum(SL2, LieAlgebra.abelian(1)), LieAlgebra.abelian(2)])


class TestAlgebra:
    def test_from_brackets_fills_antisymmetric_part(self):
        assert SL2.c[2][1] == (-1, 0, 0)
        assert SL2.bracket((0, 1, 0), (0, 0, 1)) == (1, 0, 0)

    def test_ad_columns(self):
        ad_h = SL2.ad(unit_vec(3, 0))
        assert ad_h == Matrix.diag([0, 2, -2])

    def test_bad_shapes(self):
        with pytest.raises(ValueError):
            LieAlgebra(2, [[[0, 0]]])
        with pytest.raises(ValueError):
            LieAlgebra(1, [[[0]]], basis=("a", "b"))

    @pytest.mark.parametrize("a", [SL2, BORROW, HEISENBERG])
    def test_known_algebras_satisfy_jacobi(self, a):
        rep = check_jacobi(a)
        assert rep.passed
        assert "jacobi" in rep.checks and "antisymmetry" in rep.checks

    def test_broken_jacobi_has_witness(self):
        # [H, X+] = 3 X+ breaks the identity on (H, X+, X-) in the H direction
        bad = perturbed_constant(SL2, 0, 1, 1, 1)
        rep = check_jacobi(bad)
        assert rep.failed_checks() == ["jacobi"]
        assert rep.first().witness == (0, 1, 2, 0)

    def test_broken_antisymmetry_has_witness(self):
        bad = perturbed_constant(SL2, 0, 1, 1, 1, antisymmetric=False)
        rep = check_antisymmetry(bad)
        assert rep.first().check == "antisymmetry"
        assert rep.first().witness == (0, 1, 1)

    @given(algebras, st.data())
    def test_jacobi_survives_change_of_basis(self, a, data):
        p = data.draw(invertible(a.dim))
        assert check_jacobi(transported(a, p)).passed

    def test_opposite_and_direct_sum(self):
        op = opposite(SL2)
        assert op.c[0][1] == (0, -2, 0)
        assert check_jacobi(op).passed
        s = direct_sum(SL2, HEISENBERG)
        assert s.dim == 6 and check_jacobi(s).passed
        assert s.c[0][3] == (0,) * 6


class TestForms:
    @given(st.sampled_from([SL2, direct_sum(SL2, SL2)]), st.data())
    def test_killing_form_is_invariant_in_any_basis(self, a, data):
        b = transported(a, data.draw(invertible(a.dim)))
        assert check_ad_invariance(b, BilinearForm(killing(b))).passed

    def test_non_invariant_form_has_witness(self):
        rep = check_ad_invariance(SL2, BilinearForm(Matrix.identity(3)))
        assert not rep.passed
        assert rep.first().check == "form-invariance"
        assert len(rep.first().witness) == 3

    def test_degenerate_and_asymmetric_forms_rejected(self):
        with pytest.raises(DegenerateForm):
            BilinearForm(Matrix.diag([1, 0]))
        with pytest.raises(ValueError):
            BilinearForm(Matrix([[0, 1], [2, 0]]))

    def test_lagrangian_and_complement(self):
        split = BilinearForm(Matrix([[0, 1], [1, 0]]))
        line = Subspace.span([[1, 0]])
        assert is_lagrangian(split, line)
        assert orthogonal_complement(split, line).same_as(line)

    @given(st.data())
    def test_transpose_on_lagrangian_pair_is_involutive(self, data):
        n = data.draw(st.integers(1, 3))
        eye, zero = Matrix.identity(n), Matrix.zeros(n, n)
        form = BilinearForm(Matrix.block([[zero, eye], [eye, zero]]))
        both = Matrix.identity(2 * n)
        plus = Subspace(both.submatrix(range(2 * n), range(n)))
        minus = Subspace(both.submatrix(range(2 * n), range(n, 2 * n)))
        m = LinearMap(plus, minus, data.draw(invertible(n)))
        t = transpose_map(m, form)
        assert transpose_map(t, form).coeffs == m.coeffs
        g, b = sym_skew_split(m, form)
        assert transpose_map(g, form).coeffs == g.coeffs
        assert transpose_map(b, form).coeffs == -b.coeffs
        assert g.coeffs + b.coeffs == m.coeffs


class TestSubspaces:
    def test_dependent_basis_rejected(self):
        with pytest.raises(ValueError):
            Subspace.span([[1, 2], [2, 4]])

    @given(st.data())
    def test_coords_round_trip(self, data):
        n = data.draw(st.integers(1, 4))
        p = data.draw(invertible(n))
        d = data.draw(st.integers(0, n))
        s = Subspace(p.submatrix(range(n), range(d)))
        coords = tuple(F(i + 1, 2) for i in range(d))
        assert s.coords(s.vector(coords)) == coords
        if d < n:
            assert not s.contains(p.col(n - 1))

    def test_projector_and_graph(self):
        a, b = Subspace.span([[1, 0]]), Subspace.span([[1, 1]])
        p = projector((a, b), 0)
        assert p.coeffs @ p.coeffs == p.coeffs
        assert p((F(0), F(1))) == (-1, 0)
        assert graph(a, b, Matrix([[2]])).same_as(Subspace.span([[3, 2]]))

    def test_subalgebra(self):
        borel = Subspace.span([[1, 0, 0], [0, 1, 0]])
        assert check_subalgebra(SL2, borel, "sub").passed
        assert restrict_algebra(SL2, borel).c[0][1] == (0, 2)
        mixed = Subspace.span([[0, 1, 0], [0, 0, 1]])
        rep = check_subalgebra(SL2, mixed, "sub")
        assert rep.first().witness == (0, 1)

    @given(sl2_automorphism())
    def test_adjoint_matrices_are_automorphisms(self, a):
        assert transported(SL2, a).c == SL2.c

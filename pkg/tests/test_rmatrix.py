from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from families import (
    BORROW,
    HEISENBERG,
    SL2,
    SL2_R,
    abelian_instance,
    perturbation,
    quadratic_instances,
    sl2_automorphism,
    small,
)
from manin_forge.exact_linalg import Matrix, kernel
from manin_forge.lie_core import CheckFailed, LieAlgebra, check_jacobi
from manin_forge.rmatrix import (
    RMatrix,
    check_cybe,
    check_dual_pairing,
    check_factorizable,
    check_semenov,
    cybe_tensor,
    double_from_bialgebra,
    double_report,
    dual_bracket_from_r,
    gb_from_r,
    split_r,
)

F = Fraction

# defining representation of sl2 on (H, X+, X-)
REP = [sympy.Matrix([[1, 0], [0, -1]]), sympy.Matrix([[0, 1], [0, 0]]), sympy.Matrix([[0, 0], [1, 0]])]
I2 = sympy.eye(2)


def q(x: Fraction) -> sympy.Rational:
    return sympy.Rational(x.numerator, x.denominator)


def kron(*ms):
    out = ms[0]
    for m in ms[1:]:
        out = sympy.kronecker_product(out, m)
    return out


def cybe_in_representation(c: Matrix) -> sympy.Matrix:
    """[r12,r13] + [r12,r23] + [r13,r23] as an 8 x 8 matrix."""
    terms = [(q(c[i, j]), REP[i], REP[j]) for i in range(3) for j in range(3) if c[i, j]]
    r12 = sum((a * kron(x, y, I2) for a, x, y in terms), sympy.zeros(8, 8))
    r13 = sum((a * kron(x, I2, y) for a, x, y in terms), sympy.zeros(8, 8))
    r23 = sum((a * kron(I2, x, y) for a, x, y in terms), sympy.zeros(8, 8))

    def br(a, b):
        return a * b - b * a

    return br(r12, r13) + br(r12, r23) + br(r13, r23)


def tensor_in_representation(t: dict) -> sympy.Matrix:
    return sum((q(v) * kron(REP[i], REP[j], REP[k]) for (i, j, k), v in t.items()), sympy.zeros(8, 8))


def perturbed(c: Matrix, i: int, j: int, d) -> Matrix:
    rows = [list(r) for r in c.tolist()]
    rows[i][j] += d
    return Matrix(rows)


def conjugated_r(a: Matrix, scale=1) -> RMatrix:
    return RMatrix(SL2, (a @ SL2_R @ a.T).scale(scale))


class TestYangBaxter:
    def test_standard_r_is_factorizable_solution(self):
        r = RMatrix(SL2, SL2_R)
        assert check_cybe(r).passed
        assert check_factorizable(r).passed
        rp, rm = split_r(r)
        assert rp.coeffs == Matrix([[F(1, 4), 0, 0], [0, 0, F(1, 2)], [0, F(1, 2), 0]])
        assert rm.coeffs == Matrix([[0, 0, 0], [0, 0, F(1, 2)], [0, F(-1, 2), 0]])

    @given(st.data())
    def test_cybe_tensor_agrees_with_defining_representation(self, data):
        a = data.draw(sl2_automorphism())
        c = (a @ SL2_R @ a.T).scale(data.draw(small))
        if data.draw(st.booleans()):
            c = c + data.draw(perturbation(3, 3))
        assert tensor_in_representation(cybe_tensor(RMatrix(SL2, c))) == cybe_in_representation(c)

    @given(sl2_automorphism(), small)
    def test_rescaling_preserves_both_conditions(self, a, lam):
        r = conjugated_r(a, lam)
        assert check_cybe(r).passed
        assert check_factorizable(r).passed

    def test_doubled_r_still_passes(self):
        r = RMatrix(SL2, SL2_R).scaled(2)
        assert check_cybe(r).passed and check_factorizable(r).passed

    def test_triangular_r_solves_cybe_but_is_not_factorizable(self):
        for k, c in ((BORROW, Matrix([[0, 1], [-1, 0]])), (HEISENBERG, Matrix([[0, 0, 1], [0, 0, 0], [-1, 0, 0]]))):
            r = RMatrix(k, c)
            assert check_cybe(r).passed
            assert check_factorizable(r).failed_checks() == ["rplus-invertible"]

    def test_two_dimensional_nonabelian_algebra_has_no_invariant_symmetric_tensor(self):
        # residuals of the invariance check are linear in the symmetric part
        basis = [Matrix([[1, 0], [0, 0]]), Matrix([[0, 1], [1, 0]]), Matrix([[0, 0], [0, 1]])]
        cols = []
        for s in basis:
            rep = check_factorizable(RMatrix(BORROW, s))
            res = {f.witness: f.lhs for f in rep.failures if f.check == "rplus-invariance"}
            cols.append([res.get((x, i, j), 0) for x in range(2) for i in range(2) for j in range(2)])
        assert kernel(Matrix.from_columns(cols)).cols == 0

    def test_half_of_r_fails_cybe_with_witness(self):
        rep = check_cybe(RMatrix(SL2, Matrix([[0, 0, 0], [0, 0, 1], [0, 0, 0]])))
        assert not rep.passed
        assert len(rep.first().witness) == 3

    @pytest.mark.parametrize("i,j", [(i, j) for i in range(3) for j in range(3)])
    def test_every_single_coefficient_change_is_caught(self, i, j):
        r = RMatrix(SL2, perturbed(SL2_R, i, j, 1))
        rep = check_cybe(r).merge(check_factorizable(r))
        assert not rep.passed
        assert rep.first().witness != ()

    @pytest.mark.parametrize("i,j,k", [(i, j, k) for i in range(3) for j in range(i + 1, 3) for k in range(3)])
    def test_every_single_structure_constant_change_is_caught(self, i, j, k):
        c = [[list(v) for v in row] for row in SL2.c]
        c[i][j][k] += 1
        c[j][i][k] -= 1
        alg = LieAlgebra(3, c, "sl2", SL2.basis)
        r = RMatrix(alg, SL2_R)
        rep = check_jacobi(alg).merge(check_cybe(r)).merge(check_factorizable(r))
        assert not rep.passed


class TestBialgebra:
    def test_sl2_dual_brackets(self):
        d = dual_bracket_from_r(SL2, RMatrix(SL2, SL2_R), ("h", "x+", "x-"))
        assert d.c[0][1] == (0, F(-1, 2), 0)
        assert d.c[0][2] == (0, 0, F(-1, 2))
        assert d.c[1][2] == (0, 0, 0)

    @given(quadratic_instances())
    def test_dual_bracket_is_lie_and_dual_to_cobracket(self, inst):
        assert check_jacobi(dual_bracket_from_r(inst.k, inst.r)).passed
        assert check_dual_pairing(inst.k, inst.r).passed

    @given(st.one_of(quadratic_instances(), abelian_instance()))
    def test_double_report(self, inst):
        rep = double_report(inst.k, inst.r)
        assert rep.passed, rep.first()

    def test_gb_from_r_refuses_non_factorizable(self):
        k = HEISENBERG
        r = RMatrix(k, Matrix([[0, 0, 1], [0, 0, 0], [-1, 0, 0]]))
        t = double_from_bialgebra(k, r)
        with pytest.raises(CheckFailed) as exc:
            gb_from_r(t, r)
        assert "rplus-invertible" in exc.value.report.failed_checks()

    def test_sl2_operators(self):
        r = RMatrix(SL2, SL2_R)
        t = double_from_bialgebra(SL2, r)
        o = gb_from_r(t, r)
        assert o.gm == Matrix([[F(1, 4), 0, 0], [0, 0, F(1, 2)], [0, F(1, 2), 0]])
        assert o.b == Matrix([[0, 0, 0], [0, 0, F(-1, 2)], [0, F(1, 2), 0]])
        assert check_semenov(t, o).passed

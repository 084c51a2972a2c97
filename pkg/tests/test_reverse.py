from fractions import Fraction

import pytest
from hypothesis import given

from families import abelian_pair_instance, perturbation, reverse_instances, sl2_pair_instance
from theorems import reverse_theorems, theta_equivalence
from manin_forge.exact_linalg import Matrix
from manin_forge.golden import REVERSE, render, reverse_pipeline, sl2_pair, sl2_theta, vector_of
from manin_forge.lie_core import CheckFailed
from manin_forge.reverse import (
    b_from_theta,
    build_manin_from_orthogonal,
    check_pair,
    check_quasi_manin,
    check_theta,
    direct_sum_quadratic,
    lbgb_rho,
    pair_from_phi,
    quasi_manin_from_phi,
    theta_bracket,
    theta_maps_report,
)
from manin_forge.twilled import coboundary_rho

F = Fraction


@pytest.fixture(scope="module")
def sl2_result():
    res, rep = reverse_pipeline()
    assert rep.passed
    return res


class TestPair:
    def test_sl2_pair(self):
        p = sl2_pair()
        rep = check_pair(p)
        assert rep.passed
        assert {"phi-antihomomorphism", "phi-anti-isometry", "phi-transpose"} <= set(rep.checks)
        # plus form is minus the pulled back minus form
        assert p.formplus.gram == -p.formminus.gram

    def test_homomorphism_instead_of_anti_is_refused(self):
        p = sl2_pair()
        same = pair_from_phi(p.Eminus, p.Eminus, p.phi.coeffs, p.formminus)
        rep = check_pair(same)
        assert "phi-antihomomorphism" in rep.failed_checks()
        with pytest.raises(CheckFailed):
            direct_sum_quadratic(same)

    def test_direct_sum_has_ideal_summands(self):
        g, form = direct_sum_quadratic(sl2_pair())
        assert g.dim == 6 and form.dim == 6
        assert all(not any(g.c[i][3 + j]) for i in range(3) for j in range(3))

    @given(reverse_instances())
    def test_quasi_manin(self, inst):
        q = quasi_manin_from_phi(inst.pair)
        assert check_quasi_manin(q).passed


class TestTheta:
    def test_sl2_theta(self):
        assert check_theta(sl2_pair(), sl2_theta()).passed

    def test_doubled_theta_fails_the_modified_equation(self):
        th = sl2_theta()
        rep = check_theta(sl2_pair(), th.with_coeffs(th.coeffs.scale(2)))
        assert rep.failed_checks() == ["theta-mcybe"]
        assert len(rep.first().witness) == 2

    def test_b_from_theta_refuses(self):
        p = sl2_pair()
        q = quasi_manin_from_phi(p)
        th = sl2_theta()
        with pytest.raises(CheckFailed):
            b_from_theta(q, th.with_coeffs(th.coeffs.scale(2)))

    @pytest.mark.parametrize("i,j", [(i, j) for i in range(3) for j in range(3)])
    def test_every_single_theta_entry_change_is_caught(self, i, j):
        th = sl2_theta()
        rows = [list(r) for r in th.coeffs.tolist()]
        rows[i][j] += 1
        rep = check_theta(sl2_pair(), th.with_coeffs(Matrix(rows)))
        assert not rep.passed
        assert rep.first().check in ("theta-skew", "theta-mcybe")

    @given(reverse_instances(), perturbation(3, 3))
    def test_theta_equation_iff_operator(self, inst, delta):
        n = inst.pair.dim
        delta = delta.submatrix(range(n), range(n))
        if delta.is_zero():
            delta = Matrix.identity(n)
        assert theta_equivalence(inst, delta).passed

    def test_theta_bracket_jacobi_refusal(self):
        p = sl2_pair()
        th = sl2_theta()
        assert theta_bracket(p.Eplus, th).dim == 3
        with pytest.raises(CheckFailed):
            theta_bracket(p.Eplus, th.with_coeffs(th.coeffs + Matrix([[0, 1, 0], [0, 0, 0], [0, 0, 0]])))


class TestConstruction:
    @given(sl2_pair_instance())
    def test_sl2_family(self, inst):
        rep = reverse_theorems(inst)
        assert rep.passed, rep.first()

    @given(abelian_pair_instance())
    def test_abelian_family(self, inst):
        rep = reverse_theorems(inst)
        assert rep.passed, rep.first()

    def test_theta_maps(self, sl2_result):
        rep = theta_maps_report(sl2_result)
        assert rep.passed
        assert {"theta-map-plus", "theta-map-minus", "theta-bracket-agreement"} <= set(rep.checks)

    def test_representation_from_twist_is_minus_coboundary(self, sl2_result):
        q, o = sl2_result.quasi, sl2_result.operator
        lb, cob = lbgb_rho(q, o), coboundary_rho(q, o.B)
        assert all(lb[x][y] == tuple(-v for v in cob[x][y]) for x in range(3) for y in range(3))

    def test_force_keeps_failed_report(self):
        th = sl2_theta()
        res = build_manin_from_orthogonal(sl2_pair(), th.with_coeffs(th.coeffs.scale(2)), force=True)
        assert not res.report.passed
        with pytest.raises(CheckFailed):
            build_manin_from_orthogonal(sl2_pair(), th.with_coeffs(th.coeffs.scale(2)))


class TestPublishedRhoTable:
    def _computed(self, res):
        q = res.quasi
        plus, minus = q.side_names()
        rho = lbgb_rho(q, res.operator)
        return plus, minus, {
            (pl, m): render(minus, rho[j][i]) for j, pl in enumerate(plus) for i, m in enumerate(minus) if any(rho[j][i])
        }

    def test_printed_entries_are_correct_but_incomplete(self, sl2_result):
        _, minus, got = self._computed(sl2_result)
        for key, value in REVERSE["rho"].items():
            assert got[key] == render(minus, vector_of(minus, value))
        missing = set(got) - set(REVERSE["rho"])
        assert missing == {("e+2", "e-3"), ("e+3", "e-2")}

    def test_missing_entries_are_forced_by_the_printed_crossed_brackets(self, sl2_result):
        plus, minus, got = self._computed(sl2_result)
        for (pl, m), value in REVERSE["gB_crossed"].items():
            minus_part = {k: v for k, v in value.items() if k in minus}
            assert got.get((pl, m), {}) == render(minus, vector_of(minus, minus_part))

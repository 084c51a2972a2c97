from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from manin_forge.exact_linalg import (
    Matrix,
    NoSolution,
    Singular,
    format_rational,
    invert,
    kernel,
    rational,
    rref,
    same_column_space,
    solve,
    vadd,
    vscale,
    vsub,
)

F = Fraction
entries = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@st.composite
def matrices(draw, rows=None, cols=None):
    r = rows or draw(st.integers(1, 4))
    c = cols or draw(st.integers(1, 4))
    # bias toward rank deficiency by reusing rows
    base = [[draw(entries) for _ in range(c)] for _ in range(r)]
    if r > 1 and draw(st.booleans()):
        base[-1] = [a + b for a, b in zip(base[0], base[1 % r])]
    return Matrix(base)


def to_sympy(m: Matrix) -> sympy.Matrix:
    return sympy.Matrix(m.rows, m.cols, [sympy.Rational(x.numerator, x.denominator) for row in m.tolist() for x in row])


class TestRational:
    def test_accepts_ints_fractions_and_strings(self):
        assert rational(3) == F(3)
        assert rational(F(1, 2)) == F(1, 2)
        assert rational("-3/4") == F(-3, 4)
        assert rational(" 5 ") == F(5)

    @pytest.mark.parametrize("bad", [0.5, True, None, [1]])
    def test_rejects_inexact_or_odd_types(self, bad):
        with pytest.raises(TypeError):
            rational(bad)

    def test_zero_denominator(self):
        with pytest.raises(ValueError, match="zero denominator"):
            rational("1/0")

    @given(st.fractions())
    def test_format_round_trip(self, q):
        assert rational(format_rational(q)) == q


class TestMatrix:
    def test_shape_checks(self):
        with pytest.raises(ValueError):
            Matrix([[1, 2], [3]])
        with pytest.raises(ValueError):
            Matrix([[1, 2]]) @ Matrix([[1, 2]])

    def test_block_and_submatrix(self):
        a = Matrix([[1, 2], [3, 4]])
        b = Matrix.block([[a, Matrix.zeros(2, 1)], [Matrix.zeros(1, 2), Matrix([[5]])]])
        assert b.shape == (3, 3)
        assert b.submatrix(range(2), range(2)) == a
        assert b[2, 2] == 5

    def test_immutable_hashable(self):
        assert hash(Matrix([[1]])) == hash(Matrix([[F(1)]]))

    def test_vector_helpers(self):
        x, y = (F(1), F(2)), (F(3), F(-2))
        assert vadd(x, y) == (4, 0)
        assert vsub(x, y) == (-2, 4)
        assert vscale("1/2", x) == (F(1, 2), 1)


class TestElimination:
    @given(matrices())
    def test_rank_matches_sympy(self, m):
        assert m.rank() == to_sympy(m).rank()

    @given(matrices())
    def test_kernel_is_null_space(self, m):
        k = kernel(m)
        assert (m @ k).is_zero()
        assert k.cols == m.cols - m.rank()
        assert k.rank() == k.cols

    @given(matrices())
    def test_rref_matches_sympy(self, m):
        red, pivots = rref(m)
        s_red, s_piv = to_sympy(m).rref()
        assert list(s_piv) == pivots
        assert to_sympy(red) == s_red

    @given(st.integers(1, 4).flatmap(lambda n: matrices(n, n)))
    def test_inverse(self, m):
        if m.rank() < m.rows:
            with pytest.raises(Singular):
                invert(m)
            return
        inv = invert(m)
        assert inv @ m == Matrix.identity(m.rows)
        assert to_sympy(inv) == to_sympy(m).inv()

    @given(matrices(), st.data())
    def test_solve(self, m, data):
        x = Matrix([[data.draw(entries)] for _ in range(m.cols)])
        b = m @ x
        assert m @ solve(m, b) == b

    def test_solve_inconsistent(self):
        with pytest.raises(NoSolution):
            solve(Matrix([[1], [1]]), Matrix([[1], [2]]))

    @given(matrices())
    def test_column_space_invariant_under_column_ops(self, m):
        swapped = Matrix.from_columns(list(reversed(m.columns())))
        assert same_column_space(m, swapped)

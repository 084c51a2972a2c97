"""Manin triples, the dressing action and extended O-operators of mass -1."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .exact_linalg import ZERO, Matrix, Singular, Vector, invert, unit_vec, vadd, vscale, vsub
from .lie_core import (
    BilinearForm,
    CheckFailed,
    Failure,
    LieAlgebra,
    LinearMap,
    Report,
    Subspace,
    check_ad_invariance,
    check_jacobi,
    check_subalgebra,
    complementary,
    is_lagrangian,
    transpose_map,
)

MASS = Fraction(-1)


def _subspace_names(g: LieAlgebra, s: Subspace, prefix: str) -> tuple[str, ...]:
    names = []
    for col in s.basis.columns():
        hits = [i for i, x in enumerate(col) if x]
        if len(hits) != 1 or col[hits[0]] != 1:
            return tuple(f"{prefix}{i + 1}" for i in range(s.dim))
        names.append(g.basis[hits[0]])
    return tuple(names)


@dataclass(frozen=True)
class Splitting:
    """A quadratic Lie algebra with a complementary pair of subspaces.

    Coordinates along ``gplus`` and ``gminus`` are the working frame of every
    identity in this module.
    """

    g: LieAlgebra
    form: BilinearForm
    gplus: Subspace
    gminus: Subspace

    @cached_property
    def _inverse(self) -> Matrix:
        return complementary(self.gplus, self.gminus)

    @property
    def dplus(self) -> int:
        return self.gplus.dim

    @property
    def dminus(self) -> int:
        return self.gminus.dim

    def split(self, v) -> tuple[Vector, Vector]:
        c = self._inverse.apply(v)
        return c[: self.dplus], c[self.dplus:]

    def plus_vector(self, coords) -> Vector:
        return self.gplus.vector(coords)

    def minus_vector(self, coords) -> Vector:
        return self.gminus.vector(coords)

    def plus_coords(self, v) -> Vector:
        """Coordinates of an ambient vector that must lie in g+."""
        p, m = self.split(v)
        if any(m):
            raise ValueError("vector does not lie in the plus subspace")
        return p

    def minus_coords(self, v) -> Vector:
        p, m = self.split(v)
        if any(p):
            raise ValueError("vector does not lie in the minus subspace")
        return m

    @cached_property
    def pairing(self) -> Matrix:
        """``P[a][b] = (p_a, m_b)`` between the plus and minus bases."""
        return self.form.cross(self.gplus, self.gminus)

    @cached_property
    def _cross_brackets(self) -> list[list[tuple[Vector, Vector]]]:
        mcols = self.gminus.basis.columns()
        pcols = self.gplus.basis.columns()
        return [[self.split(self.g.bracket(m, p)) for p in pcols] for m in mcols]

    def side_names(self) -> tuple[tuple[str, ...], tuple[str, ...]]:
        """Names of the g+ and g- basis vectors.

        Coordinate-aligned subspaces inherit the ambient names.
        """
        return _subspace_names(self.g, self.gplus, "p"), _subspace_names(self.g, self.gminus, "m")

    def sigma_table(self) -> list[list[Vector]]:
        """``sigma[i][j]``: g+ coordinates of the dressing of ``p_j`` by ``m_i``."""
        return [[pm[0] for pm in row] for row in self._cross_brackets]

    def minus_algebra(self) -> LieAlgebra:
        """Structure constants of g- in its basis (projected along g+)."""
        cols = self.gminus.basis.columns()
        d = self.dminus
        c = [[self.split(self.g.bracket(cols[i], cols[j]))[1] for j in range(d)] for i in range(d)]
        return LieAlgebra(d, c, "g-", self.side_names()[1])

    def plus_algebra(self) -> LieAlgebra:
        cols = self.gplus.basis.columns()
        d = self.dplus
        c = [[self.split(self.g.bracket(cols[i], cols[j]))[0] for j in range(d)] for i in range(d)]
        return LieAlgebra(d, c, "g+", self.side_names()[0])

    def adapted_form(self) -> BilinearForm:
        p = self.gplus.basis.hstack(self.gminus.basis)
        return BilinearForm(p.T @ self.form.gram @ p)


@dataclass(frozen=True)
class ManinTriple(Splitting):
    """Quadratic Lie algebra with two complementary Lagrangian subalgebras."""


@dataclass(frozen=True)
class OOperator:
    """Twist ``B`` and metric ``G``, both maps g+ -> g-, with mass -1."""

    B: LinearMap
    G: LinearMap
    mass: Fraction = MASS

    def __post_init__(self):
        if self.mass != MASS:
            raise ValueError("only mass -1 is supported")
        for m in (self.B, self.G):
            if m.coeffs.shape != self.B.coeffs.shape:
                raise ValueError("B and G must have the same shape")

    @property
    def b(self) -> Matrix:
        return self.B.coeffs

    @property
    def gm(self) -> Matrix:
        return self.G.coeffs


def operator_on(t: Splitting, B: Matrix, G: Matrix) -> OOperator:
    return OOperator(LinearMap(t.gplus, t.gminus, B), LinearMap(t.gplus, t.gminus, G))


def sigma_apply(sigma, xminus: Vector, yplus: Vector) -> Vector:
    """Bilinear evaluation of a dressing table."""
    d = len(sigma[0][0]) if sigma and sigma[0] else len(yplus)
    out = [ZERO] * d
    for i, xi in enumerate(xminus):
        if not xi:
            continue
        for j, yj in enumerate(yplus):
            if not yj:
                continue
            w = xi * yj
            for k, s in enumerate(sigma[i][j]):
                if s:
                    out[k] += w * s
    return tuple(out)


def verify_manin_triple(t: Splitting) -> Report:
    rep = Report()
    rep.merge(check_jacobi(t.g))
    rep.merge(check_ad_invariance(t.g, t.form))
    rep.touch("complementary")
    try:
        complementary(t.gplus, t.gminus)
    except ValueError:
        rep.failures.append(Failure("complementary", (), t.gplus.dim, t.gminus.dim))
        return rep
    for label, s in (("lagrangian-plus", t.gplus), ("lagrangian-minus", t.gminus)):
        rep.touch(label)
        if not is_lagrangian(t.form, s):
            rep.failures.append(Failure(label, (), t.form.restrict(s), "zero"))
    rep.merge(check_subalgebra(t.g, t.gplus, "subalgebra-plus"))
    rep.merge(check_subalgebra(t.g, t.gminus, "subalgebra-minus"))
    return rep


def dressing(t: Splitting, xminus, yplus) -> Vector:
    """Dressing of an ambient g+ vector by an ambient g- vector, in g+ coordinates."""
    xm = t.minus_coords(tuple(xminus))
    yp = t.plus_coords(tuple(yplus))
    return sigma_apply(t.sigma_table(), xm, yp)


def check_dressing_representation(t: Splitting) -> Report:
    """``sigma_[X,Y] = sigma_X sigma_Y - sigma_Y sigma_X`` on basis pairs of g-."""
    sig = t.sigma_table()
    gm = t.minus_algebra()
    rep = Report()
    rep.touch("dressing-representation")
    dm, dp = t.dminus, t.dplus
    for i in range(dm):
        for j in range(i + 1, dm):
            for a in range(dp):
                e = unit_vec(dp, a)
                lhs = sigma_apply(sig, gm.c[i][j], e)
                rhs = vsub(
                    sigma_apply(sig, unit_vec(dm, i), sig[j][a]),
                    sigma_apply(sig, unit_vec(dm, j), sig[i][a]),
                )
                rep.expect("dressing-representation", (i, j, a), lhs, rhs)
    return rep


def check_invariant_extension(t: Splitting, G: LinearMap) -> Report:
    """``G(sigma_X Y) = [X, G Y]`` and ``sigma_{GX} Y + sigma_{GY} X = 0``."""
    g = G.coeffs
    sig = t.sigma_table()
    rep = Report()
    rep.touch("metric-invariance")
    mcols = t.gminus.basis.columns()
    dm, dp = t.dminus, t.dplus
    gcols = [t.minus_vector(g.col(a)) for a in range(dp)]
    for i in range(dm):
        for a in range(dp):
            lhs = t.minus_vector(g.apply(sig[i][a]))
            rhs = t.g.bracket(mcols[i], gcols[a])
            rep.expect("metric-invariance", (i, a), lhs, rhs)
    rep.touch("metric-antisymmetry")
    for a in range(dp):
        for b in range(a, dp):
            lhs = vadd(
                sigma_apply(sig, g.col(a), unit_vec(dp, b)),
                sigma_apply(sig, g.col(b), unit_vec(dp, a)),
            )
            rep.expect("metric-antisymmetry", (a, b), lhs, (ZERO,) * dp)
    return rep


def _minus_bracket(t: Splitting, x: Vector, y: Vector) -> Vector:
    """Ambient bracket of two g- coordinate vectors."""
    return t.g.bracket(t.minus_vector(x), t.minus_vector(y))


def check_o_operator(t: Splitting, o: OOperator) -> Report:
    """``[BX,BY] - B(sigma_{BX} Y - sigma_{BY} X) = -[GX,GY]`` on basis pairs of g+."""
    b, g = o.b, o.gm
    sig = t.sigma_table()
    rep = Report()
    rep.touch("o-operator")
    dp = t.dplus
    for x in range(dp):
        for y in range(x + 1, dp):
            bx, by = b.col(x), b.col(y)
            inner = vsub(sigma_apply(sig, bx, unit_vec(dp, y)), sigma_apply(sig, by, unit_vec(dp, x)))
            lhs = vsub(_minus_bracket(t, bx, by), t.minus_vector(b.apply(inner)))
            rhs = vscale(-1, _minus_bracket(t, g.col(x), g.col(y)))
            rep.expect("o-operator", (x, y), lhs, rhs)
    return rep


def check_o_operator_data(t: Splitting, o: OOperator) -> Report:
    """All standing assumptions on (B, G) plus the mass -1 identity."""
    rep = Report()
    rep.touch("twist-skew")
    bt = transpose_map(o.B, t.form)
    if bt.coeffs != -o.b:
        rep.failures.append(Failure("twist-skew", (), bt.coeffs, -o.b))
    rep.touch("metric-symmetric")
    gt = transpose_map(o.G, t.form)
    if gt.coeffs != o.gm:
        rep.failures.append(Failure("metric-symmetric", (), gt.coeffs, o.gm))
    rep.touch("metric-invertible")
    try:
        invert(o.gm)
    except (Singular, ValueError):
        rep.failures.append(Failure("metric-invertible", (), o.gm, "invertible"))
    rep.merge(check_invariant_extension(t, o.G))
    rep.merge(check_o_operator(t, o))
    return rep


def bracket_B_table(t: Splitting, o: OOperator) -> list[list[Vector]]:
    sig = t.sigma_table()
    dp = t.dplus
    b = o.b
    return [
        [
            vsub(sigma_apply(sig, b.col(x), unit_vec(dp, y)), sigma_apply(sig, b.col(y), unit_vec(dp, x)))
            for y in range(dp)
        ]
        for x in range(dp)
    ]


def bracket_B(t: Splitting, o: OOperator, force: bool = False) -> LieAlgebra:
    """The twisted bracket ``[X,Y]_B = sigma_{BX} Y - sigma_{BY} X`` on g+."""
    if not force:
        rep = check_o_operator(t, o)
        if not rep.passed:
            raise CheckFailed("B is not an O-operator of mass -1 with this extension", rep)
    return LieAlgebra(t.dplus, bracket_B_table(t, o), "g+^B", t.side_names()[0])


def check_graph_homomorphism(t: Splitting, o: OOperator) -> Report:
    """``(B +- G)[X,Y]_B = [(B +- G)X, (B +- G)Y]`` for both signs."""
    table = bracket_B_table(t, o)
    rep = Report()
    dp = t.dplus
    for sign, label in ((1, "graph-homomorphism-plus"), (-1, "graph-homomorphism-minus")):
        h = o.b + o.gm.scale(sign)
        rep.touch(label)
        for x in range(dp):
            for y in range(x + 1, dp):
                lhs = t.minus_vector(h.apply(table[x][y]))
                rhs = _minus_bracket(t, h.col(x), h.col(y))
                rep.expect(label, (x, y), lhs, rhs)
    return rep

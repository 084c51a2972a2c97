"""Twilled extensions of a pair of Lie algebras acting on each other.

In a twilled algebra the plus side comes first in the basis, then the minus
side. With actions ``sigma`` (minus on plus) and ``rho`` (plus on minus) and
a sign ``s`` the bracket is

    [X+ + X-, Y+ + Y-] = s[X+,Y+] + sigma_{X-}Y+ - sigma_{Y-}X+ + [X-,Y-]
                         + s(rho_{X+}Y- - rho_{Y+}X-)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cps import gauged_blocks
from .exact_linalg import ZERO, Matrix, Vector, invert, unit_vec, vadd, vscale, vsub
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
    opposite,
)
from .manin import (
    ManinTriple,
    OOperator,
    Splitting,
    bracket_B,
    sigma_apply,
    verify_manin_triple,
)

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class ActionPair:
    """``sigma[i][j]``: sigma_{f_i} e_j; ``rho[j][i]``: rho_{e_j} f_i (coordinate vectors).

    ``e`` is the plus basis and ``f`` the minus basis.
    """

    sigma: tuple
    rho: tuple

    def __post_init__(self):
        object.__setattr__(self, "sigma", _freeze(self.sigma))
        object.__setattr__(self, "rho", _freeze(self.rho))


def _freeze(table) -> tuple:
    return tuple(tuple(tuple(Fraction(x) for x in v) for v in row) for row in table)


def rho_apply(rho, xplus: Vector, yminus: Vector) -> Vector:
    """Bilinear evaluation of ``rho_{X+} Y-``."""
    return sigma_apply(rho, xplus, yminus)


@dataclass(frozen=True)
class TwilledAlgebra:
    algebra: LieAlgebra
    plus_side: Subspace
    minus_side: Subspace
    gplus: LieAlgebra
    gminus: LieAlgebra
    actions: ActionPair
    sign: int
    form: BilinearForm | None = None
    report: Report = field(default_factory=Report, compare=False)

    @property
    def dplus(self) -> int:
        return self.gplus.dim

    @property
    def dminus(self) -> int:
        return self.gminus.dim

    def plus(self, coords) -> Vector:
        return tuple(coords) + (ZERO,) * self.dminus

    def minus(self, coords) -> Vector:
        return (ZERO,) * self.dplus + tuple(coords)

    def join(self, plus, minus) -> Vector:
        return tuple(plus) + tuple(minus)

    def bracket(self, x, y) -> Vector:
        return self.algebra.bracket(x, y)

    def triple(self) -> ManinTriple:
        if self.form is None:
            raise ValueError("this twilled algebra carries no invariant form")
        return ManinTriple(self.algebra, self.form, self.plus_side, self.minus_side)


def check_twilled_constraints(gplus: LieAlgebra, gminus: LieAlgebra, a: ActionPair) -> Report:
    """Representation and cocycle conditions equivalent to the Jacobi identity."""
    p, m = gplus.dim, gminus.dim
    sig, rho = a.sigma, a.rho
    if len(sig) != m or any(len(r) != p for r in sig) or len(rho) != p or any(len(r) != m for r in rho):
        raise ValueError("action tables do not match the algebra dimensions")
    rep = Report()
    e = [unit_vec(p, i) for i in range(p)]
    f = [unit_vec(m, i) for i in range(m)]

    def s(x, y):
        return sigma_apply(sig, x, y)

    def r(x, y):
        return rho_apply(rho, x, y)

    rep.touch("sigma-representation")
    for i in range(m):
        for j in range(i + 1, m):
            for z in range(p):
                lhs = s(gminus.c[i][j], e[z])
                rhs = vsub(s(f[i], sig[j][z]), s(f[j], sig[i][z]))
                rep.expect("sigma-representation", (i, j, z), lhs, rhs)
    rep.touch("rho-representation")
    for a_ in range(p):
        for b in range(a_ + 1, p):
            for z in range(m):
                lhs = r(gplus.c[a_][b], f[z])
                rhs = vsub(r(e[a_], rho[b][z]), r(e[b], rho[a_][z]))
                rep.expect("rho-representation", (a_, b, z), lhs, rhs)
    # rho_Z[X,Y] = [X, rho_Z Y] - rho_{sigma_X Z} Y + rho_{sigma_Y Z} X - [Y, rho_Z X]
    rep.touch("rho-cocycle")
    for i in range(m):
        for j in range(i + 1, m):
            for z in range(p):
                lhs = r(e[z], gminus.c[i][j])
                rhs = vadd(
                    gminus.bracket(f[i], rho[z][j]),
                    vscale(-1, r(sig[i][z], f[j])),
                    r(sig[j][z], f[i]),
                    vscale(-1, gminus.bracket(f[j], rho[z][i])),
                )
                rep.expect("rho-cocycle", (i, j, z), lhs, rhs)
    # sigma_Z[X,Y] = [X, sigma_Z Y] - sigma_{rho_X Z} Y + sigma_{rho_Y Z} X - [Y, sigma_Z X]
    rep.touch("sigma-cocycle")
    for a_ in range(p):
        for b in range(a_ + 1, p):
            for z in range(m):
                lhs = s(f[z], gplus.c[a_][b])
                rhs = vadd(
                    gplus.bracket(e[a_], sig[z][b]),
                    vscale(-1, s(rho[a_][z], e[b])),
                    s(rho[b][z], e[a_]),
                    vscale(-1, gplus.bracket(e[b], sig[z][a_])),
                )
                rep.expect("sigma-cocycle", (a_, b, z), lhs, rhs)
    return rep


def twilled_table(gplus: LieAlgebra, gminus: LieAlgebra, a: ActionPair, sign: int) -> list:
    p, m = gplus.dim, gminus.dim
    n = p + m
    c = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
    for x in range(p):
        for y in range(p):
            for k in range(p):
                c[x][y][k] = sign * gplus.c[x][y][k]
    for i in range(m):
        for j in range(m):
            for k in range(m):
                c[p + i][p + j][p + k] = gminus.c[i][j][k]
    for i in range(m):
        for y in range(p):
            # [f_i, e_y] = sigma_{f_i} e_y - sign * rho_{e_y} f_i
            for k in range(p):
                v = a.sigma[i][y][k]
                c[p + i][y][k] = v
                c[y][p + i][k] = -v
            for k in range(m):
                v = -sign * a.rho[y][i][k]
                c[p + i][y][p + k] = v
                c[y][p + i][p + k] = -v
    return c


def build_twilled(
    gplus: LieAlgebra,
    gminus: LieAlgebra,
    a: ActionPair,
    plus_sign: int = 1,
    force: bool = False,
    form: BilinearForm | None = None,
) -> TwilledAlgebra:
    """Assemble the twilled bracket; ``plus_sign = -1`` uses the opposite of
    ``gplus`` together with ``-rho``."""
    if plus_sign not in (1, -1):
        raise ValueError("plus_sign must be +1 or -1")
    p, m = gplus.dim, gminus.dim
    if plus_sign == 1:
        rep = check_twilled_constraints(gplus, gminus, a)
    else:
        neg = ActionPair(a.sigma, tuple(tuple(vscale(-1, v) for v in row) for row in a.rho))
        rep = check_twilled_constraints(opposite(gplus), gminus, neg)
    if not rep.passed and not force:
        raise CheckFailed("actions violate the twilled constraints", rep)
    names = tuple(gplus.basis) + tuple(gminus.basis)
    if len(set(names)) != len(names):
        names = ()
    alg = LieAlgebra(p + m, twilled_table(gplus, gminus, a, plus_sign), "twilled", names)
    jac = check_jacobi(alg)
    rep.merge(jac)
    if not jac.passed and not force:
        raise CheckFailed("twilled bracket fails the Jacobi identity", rep)
    eye = Matrix.identity(p + m)
    plus = Subspace(eye.submatrix(range(p + m), range(p)))
    minus = Subspace(eye.submatrix(range(p + m), range(p, p + m)))
    if form is not None:
        rep.merge(check_ad_invariance(alg, form))
    return TwilledAlgebra(alg, plus, minus, gplus, gminus, a, plus_sign, form, rep)


def coboundary_rho(t: Splitting, B: LinearMap) -> tuple:
    """``rho_{Y+} X- = B sigma_{X-} Y+ - [X-, B Y+]`` as a table ``rho[j][i]``."""
    sig = t.sigma_table()
    gm = t.minus_algebra()
    b = B.coeffs
    dp, dm = t.dplus, t.dminus
    return tuple(
        tuple(vsub(b.apply(sig[i][j]), gm.bracket(unit_vec(dm, i), b.col(j))) for i in range(dm))
        for j in range(dp)
    )


def literal_twisted_bracket(t: Splitting, o: OOperator, u: Vector, v: Vector) -> Vector:
    """Term-by-term expansion of the bracket of g~_B on adapted coordinates.

    -[X+,Y+]_B + P[X-,Y+] - P[Y-,X+] + [X-,Y-]
    + B P[X+,Y-] - [BX+,Y-] - B P[Y+,X-] + [BY+,X-]

    where ``P`` projects the ambient bracket onto g+.
    """
    dp = t.dplus
    xp, xm = u[:dp], u[dp:]
    yp, ym = v[:dp], v[dp:]
    b = o.b
    br = t.g.bracket
    P, M = t.plus_vector, t.minus_vector

    def proj(x, y):
        return t.split(br(x, y))[0]

    def minus_part(x, y):
        return t.split(br(x, y))[1]

    sig = t.sigma_table()
    xb = vsub(sigma_apply(sig, b.apply(xp), yp), sigma_apply(sig, b.apply(yp), xp))
    plus = vadd(
        vscale(-1, xb),
        proj(M(xm), P(yp)),
        vscale(-1, proj(M(ym), P(xp))),
    )
    minus = vadd(
        minus_part(M(xm), M(ym)),
        b.apply(proj(P(xp), M(ym))),
        vscale(-1, minus_part(M(b.apply(xp)), M(ym))),
        vscale(-1, b.apply(proj(P(yp), M(xm)))),
        minus_part(M(b.apply(yp)), M(xm)),
    )
    return tuple(plus) + tuple(minus)


def build_gtilde_B(t: Splitting, o: OOperator, force: bool = False) -> TwilledAlgebra:
    """The opposite-twisted double built from a mass -1 O-operator.

    Composes the twisted bracket on g+, the dressing action, the coboundary
    rho and the sign -1 twilled assembly. The result is checked against the
    literal term expansion and must again be a Manin triple.
    """
    gb = bracket_B(t, o, force=force)
    gm = t.minus_algebra()
    actions = ActionPair(t.sigma_table(), coboundary_rho(t, o.B))
    form = t.adapted_form()
    tw = build_twilled(gb, gm, actions, -1, force=force, form=form)
    rep = tw.report
    rep.touch("literal-expansion")
    n = tw.algebra.dim
    for i in range(n):
        for j in range(i + 1, n):
            lit = literal_twisted_bracket(t, o, unit_vec(n, i), unit_vec(n, j))
            rep.expect("literal-expansion", (i, j), tw.algebra.c[i][j], lit)
    rep.merge(verify_manin_triple(tw.triple()))
    if not rep.passed and not force:
        raise CheckFailed("g~_B construction failed", rep)
    return tw


def ideal_bases(tw: TwilledAlgebra, o: OOperator) -> tuple[Matrix, Matrix]:
    """Columns ``(e_a, (B +- G) e_a)`` in the twilled coordinates."""
    eye = Matrix.identity(tw.dplus)
    return eye.vstack(o.b + o.gm), eye.vstack(o.b - o.gm)


def _lift(tw: TwilledAlgebra, h: Matrix, x: Vector) -> Vector:
    """``(I + h) x`` for g+ coordinates ``x``."""
    return tw.join(x, h.apply(x))


def _g_bracket(tw: TwilledAlgebra, gm: Matrix, x: Vector, y: Vector) -> Vector:
    """``[G x, G y]`` in g- coordinates."""
    return tw.gminus.bracket(gm.apply(x), gm.apply(y))


def split_ideals(tw: TwilledAlgebra, o: OOperator) -> tuple[Subspace, Subspace, Report]:
    """The graphs of ``B +- G`` as orthogonal ideals of g~_B."""
    bp, bm = ideal_bases(tw, o)
    eplus, eminus = Subspace(bp), Subspace(bm)
    rep = Report()
    alg = tw.algebra
    dp, dm = tw.dplus, tw.dminus
    gm, b = o.gm, o.b
    gi = invert(gm)
    rep.merge(check_subalgebra(alg, eplus, "ideal-closure-plus"))
    rep.merge(check_subalgebra(alg, eminus, "ideal-closure-minus"))
    rep.touch("ideal-crossed-zero")
    for x in range(dp):
        for y in range(dp):
            v = alg.bracket(bp.col(x), bm.col(y))
            rep.expect("ideal-crossed-zero", (x, y), v, (ZERO,) * (dp + dm))
    for sign, label in ((1, "ideal-closed-form-plus"), (-1, "ideal-closed-form-minus")):
        h = b + gm.scale(sign)
        rep.touch(label)
        for x in range(dp):
            for y in range(x + 1, dp):
                ex, ey = unit_vec(dp, x), unit_vec(dp, y)
                lhs = alg.bracket(_lift(tw, h, ex), _lift(tw, h, ey))
                rhs = vscale(2 * sign, _lift(tw, h, gi.apply(_g_bracket(tw, gm, ex, ey))))
                rep.expect(label, (x, y), lhs, rhs)
    # double splitting: plus/minus sides Lagrangian, ideals orthogonal and complementary
    if tw.form is not None:
        rep.touch("double-splitting")
        f = tw.form
        if not (is_lagrangian(f, tw.plus_side) and is_lagrangian(f, tw.minus_side)):
            rep.failures.append(Failure("double-splitting", ("lagrangian",), None, None))
        if not f.cross(eplus, eminus).is_zero():
            rep.failures.append(Failure("double-splitting", ("orthogonal",), f.cross(eplus, eminus), 0))
        try:
            complementary(eplus, eminus)
        except ValueError:
            rep.failures.append(Failure("double-splitting", ("complementary",), None, None))
    # X- -> 1/2 (I + B +- G) G^{-1} X- is a homomorphism (+) or antihomomorphism (-)
    for sign, label in ((1, "minus-to-ideal-plus"), (-1, "minus-to-ideal-minus")):
        h = b + gm.scale(sign)
        psi = bp if sign == 1 else bm
        psi = (psi @ gi).scale(HALF)
        rep.touch(label)
        if psi.rank() != dm:
            rep.failures.append(Failure(label, ("rank",), psi.rank(), dm))
        for i in range(dm):
            for j in range(i + 1, dm):
                lhs = psi.apply(tw.gminus.c[i][j])
                rhs = vscale(sign, alg.bracket(psi.col(i), psi.col(j)))
                rep.expect(label, (i, j), lhs, rhs)
    return eplus, eminus, rep


def _coords(rep: Report, label: str, witness: tuple, s: Subspace, v: Vector) -> Vector | None:
    """Coordinates in ``s``, or a recorded failure when ``v`` lies outside."""
    try:
        return s.coords(v)
    except ValueError:
        rep.failures.append(Failure(label, witness, v, "outside ideal"))
        return None


def phi_B(tw: TwilledAlgebra, o: OOperator) -> tuple[LinearMap, Report]:
    """``X + (B+G)X -> X + (B-G)X`` from the plus ideal to the minus ideal."""
    bp, bm = ideal_bases(tw, o)
    eplus, eminus = Subspace(bp), Subspace(bm)
    dp = tw.dplus
    phi = LinearMap(eplus, eminus, Matrix.identity(dp))
    alg = tw.algebra
    rep = Report()
    rep.touch("phi-antihomomorphism")
    ep, em = bp.columns(), bm.columns()
    for x in range(dp):
        for y in range(x + 1, dp):
            inner = _coords(rep, "phi-antihomomorphism", (x, y), eplus, alg.bracket(ep[x], ep[y]))
            if inner is None:
                continue
            lhs = eminus.vector(inner)
            rhs = vscale(-1, alg.bracket(em[x], em[y]))
            rep.expect("phi-antihomomorphism", (x, y), lhs, rhs)
    if tw.form is not None:
        rep.touch("phi-transpose")
        qp = tw.form.restrict(eplus)
        qm = tw.form.restrict(eminus)
        # (phi x, y)_- = (x, phi^T y)_+ and phi = identity in these bases
        if qm != -qp:
            rep.failures.append(Failure("phi-transpose", (), qm, -qp))
    e, j, _ = gauged_blocks(o.gm, o.b)
    rep.touch("E-of-J-bracket")
    n = alg.dim
    jc = j.columns()
    for x in range(n):
        for y in range(x + 1, n):
            lhs = e.apply(alg.bracket(jc[x], jc[y]))
            rhs = j.apply(alg.c[x][y])
            rep.expect("E-of-J-bracket", (x, y), lhs, rhs)
    return phi, rep


def nijenhuis_phi(tw: TwilledAlgebra, o: OOperator) -> Report:
    """Nijenhuis tensor of phi_B on the plus ideal (and of its inverse on the minus ideal)."""
    bp, bm = ideal_bases(tw, o)
    eplus, eminus = Subspace(bp), Subspace(bm)
    alg = tw.algebra
    dp = tw.dplus
    gm = o.gm
    gi = invert(gm)
    ep, em = bp.columns(), bm.columns()
    rep = Report()
    cases = (
        (1, ep, em, eplus, eminus, "nijenhuis-plus", "nijenhuis-bracket-relation-plus"),
        (-1, em, ep, eminus, eplus, "nijenhuis-minus", "nijenhuis-bracket-relation-minus"),
    )
    for sign, src, dst, s_src, s_dst, lab_n, lab_rel in cases:
        rep.touch(lab_n)
        rep.touch(lab_rel)
        h = o.b + gm.scale(sign)
        for x in range(dp):
            for y in range(x + 1, dp):
                xy = alg.bracket(src[x], src[y])
                c_src = _coords(rep, lab_n, (x, y), s_src, xy)
                c_dst = _coords(rep, lab_n, (x, y), s_dst, alg.bracket(dst[x], dst[y]))
                if c_src is None or c_dst is None:
                    continue
                mapped = s_dst.vector(c_src)
                back = s_src.vector(c_dst)
                n_val = vsub(
                    vadd(mapped, back),
                    vadd(alg.bracket(dst[x], src[y]), alg.bracket(src[x], dst[y])),
                )
                w = _g_bracket(tw, gm, unit_vec(dp, x), unit_vec(dp, y))
                rep.expect(lab_n, (x, y), n_val, tw.minus(vscale(-4, w)))
                rel = vscale(Fraction(-sign, 2), _lift(tw, h, gi.apply(n_val[dp:])))
                rep.expect(lab_rel, (x, y), xy, rel)
    return rep


def adjoint_intertwiner_check(tw: TwilledAlgebra, o: OOperator) -> Report:
    """``[X-, (I+B+-G)Y+] = (I+B+-G) sigma_{X-} Y+`` and ad_{X-} acts by derivations."""
    alg = tw.algebra
    dp, dm = tw.dplus, tw.dminus
    sig = tw.actions.sigma
    rep = Report()
    for sign, label in ((1, "intertwiner-plus"), (-1, "intertwiner-minus")):
        h = o.b + o.gm.scale(sign)
        rep.touch(label)
        for i in range(dm):
            for a in range(dp):
                ea = unit_vec(dp, a)
                lhs = alg.bracket(tw.minus(unit_vec(dm, i)), _lift(tw, h, ea))
                rhs = _lift(tw, h, sig[i][a])
                rep.expect(label, (i, a), lhs, rhs)
    rep.touch("intertwiner-derivation")
    bp, bm = ideal_bases(tw, o)
    for basis in (bp, bm):
        cols = basis.columns()
        for i in range(dm):
            xm = tw.minus(unit_vec(dm, i))
            for a in range(dp):
                for b in range(a + 1, dp):
                    lhs = alg.bracket(xm, alg.bracket(cols[a], cols[b]))
                    rhs = vadd(
                        alg.bracket(alg.bracket(xm, cols[a]), cols[b]),
                        alg.bracket(cols[a], alg.bracket(xm, cols[b])),
                    )
                    rep.expect("intertwiner-derivation", (i, a, b), lhs, rhs)
    return rep

"""From a pair of anti-isomorphic quadratic Lie algebras to a Manin triple.

The direct sum E+ + E- carries the graphs F+- of +-phi. F- is a subalgebra,
F+ is an F- module, and a skew solution theta of the modified Yang-Baxter
equation on E+ lifts to an O-operator B that twists F+ into a subalgebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact_linalg import ZERO, Matrix, Singular, Vector, invert, unit_vec, vadd, vscale, vsub
from .lie_core import (
    BilinearForm,
    CheckFailed,
    Failure,
    LieAlgebra,
    LinearMap,
    Report,
    Subspace,
    adjoint,
    check_ad_invariance,
    check_jacobi,
    direct_sum,
    graph,
    is_lagrangian,
)
from .manin import (
    ManinTriple,
    OOperator,
    Splitting,
    bracket_B,
    check_invariant_extension,
    check_o_operator,
    operator_on,
    verify_manin_triple,
)
from .twilled import ActionPair, TwilledAlgebra, build_twilled, coboundary_rho, split_ideals


@dataclass(frozen=True)
class AntiIsoPair:
    Eplus: LieAlgebra
    Eminus: LieAlgebra
    phi: LinearMap
    formplus: BilinearForm
    formminus: BilinearForm

    @property
    def dim(self) -> int:
        return self.Eplus.dim


def pair_from_phi(Eplus: LieAlgebra, Eminus: LieAlgebra, phi: Matrix, formminus: BilinearForm) -> AntiIsoPair:
    """Pair whose plus form is pulled back through phi with a minus sign."""
    n = Eplus.dim
    whole = Subspace.whole(n)
    q = -(phi.T @ formminus.gram @ phi)
    return AntiIsoPair(Eplus, Eminus, LinearMap(whole, whole, phi), BilinearForm(q), formminus)


def check_pair(p: AntiIsoPair) -> Report:
    rep = Report()
    rep.merge(check_jacobi(p.Eplus))
    rep.merge(check_jacobi(p.Eminus))
    rep.merge(check_ad_invariance(p.Eplus, p.formplus))
    rep.merge(check_ad_invariance(p.Eminus, p.formminus))
    phi = p.phi.coeffs
    n = p.dim
    rep.touch("phi-antihomomorphism")
    for x in range(n):
        for y in range(x + 1, n):
            lhs = phi.apply(p.Eplus.c[x][y])
            rhs = vscale(-1, p.Eminus.bracket(phi.col(x), phi.col(y)))
            rep.expect("phi-antihomomorphism", (x, y), lhs, rhs)
    rep.touch("phi-anti-isometry")
    pulled = -(phi.T @ p.formminus.gram @ phi)
    if pulled != p.formplus.gram:
        rep.failures.append(Failure("phi-anti-isometry", (), p.formplus.gram, pulled))
    rep.touch("phi-transpose")
    try:
        inv = invert(phi)
        # (phi x, y)_- = (x, phi^T y)_+
        pt = adjoint(phi, p.formplus.gram, p.formminus.gram)
        if pt != -inv:
            rep.failures.append(Failure("phi-transpose", (), pt, -inv))
    except Singular:
        rep.failures.append(Failure("phi-transpose", (), phi, "invertible"))
    return rep


def direct_sum_quadratic(p: AntiIsoPair) -> tuple[LieAlgebra, BilinearForm]:
    """Block-diagonal algebra and form on E+ then E-; both summands are ideals."""
    rep = check_pair(p)
    if not rep.passed:
        raise CheckFailed("pair is not anti-isomorphic with compatible forms", rep)
    n = p.dim
    g = direct_sum(p.Eplus, p.Eminus, "E+ + E-")
    zero = Matrix.zeros(n, n)
    form = BilinearForm(Matrix.block([[p.formplus.gram, zero], [zero, p.formminus.gram]]))
    for x in range(n):
        for y in range(n):
            if any(g.c[x][n + y]):
                raise ArithmeticError("summands of the direct sum are not ideals")
    return g, form


@dataclass(frozen=True)
class QuasiManinTriple(Splitting):
    """Direct sum with the graphs of +-phi; only F- is a subalgebra."""

    pair: AntiIsoPair | None = None

    @property
    def Fplus(self) -> Subspace:
        return self.gplus

    @property
    def Fminus(self) -> Subspace:
        return self.gminus

    def side_names(self) -> tuple[tuple[str, ...], tuple[str, ...]]:
        n = self.dplus
        return tuple(f"e+{i + 1}" for i in range(n)), tuple(f"e-{i + 1}" for i in range(n))

    def sigma_table(self) -> list[list[Vector]]:
        """The F- action on F+ is the full bracket; closure is asserted."""
        out = []
        for row in self._cross_brackets:
            line = []
            for plus, minus in row:
                if any(minus):
                    raise ArithmeticError("[F-, F+] is not contained in F+")
                line.append(plus)
            out.append(line)
        return out


def check_quasi_manin(q: QuasiManinTriple) -> Report:
    p = q.pair
    n = p.dim
    g = q.g
    rep = Report()
    for label, s in (("lagrangian-plus", q.gplus), ("lagrangian-minus", q.gminus)):
        rep.touch(label)
        if not is_lagrangian(q.form, s):
            rep.failures.append(Failure(label, (), q.form.restrict(s), "zero"))
    fp, fm = q.gplus.basis.columns(), q.gminus.basis.columns()
    closure = (
        ("closure-minus-minus", fm, fm, 1),
        ("closure-plus-minus", fp, fm, 0),
        ("closure-plus-plus", fp, fp, 1),
    )
    for label, left, right, side in closure:
        rep.touch(label)
        for x in range(n):
            for y in range(n):
                plus, minus = q.split(g.bracket(left[x], right[y]))
                wrong = plus if side == 1 else minus
                rep.expect(label, (x, y), wrong, (ZERO,) * n)
    # [X + phiX, Y - phiY] = [X,Y] + phi[X,Y];  [X +- phiX, Y +- phiY] = [X,Y] - phi[X,Y]
    phi = p.phi.coeffs
    rep.touch("graph-brackets")
    for x in range(n):
        for y in range(n):
            xy = p.Eplus.c[x][y]
            lifted_plus = tuple(xy) + phi.apply(xy)
            lifted_minus = tuple(xy) + vscale(-1, phi.apply(xy))
            rep.expect("graph-brackets", ("+-", x, y), g.bracket(fp[x], fm[y]), lifted_plus)
            rep.expect("graph-brackets", ("++", x, y), g.bracket(fp[x], fp[y]), lifted_minus)
            rep.expect("graph-brackets", ("--", x, y), g.bracket(fm[x], fm[y]), lifted_minus)
    return rep


def quasi_manin_from_phi(p: AntiIsoPair, force: bool = False) -> QuasiManinTriple:
    g, form = direct_sum_quadratic(p) if not force else _unchecked_sum(p)
    n = p.dim
    eye = Matrix.identity(n)
    left = Subspace(eye.vstack(Matrix.zeros(n, n)))
    right = Subspace(Matrix.zeros(n, n).vstack(eye))
    q = QuasiManinTriple(
        g, form, graph(left, right, p.phi.coeffs), graph(left, right, -p.phi.coeffs), p
    )
    if not force:
        rep = check_quasi_manin(q)
        if not rep.passed:
            raise CheckFailed("graphs of phi do not form a Manin quasi-triple", rep)
    return q


def _unchecked_sum(p: AntiIsoPair) -> tuple[LieAlgebra, BilinearForm]:
    n = p.dim
    zero = Matrix.zeros(n, n)
    return (
        direct_sum(p.Eplus, p.Eminus, "E+ + E-"),
        BilinearForm(Matrix.block([[p.formplus.gram, zero], [zero, p.formminus.gram]])),
    )


def metric_from_phi(q: QuasiManinTriple) -> LinearMap:
    """``G(X + phi X) = X - phi X``: the identity matrix in the graph bases."""
    G = LinearMap(q.gplus, q.gminus, Matrix.identity(q.dplus))
    rep = check_invariant_extension(q, G)
    if not rep.passed:
        raise CheckFailed("graph flip is not F- invariant", rep)
    return G


def check_theta(p: AntiIsoPair, theta: LinearMap) -> Report:
    """Skewness of theta and ``[tX,tY] - t[tX,Y] - t[X,tY] = -[X,Y]`` on E+."""
    t = theta.coeffs
    e = p.Eplus
    n = e.dim
    rep = Report()
    rep.touch("theta-skew")
    q = p.formplus.gram
    lhs, rhs = t.T @ q, -(q @ t)
    for i in range(n):
        for j in range(n):
            if lhs[i, j] != rhs[i, j]:
                rep.expect("theta-skew", (i, j), lhs[i, j], rhs[i, j])
    rep.touch("theta-mcybe")
    for x in range(n):
        for y in range(x + 1, n):
            ex, ey = unit_vec(n, x), unit_vec(n, y)
            tx, ty = t.col(x), t.col(y)
            lhs = vsub(e.bracket(tx, ty), t.apply(vadd(e.bracket(tx, ey), e.bracket(ex, ty))))
            rep.expect("theta-mcybe", (x, y), lhs, vscale(-1, e.c[x][y]))
    return rep


def b_from_theta(q: QuasiManinTriple, theta: LinearMap, force: bool = False) -> OOperator:
    """``B(X + phi X) = theta X - phi theta X``: theta itself in the graph bases."""
    if not force:
        rep = check_theta(q.pair, theta)
        if not rep.passed:
            raise CheckFailed("theta is not a skew solution of the modified Yang-Baxter equation", rep)
    return operator_on(q, theta.coeffs, metric_from_phi(q).coeffs)


@dataclass(frozen=True)
class ReverseResult:
    quasi: QuasiManinTriple
    operator: OOperator
    twisted: LieAlgebra
    twilled: TwilledAlgebra
    triple: ManinTriple
    Eplus: Subspace
    Eminus: Subspace
    report: Report


def lbgb_rho(q: QuasiManinTriple, o: OOperator) -> list[list[Vector]]:
    """``rho_{X+} Y- = B[X+,Y-] - [BX+,Y-]`` as a table over F+ x F-."""
    n = q.dplus
    b = o.b
    fp, fm = q.gplus.basis.columns(), q.gminus.basis.columns()
    out = []
    for x in range(n):
        row = []
        for y in range(n):
            inner, _ = q.split(q.g.bracket(fp[x], fm[y]))
            _, outer = q.split(q.g.bracket(q.minus_vector(b.col(x)), fm[y]))
            row.append(vsub(b.apply(inner), outer))
        out.append(row)
    return out


def build_manin_from_orthogonal(p: AntiIsoPair, theta: LinearMap, force: bool = False) -> ReverseResult:
    q = quasi_manin_from_phi(p, force=force)
    o = b_from_theta(q, theta, force=force)
    rep = check_theta(p, theta)
    rep.merge(check_o_operator(q, o))
    gb = bracket_B(q, o, force=force)
    rho = coboundary_rho(q, o.B)
    sigma = q.sigma_table()
    tw = build_twilled(gb, q.minus_algebra(), ActionPair(sigma, rho), -1, force=force, form=q.adapted_form())
    rep.merge(tw.report)
    rep.touch("rho-agreement")
    lb = lbgb_rho(q, o)
    for x in range(q.dplus):
        for y in range(q.dminus):
            rep.expect("rho-agreement", (x, y), lb[x][y], vscale(-1, rho[x][y]))
    triple = tw.triple()
    rep.merge(verify_manin_triple(triple))
    eplus, eminus, irep = split_ideals(tw, o)
    rep.merge(irep)
    if not rep.passed and not force:
        raise CheckFailed("reverse construction failed", rep)
    return ReverseResult(q, o, gb, tw, triple, eplus, eminus, rep)


def theta_bracket(Eplus: LieAlgebra, theta: LinearMap, force: bool = False) -> LieAlgebra:
    """``[X,Y]_theta = [theta X, Y] - [theta Y, X]``."""
    t = theta.coeffs
    n = Eplus.dim
    c = [
        [vsub(Eplus.bracket(t.col(x), unit_vec(n, y)), Eplus.bracket(t.col(y), unit_vec(n, x))) for y in range(n)]
        for x in range(n)
    ]
    alg = LieAlgebra(n, c, Eplus.name + "_theta", Eplus.basis)
    if not force:
        rep = check_jacobi(alg)
        if not rep.passed:
            raise CheckFailed("theta bracket fails the Jacobi identity", rep)
    return alg


def theta_maps_report(res: ReverseResult) -> Report:
    """``[Theta+- X, Theta+- Y] = +-2 Theta+-([X,Y])`` in g_B, plus the theta bracket
    read off the twisted bracket on F+."""
    p = res.quasi.pair
    t = res.operator.b
    alg = res.twilled.algebra
    e = p.Eplus
    n = e.dim
    eye = Matrix.identity(n)
    rep = Report()
    for sign, label in ((1, "theta-map-plus"), (-1, "theta-map-minus")):
        # in F+/F- coordinates Theta(X) = (x, (theta +- 1) x)
        h = t + eye.scale(sign)
        rep.touch(label)
        for x in range(n):
            for y in range(x + 1, n):
                ex, ey = unit_vec(n, x), unit_vec(n, y)
                lhs = alg.bracket(tuple(ex) + h.apply(ex), tuple(ey) + h.apply(ey))
                xy = e.c[x][y]
                rhs = vscale(2 * sign, tuple(xy) + h.apply(xy))
                rep.expect(label, (x, y), lhs, rhs)
    rep.touch("theta-bracket-agreement")
    tb = theta_bracket(e, LinearMap(Subspace.whole(n), Subspace.whole(n), t), force=True)
    if tb.c != res.twisted.c:
        rep.failures.append(Failure("theta-bracket-agreement", (), tb.c, res.twisted.c))
    return rep

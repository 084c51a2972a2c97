"""r-matrices, the Yang-Baxter equations and the classical double.

Throughout, ``ad*_X`` is the plain transpose of ``ad_X`` acting on the dual
space, ``<ad*_X xi, Y> = <xi, [X, Y]>``; the coadjoint action is its negative.
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
    check_jacobi,
)
from .manin import ManinTriple, OOperator, Splitting, check_o_operator_data, operator_on, verify_manin_triple
from .twilled import build_gtilde_B

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class RMatrix:
    """``r = sum_ij coeffs[i][j] e_i (x) e_j`` on ``algebra``."""

    algebra: LieAlgebra
    coeffs: Matrix

    def __post_init__(self):
        m = self.coeffs if isinstance(self.coeffs, Matrix) else Matrix(self.coeffs)
        object.__setattr__(self, "coeffs", m)
        n = self.algebra.dim
        if m.shape != (n, n):
            raise ValueError("r-matrix coefficients must be n x n")

    def scaled(self, k) -> "RMatrix":
        return RMatrix(self.algebra, self.coeffs.scale(k))


def split_r(r: RMatrix) -> tuple[RMatrix, RMatrix]:
    c = r.coeffs
    return RMatrix(r.algebra, (c + c.T).scale(HALF)), RMatrix(r.algebra, (c - c.T).scale(HALF))


def rhat(rpart: RMatrix) -> LinearMap:
    """Contraction on the first slot, as a map from dual coordinates to k."""
    n = rpart.algebra.dim
    whole = Subspace.whole(n)
    return LinearMap(whole, whole, rpart.coeffs.T)


def ad_star(k: LieAlgebra, x: Vector) -> Matrix:
    """Matrix of ``ad*_x`` on dual coordinates (the transpose of ``ad_x``)."""
    return k.ad(x).T


def cybe_tensor(r: RMatrix) -> dict[tuple[int, int, int], Fraction]:
    """Nonzero entries of ``[r12,r13] + [r12,r23] + [r13,r23]``."""
    k = r.algebra
    n, c = k.dim, k.c
    C = r.coeffs
    out: dict[tuple[int, int, int], Fraction] = {}

    def add(key, v):
        out[key] = out.get(key, ZERO) + v

    nz = [(i, j, C[i, j]) for i in range(n) for j in range(n) if C[i, j]]
    for i, j, a in nz:
        for kk, l, b in nz:
            w = a * b
            for m in range(n):
                if c[i][kk][m]:
                    add((m, j, l), w * c[i][kk][m])
                if c[j][kk][m]:
                    add((i, m, l), w * c[j][kk][m])
                if c[j][l][m]:
                    add((i, kk, m), w * c[j][l][m])
    return {key: v for key, v in out.items() if v}


def check_cybe(r: RMatrix) -> Report:
    rep = Report()
    rep.touch("cybe")
    for key, v in sorted(cybe_tensor(r).items()):
        rep.failures.append(Failure("cybe", key, v, ZERO))
    return rep


def check_factorizable(r: RMatrix) -> Report:
    """Invertibility and ad-invariance of the symmetric part."""
    rplus, _ = split_r(r)
    h = rhat(rplus).coeffs
    k = r.algebra
    n = k.dim
    rep = Report()
    rep.touch("rplus-invertible")
    try:
        invert(h)
    except Singular:
        rep.failures.append(Failure("rplus-invertible", (), h, "invertible"))
    rep.touch("rplus-invariance")
    for x in range(n):
        e = unit_vec(n, x)
        m = h @ ad_star(k, e) + k.ad(e) @ h
        for i in range(n):
            for j in range(n):
                rep.expect("rplus-invariance", (x, i, j), m[i, j], ZERO)
    return rep


def gb_from_r(t: Splitting, r: RMatrix) -> OOperator:
    """``B = rhat(r-) psi`` and ``G = rhat(r+) psi`` with psi induced by the form.

    Refuses unless the symmetric part is invertible and invariant and the
    full r solves the classical Yang-Baxter equation.
    """
    if r.algebra.c != t.minus_algebra().c:
        raise ValueError("r-matrix must live on the minus algebra of the triple")
    rep = check_factorizable(r).merge(check_cybe(r))
    if not rep.passed:
        raise CheckFailed("r is not a factorizable solution of the classical Yang-Baxter equation", rep)
    rplus, rminus = split_r(r)
    psi = t.pairing.T
    o = operator_on(t, rhat(rminus).coeffs @ psi, rhat(rplus).coeffs @ psi)
    check = check_o_operator_data(t, o)
    if not check.passed:
        raise CheckFailed("operators derived from r violate their invariants", check)
    return o


def check_semenov(t: Splitting, o: OOperator) -> Report:
    """``[RX,RY] - R[RX,Y] - R[X,RY] = -[X,Y]`` on g- with ``R = B G^{-1}``."""
    gm = t.minus_algebra()
    R = o.b @ invert(o.gm)
    n = gm.dim
    rep = Report()
    rep.touch("semenov")
    for x in range(n):
        for y in range(x + 1, n):
            ex, ey = unit_vec(n, x), unit_vec(n, y)
            rx, ry = R.col(x), R.col(y)
            lhs = vsub(
                gm.bracket(rx, ry),
                R.apply(vadd(gm.bracket(rx, ey), gm.bracket(ex, ry))),
            )
            rep.expect("semenov", (x, y), lhs, vscale(-1, gm.c[x][y]))
    return rep


def dual_names(k: LieAlgebra) -> tuple[str, ...]:
    return tuple(b.lower() if b.lower() != b else b + "*" for b in k.basis)


def dual_bracket_table(k: LieAlgebra, r: RMatrix) -> list[list[Vector]]:
    """``[xi, la]_r = ad*_{rhat-(la)} xi - ad*_{rhat-(xi)} la`` on the dual basis."""
    _, rminus = split_r(r)
    rm = rhat(rminus).coeffs
    n = k.dim
    stars = [ad_star(k, rm.col(a)) for a in range(n)]
    return [
        [vsub(stars[b].apply(unit_vec(n, a)), stars[a].apply(unit_vec(n, b))) for b in range(n)]
        for a in range(n)
    ]


def dual_bracket_from_r(k: LieAlgebra, r: RMatrix, names=None) -> LieAlgebra:
    return LieAlgebra(k.dim, dual_bracket_table(k, r), k.name + "*", tuple(names or dual_names(k)))


def cobracket(k: LieAlgebra, r: RMatrix) -> list[Matrix]:
    """``delta(e_z) = ad_{e_z} r-`` as coefficient matrices of ``e_a (x) e_b``."""
    _, rminus = split_r(r)
    C = rminus.coeffs
    n = k.dim
    out = []
    for z in range(n):
        adz = k.ad(unit_vec(n, z))
        out.append(adz @ C + C @ adz.T)
    return out


def check_dual_pairing(k: LieAlgebra, r: RMatrix) -> Report:
    """``<[xi,la]_r, Z> = <xi (x) la, delta Z>`` on all basis triples."""
    table = dual_bracket_table(k, r)
    delta = cobracket(k, r)
    n = k.dim
    rep = Report()
    rep.touch("cobracket-pairing")
    for a in range(n):
        for b in range(n):
            for z in range(n):
                rep.expect("cobracket-pairing", (a, b, z), table[a][b][z], delta[z][a, b])
    return rep


def _double_bracket(k: LieAlgebra, rm: Matrix, u: Vector, v: Vector, prime: bool) -> Vector:
    """Bracket on dual-then-k coordinates.

    Unprimed:
      [X,Y] + [r xi,Y] - r ad*_Y xi - [r la,X] + r ad*_X la + [xi,la]_r - ad*_X la + ad*_Y xi
    Primed flips the sign of every term that involves r except ``[X,Y]``.
    """
    n = k.dim
    xi, x = u[:n], u[n:]
    la, y = v[:n], v[n:]
    s = -1 if prime else 1
    adx, ady = ad_star(k, x), ad_star(k, y)
    r_xi, r_la = rm.apply(xi), rm.apply(la)
    dual_xl = vsub(ad_star(k, r_la).apply(xi), ad_star(k, r_xi).apply(la))
    kpart = vadd(
        k.bracket(x, y),
        vscale(s, k.bracket(r_xi, y)),
        vscale(-s, rm.apply(ady.apply(xi))),
        vscale(-s, k.bracket(r_la, x)),
        vscale(s, rm.apply(adx.apply(la))),
    )
    dpart = vadd(vscale(s, dual_xl), vscale(-1, adx.apply(la)), ady.apply(xi))
    return tuple(dpart) + tuple(kpart)


def _table(k: LieAlgebra, r: RMatrix, prime: bool) -> list:
    _, rminus = split_r(r)
    rm = rhat(rminus).coeffs
    n = 2 * k.dim
    c = [[(ZERO,) * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = _double_bracket(k, rm, unit_vec(n, i), unit_vec(n, j), prime)
            c[i][j], c[j][i] = v, vscale(-1, v)
    return c


def _double_names(k: LieAlgebra, names) -> tuple[str, ...]:
    return tuple(names or dual_names(k)) + tuple(k.basis)


def pairing_form(n: int) -> BilinearForm:
    eye, zero = Matrix.identity(n), Matrix.zeros(n, n)
    return BilinearForm(Matrix.block([[zero, eye], [eye, zero]]))


def double_from_bialgebra(k: LieAlgebra, r: RMatrix, names=None, force: bool = False) -> ManinTriple:
    """The classical double on dual-then-k coordinates with the natural pairing.

    The plus subspace is the dual (first block) and the minus subspace is k.
    """
    n = k.dim
    g = LieAlgebra(2 * n, _table(k, r, False), "double", _double_names(k, names))
    eye = Matrix.identity(2 * n)
    t = ManinTriple(
        g,
        pairing_form(n),
        Subspace(eye.submatrix(range(2 * n), range(n))),
        Subspace(eye.submatrix(range(2 * n), range(n, 2 * n))),
    )
    if not force:
        rep = verify_manin_triple(t)
        if not rep.passed:
            raise CheckFailed("double is not a Manin triple", rep)
    return t


def primed_double(k: LieAlgebra, r: RMatrix, names=None) -> LieAlgebra:
    """The twilled extension of k and the opposite dual, on dual-then-k coordinates."""
    return LieAlgebra(2 * k.dim, _table(k, r, True), "double'", _double_names(k, names))


def double_report(k: LieAlgebra, r: RMatrix) -> Report:
    """Checks on the double and its primed variant built from r.

    Includes the closed forms of the brackets inside the graphs of
    ``rhat- +- rhat+`` and the vanishing of their mixed brackets.
    """
    rep = Report()
    rep.merge(check_dual_pairing(k, r))
    rep.merge(check_jacobi(dual_bracket_from_r(k, r)))
    t = double_from_bialgebra(k, r, force=True)
    rep.merge(verify_manin_triple(t))
    prime = primed_double(k, r)
    rep.merge(check_jacobi(prime))
    o = gb_from_r(t, r)
    tw = build_gtilde_B(t, o)
    rep.touch("primed-double-agreement")
    if tw.algebra.c != prime.c:
        rep.failures.append(Failure("primed-double-agreement", (), tw.algebra.c, prime.c))
    n = k.dim
    rplus, rminus = split_r(r)
    hp, hm = rhat(rplus).coeffs, rhat(rminus).coeffs
    for sign, label in ((1, "double-ideal-plus"), (-1, "double-ideal-minus")):
        h = hm + hp.scale(sign)
        rep.touch(label)
        for a in range(n):
            for b in range(a + 1, n):
                xi, la = unit_vec(n, a), unit_vec(n, b)
                u = tuple(xi) + h.apply(xi)
                v = tuple(la) + h.apply(la)
                w = ad_star(k, hp.apply(la)).apply(xi)
                rhs = vscale(2 * sign, tuple(w) + h.apply(w))
                rep.expect(label, (a, b), prime.bracket(u, v), rhs)
    rep.touch("double-ideal-mixed")
    hplus, hminus = hm + hp, hm - hp
    for a in range(n):
        for b in range(n):
            xi, la = unit_vec(n, a), unit_vec(n, b)
            u = tuple(xi) + hplus.apply(xi)
            v = tuple(la) + hminus.apply(la)
            rep.expect("double-ideal-mixed", (a, b), prime.bracket(u, v), (ZERO,) * (2 * n))
    return rep

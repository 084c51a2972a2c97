"""Built-in sl2 data and the published tables of the two worked examples.

Expected values are stored by basis name. Every ``run_*`` function rebuilds
the example from structure constants, runs the full pipeline and compares
each table entry by entry, so a mismatch names the offending bracket.
"""

from __future__ import annotations

from fractions import Fraction

from .cps import cps_gauged, is_integrable, nijenhuis_defect, verify_cps
from .exact_linalg import Matrix, format_rational, kernel
from .lie_core import BilinearForm, LieAlgebra, LinearMap, Report, Subspace
from .manin import ManinTriple, check_graph_homomorphism, check_o_operator_data
from .reverse import (
    AntiIsoPair,
    ReverseResult,
    build_manin_from_orthogonal,
    check_pair,
    lbgb_rho,
    pair_from_phi,
    theta_maps_report,
)
from .rmatrix import (
    RMatrix,
    check_cybe,
    check_factorizable,
    check_semenov,
    double_from_bialgebra,
    double_report,
    dual_bracket_from_r,
    gb_from_r,
    split_r,
)
from .twilled import (
    TwilledAlgebra,
    adjoint_intertwiner_check,
    build_gtilde_B,
    nijenhuis_phi,
    phi_B,
    split_ideals,
)

F = Fraction
HALF, QUARTER = F(1, 2), F(1, 4)

SL2_BASIS = ("H", "X+", "X-")
SL2_BRACKETS = {("H", "X+"): {"X+": 2}, ("H", "X-"): {"X-": -2}, ("X+", "X-"): {"H": 1}}
DUAL_BASIS = ("h", "x+", "x-")
# r = X+ (x) X- + 1/4 H (x) H
SL2_R = [[QUARTER, 0, 0], [0, 0, 1], [0, 0, 0]]

FORWARD = {
    "r_plus": {("X+", "X-"): HALF, ("X-", "X+"): HALF, ("H", "H"): QUARTER},
    "r_minus": {("X+", "X-"): HALF, ("X-", "X+"): -HALF},
    "dual_brackets": {("h", "x+"): {"x+": -HALF}, ("h", "x-"): {"x-": -HALF}},
    "double_crossed": {
        ("X+", "h"): {"X+": -HALF, "x-": -1},
        ("X-", "h"): {"X-": -HALF, "x+": 1},
        ("H", "x+"): {"x+": -2},
        ("X+", "x+"): {"H": HALF, "h": 2},
        ("H", "x-"): {"x-": 2},
        ("X-", "x-"): {"H": HALF, "h": -2},
    },
    "metric": {"h": {"H": QUARTER}, "x+": {"X-": HALF}, "x-": {"X+": HALF}},
    "twist": {"h": {}, "x+": {"X-": HALF}, "x-": {"X+": -HALF}},
    "primed_crossed": {
        ("X+", "h"): {"X+": HALF, "x-": -1},
        ("X-", "h"): {"x+": 1, "X-": HALF},
        ("H", "x+"): {"x+": -2},
        ("X+", "x+"): {"h": 2, "H": -HALF},
        ("H", "x-"): {"x-": 2},
        ("X-", "x-"): {"h": -2, "H": -HALF},
    },
    "eplus_span": [{"h": 1, "H": QUARTER}, {"x+": 1, "X-": 1}, {"x-": 1}],
    "eminus_span": [{"h": 1, "H": -QUARTER}, {"x+": 1}, {"x-": 1, "X+": -1}],
    "eplus_brackets": [
        ({"h": 1, "H": QUARTER}, {"x+": 1, "X-": 1}, {"x+": -1, "X-": -1}),
        ({"h": 1, "H": QUARTER}, {"x-": 1}, {"x-": 1}),
        ({"x+": 1, "X-": 1}, {"x-": 1}, {"h": -2, "H": -HALF}),
    ],
    "eminus_brackets": [
        ({"h": 1, "H": -QUARTER}, {"x+": 1}, {"x+": 1}),
        ({"h": 1, "H": -QUARTER}, {"x-": 1, "X+": -1}, {"x-": -1, "X+": 1}),
        ({"x+": 1}, {"x-": 1, "X+": -1}, {"h": 2, "H": -HALF}),
    ],
    # ordered basis h, x+, x-, H, X+, X-
    "E": [
        [0, 0, 0, 4, 0, 0],
        [0, 1, 0, 0, 0, 2],
        [0, 0, -1, 0, 2, 0],
        [QUARTER, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, -1],
    ],
    "J": [
        [0, 0, 0, 4, 0, 0],
        [0, 1, 0, 0, 0, 2],
        [0, 0, -1, 0, 2, 0],
        [-QUARTER, 0, 0, 0, 0, 0],
        [0, 0, -1, 0, 1, 0],
        [0, -1, 0, 0, 0, -1],
    ],
    "kernel_dim": 1,
}

MINUS_BASIS = ("a1", "a2", "a3")
MINUS_BRACKETS = {("a1", "a2"): {"a2": 2}, ("a1", "a3"): {"a3": -2}, ("a2", "a3"): {"a1": 1}}
PLUS_BASIS = ("b1", "b2", "b3")
PLUS_BRACKETS = {("b1", "b2"): {"b2": -2}, ("b1", "b3"): {"b3": 2}, ("b2", "b3"): {"b1": -1}}
MINUS_GRAM = [[2, 0, 0], [0, 0, 1], [0, 1, 0]]
THETA = [[0, 0, 0], [0, 1, 0], [0, 0, -1]]

REVERSE = {
    "quasi_brackets": {
        ("e+1", "e+2"): {"e-2": -2},
        ("e+1", "e+3"): {"e-3": 2},
        ("e+2", "e+3"): {"e-1": -1},
        ("e-1", "e-2"): {"e-2": -2},
        ("e-1", "e-3"): {"e-3": 2},
        ("e-2", "e-3"): {"e-1": -1},
        ("e+1", "e-2"): {"e+2": -2},
        ("e+1", "e-3"): {"e+3": 2},
        ("e+2", "e-1"): {"e+2": 2},
        ("e+2", "e-3"): {"e+1": -1},
        ("e+3", "e-1"): {"e+3": -2},
        ("e+3", "e-2"): {"e+1": 1},
    },
    "theta": {"b1": {}, "b2": {"b2": 1}, "b3": {"b3": -1}},
    "metric": {"e+1": {"e-1": 1}, "e+2": {"e-2": 1}, "e+3": {"e-3": 1}},
    "twist": {"e+1": {}, "e+2": {"e-2": 1}, "e+3": {"e-3": -1}},
    "twisted_bracket": {("e+1", "e+2"): {"e+2": -2}, ("e+1", "e+3"): {"e+3": -2}},
    "sigma": {
        ("e-1", "e+2"): {"e+2": -2},
        ("e-1", "e+3"): {"e+3": 2},
        ("e-2", "e+1"): {"e+2": 2},
        ("e-2", "e+3"): {"e+1": -1},
        ("e-3", "e+1"): {"e+3": -2},
        ("e-3", "e+2"): {"e+1": 1},
    },
    "rho": {("e+1", "e-2"): {"e-2": -2}, ("e+1", "e-3"): {"e-3": -2}},
    "gB_crossed": {
        ("e+1", "e-2"): {"e+2": -2, "e-2": -2},
        ("e+1", "e-3"): {"e+3": 2, "e-3": -2},
        ("e+2", "e-1"): {"e+2": 2},
        ("e+2", "e-3"): {"e+1": -1, "e-1": 1},
        ("e+3", "e-1"): {"e+3": -2},
        ("e+3", "e-2"): {"e+1": 1, "e-1": 1},
    },
    "gB_minus": {("e-1", "e-2"): {"e-2": -2}, ("e-1", "e-3"): {"e-3": 2}, ("e-2", "e-3"): {"e-1": -1}},
    "eplus_span": [{"e+1": 1, "e-1": 1}, {"e+2": 1, "e-2": 2}, {"e+3": 1}],
    "eminus_span": [{"e+1": 1, "e-1": -1}, {"e+2": 1}, {"e+3": 1, "e-3": -2}],
}

# reverse basis name -> multiple of a forward basis vector
SUBSTITUTION = {
    "e-1": {"H": 1},
    "e-2": {"X-": 1},
    "e-3": {"X+": 1},
    "e+1": {"h": 4},
    "e+2": {"x+": 2},
    "e+3": {"x-": 2},
}


def sl2() -> LieAlgebra:
    return LieAlgebra.from_brackets(SL2_BASIS, SL2_BRACKETS, "sl2")


def sl2_r() -> RMatrix:
    return RMatrix(sl2(), Matrix(SL2_R))


def forward_triple() -> ManinTriple:
    return double_from_bialgebra(sl2(), sl2_r(), names=DUAL_BASIS)


def sl2_pair() -> AntiIsoPair:
    em = LieAlgebra.from_brackets(MINUS_BASIS, MINUS_BRACKETS, "E-")
    ep = LieAlgebra.from_brackets(PLUS_BASIS, PLUS_BRACKETS, "E+")
    return pair_from_phi(ep, em, Matrix.identity(3), BilinearForm(Matrix(MINUS_GRAM)))


def sl2_theta() -> LinearMap:
    whole = Subspace.whole(3)
    return LinearMap(whole, whole, Matrix(THETA))


def vector_of(basis, values: dict) -> tuple:
    index = {b: i for i, b in enumerate(basis)}
    out = [F(0)] * len(basis)
    for name, q in values.items():
        out[index[name]] += F(q)
    return tuple(out)


def render(basis, v) -> dict[str, str]:
    """Nonzero coordinates keyed by basis name."""
    return {basis[i]: format_rational(q) for i, q in enumerate(v) if q}


def _expected_bracket(table: dict, x: str, y: str) -> dict:
    if (x, y) in table:
        return table[(x, y)]
    if (y, x) in table:
        return {k: -F(v) for k, v in table[(y, x)].items()}
    return {}


def compare_brackets(rep: Report, label: str, a: LieAlgebra, table: dict, pairs) -> None:
    """Brackets of ``a`` over ``pairs`` against a table; missing pairs mean zero."""
    rep.touch(label)
    index = {b: i for i, b in enumerate(a.basis)}
    for x, y in pairs:
        got = a.c[index[x]][index[y]]
        want = vector_of(a.basis, _expected_bracket(table, x, y))
        if got != want:
            rep.expect(label, (x, y), render(a.basis, got), render(a.basis, want))


def all_pairs(names) -> list[tuple[str, str]]:
    return [(x, y) for i, x in enumerate(names) for y in names[i + 1:]]


def cross_pairs(first, second) -> list[tuple[str, str]]:
    return [(x, y) for x in first for y in second]


def compare_map(rep: Report, label: str, src_names, tgt_basis, images: list, expected: dict) -> None:
    rep.touch(label)
    for name, img in zip(src_names, images):
        want = vector_of(tgt_basis, expected[name])
        if tuple(img) != want:
            rep.expect(label, (name,), render(tgt_basis, img), render(tgt_basis, want))


def compare_matrix(rep: Report, label: str, names, got: Matrix, want: Matrix) -> None:
    rep.touch(label)
    for i in range(got.rows):
        for j in range(got.cols):
            if got[i, j] != want[i, j]:
                rep.expect(label, (names[i], names[j]), format_rational(got[i, j]), format_rational(want[i, j]))


def compare_span(rep: Report, label: str, basis, got: Subspace, vectors: list[dict]) -> None:
    rep.touch(label)
    want = Subspace.span([vector_of(basis, v) for v in vectors])
    if not got.same_as(want):
        rep.expect(
            label,
            (),
            [render(basis, c) for c in got.basis.columns()],
            [render(basis, c) for c in want.basis.columns()],
        )


def compare_tensor(rep: Report, label: str, basis, got: Matrix, expected: dict) -> None:
    rep.touch(label)
    index = {b: i for i, b in enumerate(basis)}
    want = [[F(0)] * len(basis) for _ in basis]
    for (x, y), q in expected.items():
        want[index[x]][index[y]] = F(q)
    compare_matrix(rep, label, basis, got, Matrix(want))


def _ideal_brackets(rep: Report, label: str, a: LieAlgebra, triples: list) -> None:
    rep.touch(label)
    for u, v, w in triples:
        got = a.bracket(vector_of(a.basis, u), vector_of(a.basis, v))
        want = vector_of(a.basis, w)
        if got != want:
            rep.expect(label, (render(a.basis, vector_of(a.basis, u)), render(a.basis, vector_of(a.basis, v))),
                       render(a.basis, got), render(a.basis, want))


def forward_pipeline() -> tuple[ManinTriple, RMatrix, TwilledAlgebra, Report]:
    """Run every forward construction on the built-in data (no table comparison)."""
    k, r = sl2(), sl2_r()
    rep = Report()
    rep.merge(check_cybe(r))
    rep.merge(check_factorizable(r))
    t = forward_triple()
    rep.merge(double_report(k, r))
    o = gb_from_r(t, r)
    rep.merge(check_o_operator_data(t, o))
    rep.merge(check_graph_homomorphism(t, o))
    rep.merge(check_semenov(t, o))
    tw = build_gtilde_B(t, o)
    rep.merge(tw.report)
    rep.merge(split_ideals(tw, o)[2])
    rep.merge(phi_B(tw, o)[1])
    rep.merge(nijenhuis_phi(tw, o))
    rep.merge(adjoint_intertwiner_check(tw, o))
    rep.merge(verify_cps(cps_gauged(o.G, o.B, t.form)))
    return t, r, tw, rep


def run_forward() -> tuple[Report, dict]:
    t, r, tw, rep = forward_pipeline()
    k = r.algebra
    o = gb_from_r(t, r)
    g = t.g
    ex = FORWARD
    rp, rm = split_r(r)
    compare_tensor(rep, "example-r-plus", k.basis, rp.coeffs, ex["r_plus"])
    compare_tensor(rep, "example-r-minus", k.basis, rm.coeffs, ex["r_minus"])
    dual = dual_bracket_from_r(k, r, DUAL_BASIS)
    compare_brackets(rep, "example-dual-brackets", dual, ex["dual_brackets"], all_pairs(DUAL_BASIS))
    crossed = cross_pairs(DUAL_BASIS, SL2_BASIS)
    compare_brackets(rep, "example-double-crossed", g, ex["double_crossed"], crossed)
    compare_map(rep, "example-metric", DUAL_BASIS, g.basis, [t.minus_vector(c) for c in o.gm.columns()], ex["metric"])
    compare_map(rep, "example-twist", DUAL_BASIS, g.basis, [t.minus_vector(c) for c in o.b.columns()], ex["twist"])
    a = tw.algebra
    compare_brackets(rep, "example-primed-crossed", a, ex["primed_crossed"], crossed)
    eplus, eminus, _ = split_ideals(tw, o)
    compare_span(rep, "example-eplus-span", a.basis, eplus, ex["eplus_span"])
    compare_span(rep, "example-eminus-span", a.basis, eminus, ex["eminus_span"])
    _ideal_brackets(rep, "example-eplus-brackets", a, ex["eplus_brackets"])
    _ideal_brackets(rep, "example-eminus-brackets", a, ex["eminus_brackets"])
    rep.touch("example-ideal-mixed")
    for u in eplus.basis.columns():
        for v in eminus.basis.columns():
            w = a.bracket(u, v)
            if any(w):
                rep.expect("example-ideal-mixed", (render(a.basis, u), render(a.basis, v)), render(a.basis, w), {})
    rep.touch("example-kernel")
    kdim = kernel(o.b + o.gm).cols
    if kdim != ex["kernel_dim"]:
        rep.expect("example-kernel", (), kdim, ex["kernel_dim"])
    c = cps_gauged(o.G, o.B, t.form)
    compare_matrix(rep, "example-E-matrix", g.basis, c.E, Matrix(ex["E"]))
    compare_matrix(rep, "example-J-matrix", g.basis, c.J, Matrix(ex["J"]))
    rep.touch("example-E-integrable")
    if not is_integrable(nijenhuis_defect(a, c.E, "product")):
        rep.expect("example-E-integrable", (), "defect", "zero")
    rep.touch("example-J-nonintegrable")
    if is_integrable(nijenhuis_defect(a, c.J, "complex")):
        rep.expect("example-J-nonintegrable", (), "zero", "defect")
    payload = {
        "double": g,
        "gtilde": a,
        "eplus": [render(a.basis, v) for v in eplus.basis.columns()],
        "eminus": [render(a.basis, v) for v in eminus.basis.columns()],
        "E": c.E,
        "J": c.J,
    }
    return rep, payload


def reverse_pipeline() -> tuple[ReverseResult, Report]:
    p = sl2_pair()
    rep = check_pair(p)
    res = build_manin_from_orthogonal(p, sl2_theta())
    rep.merge(res.report)
    rep.merge(theta_maps_report(res))
    return res, rep


def run_reverse() -> tuple[Report, dict]:
    res, rep = reverse_pipeline()
    q = res.quasi
    ex = REVERSE
    plus, minus = q.side_names()
    names = plus + minus
    cols = q.gplus.basis.columns() + q.gminus.basis.columns()
    adapted = LieAlgebra(
        len(names),
        [[q.split(q.g.bracket(u, v))[0] + q.split(q.g.bracket(u, v))[1] for v in cols] for u in cols],
        "quasi",
        names,
    )
    compare_brackets(rep, "example-quasi-brackets", adapted, ex["quasi_brackets"], all_pairs(names))
    p = q.pair
    compare_map(rep, "example-theta", p.Eplus.basis, p.Eplus.basis, sl2_theta().coeffs.columns(), ex["theta"])
    o = res.operator
    pad = (F(0),) * len(plus)
    compare_map(rep, "example-metric", plus, names, [pad + c for c in o.gm.columns()], ex["metric"])
    compare_map(rep, "example-twist", plus, names, [pad + c for c in o.b.columns()], ex["twist"])
    compare_brackets(rep, "example-twisted-bracket", res.twisted, ex["twisted_bracket"], all_pairs(plus))
    rep.touch("example-sigma-table")
    sig = q.sigma_table()
    for i, m in enumerate(minus):
        for j, pl in enumerate(plus):
            want = vector_of(plus, ex["sigma"].get((m, pl), {}))
            if tuple(sig[i][j]) != want:
                rep.expect("example-sigma-table", (m, pl), render(plus, sig[i][j]), render(plus, want))
    rep.touch("example-rho-table")
    rho = lbgb_rho(q, o)
    for j, pl in enumerate(plus):
        for i, m in enumerate(minus):
            want = vector_of(minus, ex["rho"].get((pl, m), {}))
            if tuple(rho[j][i]) != want:
                rep.expect("example-rho-table", (pl, m), render(minus, rho[j][i]), render(minus, want))
    a = res.twilled.algebra
    compare_brackets(rep, "example-gB-crossed", a, ex["gB_crossed"], cross_pairs(plus, minus))
    compare_brackets(rep, "example-gB-minus", a, ex["gB_minus"], all_pairs(minus))
    opposite_twisted = {k: {z: -F(v) for z, v in w.items()} for k, w in ex["twisted_bracket"].items()}
    compare_brackets(rep, "example-gB-plus", a, opposite_twisted, all_pairs(plus))
    compare_span(rep, "example-eplus-span", a.basis, res.Eplus, ex["eplus_span"])
    compare_span(rep, "example-eminus-span", a.basis, res.Eminus, ex["eminus_span"])
    payload = {
        "quasi": adapted,
        "twisted": res.twisted,
        "gB": a,
        "eplus": [render(a.basis, v) for v in res.Eplus.basis.columns()],
        "eminus": [render(a.basis, v) for v in res.Eminus.basis.columns()],
    }
    return rep, payload


def substitution_matrix(rev_basis, fwd_basis) -> Matrix:
    return Matrix.from_columns([vector_of(fwd_basis, SUBSTITUTION[name]) for name in rev_basis])


def run_crosscheck() -> tuple[Report, dict]:
    _, _, tw, rep = forward_pipeline()
    res, rrep = reverse_pipeline()
    rep.merge(rrep)
    fwd, rev = tw.algebra, res.twilled.algebra
    s = substitution_matrix(rev.basis, fwd.basis)
    rep.touch("example-substitution")
    n = rev.dim
    for i in range(n):
        for j in range(i + 1, n):
            lhs = s.apply(rev.c[i][j])
            rhs = fwd.bracket(s.col(i), s.col(j))
            if lhs != rhs:
                rep.expect("example-substitution", (rev.basis[i], rev.basis[j]),
                           render(fwd.basis, lhs), render(fwd.basis, rhs))
    # the invariant forms agree up to an overall sign
    rep.touch("example-substitution-form")
    pulled = s.T @ tw.form.gram @ s
    if pulled != -res.twilled.form.gram:
        rep.expect("example-substitution-form", (), pulled, -res.twilled.form.gram)
    payload = {"substitution": {k: render(fwd.basis, vector_of(fwd.basis, v)) for k, v in SUBSTITUTION.items()}}
    return rep, payload


EXAMPLES = {"sl2-forward": run_forward, "sl2-reverse": run_reverse, "sl2-crosscheck": run_crosscheck}

"""The five acceptance criteria, each printing a single PASS/FAIL line."""

import json
import time
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from families import (
    abelian_instance,
    abelian_pair_instance,
    perturbation,
    quadratic_instances,
    sl2_instance,
    sl2_pair_instance,
    sl2_plus_center_instance,
    triangular_instance,
)
from theorems import cps_theorems, forward_theorems, operator_equivalences, reverse_theorems, theta_equivalence
from manin_forge.cli import main
from manin_forge.exact_linalg import Matrix, kernel
from manin_forge.golden import run_crosscheck, run_forward, run_reverse, sl2, sl2_pair, sl2_r, sl2_theta
from manin_forge.lie_core import LieAlgebra, Report, check_jacobi
from manin_forge.reverse import check_pair, check_theta, pair_from_phi
from manin_forge.rmatrix import RMatrix, check_cybe, check_factorizable, double_from_bialgebra, gb_from_r

F = Fraction
LIMIT = 5.0


def verdict(capsys, number: int, title: str, body) -> None:
    start = time.perf_counter()
    ok, detail = body()
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < LIMIT
    with capsys.disabled():
        print(f"\nACCEPTANCE {number} {'PASS' if ok else 'FAIL'}: {title} [{detail}; {elapsed:.2f}s]")
    assert elapsed < LIMIT, f"took {elapsed:.2f}s"
    assert ok, detail


def summary(rep: Report) -> str:
    failed = rep.failed_checks()
    if not failed:
        return f"{len(rep.checks)} checks"
    return f"failed {', '.join(failed)}; first {rep.first()}"


def sweep(strategy, count: int, body, tally: dict) -> None:
    @settings(max_examples=count, derandomize=True, database=None, deadline=None)
    @given(strategy, st.data())
    def run(inst, data):
        rep = body(inst, data)
        tally["n"] += 1
        tally.setdefault("families", set()).add(inst.family)
        if not rep.passed:
            tally.setdefault("bad", []).append((inst.family, rep.first()))

    run()


def test_criterion_1_forward_example(capsys):
    def body():
        rep, _ = run_forward()
        return rep.passed, summary(rep)

    verdict(capsys, 1, "sl2 forward example tables", body)


def test_criterion_2_reverse_example(capsys):
    def body():
        rep, _ = run_reverse()
        cross, _ = run_crosscheck()
        rep.merge(cross)
        return rep.passed, summary(rep)

    verdict(capsys, 2, "sl2 reverse example tables and substitution", body)


def test_criterion_3_theorem_suite(capsys):
    def forward(inst, data):
        delta = data.draw(perturbation(*inst.operator.b.shape))
        return forward_theorems(inst).merge(operator_equivalences(inst, delta))

    def backward(inst, data):
        n = inst.pair.dim
        return reverse_theorems(inst).merge(theta_equivalence(inst, data.draw(perturbation(n, n))))

    def body():
        tally = {"n": 0}
        plan = [
            (sl2_instance(), 20, forward),
            (sl2_plus_center_instance(), 6, forward),
            (abelian_instance(), 20, forward),
            (triangular_instance(), 24, forward),
            (sl2_pair_instance(), 15, backward),
            (abelian_pair_instance(), 20, backward),
        ]
        for strategy, count, fn in plan:
            sweep(strategy, count, fn, tally)
        fams = sorted(tally["families"])
        ok = tally["n"] >= 100 and not tally.get("bad") and {"sl2", "aff1", "heisenberg", "abelian"} <= set(fams)
        detail = f"{tally['n']} instances over {', '.join(fams)}"
        if tally.get("bad"):
            detail += f"; {len(tally['bad'])} failing, first {tally['bad'][0]}"
        return ok, detail

    verdict(capsys, 3, "theorem suite on generated instances", body)


def test_criterion_4_cps_suite(capsys):
    def body():
        tally = {"n": 0}
        sweep(quadratic_instances(), 40, lambda inst, _: cps_theorems(inst.triple, inst.operator), tally)
        r = sl2_r()
        t = double_from_bialgebra(sl2(), r)
        o = gb_from_r(t, r)
        rep = cps_theorems(t, o)
        kdim = kernel(o.b + o.gm).cols
        ok = rep.passed and not tally.get("bad") and kdim == 1
        detail = f"{tally['n']} instances plus sl2; sl2 kernel dim {kdim}"
        if tally.get("bad"):
            detail += f"; first failure {tally['bad'][0]}"
        return ok, detail

    verdict(capsys, 4, "complex product structure suite", body)


def _constant_perturbations(a: LieAlgebra):
    for i in range(a.dim):
        for j in range(i + 1, a.dim):
            for k in range(a.dim):
                c = [[list(v) for v in row] for row in a.c]
                c[i][j][k] += 1
                c[j][i][k] -= 1
                yield (i, j, k), LieAlgebra(a.dim, c, a.name, a.basis)


def _entry_perturbations(m: Matrix):
    for i in range(m.rows):
        for j in range(m.cols):
            rows = [list(r) for r in m.tolist()]
            rows[i][j] += 1
            yield (i, j), Matrix(rows)


def _cli_codes(data_dir, tmp_path) -> dict:
    bad_r = json.loads((data_dir / "sl2_r.json").read_text(encoding="utf-8"))
    bad_r["objects"]["r"]["coeffs"][0][0] = "1/2"
    bad_path = tmp_path / "bad_r.json"
    bad_path.write_text(json.dumps(bad_r), encoding="utf-8")
    runs = {
        0: ["forward", str(data_dir / "sl2_manin.json"), "--r", str(data_dir / "sl2_r.json")],
        1: ["forward", str(data_dir / "sl2_manin.json"), "--r", str(bad_path)],
        2: ["verify", str(tmp_path / "absent.json")],
    }
    return {want: main(["--quiet", *argv]) for want, argv in runs.items()}


def test_criterion_5_negative_controls(capsys, data_dir, tmp_path):
    def body():
        missed = []
        k, r = sl2(), sl2_r()
        for where, alg in _constant_perturbations(k):
            rr = RMatrix(alg, r.coeffs)
            rep = check_jacobi(alg).merge(check_cybe(rr)).merge(check_factorizable(rr))
            if rep.passed or not rep.first().witness:
                missed.append(("constant", where))
        for where, m in _entry_perturbations(r.coeffs):
            rr = RMatrix(k, m)
            rep = check_cybe(rr).merge(check_factorizable(rr))
            if rep.passed or not rep.first().witness:
                missed.append(("r", where))
        p, th = sl2_pair(), sl2_theta()
        for where, m in _entry_perturbations(th.coeffs):
            rep = check_theta(p, th.with_coeffs(m))
            if rep.passed or not rep.first().witness:
                missed.append(("theta", where))
        for side in ("Eplus", "Eminus"):
            for where, alg in _constant_perturbations(getattr(p, side)):
                parts = {"Eplus": p.Eplus, "Eminus": p.Eminus, side: alg}
                q = pair_from_phi(parts["Eplus"], parts["Eminus"], p.phi.coeffs, p.formminus)
                rep = check_pair(q).merge(check_theta(q, th))
                if rep.passed or not rep.first().witness:
                    missed.append((side, where))
        codes = _cli_codes(data_dir, tmp_path)
        ok = not missed and all(want == got for want, got in codes.items())
        detail = f"exit codes {codes}"
        if missed:
            detail += f"; undetected {missed}"
        return ok, detail

    verdict(capsys, 5, "negative controls and exit codes", body)

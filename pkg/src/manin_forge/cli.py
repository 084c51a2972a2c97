"""Command-line front end: ``manin-forge verify|forward|reverse|example``.

Exit codes: 0 every check passed, 1 a mathematical check failed,
2 the input could not be read or does not follow the schema.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

from . import __version__
from .cps import cps_gauged, verify_cps
from .exact_linalg import Matrix, format_rational
from .golden import EXAMPLES, render
from .lie_core import (
    CheckFailed,
    Failure,
    LieAlgebra,
    Report,
    Subspace,
    check_ad_invariance,
    check_jacobi,
)
from .manin import (
    ManinTriple,
    Splitting,
    check_dressing_representation,
    check_graph_homomorphism,
    check_o_operator_data,
    operator_on,
    verify_manin_triple,
)
from .reverse import (
    build_manin_from_orthogonal,
    check_pair,
    check_quasi_manin,
    check_theta,
    quasi_manin_from_phi,
    theta_maps_report,
)
from .rmatrix import check_cybe, check_factorizable, check_semenov, gb_from_r
from .schema import (
    FORMAT,
    InvalidObject,
    SchemaError,
    Workspace,
    dumps,
    fmt_matrix,
    fmt_vector,
    load_workspace,
    serialize_algebra,
)
from .twilled import TwilledAlgebra, adjoint_intertwiner_check, build_gtilde_B, nijenhuis_phi, phi_B, split_ideals

EXIT_PASS, EXIT_FAIL, EXIT_SCHEMA = 0, 1, 2
MAX_FAILURES = 50


@dataclass
class RunReport:
    command: str
    inputs: list[str]
    report: Report = field(default_factory=Report)
    result: dict = field(default_factory=dict)
    error: str | None = None

    @property
    def exit_code(self) -> int:
        if self.error is not None:
            return EXIT_SCHEMA
        return EXIT_PASS if self.report.passed else EXIT_FAIL

    def to_json(self) -> dict:
        status = {EXIT_PASS: "pass", EXIT_FAIL: "fail", EXIT_SCHEMA: "error"}[self.exit_code]
        out: dict[str, Any] = {
            "format": FORMAT,
            "command": self.command,
            "inputs": self.inputs,
            "status": status,
            "exit": self.exit_code,
        }
        if self.error is not None:
            out["error"] = self.error
            return out
        out["checks"] = {c: "pass" if ok else "fail" for c, ok in self.report.results().items()}
        out["failure_count"] = len(self.report.failures)
        out["failures"] = [failure_json(f) for f in self.report.failures[:MAX_FAILURES]]
        out["result"] = jsonable(self.result)
        return out


def jsonable(x: Any) -> Any:
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Matrix):
        return fmt_matrix(x)
    if isinstance(x, LieAlgebra):
        return serialize_algebra(x)
    if isinstance(x, Subspace):
        return [fmt_vector(c) for c in x.basis.columns()]
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return str(x)


def failure_json(f: Failure) -> dict:
    return {"check": f.check, "witness": jsonable(f.witness), "lhs": jsonable(f.lhs), "rhs": jsonable(f.rhs)}


def triple_workspace(alg: LieAlgebra, gram: Matrix, plus: Subspace, minus: Subspace, ideals) -> dict:
    """A loadable workspace describing a constructed Manin triple and its ideals."""
    objects: dict[str, Any] = {
        "algebra": serialize_algebra(alg),
        "form": {"type": "bilinear_form", "algebra": "algebra", "gram": fmt_matrix(gram)},
        "gplus": {"type": "subspace", "ambient": "algebra", "vectors": jsonable(plus)},
        "gminus": {"type": "subspace", "ambient": "algebra", "vectors": jsonable(minus)},
        "triple": {"type": "manin_triple", "algebra": "algebra", "form": "form", "gplus": "gplus", "gminus": "gminus"},
    }
    for name, s in zip(("eplus", "eminus"), ideals):
        objects[name] = {"type": "subspace", "ambient": "algebra", "vectors": jsonable(s)}
    return {"format": FORMAT, "subject": "triple", "objects": objects}


def _guarded(run: RunReport, label: str, step: Callable[[], Any]) -> Any:
    """Run a construction step; a refusal or arithmetic breakdown becomes a failure."""
    try:
        return step()
    except CheckFailed as exc:
        run.report.merge(exc.report)
        if exc.report.passed:
            run.report.failures.append(Failure(label, (), str(exc), "accepted"))
    except (ArithmeticError, ValueError) as exc:
        run.report.touch(label)
        run.report.failures.append(Failure(label, (), str(exc), "accepted"))
    return None


def _load(path: str, base: Workspace | None = None) -> Workspace:
    ws = load_workspace(path, base)
    ws.resolve_all()
    return ws


def _subject(ws: Workspace, kind: str, path: str) -> Any:
    if ws.subject is None:
        raise SchemaError(f"{path}: no subject given")
    if ws.kind(ws.subject) != kind:
        raise SchemaError(f"{path}: subject must be a {kind}, found {ws.kind(ws.subject)}")
    return ws.subject_object()


def cmd_verify(path: str) -> RunReport:
    run = RunReport("verify", [path])
    ws = _load(path)
    if ws.subject is None:
        raise SchemaError(f"{path}: no subject given")
    kind = ws.kind(ws.subject)
    obj = ws.subject_object()
    rep = run.report
    rep.touch("schema")
    if kind == "lie_algebra":
        rep.merge(check_jacobi(obj))
    elif kind == "bilinear_form":
        rep.touch("form-nondegenerate")
        alg_name = ws.objects[ws.subject].get("algebra")
        if alg_name is not None:
            rep.merge(check_ad_invariance(ws.get(alg_name), obj))
    elif kind == "r_matrix":
        rep.merge(check_jacobi(obj.algebra))
        rep.merge(check_cybe(obj))
        rep.merge(check_factorizable(obj))
    elif kind == "manin_triple":
        rep.merge(verify_manin_triple(obj))
        if rep.passed:
            rep.merge(check_dressing_representation(obj))
    elif kind == "anti_iso_pair":
        rep.merge(check_pair(obj))
        if rep.passed:
            rep.merge(check_quasi_manin(quasi_manin_from_phi(obj, force=True)))
    return run


def _forward_steps(run: RunReport, t: Splitting, o) -> None:
    rep = run.report
    rep.merge(check_graph_homomorphism(t, o))
    rep.merge(check_semenov(t, o))
    tw: TwilledAlgebra | None = _guarded(run, "gtilde-construction", lambda: build_gtilde_B(t, o, force=True))
    if tw is None:
        return
    rep.merge(tw.report)
    split = _guarded(run, "ideal-construction", lambda: split_ideals(tw, o))
    if split is None:
        return
    eplus, eminus, irep = split
    rep.merge(irep)
    rep.merge(phi_B(tw, o)[1])
    rep.merge(nijenhuis_phi(tw, o))
    rep.merge(adjoint_intertwiner_check(tw, o))
    rep.merge(verify_cps(cps_gauged(o.G, o.B, t.form)))
    run.result["metric"] = o.gm
    run.result["twist"] = o.b
    run.result["eplus"] = [render(tw.algebra.basis, v) for v in eplus.basis.columns()]
    run.result["eminus"] = [render(tw.algebra.basis, v) for v in eminus.basis.columns()]
    run.result["workspace"] = triple_workspace(
        tw.algebra, tw.form.gram, tw.plus_side, tw.minus_side, (eplus, eminus)
    )


def cmd_forward(manin: str, r: str | None = None, metric: str | None = None, twist: str | None = None) -> RunReport:
    if (r is None) == (metric is None or twist is None) or (metric is None) != (twist is None):
        raise SchemaError("give either --r or both --metric and --twist")
    inputs = [manin] + [p for p in (r, metric, twist) if p is not None]
    run = RunReport("forward", inputs)
    ws = _load(manin)
    t: ManinTriple = _subject(ws, "manin_triple", manin)
    rep = run.report
    rep.merge(verify_manin_triple(t))
    if not rep.passed:
        return run
    if r is not None:
        rm = _subject(_load(r, ws), "r_matrix", r)
        if rm.algebra.dim != t.dminus:
            raise SchemaError(f"{r}: r-matrix dimension does not match the minus subalgebra")
        rep.touch("r-algebra-match")
        if rm.algebra.c != t.minus_algebra().c:
            rep.failures.append(Failure("r-algebra-match", (), rm.algebra.name, "minus subalgebra"))
            return run
        rep.merge(check_cybe(rm))
        rep.merge(check_factorizable(rm))
        if not rep.passed:
            return run
        o = _guarded(run, "r-operators", lambda: gb_from_r(t, rm))
        if o is None:
            return run
    else:
        maps = []
        for path in (metric, twist):
            m = _subject(_load(path, ws), "linear_map", path)
            if m.coeffs.shape != (t.dminus, t.dplus):
                raise SchemaError(f"{path}: map must send the plus subspace to the minus subspace")
            maps.append(m.coeffs)
        o = operator_on(t, maps[1], maps[0])
    rep.merge(check_o_operator_data(t, o))
    if not rep.passed:
        return run
    _forward_steps(run, t, o)
    return run


def cmd_reverse(pair: str, theta: str) -> RunReport:
    run = RunReport("reverse", [pair, theta])
    ws = _load(pair)
    p = _subject(ws, "anti_iso_pair", pair)
    th = _subject(_load(theta, ws), "linear_map", theta)
    if th.coeffs.shape != (p.dim, p.dim):
        raise SchemaError(f"{theta}: theta must be a square map on the plus algebra")
    rep = run.report
    rep.merge(check_pair(p))
    if not rep.passed:
        return run
    rep.merge(check_theta(p, th))
    res = _guarded(run, "reverse-construction", lambda: build_manin_from_orthogonal(p, th, force=True))
    if res is None:
        return run
    rep.merge(res.report)
    rep.merge(theta_maps_report(res))
    alg = res.twilled.algebra
    run.result["metric"] = res.operator.gm
    run.result["twist"] = res.operator.b
    run.result["twisted_bracket"] = res.twisted
    run.result["eplus"] = [render(alg.basis, v) for v in res.Eplus.basis.columns()]
    run.result["eminus"] = [render(alg.basis, v) for v in res.Eminus.basis.columns()]
    run.result["workspace"] = triple_workspace(
        alg, res.twilled.form.gram, res.twilled.plus_side, res.twilled.minus_side, (res.Eplus, res.Eminus)
    )
    return run


def cmd_example(name: str) -> RunReport:
    if name not in EXAMPLES:
        raise SchemaError(f"unknown example {name!r}; choose from {', '.join(EXAMPLES)}")
    run = RunReport("example", [name])
    rep, payload = EXAMPLES[name]()
    run.report = rep
    run.result = payload
    return run


def format_vector(v: dict[str, str]) -> str:
    if not v:
        return "0"
    parts = []
    for name, q in v.items():
        sign = "-" if q.startswith("-") else "+"
        mag = q.lstrip("-")
        term = name if mag == "1" else f"{mag} {name}"
        parts.append((sign, term))
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, term in parts[1:]:
        text += f" {sign} {term}"
    return text


def render_human(data: dict) -> str:
    lines = [f"{data['command']} {' '.join(data['inputs'])}: {data['status'].upper()}"]
    if "error" in data:
        lines.append(f"error: {data['error']}")
        return "\n".join(lines) + "\n"
    checks = data["checks"]
    failed = [c for c, s in checks.items() if s == "fail"]
    lines.append(f"checks: {len(checks) - len(failed)} passed, {len(failed)} failed")
    for f in data["failures"]:
        lines.append(f"FAIL {f['check']} at {f['witness']}: got {f['lhs']}, expected {f['rhs']}")
    if data["failure_count"] > len(data["failures"]):
        lines.append(f"... {data['failure_count'] - len(data['failures'])} more failures")
    for key, value in data["result"].items():
        if key == "workspace":
            key, value = "constructed algebra", value["objects"]["algebra"]
        if isinstance(value, dict) and value.get("type") == "lie_algebra":
            lines.append(f"{key}:")
            for b in value["brackets"]:
                lines.append(f"  [{b['x']}, {b['y']}] = {format_vector(b['value'])}")
        elif key in ("eplus", "eminus"):
            lines.append(f"{key}: span{{{', '.join(format_vector(v) for v in value)}}}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--human", action="store_true", default=argparse.SUPPRESS, help="human-readable output")
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS, help="print nothing")
    common.add_argument("--out", default=argparse.SUPPRESS, help="write the JSON report to this file")

    parser = argparse.ArgumentParser(
        prog="manin-forge",
        description="Exact Manin triple constructions from generalized metrics.",
        parents=[common],
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="check the subject of a workspace file")
    p.add_argument("file")

    p = sub.add_parser("forward", parents=[common], help="Manin triple -> twisted double with orthogonal ideals")
    p.add_argument("manin")
    p.add_argument("--r", dest="r_file")
    p.add_argument("--metric")
    p.add_argument("--twist")

    p = sub.add_parser("reverse", parents=[common], help="anti-isomorphic pair + theta -> Manin triple")
    p.add_argument("pair")
    p.add_argument("--theta", required=True)

    p = sub.add_parser("example", parents=[common], help="run a built-in worked example")
    p.add_argument("name", choices=sorted(EXAMPLES))
    return parser


def dispatch(args: argparse.Namespace) -> RunReport:
    if args.command == "verify":
        return cmd_verify(args.file)
    if args.command == "forward":
        return cmd_forward(args.manin, args.r_file, args.metric, args.twist)
    if args.command == "reverse":
        return cmd_reverse(args.pair, args.theta)
    return cmd_example(args.name)


def _inputs(args: argparse.Namespace) -> list[str]:
    keys = ("file", "manin", "r_file", "metric", "twist", "pair", "theta", "name")
    return [getattr(args, k) for k in keys if getattr(args, k, None) is not None]


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_SCHEMA if exc.code else EXIT_PASS
    try:
        run = dispatch(args)
    except (SchemaError, InvalidObject) as exc:
        if isinstance(exc, InvalidObject):
            run = RunReport(args.command, _inputs(args))
            run.report.touch(exc.check)
            run.report.failures.append(Failure(exc.check, (exc.name,), str(exc), "valid"))
        else:
            run = RunReport(args.command, _inputs(args), error=str(exc))
    data = run.to_json()
    text = render_human(data) if getattr(args, "human", False) else dumps(data)
    if getattr(args, "out", None):
        Path(args.out).write_text(dumps(data), encoding="utf-8")
    if not getattr(args, "quiet", False):
        sys.stdout.write(text)
    if run.error is not None and not getattr(args, "quiet", False):
        print(f"manin-forge: {run.error}", file=sys.stderr)
    return run.exit_code

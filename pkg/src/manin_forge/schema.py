"""JSON interchange format ``manin-forge/1``.

A workspace file holds named objects and an optional subject::

    {"format": "manin-forge/1",
     "subject": "sl2",
     "objects": {"sl2": {"type": "lie_algebra", ...}},
     "notes": ["free text"]}

Rationals are JSON integers or strings ``"p"`` / ``"p/q"``; floats are refused.
Canonical output always writes rationals as reduced strings and sorts keys.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .exact_linalg import Matrix, format_rational, rational
from .lie_core import BilinearForm, LieAlgebra, LinearMap, Subspace
from .manin import ManinTriple
from .reverse import AntiIsoPair
from .rmatrix import RMatrix

FORMAT = "manin-forge/1"
TYPES = ("lie_algebra", "bilinear_form", "subspace", "linear_map", "r_matrix", "manin_triple", "anti_iso_pair")


class SchemaError(ValueError):
    """Input does not follow the interchange format."""


class InvalidObject(ValueError):
    """Well-formed input describing a mathematically invalid object."""

    def __init__(self, check: str, name: str, message: str):
        super().__init__(f"{name}: {message}")
        self.check = check
        self.name = name


def parse_rational(x: Any, where: str) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise SchemaError(f"{where}: expected an integer or a 'p/q' string, got {x!r}")
    try:
        return rational(x)
    except (ValueError, TypeError) as exc:
        raise SchemaError(f"{where}: {exc}") from None


def parse_matrix(x: Any, where: str, shape: tuple[int, int] | None = None) -> Matrix:
    if not isinstance(x, list) or not all(isinstance(row, list) for row in x):
        raise SchemaError(f"{where}: expected a list of rows")
    rows = [[parse_rational(v, f"{where}[{i}][{j}]") for j, v in enumerate(row)] for i, row in enumerate(x)]
    widths = {len(r) for r in rows}
    if len(widths) > 1:
        raise SchemaError(f"{where}: ragged matrix")
    cols = widths.pop() if widths else 0
    if shape is not None and (len(rows), cols) != shape:
        raise SchemaError(f"{where}: shape {(len(rows), cols)}, expected {shape}")
    return Matrix(rows, cols)


def fmt_matrix(m: Matrix) -> list[list[str]]:
    return [[format_rational(v) for v in row] for row in m.tolist()]


def fmt_vector(v) -> list[str]:
    return [format_rational(x) for x in v]


def _require(obj: dict, key: str, where: str) -> Any:
    if key not in obj:
        raise SchemaError(f"{where}: missing field {key!r}")
    return obj[key]


def _name_list(x: Any, where: str) -> list[str]:
    if not isinstance(x, list) or not all(isinstance(s, str) and s for s in x):
        raise SchemaError(f"{where}: expected a list of names")
    if len(set(x)) != len(x):
        raise SchemaError(f"{where}: duplicate names")
    return list(x)


def serialize_algebra(a: LieAlgebra) -> dict:
    brackets = []
    for i in range(a.dim):
        for j in range(i + 1, a.dim):
            v = a.c[i][j]
            if any(v):
                value = {a.basis[k]: format_rational(q) for k, q in enumerate(v) if q}
                brackets.append({"x": a.basis[i], "y": a.basis[j], "value": value})
    return {"type": "lie_algebra", "dim": a.dim, "basis": list(a.basis), "brackets": brackets}


@dataclass
class Workspace:
    """Named objects with lazy, cached resolution into library types.

    ``base`` supplies objects referenced but not defined here, so that a map
    file may point at subspaces declared in a triple file.
    """

    objects: dict[str, dict]
    subject: str | None = None
    notes: list[str] = field(default_factory=list)
    base: "Workspace | None" = None
    _cache: dict = field(default_factory=dict, repr=False)
    _active: set = field(default_factory=set, repr=False)

    def owner(self, name: str) -> "Workspace":
        if name in self.objects:
            return self
        if self.base is not None:
            return self.base.owner(name)
        raise SchemaError(f"unresolved reference {name!r}")

    def kind(self, name: str) -> str:
        ws = self.owner(name)
        return ws.objects[name]["type"]

    def get(self, name: str, expected: str | tuple[str, ...] | None = None) -> Any:
        ws = self.owner(name)
        if expected is not None:
            kinds = (expected,) if isinstance(expected, str) else expected
            if ws.objects[name]["type"] not in kinds:
                raise SchemaError(f"{name!r} is a {ws.objects[name]['type']}, expected {' or '.join(kinds)}")
        return ws._resolve(name)

    def subject_object(self) -> Any:
        if self.subject is None:
            raise SchemaError("workspace has no subject")
        return self.get(self.subject)

    def resolve_all(self) -> None:
        for name in sorted(self.objects):
            self.get(name)

    def _resolve(self, name: str) -> Any:
        if name in self._cache:
            return self._cache[name]
        if name in self._active:
            raise SchemaError(f"cyclic reference through {name!r}")
        self._active.add(name)
        try:
            obj = self.objects[name]
            value = getattr(self, "_make_" + obj["type"])(name, obj)
        finally:
            self._active.discard(name)
        self._cache[name] = value
        return value

    def _space(self, ref: Any, where: str) -> Subspace:
        """A subspace object, or the whole space of an algebra."""
        if not isinstance(ref, str):
            raise SchemaError(f"{where}: expected an object name")
        kind = self.kind(ref)
        if kind == "lie_algebra":
            return Subspace.whole(self.get(ref).dim)
        if kind == "subspace":
            return self.get(ref)
        raise SchemaError(f"{where}: {ref!r} is neither a subspace nor an algebra")

    def _make_lie_algebra(self, name: str, obj: dict) -> LieAlgebra:
        basis = _name_list(_require(obj, "basis", name), f"{name}.basis")
        dim = _require(obj, "dim", name)
        if not isinstance(dim, int) or isinstance(dim, bool) or dim != len(basis):
            raise SchemaError(f"{name}: dim does not match the basis length")
        raw = obj.get("brackets", [])
        if not isinstance(raw, list):
            raise SchemaError(f"{name}.brackets: expected a list")
        table: dict[tuple[str, str], dict[str, Fraction]] = {}
        seen = set()
        for k, entry in enumerate(raw):
            where = f"{name}.brackets[{k}]"
            if not isinstance(entry, dict):
                raise SchemaError(f"{where}: expected an object")
            x, y = _require(entry, "x", where), _require(entry, "y", where)
            value = _require(entry, "value", where)
            for s in (x, y):
                if s not in basis:
                    raise SchemaError(f"{where}: unknown basis name {s!r}")
            if x == y:
                raise SchemaError(f"{where}: bracket of {x!r} with itself")
            if frozenset((x, y)) in seen:
                raise SchemaError(f"{where}: pair {x!r}, {y!r} listed twice")
            seen.add(frozenset((x, y)))
            if not isinstance(value, dict):
                raise SchemaError(f"{where}.value: expected an object")
            for z in value:
                if z not in basis:
                    raise SchemaError(f"{where}.value: unknown basis name {z!r}")
            table[(x, y)] = {z: parse_rational(q, f"{where}.value.{z}") for z, q in value.items()}
        return LieAlgebra.from_brackets(basis, table, name)

    def _make_bilinear_form(self, name: str, obj: dict) -> BilinearForm:
        gram = parse_matrix(_require(obj, "gram", name), f"{name}.gram")
        if "algebra" in obj:
            n = self.get(obj["algebra"], "lie_algebra").dim
            if gram.shape != (n, n):
                raise SchemaError(f"{name}.gram: shape does not match algebra {obj['algebra']!r}")
        if not gram.is_square() or gram != gram.T:
            raise InvalidObject("form-symmetric", name, "Gram matrix is not symmetric")
        try:
            return BilinearForm(gram)
        except ValueError:
            raise InvalidObject("form-nondegenerate", name, "form is degenerate") from None

    def _make_subspace(self, name: str, obj: dict) -> Subspace:
        amb = self.get(_require(obj, "ambient", name), "lie_algebra")
        raw = _require(obj, "vectors", name)
        if not isinstance(raw, list):
            raise SchemaError(f"{name}.vectors: expected a list")
        vectors = []
        for k, v in enumerate(raw):
            where = f"{name}.vectors[{k}]"
            if isinstance(v, dict):
                for z in v:
                    if z not in amb.basis:
                        raise SchemaError(f"{where}: unknown basis name {z!r}")
                vectors.append([parse_rational(v.get(b, 0), where) for b in amb.basis])
            elif isinstance(v, list):
                if len(v) != amb.dim:
                    raise SchemaError(f"{where}: length {len(v)}, expected {amb.dim}")
                vectors.append([parse_rational(q, where) for q in v])
            else:
                raise SchemaError(f"{where}: expected a list or a name-keyed object")
        basis = Matrix.from_columns(vectors, amb.dim) if vectors else Matrix.zeros(amb.dim, 0)
        if basis.rank() != basis.cols:
            raise InvalidObject("subspace-independent", name, "spanning vectors are linearly dependent")
        return Subspace(basis)

    def _make_linear_map(self, name: str, obj: dict) -> LinearMap:
        src = self._space(_require(obj, "source", name), f"{name}.source")
        tgt = self._space(_require(obj, "target", name), f"{name}.target")
        m = parse_matrix(_require(obj, "matrix", name), f"{name}.matrix", (tgt.dim, src.dim))
        return LinearMap(src, tgt, m)

    def _make_r_matrix(self, name: str, obj: dict) -> RMatrix:
        a = self.get(_require(obj, "algebra", name), "lie_algebra")
        m = parse_matrix(_require(obj, "coeffs", name), f"{name}.coeffs", (a.dim, a.dim))
        return RMatrix(a, m)

    def _make_manin_triple(self, name: str, obj: dict) -> ManinTriple:
        g = self.get(_require(obj, "algebra", name), "lie_algebra")
        form = self.get(_require(obj, "form", name), "bilinear_form")
        gp = self.get(_require(obj, "gplus", name), "subspace")
        gm = self.get(_require(obj, "gminus", name), "subspace")
        if form.dim != g.dim or gp.ambient_dim != g.dim or gm.ambient_dim != g.dim:
            raise SchemaError(f"{name}: dimensions of algebra, form and subspaces differ")
        if gp.dim + gm.dim != g.dim:
            raise SchemaError(f"{name}: subspace dimensions do not add up")
        return ManinTriple(g, form, gp, gm)

    def _make_anti_iso_pair(self, name: str, obj: dict) -> AntiIsoPair:
        ep = self.get(_require(obj, "eplus", name), "lie_algebra")
        em = self.get(_require(obj, "eminus", name), "lie_algebra")
        phi = self.get(_require(obj, "phi", name), "linear_map")
        fp = self.get(_require(obj, "formplus", name), "bilinear_form")
        fm = self.get(_require(obj, "formminus", name), "bilinear_form")
        n = ep.dim
        if em.dim != n or fp.dim != n or fm.dim != n or phi.coeffs.shape != (n, n):
            raise SchemaError(f"{name}: dimensions of the pair differ")
        return AntiIsoPair(ep, em, phi, fp, fm)


def parse_workspace(data: Any, base: Workspace | None = None) -> Workspace:
    if not isinstance(data, dict):
        raise SchemaError("workspace must be a JSON object")
    if data.get("format") != FORMAT:
        raise SchemaError(f"format must be {FORMAT!r}")
    objects = _require(data, "objects", "workspace")
    if not isinstance(objects, dict):
        raise SchemaError("objects must be a JSON object")
    for name, obj in objects.items():
        if not isinstance(obj, dict) or obj.get("type") not in TYPES:
            raise SchemaError(f"{name}: unknown or missing type")
    subject = data.get("subject")
    if subject is not None and subject not in objects:
        raise SchemaError(f"subject {subject!r} is not defined")
    notes = data.get("notes", [])
    if not isinstance(notes, list) or not all(isinstance(s, str) for s in notes):
        raise SchemaError("notes must be a list of strings")
    ws = Workspace(dict(objects), subject, list(notes), base)
    return ws


def load_workspace(path: str | Path, base: Workspace | None = None) -> Workspace:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    return parse_workspace(data, base)


def canonical_object(ws: Workspace, name: str) -> dict:
    """Re-serialize one resolved object in canonical form."""
    obj = ws.objects[name]
    value = ws.get(name)
    kind = obj["type"]
    if kind == "lie_algebra":
        return serialize_algebra(value)
    if kind == "bilinear_form":
        out = {"type": kind, "gram": fmt_matrix(value.gram)}
        if "algebra" in obj:
            out["algebra"] = obj["algebra"]
        return out
    if kind == "subspace":
        return {"type": kind, "ambient": obj["ambient"], "vectors": [fmt_vector(c) for c in value.basis.columns()]}
    if kind == "linear_map":
        return {"type": kind, "source": obj["source"], "target": obj["target"], "matrix": fmt_matrix(value.coeffs)}
    if kind == "r_matrix":
        return {"type": kind, "algebra": obj["algebra"], "coeffs": fmt_matrix(value.coeffs)}
    keys = {"manin_triple": ("algebra", "form", "gplus", "gminus"),
            "anti_iso_pair": ("eplus", "eminus", "phi", "formplus", "formminus")}[kind]
    return {"type": kind, **{k: obj[k] for k in keys}}


def canonical_workspace(ws: Workspace) -> dict:
    out: dict[str, Any] = {
        "format": FORMAT,
        "objects": {name: canonical_object(ws, name) for name in sorted(ws.objects)},
    }
    if ws.subject is not None:
        out["subject"] = ws.subject
    if ws.notes:
        out["notes"] = list(ws.notes)
    return out


def dumps(data: Any) -> str:
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from manin_forge.exact_linalg import Matrix
from manin_forge.lie_core import check_jacobi
from manin_forge.schema import (
    FORMAT,
    InvalidObject,
    SchemaError,
    canonical_workspace,
    dumps,
    load_workspace,
    parse_matrix,
    parse_rational,
    parse_workspace,
    serialize_algebra,
)

from families import BORROW, HEISENBERG, SL2

DATA_FILES = ["sl2_manin.json", "sl2_r.json", "sl2_pair.json"]


def algebra_ws(**extra):
    objects = {"a": {"type": "lie_algebra", "dim": 2, "basis": ["x", "y"], "brackets": [{"x": "x", "y": "y", "value": {"y": 1}}]}}
    objects.update(extra)
    return {"format": FORMAT, "subject": "a", "objects": objects}


def resolve(data):
    ws = parse_workspace(data)
    ws.resolve_all()
    return ws


class TestRoundTrip:
    @pytest.mark.parametrize("name", DATA_FILES)
    def test_canonical_form_is_idempotent(self, data_dir, name):
        ws = load_workspace(data_dir / name)
        ws.resolve_all()
        once = canonical_workspace(ws)
        twice = canonical_workspace(resolve(json.loads(dumps(once))))
        assert dumps(once) == dumps(twice)

    @pytest.mark.parametrize("a", [SL2, BORROW, HEISENBERG])
    def test_algebra_round_trip(self, a):
        data = {"format": FORMAT, "subject": "a", "objects": {"a": serialize_algebra(a)}}
        back = resolve(json.loads(dumps(data))).subject_object()
        assert back.c == a.c and back.basis == a.basis
        assert check_jacobi(back).passed

    @given(st.fractions())
    def test_rationals_round_trip_as_strings(self, q):
        m = parse_matrix([[str(q)]], "m")
        assert m[0, 0] == q

    def test_name_keyed_subspace_vectors(self):
        ws = resolve(algebra_ws(s={"type": "subspace", "ambient": "a", "vectors": [{"y": "1/2"}]}))
        assert ws.get("s").basis == Matrix([[0], ["1/2"]])


class TestSchemaErrors:
    @pytest.mark.parametrize("bad", ["1/0", 0.5, True, None, "abc"])
    def test_bad_rationals(self, bad):
        with pytest.raises(SchemaError):
            parse_rational(bad, "here")

    def test_ragged_and_shape(self):
        with pytest.raises(SchemaError, match="ragged"):
            parse_matrix([[1, 2], [3]], "m")
        with pytest.raises(SchemaError, match="shape"):
            parse_matrix([[1, 2]], "m", (2, 2))

    @pytest.mark.parametrize(
        "mutate",
        [
            lambda d: d.update(format="other/1"),
            lambda d: d.update(subject="missing"),
            lambda d: d.update(notes="text"),
            lambda d: d["objects"]["a"].update(type="tensor"),
            lambda d: d["objects"]["a"].update(dim=3),
            lambda d: d["objects"]["a"].update(basis=["x", "x"]),
            lambda d: d["objects"]["a"]["brackets"].append({"x": "y", "y": "x", "value": {}}),
            lambda d: d["objects"]["a"]["brackets"].append({"x": "x", "y": "x", "value": {}}),
            lambda d: d["objects"]["a"]["brackets"].append({"x": "x", "y": "z", "value": {}}),
            lambda d: d["objects"]["a"]["brackets"][0]["value"].update(z=1),
            lambda d: d["objects"]["a"]["brackets"][0]["value"].update(y=0.5),
            lambda d: d["objects"].update(f={"type": "bilinear_form", "gram": [[1]], "algebra": "a"}),
            lambda d: d["objects"].update(f={"type": "bilinear_form", "gram": [[1, 0], [0, 1]], "algebra": "b"}),
            lambda d: d["objects"].update(m={"type": "linear_map", "source": "a", "target": "a", "matrix": [[1]]}),
            lambda d: d["objects"].update(s={"type": "subspace", "ambient": "a", "vectors": [[1]]}),
            lambda d: d["objects"].update(
                p={"type": "linear_map", "source": "q", "target": "a", "matrix": [[1, 0]]},
                q={"type": "linear_map", "source": "p", "target": "a", "matrix": [[1, 0]]},
            ),
        ],
    )
    def test_malformed_workspaces(self, mutate):
        data = algebra_ws()
        mutate(data)
        with pytest.raises(SchemaError):
            resolve(data)

    def test_unreadable_files(self, tmp_path):
        with pytest.raises(SchemaError, match="cannot read"):
            load_workspace(tmp_path / "absent.json")
        bad = tmp_path / "bad.json"
        bad.write_text("{", encoding="utf-8")
        with pytest.raises(SchemaError, match="invalid JSON"):
            load_workspace(bad)


class TestInvalidObjects:
    @pytest.mark.parametrize(
        "obj,check",
        [
            ({"type": "bilinear_form", "gram": [[0, 1], [2, 0]]}, "form-symmetric"),
            ({"type": "bilinear_form", "gram": [[1, 0], [0, 0]]}, "form-nondegenerate"),
            ({"type": "subspace", "ambient": "a", "vectors": [[1, 2], [2, 4]]}, "subspace-independent"),
        ],
    )
    def test_tagged(self, obj, check):
        with pytest.raises(InvalidObject) as exc:
            resolve(algebra_ws(o=obj))
        assert exc.value.check == check
        assert exc.value.name == "o"

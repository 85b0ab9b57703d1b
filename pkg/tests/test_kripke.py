import json

import pytest

from refsim.errors import CapExceeded, ModelError
from refsim.kripke import (
    KripkeModel, PointedModel, decode_model, enumerate_models, enumerate_pointed, extend_agents,
    mfi_model, mfi_point, model_count, read_model, read_model_with_point, read_pointed, to_json_obj,
    write_model,
)

from conftest import FIXTURES


def test_mfi_sizes():
    m = mfi_model(["p"], ["a", "b"])
    assert len(m.states) == 2
    assert all(len(m.relations[a]) == 4 for a in "ab")
    m = mfi_model([], ["a"])
    assert m.states == ("{}",) and m.relations["a"] == {("{}", "{}")}
    m = mfi_model(["p", "q"], ["a"])
    assert len(m.states) == 4 and len(m.relations["a"]) == 16


def test_mfi_relations_are_equivalences():
    m = mfi_model(["p", "q"], ["a", "b"])
    for a in m.agents:
        r = m.relations[a]
        assert all((s, s) in r for s in m.states)
        assert all((t, s) in r for s, t in r)
        assert all((s, u) in r for s, t in r for t2, u in r if t == t2)


def test_mfi_point_and_cap():
    assert mfi_point(["p", "q"], ["q", "r"]) == "{q}"
    with pytest.raises(CapExceeded):
        mfi_model([f"p{i}" for i in range(11)], ["a"])
    with pytest.raises(ValueError):
        mfi_model(["p"], [])


def test_validate_errors():
    KripkeModel.build(["s", "t"], {"s": ["p"]}, {"a": [("s", "t")]}, atoms=["p"])
    with pytest.raises(ModelError, match="dangling endpoint z"):
        KripkeModel.build(["s"], {}, {"a": [("s", "z")]})
    with pytest.raises(ModelError):
        KripkeModel.build(["s"], {"s": ["q"]}, {"a": []}, atoms=["p"])


def test_enumeration_counts():
    assert sum(1 for _ in enumerate_models(1, ["p"], ["a"])) == 4
    assert sum(1 for _ in enumerate_models(1, [], ["a"])) == 2
    assert sum(1 for _ in enumerate_models(2, [], ["a"])) == 18
    assert model_count(2, 1, 2) == 2 ** 10


def test_enumeration_is_duplicate_free():
    seen = {write_model(m) for m in enumerate_models(2, ["p"], ["a"])}
    assert len(seen) == model_count(1, 1, 1) + model_count(2, 1, 1)


def test_enumeration_cap():
    with pytest.raises(CapExceeded):
        list(enumerate_models(3, ["p", "q"], ["a", "b"], cap=1000))


def test_pointed_enumeration():
    assert sum(1 for _ in enumerate_pointed(2, ["p"], ["a"])) == 4 + 2 * 64


def test_decode_bits():
    # bit s*K+j is atom j at state s; edges follow
    m = decode_model(0b10_01, 1, ["p", "q"], ["a"])
    assert m.valuation["s0"] == {"p"}
    m = decode_model(0b1_00, 1, ["p", "q"], ["a"])
    assert m.relations["a"] == {("s0", "s0")}


def test_json_roundtrip_fixture():
    text = (FIXTURES / "epistemic_M.json").read_text()
    pm = read_pointed(text)
    assert pm.point == "s" and len(pm.model.states) == 5
    again = read_pointed(write_model(pm))
    assert write_model(again) == write_model(pm) and again.point == "s"
    assert set(again.model.states) == set(pm.model.states)


def test_mfi_json_byte_identical():
    m = mfi_model(["p"], ["a", "b"])
    text = write_model(m)
    assert write_model(read_model(text)) == text


def test_json_order_insensitive():
    obj = to_json_obj(mfi_model(["p"], ["a"]))
    obj["states"].reverse()
    obj["rel"]["a"].reverse()
    m = read_model(json.dumps(obj))
    assert write_model(m) == write_model(mfi_model(["p"], ["a"]))


def test_json_without_point():
    obj = to_json_obj(mfi_model(["p"], ["a"]))
    m, point = read_model_with_point(json.dumps(obj))
    assert point is None and len(m.states) == 2
    with pytest.raises(ModelError):
        read_pointed(json.dumps(obj))


@pytest.mark.parametrize("text", ["[]", "{", '{"atoms": []}', '{"atoms":[],"agents":["a"],"states":[{"id":"s"}],"rel":{"a":[["s","t"]]}}'])
def test_json_errors(text):
    with pytest.raises(ModelError):
        read_model(text)


def test_extend_agents():
    m = mfi_model(["p"], ["a"])
    m2 = extend_agents(m, ["b"])
    assert m2.agents == {"a", "b"} and not m2.relations["b"]
    assert PointedModel(m2, "{p}").valuation == {"p"}

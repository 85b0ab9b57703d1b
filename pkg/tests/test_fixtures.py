"""Judgments about the chain and epistemic example models."""
import pytest

from refsim.kripke import mfi_model
from refsim.relations import related
from refsim.semantics import check, check_base
from refsim.syntax import parse

from conftest import load


@pytest.fixture(scope="module")
def chain():
    return {name: load(f"chain_{name}") for name in ("M", "M1", "M2", "M3")}


def _submodel(small, big):
    m, m2 = small.model, big.model
    return (
        set(m.states) <= set(m2.states)
        and all(m.valuation[s] == m2.valuation[s] for s in m.states)
        and all(m.relations[a] <= m2.relations[a] for a in m.agents)
    )


def test_m1_is_submodel_and_refinement_of_m(chain):
    assert _submodel(chain["M1"], chain["M"])
    assert related("ref", chain["M"], chain["M1"])


def test_m2_refines_m_without_being_submodel(chain):
    assert related("ref", chain["M"], chain["M2"])
    assert not _submodel(chain["M2"], chain["M"])


def test_m2_is_submodel_of_m3(chain):
    assert _submodel(chain["M2"], chain["M3"])


def test_m3_is_bisimilar_copy_of_m(chain):
    assert related("bisim", chain["M"], chain["M3"])
    assert related("bisim", chain["M3"], chain["M"])


def test_m_simulates_m2(chain):
    assert related("sim", chain["M2"], chain["M"])


def test_chain_negatives(chain):
    assert not related("bisim", chain["M"], chain["M1"])
    assert not related("bisim", chain["M"], chain["M2"])
    assert not related("sim", chain["M"], chain["M1"])


def test_epistemic_knowledge_and_uncertainty():
    m = load("epistemic_M")
    assert check_base(m, parse("[a]p & [b]p"))
    assert check_base(m, parse("<a>~[b]p & <b>~[a]p"))


def test_ignorance_model_simulates_m():
    m = load("epistemic_M")
    o = load("mfi_p_ab")
    assert o.model == mfi_model(["p"], ["a", "b"])
    assert related("sim", m, o)
    assert related("ref", o, m)
    assert not related("bisim", m, o)


def test_m2_is_bisimilar_copy_of_ignorance_model():
    assert related("bisim", load("epistemic_M2"), load("mfi_p_ab"))


def test_m_refines_m2():
    assert related("ref", load("epistemic_M2"), load("epistemic_M"))


def test_simulation_loses_knowledge():
    m = load("epistemic_M")
    assert check(m, parse("<sim><a>~p"))
    assert not check(m, parse("[orig][a]p"))

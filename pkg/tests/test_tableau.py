import numpy as np
import pytest
from hypothesis import given, settings

from refsim import batch
from refsim.batch import Space
from refsim.errors import CapExceeded
from refsim.semantics import check_base
from refsim.syntax import atoms, parse
from refsim.tableau import countermodel, equivalent, is_satisfiable, is_valid

from conftest import box_formulas


@pytest.mark.parametrize("text, expected", [
    ("p & ~p", False),
    ("[a]false", True),
    ("<a>p & [a]~p", False),
    ("<a>p & <a>~p & [a](p | ~p)", True),
    ("<a><b>p & [a][b]~p", False),
    ("<a>p & [b]~p", True),
])
def test_satisfiability(text, expected):
    assert is_satisfiable(parse(text)) == expected


@pytest.mark.parametrize("text, expected", [
    ("[sim]p -> p", True),
    ("<ref>[ref]p -> [ref]<ref>p", True),
    ("p -> [a]p", False),
    ("[a](p -> q) -> [a]p -> [a]q", True),
    ("[orig]<a>~p", True),
])
def test_validity(text, expected):
    assert is_valid(parse(text)) == expected


def test_equivalence():
    assert equivalent(parse("<ref>(p | q)"), parse("<ref>p | <ref>q"))
    assert equivalent(parse("[orig]~p"), parse("~[orig]p"))
    assert not equivalent(parse("<sim>p"), parse("q"))


def test_countermodel():
    cm = countermodel(parse("p -> [a]p"))
    assert cm is not None and not check_base(cm, parse("p -> [a]p"))
    assert countermodel(parse("p | ~p")) is None


def test_node_cap():
    f = parse(" & ".join(f"(<a>p{i} | <a>~p{i})" for i in range(12)))
    with pytest.raises(CapExceeded):
        is_satisfiable(f, node_cap=10)


def test_rejects_quantifiers():
    with pytest.raises(ValueError):
        is_satisfiable(parse("<ref>p"))


@settings(max_examples=60)
@given(box_formulas(2))
def test_witness_satisfies(f):
    sat, w = is_satisfiable(f, witness=True)
    if sat:
        assert check_base(w, f)
    else:
        assert w is None


@settings(max_examples=40)
@given(box_formulas(2, agents=("a",)))
def test_agrees_with_exhaustive_search(f):
    q = sorted(atoms(f) | {"p", "q"})
    found = any(
        np.any(batch.truth_words(f, Space.of(n, q, ("a",))))
        for n in range(1, 5)
    )
    if found:
        assert is_satisfiable(f)

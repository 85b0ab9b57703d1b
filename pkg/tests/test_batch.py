import random

import numpy as np
import pytest
from hypothesis import given, settings

from refsim import batch
from refsim.batch import Space, compile_formula, find_countermodel, relation_words, truth_words
from refsim.errors import CapExceeded
from refsim.kripke import mfi_model
from refsim.relations import largest_relation_masks
from refsim.semantics import check_base, truth_mask
from refsim.syntax import parse

from conftest import box_formulas

BACKENDS = ["numpy"] + (["cython"] if batch.BACKEND == "cython" else [])
needs_cython = pytest.mark.skipif(batch.BACKEND != "cython", reason="compiled kernel not built")


def bit(words, s, index):
    return int(words[s, index >> 6]) >> (index & 63) & 1


@pytest.mark.parametrize("name", BACKENDS)
@pytest.mark.parametrize("n", [1, 2])
def test_truth_words_match_reference(name, n):
    impl = batch.backend(name)
    sp = Space.of(n, ("p", "q"), ("a", "b"))
    formulas = [parse(t) for t in ["p", "<a>q", "[b](p | <a>~q)", "~<a><b>p & [a]q", "true", "false"]]
    rng = random.Random(n)
    indices = rng.sample(range(sp.count), min(sp.count, 300))
    for f in formulas:
        words = truth_words(f, sp, impl)
        for index in indices:
            m = sp.model(index)
            mask = truth_mask(m, f)
            for s in range(n):
                assert bit(words, s, index) == (mask >> s & 1)


@needs_cython
@settings(max_examples=40)
@given(box_formulas(2))
def test_backends_agree_on_truth(f):
    sp = Space.of(2, ("p", "q"), ("a", "b"))
    a = truth_words(f, sp, batch.backend("cython"))
    b = truth_words(f, sp, batch.backend("numpy"))
    assert np.array_equal(a, b)


@needs_cython
@pytest.mark.parametrize("kind", ["sim", "ref", "bisim"])
def test_backends_agree_on_relations(kind):
    sp = Space.of(2, ("p",), ("a", "b"))
    rng = random.Random(7)
    for _ in range(10):
        left = sp.model(rng.randrange(sp.count))
        a = relation_words(left, kind, sp, batch.backend("cython"))
        b = relation_words(left, kind, sp, batch.backend("numpy"))
        assert np.array_equal(a, b)


@pytest.mark.parametrize("name", BACKENDS)
@pytest.mark.parametrize("kind", ["sim", "ref", "bisim"])
def test_relation_words_match_reference(name, kind):
    impl = batch.backend(name)
    forth, back = {"sim": (True, False), "ref": (False, True), "bisim": (True, True)}[kind]
    sp = Space.of(2, ("p",), ("a",))
    lefts = [sp.model(i) for i in range(0, sp.count, 5)] + [mfi_model(["p"], ["a"])]
    for left in lefts:
        z = relation_words(left, kind, sp, impl)
        for index in range(sp.count):
            ref = largest_relation_masks(left, sp.model(index), forth, back)
            for x in range(len(left.states)):
                for t in range(sp.n):
                    assert bit(z[x], t, index) == (ref[x] >> t & 1)


def test_relation_words_agent_mismatch():
    with pytest.raises(ValueError):
        relation_words(mfi_model(["p"], ["a"]), "sim", Space.of(1, ("p",), ("a", "b")))


def test_left_atoms_outside_space_match_nothing():
    z = relation_words(mfi_model(["p", "r"], ["a"]), "sim", Space.of(1, ("p",), ("a",)))
    left = mfi_model(["p", "r"], ["a"])
    for x, s in enumerate(left.states):
        if "r" in left.valuation[s]:
            assert not z[x].any()


@pytest.mark.parametrize("name", BACKENDS)
def test_find_countermodel(name):
    impl = batch.backend(name)
    sp = Space.of(2, ("p", "q"), ("a",))
    cm = find_countermodel(parse("p -> q"), sp, impl)
    assert cm is not None and not check_base(cm, parse("p -> q"))
    assert find_countermodel(parse("[a](p -> q) -> [a]p -> [a]q"), sp, impl) is None


def test_tail_bits_cleared():
    sp = Space.of(1, (), ("a",))
    assert sp.count == 2
    words = truth_words(parse("true"), sp)
    assert int(words[0, 0]) == 0b11


def test_compile_shares_subterms():
    prog = compile_formula(parse("<a>p & <a>p | <a>p"), ("p",), ("a",))
    assert len(prog) <= 4


def test_compile_unknown_names():
    sp = Space.of(1, ("p",), ("a",))
    assert not truth_words(parse("r"), sp).any()
    assert truth_words(parse("[z]false"), sp).all()
    with pytest.raises(ValueError):
        compile_formula(parse("<ref>p"), ("p",), ("a",))
    with pytest.raises(ValueError):
        compile_formula(parse("[orig]p"), ("p",), ("a",))


def test_enumeration_cap():
    with pytest.raises(CapExceeded):
        truth_words(parse("p"), Space.of(3, ("p", "q"), ("a", "b")), cap=1000)


def test_popcount():
    assert batch.popcount(np.array([0b1011, 1 << 63], dtype=np.uint64)) == 4

import pytest
from hypothesis import given

from refsim import batch
from refsim.batch import Space
from refsim.normal_forms import CoverClause, to_modal_dnf
from refsim.syntax import (
    BOT, TOP, And, Atom, Box, Dia, Not, Or, Origin, ParseError, RefBox, RefDia, SimBox, SimDia,
    cover, in_L0, in_Lbox, in_Lbox_orig, in_Lbox_ref, in_Lbox_sim, in_negative_fragment,
    modal_depth, parse, quantifier_free, subformulas, to_nnf, to_text,
)

from conftest import box_formulas, full_formulas

p, q = Atom("p"), Atom("q")


def test_parse_grammar_cases():
    assert parse("p & [a]q") == And((p, Box("a", q)))
    assert parse("<ref>(p | q)") == RefDia(Or((p, q)))
    assert parse("~[orig]<a>p") == Not(Origin(Dia("a", p)))


def test_precedence():
    assert parse("p | q & p") == Or((p, And((q, p))))
    assert parse("p -> q -> p") == parse("p -> (q -> p)")
    assert parse("p <-> q -> p") == parse("p <-> (q -> p)")
    assert parse("~p & q") == And((Not(p), q))
    assert parse("[a]p & q") == And((Box("a", p), q))
    assert parse("[sim]<sim>true") == SimBox(SimDia(TOP))
    assert parse("<b>false") == Dia("b", BOT)


@pytest.mark.parametrize("text", ["", "p &", "(p", "[ref", "[a p", "p q", "<sim>", "[orig]&p", "P"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse(text)


def test_parse_error_position():
    with pytest.raises(ParseError) as err:
        parse("p &\n  & q")
    assert err.value.line == 2


def test_keywords_not_agents():
    with pytest.raises(ParseError):
        parse("[true]p")


def test_modal_depth():
    assert modal_depth(p) == 0
    assert modal_depth(Box("a", p)) == 1
    assert modal_depth(RefDia(Box("a", Box("b", p)))) == 2
    assert modal_depth(Origin(Dia("a", SimBox(Dia("b", p))))) == 2


def test_nnf_cases():
    assert to_nnf(Not(And((p, q)))) == Or((Not(p), Not(q)))
    assert to_nnf(Not(Box("a", p))) == Dia("a", Not(p))
    assert to_nnf(Not(RefBox(p))) == RefDia(Not(p))
    assert to_nnf(Not(Origin(p))) == Origin(Not(p))


def test_fragments():
    f = parse("<a>(p & ~q) | <b>~p")
    assert in_negative_fragment(f)
    assert not in_negative_fragment(parse("[a]p"))
    assert not in_negative_fragment(parse("~<a>p"))
    assert in_L0(parse("p -> q"))
    assert not in_L0(parse("<a>p"))
    assert in_Lbox(parse("[a]<b>p")) and not in_Lbox(parse("<ref>p"))
    assert in_Lbox_ref(parse("<ref>[a]p")) and not in_Lbox_ref(parse("<sim>p"))
    assert in_Lbox_sim(parse("[sim]<a>p")) and not in_Lbox_sim(parse("[ref]p"))
    assert in_Lbox_orig(parse("[orig]<a>p")) and not in_Lbox_orig(parse("[orig]<ref>p"))
    assert quantifier_free(parse("[orig][a]p")) and not quantifier_free(parse("[a]<sim>p"))


@given(full_formulas(2))
def test_print_parse_roundtrip(f):
    assert parse(to_text(f)) == f


@given(full_formulas(2))
def test_nnf_keeps_depth(f):
    assert modal_depth(to_nnf(f)) == modal_depth(f)


@given(full_formulas(2))
def test_negative_fragment_shape(f):
    if in_negative_fragment(f):
        for g in subformulas(f):
            assert not isinstance(g, (Box, RefBox, RefDia, SimBox, SimDia, Origin))
            if isinstance(g, Not):
                assert isinstance(g.arg, Atom)


def _same_truth(f, g, max_states=2):
    for n in range(1, max_states + 1):
        sp = Space.of(n, ("p", "q"), ("a", "b"))
        assert (batch.truth_words(f, sp) == batch.truth_words(g, sp)).all(), (to_text(f), to_text(g))


@given(box_formulas(2))
def test_nnf_preserves_truth(f):
    _same_truth(f, to_nnf(f))


@given(box_formulas(2))
def test_modal_dnf_preserves_truth(f):
    _same_truth(f, to_modal_dnf(f).to_formula())


def test_modal_dnf_cases():
    chi, theta = p, q
    dnf = to_modal_dnf(And((Dia("a", chi), Box("a", theta))))
    assert len(dnf.clauses) == 1
    assert set(dnf.clauses[0].cover_map["a"]) == {And((chi, theta)), theta}

    dnf = to_modal_dnf(Box("a", theta))
    assert len(dnf.clauses) == 2
    assert {c.covers for c in dnf.clauses} == {(("a", (theta,)),), ()}
    assert {c.empty_cover_agents for c in dnf.clauses} == {frozenset(), frozenset({"a"})}

    dnf = to_modal_dnf(p)
    assert dnf.clauses == (CoverClause(p),)


def test_modal_dnf_drops_contradictory_literals():
    assert to_modal_dnf(parse("p & ~p & <a>q")).clauses == ()


def test_cover_clause_invariants():
    with pytest.raises(ValueError):
        CoverClause(p, (("a", (q,)),), frozenset({"a"}))
    with pytest.raises(ValueError):
        CoverClause(p, (("a", ()),))


def test_cover_operator():
    f = cover("a", [p, q])
    _same_truth(f, parse("<a>p & <a>q & [a](p | q)"))
    _same_truth(cover("a", []), Box("a", BOT))

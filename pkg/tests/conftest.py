from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from refsim.kripke import PointedModel, decode_model, model_count, read_pointed
from refsim.syntax import (
    BOT, TOP, And, Atom, Box, Dia, Not, Or, Origin, RefBox, RefDia, SimBox, SimDia,
)

FIXTURES = Path(__file__).parent / "fixtures"

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def load(name: str) -> PointedModel:
    return read_pointed((FIXTURES / f"{name}.json").read_text())


@pytest.fixture
def fixture_model():
    return load


ATOMS = ("p", "q")
AGENTS = ("a", "b")


def _leaf():
    return st.one_of(st.just(TOP), st.just(BOT), st.sampled_from(ATOMS).map(Atom))


def box_formulas(depth: int = 2, atoms=ATOMS, agents=AGENTS):
    """Quantifier-free formulas of modal depth at most ``depth``."""
    leaf = st.one_of(st.just(TOP), st.just(BOT), st.sampled_from(atoms).map(Atom))
    props = st.recursive(
        leaf,
        lambda c: st.one_of(
            c.map(Not),
            st.tuples(c, c).map(And),
            st.tuples(c, c).map(Or),
        ),
        max_leaves=4,
    )
    levels = [props]
    for _ in range(depth):
        lower = levels[-1]
        modal = st.one_of(
            st.tuples(st.sampled_from(agents), lower).map(lambda x: Box(*x)),
            st.tuples(st.sampled_from(agents), lower).map(lambda x: Dia(*x)),
        )
        part = st.one_of(lower, modal)
        levels.append(st.one_of(
            part,
            part.map(Not),
            st.tuples(part, part).map(And),
            st.tuples(part, part).map(Or),
        ))
    return levels[-1]


def full_formulas(depth: int = 1):
    """Formulas that may contain quantifiers and origins."""
    base = box_formulas(depth)
    ops = st.sampled_from([RefDia, RefBox, SimDia, SimBox, Origin])
    wrapped = st.tuples(ops, base).map(lambda x: x[0](x[1]))
    return st.one_of(
        base,
        wrapped,
        st.tuples(wrapped, base).map(And),
        st.tuples(wrapped, base).map(Or),
        st.tuples(ops, wrapped).map(lambda x: x[0](x[1])),
    )


def pointed_models(max_states: int = 2, atoms=ATOMS, agents=AGENTS):
    """Random pointed models drawn uniformly from the enumeration order."""

    @st.composite
    def pointed(draw):
        n = draw(st.integers(1, max_states))
        index = draw(st.integers(0, model_count(n, len(atoms), len(agents)) - 1))
        m = decode_model(index, n, atoms, agents)
        return PointedModel(m, draw(st.sampled_from(m.states)))

    return pointed()


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])

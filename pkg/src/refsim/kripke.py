"""Finite Kripke models, the mutual factual ignorance model, JSON I/O and
exhaustive small-model enumeration."""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from typing import Iterable, Iterator, Mapping

from .errors import CapExceeded, ModelError
from .syntax import NAME_RE

DEFAULT_MFI_ATOM_CAP = 10
DEFAULT_ENUM_CAP = 20_000_000


@dataclass(frozen=True, eq=False)
class KripkeModel:
    """``states`` keeps its order; everything else is set-valued.

    Construct through :meth:`build`, which freezes and validates the parts.
    """

    states: tuple[str, ...]
    atoms: frozenset[str]
    agents: frozenset[str]
    valuation: Mapping[str, frozenset[str]]
    relations: Mapping[str, frozenset[tuple[str, str]]]

    @classmethod
    def build(
        cls,
        states: Iterable[str],
        valuation: Mapping[str, Iterable[str]],
        relations: Mapping[str, Iterable[tuple[str, str]]],
        atoms: Iterable[str] | None = None,
        agents: Iterable[str] | None = None,
    ) -> KripkeModel:
        states = tuple(states)
        val = {s: frozenset(valuation.get(s, ())) for s in states}
        extra = set(valuation) - set(states)
        for s in extra:
            val[s] = frozenset(valuation[s])
        if atoms is None:
            atoms = frozenset().union(*val.values()) if val else frozenset()
        if agents is None:
            agents = relations.keys()
        rel = {a: frozenset(tuple(p) for p in pairs) for a, pairs in relations.items()}
        m = cls(states, frozenset(atoms), frozenset(agents), val, rel)
        validate(m)
        return m

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, KripkeModel):
            return NotImplemented
        return (
            set(self.states) == set(other.states) and self.atoms == other.atoms
            and self.agents == other.agents and dict(self.valuation) == dict(other.valuation)
            and dict(self.relations) == dict(other.relations)
        )

    __hash__ = None

    # -- indexed views used by the evaluators --------------------------------

    @cached_property
    def index(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.states)}

    @cached_property
    def full_mask(self) -> int:
        return (1 << len(self.states)) - 1

    @cached_property
    def atom_masks(self) -> dict[str, int]:
        masks = {p: 0 for p in self.atoms}
        for i, s in enumerate(self.states):
            for p in self.valuation[s]:
                masks[p] = masks.get(p, 0) | (1 << i)
        return masks

    @cached_property
    def succ(self) -> dict[str, tuple[tuple[int, ...], ...]]:
        """``succ[a][i]`` lists successor indices of state ``i``."""
        out = {}
        for a in self.agents:
            lists: list[list[int]] = [[] for _ in self.states]
            for s, t in sorted(self.relations.get(a, ()), key=lambda p: (self.index[p[0]], self.index[p[1]])):
                lists[self.index[s]].append(self.index[t])
            out[a] = tuple(tuple(x) for x in lists)
        return out

    @cached_property
    def succ_masks(self) -> dict[str, tuple[int, ...]]:
        return {
            a: tuple(sum(1 << j for j in js) for js in lists)
            for a, lists in self.succ.items()
        }

    def successors(self, agent: str, state: str) -> list[str]:
        return [self.states[j] for j in self.succ.get(agent, ((),) * len(self.states))[self.index[state]]]

    def with_point(self, point: str) -> PointedModel:
        return PointedModel(self, point)

    def __repr__(self) -> str:
        return f"KripkeModel(states={len(self.states)}, atoms={sorted(self.atoms)}, agents={sorted(self.agents)})"


@dataclass(frozen=True, eq=False)
class PointedModel:
    model: KripkeModel
    point: str

    def __post_init__(self):
        if self.point not in self.model.index:
            raise ModelError([f"point {self.point} is not a state"])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PointedModel):
            return NotImplemented
        return self.point == other.point and self.model == other.model

    __hash__ = None

    @property
    def valuation(self) -> frozenset[str]:
        return self.model.valuation[self.point]


def validate(m: KripkeModel) -> None:
    """Raise :class:`ModelError` listing every invariant violation."""
    problems: list[str] = []
    if not m.states:
        problems.append("model has no states")
    if len(set(m.states)) != len(m.states):
        problems.append("duplicate state ids")
    if not m.agents:
        problems.append("agent set is empty")
    for a in sorted(m.agents):
        if not NAME_RE.fullmatch(a):
            problems.append(f"invalid agent name {a}")
    for p in sorted(m.atoms):
        if not NAME_RE.fullmatch(p):
            problems.append(f"invalid atom name {p}")
    known = set(m.states)
    for s in sorted(set(m.valuation) - known):
        problems.append(f"valuation for unknown state {s}")
    for s in m.states:
        if s not in m.valuation:
            problems.append(f"no valuation for state {s}")
            continue
        for p in sorted(m.valuation[s] - m.atoms):
            problems.append(f"unknown atom {p} in valuation of {s}")
    for a in sorted(m.agents - set(m.relations)):
        problems.append(f"missing relation for agent {a}")
    for a in sorted(set(m.relations) - m.agents):
        problems.append(f"relation for undeclared agent {a}")
    for a, pairs in sorted(m.relations.items()):
        for pair in sorted(pairs):
            if len(pair) != 2:
                problems.append(f"malformed pair {pair!r} for agent {a}")
                continue
            for end in pair:
                if end not in known:
                    problems.append(f"dangling endpoint {end} in relation {a}")
    if problems:
        raise ModelError(problems)


# ---------------------------------------------------------------------------
# mutual factual ignorance


def subset_id(xs: Iterable[str]) -> str:
    return "{" + ",".join(sorted(xs)) + "}"


def mfi_model(atoms: Iterable[str], agents: Iterable[str], cap: int = DEFAULT_MFI_ATOM_CAP) -> KripkeModel:
    """All valuations over ``atoms`` as states, every relation total."""
    return _mfi(frozenset(atoms), frozenset(agents), cap)


@lru_cache(maxsize=256)
def _mfi(atoms: frozenset[str], agents: frozenset[str], cap: int) -> KripkeModel:
    if not agents:
        raise ValueError("agent set must be nonempty")
    if len(atoms) > cap:
        raise CapExceeded(f"{len(atoms)} atoms exceeds the mutual ignorance cap of {cap}")
    order = sorted(atoms)
    subsets = [frozenset(p for j, p in enumerate(order) if mask >> j & 1) for mask in range(1 << len(order))]
    states = [subset_id(x) for x in subsets]
    total = frozenset(product(states, states))
    return KripkeModel.build(
        states, dict(zip(states, subsets)), {a: total for a in agents}, atoms=atoms, agents=agents,
    )


def mfi_point(atoms: Iterable[str], valuation: Iterable[str]) -> str:
    """State id of the mutual ignorance state matching ``valuation`` on ``atoms``."""
    atoms = set(atoms)
    return subset_id(p for p in valuation if p in atoms)


# ---------------------------------------------------------------------------
# enumeration


def model_count(n_states: int, n_atoms: int, n_agents: int) -> int:
    return 2 ** (n_atoms * n_states + n_agents * n_states * n_states)


def decode_model(index: int, n_states: int, atoms: Iterable[str], agents: Iterable[str]) -> KripkeModel:
    """Model number ``index`` in the canonical enumeration order.

    Bit ``s*K + j`` is atom ``j`` at state ``s``; bit ``K*n + i*n*n + s*n + t``
    is the edge ``(s, t)`` of agent ``i``.  Atoms and agents are sorted.
    """
    atoms = sorted(atoms)
    agents = sorted(agents)
    k, n = len(atoms), n_states
    states = [f"s{i}" for i in range(n)]
    val = {
        states[s]: [atoms[j] for j in range(k) if index >> (s * k + j) & 1] for s in range(n)
    }
    rel = {}
    base = k * n
    for i, a in enumerate(agents):
        rel[a] = [
            (states[s], states[t])
            for s in range(n) for t in range(n)
            if index >> (base + i * n * n + s * n + t) & 1
        ]
    return KripkeModel.build(states, val, rel, atoms=atoms, agents=agents)


def enumerate_models(
    max_states: int, atoms: Iterable[str], agents: Iterable[str], cap: int = DEFAULT_ENUM_CAP,
) -> Iterator[KripkeModel]:
    """Every model with 1..max_states states named ``s0..``; no isomorphism
    reduction."""
    if max_states < 1:
        raise ValueError("max_states must be at least 1")
    atoms, agents = sorted(atoms), sorted(agents)
    total = sum(model_count(n, len(atoms), len(agents)) for n in range(1, max_states + 1))
    if total > cap:
        raise CapExceeded(f"{total} models exceeds the enumeration cap of {cap}")
    for n in range(1, max_states + 1):
        for index in range(model_count(n, len(atoms), len(agents))):
            yield decode_model(index, n, atoms, agents)


def enumerate_pointed(
    max_states: int, atoms: Iterable[str], agents: Iterable[str], cap: int = DEFAULT_ENUM_CAP,
) -> Iterator[PointedModel]:
    for m in enumerate_models(max_states, atoms, agents, cap):
        for s in m.states:
            yield PointedModel(m, s)


# ---------------------------------------------------------------------------
# JSON


def to_json_obj(m: KripkeModel, point: str | None = None) -> dict:
    obj = {
        "atoms": sorted(m.atoms),
        "agents": sorted(m.agents),
        "states": [{"id": s, "val": sorted(m.valuation[s])} for s in sorted(m.states)],
        "rel": {a: sorted([list(p) for p in m.relations[a]]) for a in sorted(m.agents)},
    }
    if point is not None:
        obj["point"] = point
    return obj


def write_model(m: KripkeModel | PointedModel, point: str | None = None) -> str:
    if isinstance(m, PointedModel):
        m, point = m.model, m.point
    return json.dumps(to_json_obj(m, point), indent=2) + "\n"


def from_json_obj(obj: dict) -> tuple[KripkeModel, str | None]:
    problems = []
    for key in ("atoms", "agents", "states", "rel"):
        if key not in obj:
            problems.append(f"missing field {key!r}")
    if problems:
        raise ModelError(problems)
    try:
        states = [st["id"] for st in obj["states"]]
        val = {st["id"]: st.get("val", []) for st in obj["states"]}
        rel = {a: [tuple(p) for p in pairs] for a, pairs in obj["rel"].items()}
    except (TypeError, KeyError, AttributeError) as exc:
        raise ModelError([f"malformed model structure: {exc}"]) from exc
    m = KripkeModel.build(states, val, rel, atoms=obj["atoms"], agents=obj["agents"])
    point = obj.get("point")
    if point is not None and point not in m.index:
        raise ModelError([f"point {point} is not a state"])
    return m, point


def read_model(text: str) -> KripkeModel:
    return read_model_with_point(text)[0]


def read_model_with_point(text: str) -> tuple[KripkeModel, str | None]:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError([f"malformed JSON: {exc}"]) from exc
    if not isinstance(obj, dict):
        raise ModelError(["model JSON must be an object"])
    return from_json_obj(obj)


def read_pointed(text: str) -> PointedModel:
    m, point = read_model_with_point(text)
    if point is None:
        raise ModelError(["model has no 'point' field"])
    return PointedModel(m, point)


def extend_agents(m: KripkeModel, agents: Iterable[str]) -> KripkeModel:
    """Same model over a larger agent set; new agents get empty relations."""
    agents = frozenset(agents) | m.agents
    if agents == m.agents:
        return m
    rel = dict(m.relations)
    for a in agents - m.agents:
        rel[a] = frozenset()
    return KripkeModel(m.states, m.atoms, agents, m.valuation, rel)

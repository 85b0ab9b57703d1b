"""Labelled tableau for multi-modal K.

Labels are sets of NNF formulas.  Conjunctions are expanded eagerly,
disjunctions branch, and once a label is saturated every ``<a>chi`` opens a
child labelled ``{chi} + {xi | [a]xi in label}``.  K needs no loop check:
each child has strictly smaller modal depth.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import count

from .errors import CapExceeded
from .kripke import KripkeModel, PointedModel
from .syntax import (
    And, Atom, Bot, Box, Dia, Formula, Not, Or, Top, agents as formula_agents, atoms as formula_atoms,
    iff, in_Lbox, neg, to_nnf, to_text,
)

DEFAULT_NODE_CAP = 200_000

Label = frozenset


@dataclass(frozen=True)
class _Node:
    """A satisfied saturated label: its literals plus one child per diamond."""

    atoms: frozenset[str]
    children: tuple[tuple[str, "_Node"], ...]


class _Prover:
    def __init__(self, node_cap: int):
        self.node_cap = node_cap
        self.steps = 0
        self.memo: dict[Label, _Node | None] = {}
        self._keys: dict[Formula, str] = {}

    def key(self, f: Formula) -> str:
        k = self._keys.get(f)
        if k is None:
            k = self._keys[f] = to_text(f)
        return k

    def sat(self, label: Label) -> _Node | None:
        if label in self.memo:
            return self.memo[label]
        self.steps += 1
        if self.steps > self.node_cap:
            raise CapExceeded(f"tableau exceeded {self.node_cap} nodes")
        result = self._expand(label)
        self.memo[label] = result
        return result

    def _expand(self, label: Label) -> _Node | None:
        if any(isinstance(f, Bot) for f in label):
            return None
        ands = [f for f in label if isinstance(f, And)]
        if ands:
            rest = set(label) - set(ands)
            for f in ands:
                rest.update(f.args)
            return self.sat(frozenset(g for g in rest if not isinstance(g, Top)))
        ors = [f for f in label if isinstance(f, Or)]
        if ors:
            pick = min(ors, key=lambda f: (len(f.args), self.key(f)))
            rest = label - {pick}
            for g in sorted(pick.args, key=self.key):
                if isinstance(g, Not) and g.arg in rest:
                    continue
                if isinstance(g, Atom) and Not(g) in rest:
                    continue
                node = self.sat(rest | {g})
                if node is not None:
                    return node
            return None
        pos = {f.name for f in label if isinstance(f, Atom)}
        if any(isinstance(f, Not) and f.arg.name in pos for f in label):
            return None
        boxes: dict[str, list[Formula]] = {}
        for f in label:
            if isinstance(f, Box):
                boxes.setdefault(f.agent, []).append(f.arg)
        children = []
        for d in sorted((f for f in label if isinstance(f, Dia)), key=self.key):
            child = self.sat(frozenset([d.arg, *boxes.get(d.agent, [])]) - {Top()})
            if child is None:
                return None
            children.append((d.agent, child))
        return _Node(frozenset(pos), tuple(children))


def _witness(root: _Node, f: Formula) -> PointedModel:
    ids: dict[int, str] = {}
    fresh = count()
    states: list[str] = []
    val: dict[str, frozenset[str]] = {}
    ags = sorted(formula_agents(f)) or ["a"]
    rel: dict[str, set[tuple[str, str]]] = {a: set() for a in ags}
    stack = [root]
    while stack:
        node = stack.pop()
        if id(node) in ids:
            continue
        sid = f"w{next(fresh)}"
        ids[id(node)] = sid
        states.append(sid)
        val[sid] = node.atoms
        stack.extend(child for _, child in reversed(node.children))
    seen = set()
    stack = [root]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        for a, child in node.children:
            rel[a].add((ids[id(node)], ids[id(child)]))
            stack.append(child)
    m = KripkeModel.build(states, val, rel, atoms=formula_atoms(f), agents=ags)
    return PointedModel(m, ids[id(root)])


def is_satisfiable(f: Formula, node_cap: int = DEFAULT_NODE_CAP, witness: bool = False):
    """Whether the quantifier-free ``f`` has a model.

    With ``witness=True`` returns ``(verdict, pointed model or None)``; the
    model is a finite DAG of depth at most ``modal_depth(f)``.
    """
    if not in_Lbox(f):
        raise ValueError("is_satisfiable expects a quantifier- and origin-free formula")
    g = to_nnf(f)
    node = _Prover(node_cap).sat(frozenset([g]) - {Top()})
    if not witness:
        return node is not None
    return node is not None, (_witness(node, f) if node is not None else None)


def is_valid(f: Formula, cfg=None, node_cap: int = DEFAULT_NODE_CAP) -> bool:
    """Validity over all Kripke models, for the whole language."""
    from .reduce import reduce_full

    return not is_satisfiable(neg(reduce_full(f, cfg)), node_cap)


def countermodel(f: Formula, cfg=None, node_cap: int = DEFAULT_NODE_CAP) -> PointedModel | None:
    """A pointed model falsifying ``f``, or ``None`` if ``f`` is valid."""
    from .reduce import reduce_full

    reduced = reduce_full(f, cfg)
    ok, w = is_satisfiable(neg(reduced), node_cap, witness=True)
    return w if ok else None


def equivalent(f: Formula, g: Formula, cfg=None, node_cap: int = DEFAULT_NODE_CAP) -> bool:
    return is_valid(iff(f, g), cfg, node_cap)

"""Modal disjunctive normal form and cover-clause conversion.

A quantifier-free NNF formula is rewritten as a disjunction of clauses
``pi & /\\_a nabla_a Phi_a`` where ``pi`` is a literal conjunction.  This is
the shape the quantifier elimination procedures consume.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable

from .errors import CapExceeded
from .syntax import (
    BOT, TOP, And, Atom, Bot, Box, Dia, Formula, Not, Or, Top, conj, cover, disj,
    in_Lbox, is_literal, to_nnf,
)

DEFAULT_MAX_CLAUSES = 4096

Clause = frozenset  # of literals and Box/Dia formulas


@dataclass(frozen=True)
class CoverClause:
    prop_part: Formula
    covers: tuple[tuple[str, tuple[Formula, ...]], ...] = ()
    empty_cover_agents: frozenset[str] = frozenset()

    def __post_init__(self):
        named = {a for a, _ in self.covers}
        if named & self.empty_cover_agents:
            raise ValueError("agent has both a cover and an empty cover")
        if any(not members for _, members in self.covers):
            raise ValueError("cover sets must be nonempty")

    @property
    def cover_map(self) -> dict[str, tuple[Formula, ...]]:
        return dict(self.covers)

    def to_formula(self) -> Formula:
        parts = [self.prop_part]
        parts += [cover(a, members) for a, members in self.covers]
        parts += [Box(a, BOT) for a in sorted(self.empty_cover_agents)]
        return conj(parts)


@dataclass(frozen=True)
class DNFForm:
    clauses: tuple[CoverClause, ...]

    def to_formula(self) -> Formula:
        return disj(c.to_formula() for c in self.clauses)


def _complementary(items: Iterable[Formula]) -> bool:
    items = set(items)
    return any(isinstance(f, Not) and f.arg in items for f in items)


def clause_dnf(f: Formula, max_clauses: int = DEFAULT_MAX_CLAUSES) -> list[Clause]:
    """Propositional DNF of an NNF formula, treating modal subformulas as atoms.

    Clauses with a complementary literal pair are dropped, as are clauses
    subsumed by a smaller one.  The empty list means false.
    """
    clauses = _dnf(f, max_clauses)
    return _absorb(clauses)


def _dnf(f: Formula, cap: int) -> list[Clause]:
    if isinstance(f, Top):
        return [frozenset()]
    if isinstance(f, Bot):
        return []
    if isinstance(f, Or):
        out: dict[Clause, None] = {}
        for g in f.args:
            for c in _dnf(g, cap):
                out[c] = None
        if len(out) > cap:
            raise CapExceeded(f"DNF exceeds {cap} clauses")
        return list(out)
    if isinstance(f, And):
        acc: list[Clause] = [frozenset()]
        for g in f.args:
            part = _dnf(g, cap)
            nxt: dict[Clause, None] = {}
            for c1, c2 in product(acc, part):
                c = c1 | c2
                if not _complementary(c):
                    nxt[c] = None
            if len(nxt) > cap:
                raise CapExceeded(f"DNF exceeds {cap} clauses")
            acc = _absorb(list(nxt))
            if not acc:
                return []
        return acc
    if is_literal(f) or isinstance(f, (Box, Dia)):
        return [frozenset([f])]
    raise ValueError(f"clause_dnf expects NNF without quantifiers, got {f}")


def _absorb(clauses: list[Clause]) -> list[Clause]:
    ordered = sorted(clauses, key=len)
    kept: list[Clause] = []
    for c in ordered:
        if not any(k <= c for k in kept):
            kept.append(c)
    # restore first-seen order for deterministic output
    keep = set(kept)
    return [c for c in clauses if c in keep]


def split_clause(clause: Clause) -> tuple[Formula, dict[str, list[Formula]], dict[str, list[Formula]]]:
    """Literal conjunction plus per-agent diamond and box bodies."""
    lits = []
    dias: dict[str, list[Formula]] = {}
    boxes: dict[str, list[Formula]] = {}
    for item in sorted(clause, key=_item_key):
        if isinstance(item, Dia):
            dias.setdefault(item.agent, []).append(item.arg)
        elif isinstance(item, Box):
            boxes.setdefault(item.agent, []).append(item.arg)
        else:
            lits.append(item)
    return conj(lits), dias, boxes


def _item_key(f: Formula) -> tuple:
    if isinstance(f, Atom):
        return (0, f.name, 0)
    if isinstance(f, Not):
        return (0, f.arg.name, 1)
    return (1, f.agent, str(f))


def to_modal_dnf(f: Formula, max_clauses: int = DEFAULT_MAX_CLAUSES) -> DNFForm:
    """Cover-form DNF of a quantifier-free formula.

    For each agent with diamonds ``<a>chi_i`` and boxes ``[a]theta_j`` the
    clause uses ``Phi_a = {chi_i & Theta} + {Theta}`` with ``Theta`` the box
    conjunction.  An agent with boxes but no diamonds has no cover of that
    shape, so the clause splits: ``[a]Theta == nabla_a{Theta} | [a]false``.
    Agents without modal conjuncts get no entry.
    """
    if not in_Lbox(f):
        raise ValueError("to_modal_dnf expects a quantifier-free formula")
    f = to_nnf(f)
    out: list[CoverClause] = []
    for clause in clause_dnf(f, max_clauses):
        prop, dias, boxes = split_clause(clause)
        fixed: list[tuple[str, tuple[Formula, ...]]] = []
        optional: list[tuple[str, Formula]] = []
        for a in sorted(set(dias) | set(boxes)):
            theta = conj(boxes.get(a, []))
            if a in dias:
                members = [conj(chi, theta) for chi in dias[a]] + [theta]
                fixed.append((a, tuple(dict.fromkeys(members))))
            else:
                optional.append((a, theta))
        for choice in product((True, False), repeat=len(optional)):
            covers = list(fixed)
            empty = set()
            for (a, theta), keep in zip(optional, choice):
                if keep:
                    covers.append((a, (theta,)))
                else:
                    empty.add(a)
            covers.sort()
            out.append(CoverClause(prop, tuple(covers), frozenset(empty)))
        if len(out) > max_clauses:
            raise CapExceeded(f"cover form exceeds {max_clauses} clauses")
    return DNFForm(tuple(out))

"""Largest bisimulation, simulation and refinement between finite models.

All three are greatest fixpoints: start from every valuation-compatible pair
and discard pairs violating **forth** (simulation), **back** (refinement) or
both (bisimulation) until nothing changes.

Orientation follows the pointed notation: a pair ``(s, t)`` of a simulation
means ``t`` simulates ``s``; of a refinement, ``t`` refines ``s``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from .kripke import KripkeModel, PointedModel

Kind = Literal["sim", "ref", "bisim"]
KINDS = ("sim", "ref", "bisim")


@dataclass(frozen=True, eq=False)
class BinRelation:
    left: KripkeModel
    right: KripkeModel
    pairs: frozenset[tuple[str, str]]

    def __contains__(self, pair: tuple[str, str]) -> bool:
        return pair in self.pairs

    def __len__(self) -> int:
        return len(self.pairs)

    def image(self, s: str) -> set[str]:
        return {t for (x, t) in self.pairs if x == s}


def _check_agents(m: KripkeModel, m2: KripkeModel) -> None:
    if m.agents != m2.agents:
        raise ValueError(
            f"agent sets differ: {sorted(m.agents)} vs {sorted(m2.agents)}"
        )


def largest_relation_masks(m: KripkeModel, m2: KripkeModel, forth: bool, back: bool) -> list[int]:
    """``Z[i]`` is the bitmask of right states related to left state ``i``."""
    _check_agents(m, m2)
    right_by_val: dict[frozenset[str], int] = {}
    for j, t in enumerate(m2.states):
        v = m2.valuation[t]
        right_by_val[v] = right_by_val.get(v, 0) | (1 << j)
    z = [right_by_val.get(m.valuation[s], 0) for s in m.states]
    agents = sorted(m.agents)
    lsucc = [m.succ[a] for a in agents]
    rsucc = [m2.succ_masks[a] for a in agents]
    changed = True
    while changed:
        changed = False
        for i in range(len(z)):
            zi = z[i]
            if not zi:
                continue
            keep = zi
            for ls, rs in zip(lsucc, rsucc):
                succs = ls[i]
                union = 0
                for i2 in succs:
                    union |= z[i2]
                j_bits = keep
                while j_bits:
                    low = j_bits & -j_bits
                    j = low.bit_length() - 1
                    j_bits ^= low
                    ok = True
                    if forth:
                        rj = rs[j]
                        for i2 in succs:
                            if not z[i2] & rj:
                                ok = False
                                break
                    if ok and back and rs[j] & ~union:
                        ok = False
                    if not ok:
                        keep &= ~low
            if keep != zi:
                z[i] = keep
                changed = True
    return z


def _as_relation(m: KripkeModel, m2: KripkeModel, z: list[int]) -> BinRelation:
    pairs = frozenset(
        (s, m2.states[j]) for i, s in enumerate(m.states) for j in range(len(m2.states)) if z[i] >> j & 1
    )
    return BinRelation(m, m2, pairs)


def largest_bisimulation(m: KripkeModel, m2: KripkeModel) -> BinRelation:
    return _as_relation(m, m2, largest_relation_masks(m, m2, forth=True, back=True))


def largest_simulation(m: KripkeModel, m2: KripkeModel) -> BinRelation:
    return _as_relation(m, m2, largest_relation_masks(m, m2, forth=True, back=False))


def largest_refinement(m: KripkeModel, m2: KripkeModel) -> BinRelation:
    return _as_relation(m, m2, largest_relation_masks(m, m2, forth=False, back=True))


_FLAGS = {"sim": (True, False), "ref": (False, True), "bisim": (True, True)}


def largest(kind: Kind, m: KripkeModel, m2: KripkeModel) -> BinRelation:
    if kind not in _FLAGS:
        raise ValueError(f"unknown relation kind {kind!r}")
    forth, back = _FLAGS[kind]
    return _as_relation(m, m2, largest_relation_masks(m, m2, forth, back))


def related(kind: Kind, pm: PointedModel, pm2: PointedModel) -> bool:
    """Whether ``pm2`` is a ``kind``-successor of ``pm`` (e.g. refines it)."""
    if kind not in _FLAGS:
        raise ValueError(f"unknown relation kind {kind!r}")
    forth, back = _FLAGS[kind]
    z = largest_relation_masks(pm.model, pm2.model, forth, back)
    return bool(z[pm.model.index[pm.point]] >> pm2.model.index[pm2.point] & 1)

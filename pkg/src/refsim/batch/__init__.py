"""Exhaustive evaluation over every model of a given size, 64 models per word.

The compiled ``_kernel`` extension is used when it can be imported; otherwise
(or with ``REFSIM_BACKEND=numpy``) the numpy implementation in ``_fallback``
takes over.  Both enumerate models exactly as :func:`refsim.kripke.decode_model`.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from types import ModuleType
from typing import Iterable, Literal

import numpy as np

from ..errors import CapExceeded
from ..kripke import DEFAULT_ENUM_CAP, KripkeModel, PointedModel, decode_model
from ..syntax import And, Atom, Bot, Box, Dia, Formula, Not, Or, Top, to_text
from . import _fallback

OP_TOP, OP_BOT, OP_ATOM, OP_NOT, OP_AND, OP_OR, OP_BOX, OP_DIA = range(8)
CHUNK_WORDS = 1 << 15


def _load() -> tuple[ModuleType, str]:
    if os.environ.get("REFSIM_BACKEND", "").lower() in ("numpy", "python", "fallback"):
        return _fallback, "numpy"
    try:
        from . import _kernel
    except ImportError:
        return _fallback, "numpy"
    return _kernel, "cython"


_impl, BACKEND = _load()


def backend(name: str | None = None) -> ModuleType:
    """The kernel module for ``name`` ('cython' or 'numpy'); default: active one."""
    if name is None:
        return _impl
    if name == "numpy":
        return _fallback
    if name == "cython":
        from . import _kernel

        return _kernel
    raise ValueError(f"unknown backend {name!r}")


@dataclass(frozen=True)
class Space:
    """All models with ``n`` states over sorted ``atoms`` and ``agents``."""

    n: int
    atoms: tuple[str, ...]
    agents: tuple[str, ...]

    @classmethod
    def of(cls, n: int, atoms: Iterable[str], agents: Iterable[str]) -> Space:
        return cls(n, tuple(sorted(set(atoms))), tuple(sorted(set(agents))))

    @property
    def K(self) -> int:
        return len(self.atoms)

    @property
    def A(self) -> int:
        return len(self.agents)

    @property
    def nbits(self) -> int:
        return self.K * self.n + self.A * self.n * self.n

    @property
    def count(self) -> int:
        return 1 << self.nbits

    @property
    def words(self) -> int:
        return max(1, self.count >> 6)

    @property
    def tail(self) -> int:
        """Valid-model mask for the last word."""
        return (1 << self.count) - 1 if self.count < 64 else (1 << 64) - 1

    def model(self, index: int) -> KripkeModel:
        return decode_model(index, self.n, self.atoms, self.agents)

    def pointed(self, index: int, state: int) -> PointedModel:
        return PointedModel(self.model(index), f"s{state}")


def compile_formula(f: Formula, atoms: Iterable[str], agents: Iterable[str]) -> np.ndarray:
    """Instruction list ``(op, x, y)`` with shared subterms; the last
    instruction computes ``f``."""
    atom_ix = {p: i for i, p in enumerate(sorted(set(atoms)))}
    agent_ix = {a: i for i, a in enumerate(sorted(set(agents)))}
    prog: list[tuple[int, int, int]] = []
    seen: dict[object, int] = {}

    def emit(ins: tuple[int, int, int]) -> int:
        hit = seen.get(ins)
        if hit is None:
            hit = seen[ins] = len(prog)
            prog.append(ins)
        return hit

    memo: dict[Formula, int] = {}

    def go(g: Formula) -> int:
        hit = memo.get(g)
        if hit is not None:
            return hit
        if isinstance(g, Top):
            r = emit((OP_TOP, 0, 0))
        elif isinstance(g, Bot):
            r = emit((OP_BOT, 0, 0))
        elif isinstance(g, Atom):
            if g.name not in atom_ix:
                r = emit((OP_BOT, 0, 0))
            else:
                r = emit((OP_ATOM, atom_ix[g.name], 0))
        elif isinstance(g, Not):
            r = emit((OP_NOT, go(g.arg), 0))
        elif isinstance(g, (And, Or)):
            op = OP_AND if isinstance(g, And) else OP_OR
            r = go(g.args[0])
            for h in g.args[1:]:
                r = emit((op, r, go(h)))
        elif isinstance(g, (Box, Dia)):
            body = go(g.arg)
            if g.agent not in agent_ix:
                # no edges for an agent outside the space
                r = emit((OP_TOP, 0, 0) if isinstance(g, Box) else (OP_BOT, 0, 0))
            else:
                r = emit((OP_BOX if isinstance(g, Box) else OP_DIA, agent_ix[g.agent], body))
        else:
            raise ValueError(f"batch evaluation needs a quantifier- and origin-free formula: {to_text(g)}")
        memo[g] = r
        return r

    last = go(f)
    if last != len(prog) - 1:
        prog.append((OP_OR, last, last))
    return np.ascontiguousarray(np.array(prog, dtype=np.int32).reshape(-1, 3))


def _guard(space: Space, cap: int) -> None:
    if space.count > cap:
        raise CapExceeded(f"{space.count} models exceeds the enumeration cap of {cap}")


def truth_words(f: Formula, space: Space, impl: ModuleType | None = None, cap: int = DEFAULT_ENUM_CAP) -> np.ndarray:
    """``out[s, w]``: bit ``i`` is set iff ``f`` holds at state ``s`` of model
    ``64*w + i``.  Bits past the last model are cleared."""
    _guard(space, cap)
    impl = impl or _impl
    prog = compile_formula(f, space.atoms, space.agents)
    parts = [
        impl.eval_program(prog, space.n, space.K, space.A, w0, min(space.words, w0 + CHUNK_WORDS))
        for w0 in range(0, space.words, CHUNK_WORDS)
    ]
    out = np.concatenate(parts, axis=1)
    if space.count < 64:
        out &= np.uint64(space.tail)
    return out


def find_countermodel(f: Formula, space: Space, impl: ModuleType | None = None, cap: int = DEFAULT_ENUM_CAP) -> PointedModel | None:
    """First pointed model of ``space`` falsifying ``f``, or ``None``."""
    _guard(space, cap)
    impl = impl or _impl
    prog = compile_formula(f, space.atoms, space.agents)
    for w0 in range(0, space.words, CHUNK_WORDS):
        w1 = min(space.words, w0 + CHUNK_WORDS)
        w = impl.find_false(prog, space.n, space.K, space.A, w0, w1, space.tail)
        if w >= 0:
            words = impl.eval_program(prog, space.n, space.K, space.A, w, w + 1)[:, 0] & np.uint64(space.tail)
            for bit in range(64):
                for s in range(space.n):
                    if not int(words[s]) >> bit & 1 and (w << 6) + bit < space.count:
                        return space.pointed((w << 6) + bit, s)
    return None


def relation_words(
    left: KripkeModel,
    kind: Literal["sim", "ref", "bisim"],
    space: Space,
    impl: ModuleType | None = None,
    cap: int = DEFAULT_ENUM_CAP,
) -> np.ndarray:
    """``out[x, t, w]``: per model of word ``w``, whether right state ``t``
    is related to left state ``x`` (same orientation as :func:`related`)."""
    _guard(space, cap)
    if tuple(sorted(left.agents)) != space.agents:
        raise ValueError("left model and space must have the same agents")
    impl = impl or _impl
    forth, back = {"sim": (True, False), "ref": (False, True), "bisim": (True, True)}[kind]
    atom_ix = {p: j for j, p in enumerate(space.atoms)}
    nl = len(left.states)
    lval = np.zeros(nl, dtype=np.int64)
    for x, s in enumerate(left.states):
        v = 0
        for p in left.valuation[s]:
            if p not in atom_ix:
                v = -1
                break
            v |= 1 << atom_ix[p]
        lval[x] = v
    lsucc = np.zeros((space.A, nl, nl), dtype=np.uint8)
    for i, a in enumerate(space.agents):
        for x, succs in enumerate(left.succ[a]):
            for x2 in succs:
                lsucc[i, x, x2] = 1
    parts = [
        impl.relation_words(lval, lsucc, forth, back, space.n, space.K, space.A, w0, min(space.words, w0 + CHUNK_WORDS))
        for w0 in range(0, space.words, CHUNK_WORDS)
    ]
    out = np.concatenate(parts, axis=2)
    # a left valuation using an atom outside the space matches nothing
    out[lval < 0] = 0
    if space.count < 64:
        out &= np.uint64(space.tail)
    return out


def popcount(words: np.ndarray) -> int:
    return int(np.bitwise_count(words).sum()) if hasattr(np, "bitwise_count") else int(
        sum(bin(int(x)).count("1") for x in words.ravel())
    )

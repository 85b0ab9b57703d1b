"""Formula AST for modal logic with refinement, simulation and origin modalities.

Formulas are immutable and hashable.  The concrete ASCII grammar, lowest
precedence first::

    f ::= f <-> f | f -> f | f '|' f | f & f
        | ~f | [a]f | <a>f | [ref]f | <ref>f | [sim]f | <sim>f | [orig]f
        | atom | true | false | (f)

``->`` and ``<->`` are sugar; they parse to ``Or``/``And`` combinations and are
never printed back.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator

__all__ = [
    "Formula", "Top", "Bot", "Atom", "Not", "And", "Or", "Box", "Dia",
    "RefBox", "RefDia", "SimBox", "SimDia", "Origin", "TOP", "BOT",
    "ParseError", "parse", "to_text", "conj", "disj", "neg", "implies", "iff",
    "modal_depth", "atoms", "agents", "size", "subformulas", "to_nnf",
    "in_L0", "in_Lbox", "in_Lbox_ref", "in_Lbox_sim", "in_Lbox_orig",
    "in_negative_fragment", "is_literal", "quantifier_free", "cover",
]

NAME_RE = re.compile(r"[a-z][a-zA-Z0-9_]*")
KEYWORDS = frozenset({"true", "false", "ref", "sim", "orig"})


class Formula:
    """Base class; use the concrete subclasses below."""

    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)

    def __and__(self, other: Formula) -> Formula:
        return conj(self, other)

    def __or__(self, other: Formula) -> Formula:
        return disj(self, other)

    def __invert__(self) -> Formula:
        return Not(self)


def _h(*parts) -> int:
    return hash(parts)


@dataclass(frozen=True, slots=True)
class Top(Formula):
    def __hash__(self) -> int:
        return 0x7F1


@dataclass(frozen=True, slots=True)
class Bot(Formula):
    def __hash__(self) -> int:
        return 0x7F2


TOP = Top()
BOT = Bot()


@dataclass(frozen=True, slots=True)
class Atom(Formula):
    name: str
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not NAME_RE.fullmatch(self.name) or self.name in KEYWORDS:
            raise ValueError(f"invalid atom name {self.name!r}")
        object.__setattr__(self, "_hash", _h("atom", self.name))

    def __hash__(self) -> int:
        return self._hash


@dataclass(frozen=True, slots=True)
class Not(Formula):
    arg: Formula
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", _h("not", self.arg))

    def __hash__(self) -> int:
        return self._hash


@dataclass(frozen=True, slots=True)
class And(Formula):
    args: tuple[Formula, ...]
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if len(self.args) < 2:
            raise ValueError("And needs at least two arguments; use conj()")
        object.__setattr__(self, "_hash", _h("and", self.args))

    def __hash__(self) -> int:
        return self._hash


@dataclass(frozen=True, slots=True)
class Or(Formula):
    args: tuple[Formula, ...]
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if len(self.args) < 2:
            raise ValueError("Or needs at least two arguments; use disj()")
        object.__setattr__(self, "_hash", _h("or", self.args))

    def __hash__(self) -> int:
        return self._hash


@dataclass(frozen=True, slots=True)
class Box(Formula):
    agent: str
    arg: Formula
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _check_agent(self.agent)
        object.__setattr__(self, "_hash", _h("box", self.agent, self.arg))

    def __hash__(self) -> int:
        return self._hash


@dataclass(frozen=True, slots=True)
class Dia(Formula):
    agent: str
    arg: Formula
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _check_agent(self.agent)
        object.__setattr__(self, "_hash", _h("dia", self.agent, self.arg))

    def __hash__(self) -> int:
        return self._hash


def _unary(tag: str):
    @dataclass(frozen=True, slots=True)
    class _U(Formula):
        arg: Formula
        _hash: int = field(init=False, repr=False, compare=False)

        def __post_init__(self):
            object.__setattr__(self, "_hash", _h(tag, self.arg))

        def __hash__(self) -> int:
            return self._hash

    return _U


class RefBox(_unary("refbox")):
    """``[ref]f``: f holds after every refinement."""
    __slots__ = ()


class RefDia(_unary("refdia")):
    """``<ref>f``: f holds after some refinement."""
    __slots__ = ()


class SimBox(_unary("simbox")):
    """``[sim]f``: f holds after every simulation."""
    __slots__ = ()


class SimDia(_unary("simdia")):
    """``<sim>f``: f holds after some simulation."""
    __slots__ = ()


class Origin(_unary("orig")):
    """``[orig]f``: f holds in the mutual factual ignorance model at the
    current valuation."""
    __slots__ = ()


def _check_agent(name: str) -> None:
    if not NAME_RE.fullmatch(name) or name in KEYWORDS:
        raise ValueError(f"invalid agent name {name!r}")


_QUANT = (RefBox, RefDia, SimBox, SimDia)
_UNARY = (Not, RefBox, RefDia, SimBox, SimDia, Origin)


# ---------------------------------------------------------------------------
# smart constructors


def conj(*args: Formula | Iterable[Formula]) -> Formula:
    """Flattened, deduplicated conjunction with constant absorption."""
    out: list[Formula] = []
    seen: set[Formula] = set()
    for f in _spread(args):
        if isinstance(f, Top):
            continue
        if isinstance(f, Bot):
            return BOT
        parts = f.args if isinstance(f, And) else (f,)
        for g in parts:
            if g not in seen:
                seen.add(g)
                out.append(g)
    for g in out:
        if isinstance(g, Not) and g.arg in seen:
            return BOT
    if not out:
        return TOP
    if len(out) == 1:
        return out[0]
    return And(tuple(out))


def disj(*args: Formula | Iterable[Formula]) -> Formula:
    """Flattened, deduplicated disjunction with constant absorption."""
    out: list[Formula] = []
    seen: set[Formula] = set()
    for f in _spread(args):
        if isinstance(f, Bot):
            continue
        if isinstance(f, Top):
            return TOP
        parts = f.args if isinstance(f, Or) else (f,)
        for g in parts:
            if g not in seen:
                seen.add(g)
                out.append(g)
    for g in out:
        if isinstance(g, Not) and g.arg in seen:
            return TOP
    if not out:
        return BOT
    if len(out) == 1:
        return out[0]
    return Or(tuple(out))


def _spread(args) -> Iterator[Formula]:
    for a in args:
        if isinstance(a, Formula):
            yield a
        else:
            yield from a


def neg(f: Formula) -> Formula:
    """Negation with constant folding and double-negation removal."""
    if isinstance(f, Top):
        return BOT
    if isinstance(f, Bot):
        return TOP
    if isinstance(f, Not):
        return f.arg
    return Not(f)


def implies(f: Formula, g: Formula) -> Formula:
    return Or((Not(f), g))


def iff(f: Formula, g: Formula) -> Formula:
    return And((Or((Not(f), g)), Or((Not(g), f))))


def cover(agent: str, members: Iterable[Formula]) -> Formula:
    """The cover modality: every member is possible and only members are."""
    members = list(members)
    return conj([Dia(agent, m) for m in members] + [Box(agent, disj(members))])


# ---------------------------------------------------------------------------
# printing

_PREC_IFF, _PREC_IMP, _PREC_OR, _PREC_AND, _PREC_PREFIX = range(5)


def to_text(f: Formula) -> str:
    """Render in the ASCII grammar accepted by :func:`parse`."""
    return _show(f, _PREC_IFF)


def _show(f: Formula, ctx: int) -> str:
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bot):
        return "false"
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, And):
        s = " & ".join(_show(g, _PREC_AND + 1) for g in f.args)
        return f"({s})" if ctx > _PREC_AND else s
    if isinstance(f, Or):
        s = " | ".join(_show(g, _PREC_OR + 1) for g in f.args)
        return f"({s})" if ctx > _PREC_OR else s
    prefix = _prefix(f)
    return prefix + _show(f.arg, _PREC_PREFIX)


def _prefix(f: Formula) -> str:
    if isinstance(f, Not):
        return "~"
    if isinstance(f, Box):
        return f"[{f.agent}]"
    if isinstance(f, Dia):
        return f"<{f.agent}>"
    if isinstance(f, RefBox):
        return "[ref]"
    if isinstance(f, RefDia):
        return "<ref>"
    if isinstance(f, SimBox):
        return "[sim]"
    if isinstance(f, SimDia):
        return "<sim>"
    if isinstance(f, Origin):
        return "[orig]"
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# parsing


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<op><->|->|[~&|()])|(?P<box>\[\s*[A-Za-z0-9_]+\s*\])"
    r"|(?P<dia><\s*[A-Za-z0-9_]+\s*>)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unknown token {text[pos]!r}", *_linecol(text, pos))
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group().replace(" ", "").replace("\t", ""), pos))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


def _linecol(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, msg: str, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, *_linecol(self.text, tok[2]))

    def parse(self) -> Formula:
        f = self.iff()
        if self.peek()[0] != "eof":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return f

    def iff(self) -> Formula:
        left = self.imp()
        while self.peek()[1] == "<->":
            self.take()
            left = iff(left, self.imp())
        return left

    def imp(self) -> Formula:
        left = self.disj()
        if self.peek()[1] == "->":
            self.take()
            return implies(left, self.imp())  # right associative
        return left

    def disj(self) -> Formula:
        parts = [self.conj()]
        while self.peek()[1] == "|":
            self.take()
            parts.append(self.conj())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conj(self) -> Formula:
        parts = [self.unary()]
        while self.peek()[1] == "&":
            self.take()
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self) -> Formula:
        kind, val, _ = tok = self.take()
        if val == "~":
            return Not(self.unary())
        if kind in ("box", "dia"):
            label = val[1:-1]
            if kind == "box":
                table = {"ref": RefBox, "sim": SimBox, "orig": Origin}
                if label in table:
                    return table[label](self.unary())
                return Box(self._agent(label, tok), self.unary())
            table = {"ref": RefDia, "sim": SimDia}
            if label in table:
                return table[label](self.unary())
            if label == "orig":
                self.fail("'<orig>' is not part of the language", tok)
            return Dia(self._agent(label, tok), self.unary())
        if val == "(":
            f = self.iff()
            if self.peek()[1] != ")":
                self.fail("expected ')'")
            self.take()
            return f
        if kind == "name":
            if val == "true":
                return TOP
            if val == "false":
                return BOT
            if not NAME_RE.fullmatch(val):
                self.fail(f"invalid atom name {val!r}", tok)
            return Atom(val)
        if kind == "eof":
            self.fail("unexpected end of input", tok)
        self.fail(f"unexpected {val!r}", tok)

    def _agent(self, label: str, tok) -> str:
        if not NAME_RE.fullmatch(label) or label in KEYWORDS:
            self.fail(f"invalid agent name {label!r}", tok)
        return label


def parse(text: str) -> Formula:
    """Parse ``text`` into a formula; raises :class:`ParseError`."""
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# measures and fragments


def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order traversal, duplicates included."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        if isinstance(g, (And, Or)):
            stack.extend(reversed(g.args))
        elif isinstance(g, (Box, Dia)) or isinstance(g, _UNARY):
            stack.append(g.arg)


def modal_depth(f: Formula) -> int:
    if isinstance(f, (Top, Bot, Atom)):
        return 0
    if isinstance(f, (And, Or)):
        return max(modal_depth(g) for g in f.args)
    if isinstance(f, (Box, Dia)):
        return modal_depth(f.arg) + 1
    return modal_depth(f.arg)


def size(f: Formula) -> int:
    return sum(1 for _ in subformulas(f))


def atoms(f: Formula) -> frozenset[str]:
    return frozenset(g.name for g in subformulas(f) if isinstance(g, Atom))


def agents(f: Formula) -> frozenset[str]:
    return frozenset(g.agent for g in subformulas(f) if isinstance(g, (Box, Dia)))


def is_literal(f: Formula) -> bool:
    return isinstance(f, Atom) or (isinstance(f, Not) and isinstance(f.arg, Atom))


def _only(f: Formula, allowed: tuple[type, ...]) -> bool:
    base = (Top, Bot, Atom, Not, And, Or)
    return all(isinstance(g, base + allowed) for g in subformulas(f))


def in_L0(f: Formula) -> bool:
    return _only(f, ())


def in_Lbox(f: Formula) -> bool:
    return _only(f, (Box, Dia))


def in_Lbox_ref(f: Formula) -> bool:
    return _only(f, (Box, Dia, RefBox, RefDia))


def in_Lbox_sim(f: Formula) -> bool:
    return _only(f, (Box, Dia, SimBox, SimDia))


def in_Lbox_orig(f: Formula) -> bool:
    return _only(f, (Box, Dia, Origin))


def quantifier_free(f: Formula) -> bool:
    return not any(isinstance(g, _QUANT) for g in subformulas(f))


def in_negative_fragment(f: Formula) -> bool:
    """Literals closed under ``&``, ``|`` and diamonds."""
    if isinstance(f, Atom):
        return True
    if isinstance(f, Not):
        return isinstance(f.arg, Atom)
    if isinstance(f, (And, Or)):
        return all(in_negative_fragment(g) for g in f.args)
    if isinstance(f, Dia):
        return in_negative_fragment(f.arg)
    return False


# ---------------------------------------------------------------------------
# negation normal form

_DUAL = {
    Box: Dia, Dia: Box, RefBox: RefDia, RefDia: RefBox, SimBox: SimDia, SimDia: SimBox,
}


def to_nnf(f: Formula) -> Formula:
    """Push negations down to atoms.

    ``Origin`` is self-dual, so ``~[orig]f`` becomes ``[orig]~f``.  Nested
    connectives are flattened and deduplicated; constants are kept, so the
    modal depth does not change.
    """
    return _nnf(f, False)


def _flat(cls, parts: list[Formula]) -> Formula:
    out: dict[Formula, None] = {}
    for g in parts:
        for h in (g.args if isinstance(g, cls) else (g,)):
            out[h] = None
    return cls(tuple(out)) if len(out) > 1 else next(iter(out))


def _nnf(f: Formula, negated: bool) -> Formula:
    if isinstance(f, Top):
        return BOT if negated else TOP
    if isinstance(f, Bot):
        return TOP if negated else BOT
    if isinstance(f, Atom):
        return Not(f) if negated else f
    if isinstance(f, Not):
        return _nnf(f.arg, not negated)
    if isinstance(f, (And, Or)):
        parts = [_nnf(g, negated) for g in f.args]
        flip = {And: Or, Or: And}[type(f)] if negated else type(f)
        return _flat(flip, parts)
    if isinstance(f, (Box, Dia)):
        cls = _DUAL[type(f)] if negated else type(f)
        return cls(f.agent, _nnf(f.arg, negated))
    if isinstance(f, Origin):
        return Origin(_nnf(f.arg, negated))
    cls = _DUAL[type(f)] if negated else type(f)
    return cls(_nnf(f.arg, negated))

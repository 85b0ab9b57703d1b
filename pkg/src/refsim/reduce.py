"""Elimination of refinement and simulation quantifiers and of the origin
modality, down to plain multi-modal K.

Every procedure works on quantifier-free bodies, rewrites them into cover
form and then pushes the operator inward clause by clause, recursing on
bodies of strictly smaller modal depth.  :func:`reduce_full` applies them
innermost first.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Literal

from .errors import CapExceeded
from .normal_forms import DEFAULT_MAX_CLAUSES, clause_dnf, split_clause, to_modal_dnf
from .syntax import (
    BOT, TOP, And, Atom, Bot, Box, Dia, Formula, Not, Or, Origin, RefBox, RefDia, SimBox, SimDia,
    Top, agents as formula_agents, atoms as formula_atoms, conj, disj, in_Lbox, is_literal, neg,
    to_nnf, to_text,
)

SimMode = Literal["cons", "rosml"]
OriginMode = Literal["syntactic", "semantic"]

RULES = (
    "RQ1", "RQ2", "RQ3", "RQ4", "SQ1", "SQ2", "SQ3", "SQ4", "SQ4cons",
    "O1", "OT", "O5", "OExch", "OFull", "ODual", "ODisj", "NNF", "DNF", "COVER", "SIMP",
)


@dataclass
class ReduceConfig:
    sim_mode: SimMode = "cons"
    origin_mode: OriginMode = "syntactic"
    max_dnf_clauses: int = DEFAULT_MAX_CLAUSES
    trace: bool = False
    sink: Callable[[str], None] | None = None
    lines: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.sim_mode not in ("cons", "rosml"):
            raise ValueError(f"sim_mode must be 'cons' or 'rosml', not {self.sim_mode!r}")
        if self.origin_mode not in ("syntactic", "semantic"):
            raise ValueError(f"origin_mode must be 'syntactic' or 'semantic', not {self.origin_mode!r}")
        if self.max_dnf_clauses < 1:
            raise ValueError("max_dnf_clauses must be positive")

    def emit(self, rule: str, before: Formula | str, after: Formula | str) -> None:
        if not self.trace:
            return
        line = f"{rule} {_txt(before)} => {_txt(after)}"
        self.lines.append(line)
        if self.sink is not None:
            self.sink(line)

    @property
    def cache_key(self) -> tuple:
        return (self.sim_mode, self.origin_mode, self.max_dnf_clauses)


def _txt(f: Formula | str) -> str:
    return f if isinstance(f, str) else to_text(f)


_DEFAULT = ReduceConfig()
_CACHE: dict[tuple, Formula] = {}
_CACHE_LIMIT = 200_000


def clear_cache() -> None:
    _CACHE.clear()


def _cached(op: str, body: Formula, cfg: ReduceConfig, compute: Callable[[], Formula]) -> Formula:
    if cfg.trace:
        return compute()
    key = (op, cfg.cache_key, body)
    hit = _CACHE.get(key)
    if hit is None:
        hit = compute()
        if len(_CACHE) > _CACHE_LIMIT:
            _CACHE.clear()
        _CACHE[key] = hit
    return hit


# ---------------------------------------------------------------------------
# simplification


def simplify(f: Formula) -> Formula:
    """Constant folding through the smart constructors plus ``[a]true = true``
    and ``<a>false = false``.  Semantics-preserving only."""
    if isinstance(f, (Top, Bot, Atom)):
        return f
    if isinstance(f, Not):
        return neg(simplify(f.arg))
    if isinstance(f, And):
        return conj(simplify(g) for g in f.args)
    if isinstance(f, Or):
        return disj(simplify(g) for g in f.args)
    if isinstance(f, Box):
        g = simplify(f.arg)
        return TOP if isinstance(g, Top) else Box(f.agent, g)
    if isinstance(f, Dia):
        g = simplify(f.arg)
        return BOT if isinstance(g, Bot) else Dia(f.agent, g)
    return type(f)(simplify(f.arg))


def _simp(f: Formula, cfg: ReduceConfig) -> Formula:
    g = simplify(f)
    if g != f:
        cfg.emit("SIMP", f, g)
    return g


def _prepare(body: Formula, cfg: ReduceConfig, fold: bool = True) -> Formula:
    if not in_Lbox(body):
        raise ValueError(f"expected a quantifier- and origin-free body, got {to_text(body)}")
    nnf = to_nnf(body)
    if fold:
        nnf = simplify(nnf)
    if nnf != body:
        cfg.emit("NNF", body, nnf)
    return nnf


# ---------------------------------------------------------------------------
# refinement


def eliminate_refinement_diamond(body: Formula, cfg: ReduceConfig | None = None) -> Formula:
    """Quantifier-free equivalent of ``<ref>body``."""
    cfg = cfg or _DEFAULT
    return _cached("ref", body, cfg, lambda: _ref(body, cfg))


def _ref(body: Formula, cfg: ReduceConfig) -> Formula:
    body = _prepare(body, cfg)
    if not formula_agents(body):
        cfg.emit("RQ1", f"<ref>{_txt(body)}", body)
        return body
    dnf = to_modal_dnf(body, cfg.max_dnf_clauses)
    cfg.emit("DNF", body, dnf.to_formula())
    if len(dnf.clauses) > 1:
        cfg.emit("RQ2", f"<ref>({_txt(dnf.to_formula())})", " | ".join(f"<ref>({_txt(c.to_formula())})" for c in dnf.clauses))
    out = []
    for clause in dnf.clauses:
        if not isinstance(clause.prop_part, Top):
            cfg.emit("RQ3", f"<ref>({_txt(clause.to_formula())})", f"{_txt(clause.prop_part)} & <ref>(...)")
        parts = [clause.prop_part]
        for a, members in clause.covers:
            parts += [Dia(a, eliminate_refinement_diamond(phi, cfg)) for phi in members]
        result = conj(parts)
        cfg.emit("RQ4", f"<ref>({_txt(clause.to_formula())})", result)
        out.append(result)
    return _simp(disj(out), cfg)


# ---------------------------------------------------------------------------
# simulation


def eliminate_simulation_diamond(body: Formula, cfg: ReduceConfig | None = None) -> Formula:
    """Quantifier-free equivalent of ``<sim>body``.

    ``cons`` mode applies the consistency-gated axiom: a clause whose cover
    has an unsatisfiable member is false.  ``rosml`` mode applies the
    ungated axiom with its refinement and origin conjunct, then eliminates
    those as well.
    """
    cfg = cfg or _DEFAULT
    return _cached("sim", body, cfg, lambda: _sim(body, cfg, gated=True))


def naive_simulation_diamond(body: Formula, cfg: ReduceConfig | None = None) -> Formula:
    """The consistency-gated rewrite with the gate removed.

    Unsound on purpose: kept to demonstrate why the gate is needed.
    """
    cfg = cfg or ReduceConfig(sim_mode="cons")
    if cfg.sim_mode != "cons":
        raise ValueError("the naive rewrite only exists for cons mode")
    return _sim(body, cfg, gated=False)


def _sim(body: Formula, cfg: ReduceConfig, gated: bool) -> Formula:
    from .tableau import is_satisfiable

    # the ungated rewrite must see the cover exactly as written
    body = _prepare(body, cfg, fold=gated)
    if not formula_agents(body):
        cfg.emit("SQ1", f"<sim>{_txt(body)}", body)
        return body
    dnf = to_modal_dnf(body, cfg.max_dnf_clauses)
    cfg.emit("DNF", body, dnf.to_formula())
    if len(dnf.clauses) > 1:
        cfg.emit("SQ2", f"<sim>({_txt(dnf.to_formula())})", " | ".join(f"<sim>({_txt(c.to_formula())})" for c in dnf.clauses))
    recurse = (lambda phi: eliminate_simulation_diamond(phi, cfg)) if gated else (lambda phi: _sim(phi, cfg, False))
    out = []
    for clause in dnf.clauses:
        if not isinstance(clause.prop_part, Top):
            cfg.emit("SQ3", f"<sim>({_txt(clause.to_formula())})", f"{_txt(clause.prop_part)} & <sim>(...)")
        parts = [clause.prop_part]
        if cfg.sim_mode == "cons":
            if gated and not all(is_satisfiable(phi) for _, members in clause.covers for phi in members):
                cfg.emit("SQ4cons", f"<sim>({_txt(clause.to_formula())})", "false  (inconsistent cover member)")
                continue
            for a, members in clause.covers:
                parts.append(Box(a, disj(recurse(phi) for phi in members)))
            parts += [Box(a, BOT) for a in sorted(clause.empty_cover_agents)]
            rule = "SQ4cons"
        else:
            for a, members in clause.covers:
                parts.append(Box(a, disj(recurse(phi) for phi in members)))
                inner = conj(Dia(a, eliminate_refinement_diamond(phi, cfg)) for phi in members)
                parts.append(eliminate_origin_any(inner, cfg))
            parts += [Box(a, BOT) for a in sorted(clause.empty_cover_agents)]
            rule = "SQ4"
        result = conj(parts)
        cfg.emit(rule, f"<sim>({_txt(clause.to_formula())})", result)
        out.append(result)
    return _simp(disj(out), cfg)


# ---------------------------------------------------------------------------
# origin


def eliminate_origin_any(body: Formula, cfg: ReduceConfig | None = None) -> Formula:
    cfg = cfg or _DEFAULT
    if cfg.origin_mode == "semantic":
        return _cached("orig-sem", body, cfg, lambda: eliminate_origin_semantic(body))
    return eliminate_origin(body, cfg)


def eliminate_origin(body: Formula, cfg: ReduceConfig | None = None) -> Formula:
    """Propositional equivalent of ``[orig]body``, by syntactic rewriting.

    Booleans pass through (O1, ODual, ODisj).  Under ``[orig]<a>`` the body is
    put in DNF; every modal conjunct is pulled out of the diamond (S5 in the
    ignorance model) and, after the agent exchange, is itself a closed
    ``[orig]<b>`` or ``[orig][b]`` formula that recursion turns into a
    constant.  What remains is ``[orig]<a>pi`` for a literal conjunction
    ``pi``: false if ``pi`` is contradictory, else true.
    """
    cfg = cfg or _DEFAULT
    return _cached("orig", body, cfg, lambda: _orig(_prepare(body, cfg), cfg))


def _orig(f: Formula, cfg: ReduceConfig) -> Formula:
    if isinstance(f, (Top, Bot)) or is_literal(f):
        cfg.emit("O1", f"[orig]{_txt(f)}", f)
        return f
    if isinstance(f, And):
        # [orig](x & y) == ~[orig](~x | ~y) == [orig]x & [orig]y
        cfg.emit("ODual", f"[orig]({_txt(f)})", " & ".join(f"[orig]{_txt(g)}" for g in f.args))
        return conj(_orig(g, cfg) for g in f.args)
    if isinstance(f, Or):
        cfg.emit("ODisj", f"[orig]({_txt(f)})", " | ".join(f"[orig]{_txt(g)}" for g in f.args))
        return disj(_orig(g, cfg) for g in f.args)
    if isinstance(f, Box):
        dual = simplify(to_nnf(Not(f.arg)))
        cfg.emit("ODual", f"[orig]{_txt(f)}", f"~[orig]<{f.agent}>{_txt(dual)}")
        return neg(_orig_dia(f.agent, dual, cfg))
    if isinstance(f, Dia):
        return _orig_dia(f.agent, f.arg, cfg)
    raise ValueError(f"unexpected subformula under [orig]: {to_text(f)}")


def _orig_dia(agent: str, g: Formula, cfg: ReduceConfig) -> Formula:
    key = ("orig-dia", cfg.cache_key, Dia(agent, g))
    if not cfg.trace and key in _CACHE:
        return _CACHE[key]
    before = f"[orig]<{agent}>{_txt(g)}"
    verdict = BOT
    for clause in clause_dnf(g, cfg.max_dnf_clauses):
        prop, dias, boxes = split_clause(clause)
        # S5: modal conjuncts do not depend on the world inside the diamond
        value = TOP
        for b in sorted(set(dias) | set(boxes)):
            for chi in dias.get(b, []):
                if b != agent:
                    cfg.emit("OExch", f"[orig]<{agent}>(... & <{b}>{_txt(chi)})", f"[orig]<{b}>{_txt(chi)}")
                value = conj(value, _orig_dia(b, chi, cfg))
            for xi in boxes.get(b, []):
                dual = simplify(to_nnf(Not(xi)))
                value = conj(value, neg(_orig_dia(b, dual, cfg)))
            if isinstance(value, Bot):
                break
        if formula_agents(conj(clause)):
            cfg.emit("O5", f"[orig]<{agent}>({_txt(conj(clause))})", f"[orig]<{agent}>({_txt(prop)}) & {_txt(value)}")
        if isinstance(value, Bot):
            continue
        # complementary literal pairs were already removed by clause_dnf
        cfg.emit("OFull", f"[orig]<{agent}>{_txt(prop)}", "true")
        verdict = TOP
        break
    cfg.emit("OT", before, verdict)
    if not cfg.trace:
        _CACHE[key] = verdict
    return verdict


def eliminate_origin_semantic(body: Formula, agent_universe=()) -> Formula:
    """Propositional equivalent of ``[orig]body`` read off the truth table of
    the ignorance model over ``atoms(body)``."""
    from .kripke import mfi_model
    from .semantics import truth_mask

    if not in_Lbox(body):
        raise ValueError("eliminate_origin_semantic expects a quantifier- and origin-free body")
    q = sorted(formula_atoms(body))
    universe = frozenset(agent_universe) | formula_agents(body) or frozenset({"a"})
    m = mfi_model(q, universe)
    mask = truth_mask(m, body)
    if mask == m.full_mask:
        return TOP
    if mask == 0:
        return BOT
    rows = []
    for i, s in enumerate(m.states):
        if mask >> i & 1:
            val = m.valuation[s]
            rows.append(conj(Atom(p) if p in val else Not(Atom(p)) for p in q))
    return disj(rows)


# ---------------------------------------------------------------------------
# driver


def reduce_full(f: Formula, cfg: ReduceConfig | None = None) -> Formula:
    """Equivalent formula without quantifiers or origins, eliminating the
    innermost operators first."""
    cfg = cfg or _DEFAULT
    return _simp(_reduce(f, cfg), cfg)


def _reduce(f: Formula, cfg: ReduceConfig) -> Formula:
    if isinstance(f, (Top, Bot, Atom)):
        return f
    if isinstance(f, Not):
        return neg(_reduce(f.arg, cfg))
    if isinstance(f, And):
        return conj(_reduce(g, cfg) for g in f.args)
    if isinstance(f, Or):
        return disj(_reduce(g, cfg) for g in f.args)
    if isinstance(f, Box):
        return Box(f.agent, _reduce(f.arg, cfg))
    if isinstance(f, Dia):
        return Dia(f.agent, _reduce(f.arg, cfg))
    inner = _reduce(f.arg, cfg)
    if isinstance(f, RefDia):
        return eliminate_refinement_diamond(inner, cfg)
    if isinstance(f, SimDia):
        return eliminate_simulation_diamond(inner, cfg)
    if isinstance(f, RefBox):
        return neg(eliminate_refinement_diamond(simplify(to_nnf(Not(inner))), cfg))
    if isinstance(f, SimBox):
        return neg(eliminate_simulation_diamond(simplify(to_nnf(Not(inner))), cfg))
    if isinstance(f, Origin):
        return eliminate_origin_any(inner, cfg)
    raise TypeError(f"not a formula: {f!r}")


__all__ = [
    "ReduceConfig", "RULES", "simplify", "eliminate_refinement_diamond", "eliminate_simulation_diamond",
    "naive_simulation_diamond", "eliminate_origin", "eliminate_origin_semantic", "eliminate_origin_any",
    "reduce_full", "clear_cache", "CapExceeded",
]

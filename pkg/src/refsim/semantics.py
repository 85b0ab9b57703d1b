"""Model checking.

``check_base`` evaluates quantifier-free formulas (origin allowed) directly;
``check`` gives exact truth for the whole language by first eliminating the
quantifiers.  ``bounded_quantifier_search`` is an independent, one-sided
semantic oracle: it looks for an actual refined or simulating model.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Literal, Sequence

from .errors import CapExceeded
from .kripke import (
    KripkeModel, PointedModel, decode_model, extend_agents, mfi_model, model_count, subset_id,
)
from .relations import largest_relation_masks, related
from .syntax import (
    And, Atom, Bot, Box, Dia, Formula, Not, Or, Origin, RefBox, RefDia, SimBox, SimDia, Top,
    agents as formula_agents, atoms as formula_atoms, quantifier_free,
)

DEFAULT_SEARCH_STATES = 8
SEARCH_FAMILIES = ("identity", "star", "brute")


class QuantifierError(ValueError):
    """Raised when a quantifier reaches the direct evaluator."""


@dataclass(frozen=True)
class CheckEnv:
    model: KripkeModel
    agent_universe: frozenset[str]
    atom_universe: frozenset[str]

    @classmethod
    def for_formula(cls, model: KripkeModel, f: Formula) -> CheckEnv:
        return cls(model, model.agents | formula_agents(f), model.atoms | formula_atoms(f))


def truth_mask(model: KripkeModel, f: Formula, agent_universe: Iterable[str] | None = None) -> int:
    """Bitmask (over ``model.states``) of the states satisfying ``f``."""
    universe = frozenset(agent_universe or ()) | model.agents | formula_agents(f)
    memo: dict[Formula, int] = {}
    return _mask(model, f, universe, memo)


def _mask(m: KripkeModel, f: Formula, universe: frozenset[str], memo: dict) -> int:
    hit = memo.get(f)
    if hit is not None:
        return hit
    full = m.full_mask
    if isinstance(f, Top):
        r = full
    elif isinstance(f, Bot):
        r = 0
    elif isinstance(f, Atom):
        r = m.atom_masks.get(f.name, 0)
    elif isinstance(f, Not):
        r = full & ~_mask(m, f.arg, universe, memo)
    elif isinstance(f, And):
        r = full
        for g in f.args:
            r &= _mask(m, g, universe, memo)
            if not r:
                break
    elif isinstance(f, Or):
        r = 0
        for g in f.args:
            r |= _mask(m, g, universe, memo)
            if r == full:
                break
    elif isinstance(f, (Box, Dia)):
        sub = _mask(m, f.arg, universe, memo)
        succ = m.succ_masks.get(f.agent)
        r = 0
        if succ is None:
            r = full if isinstance(f, Box) else 0
        elif isinstance(f, Box):
            for i, sm in enumerate(succ):
                if not sm & ~sub:
                    r |= 1 << i
        else:
            for i, sm in enumerate(succ):
                if sm & sub:
                    r |= 1 << i
    elif isinstance(f, Origin):
        r = _origin_mask(m, f.arg, universe)
    elif isinstance(f, (RefBox, RefDia, SimBox, SimDia)):
        raise QuantifierError(f"quantifier in direct evaluation: {f}")
    else:
        raise TypeError(f"not a formula: {f!r}")
    memo[f] = r
    return r


def _origin_mask(m: KripkeModel, body: Formula, universe: frozenset[str]) -> int:
    # Evaluating over the ignorance model on atoms(body) only is exact: mapping
    # a valuation X to X & atoms(body) is a bisimulation between total models
    # that preserves every atom of body.
    table = origin_table(body, universe)
    q = sorted(formula_atoms(body))
    r = 0
    for i, s in enumerate(m.states):
        if subset_id(p for p in m.valuation[s] if p in q) in table:
            r |= 1 << i
    return r


@lru_cache(maxsize=4096)
def _origin_table(body: Formula, universe: frozenset[str]) -> frozenset[str]:
    mfi = mfi_model(formula_atoms(body), universe or frozenset({"a"}))
    mask = truth_mask(mfi, body, universe)
    return frozenset(s for i, s in enumerate(mfi.states) if mask >> i & 1)


def origin_table(body: Formula, agent_universe: Iterable[str] = ()) -> frozenset[str]:
    """Ids of the ignorance-model states (over ``atoms(body)``) where body holds."""
    universe = frozenset(agent_universe) | formula_agents(body)
    return _origin_table(body, universe)


def check_base(pm: PointedModel, f: Formula) -> bool:
    """Truth of a quantifier-free formula (origins allowed) at ``pm``."""
    return bool(truth_mask(pm.model, f) >> pm.model.index[pm.point] & 1)


def check(pm: PointedModel, f: Formula, config=None) -> bool:
    """Exact truth for the full language, via quantifier elimination."""
    from .reduce import reduce_full

    if quantifier_free(f):
        return check_base(pm, f)
    return check_base(pm, reduce_full(f, config))


# ---------------------------------------------------------------------------
# bounded witness search


def _exact_valuation(v: Iterable[str], q: Sequence[str]) -> frozenset[str]:
    return frozenset(p for p in v if p in q)


def _pool_model(kind: str, q: Sequence[str], agents: frozenset[str], model: KripkeModel, room: int) -> KripkeModel | None:
    """Component the star candidates point into.

    For refinement, one edgeless leaf per valuation present in the model (only
    those can ever be related).  For simulation, the ignorance model over the
    valuations that fit, model valuations first: it simulates every state whose
    valuations it contains.
    """
    present = sorted({_exact_valuation(model.valuation[s], q) for s in model.states}, key=sorted)
    if kind == "ref":
        vals = present
        rel: dict[str, list] = {a: [] for a in agents}
    else:
        others = [
            frozenset(p for j, p in enumerate(q) if mask >> j & 1) for mask in range(1 << len(q))
        ]
        vals = present + [v for v in others if v not in present]
        vals = vals[:room]
        if len(vals) < len(present):
            return None
        ids = [f"m{subset_id(v)}" for v in vals]
        rel = {a: [(x, y) for x in ids for y in ids] for a in agents}
    if not vals or len(vals) > room:
        return None
    prefix = "l" if kind == "ref" else "m"
    ids = [f"{prefix}{subset_id(v)}" for v in vals]
    return KripkeModel.build(ids, dict(zip(ids, vals)), rel, atoms=q, agents=agents)


def _root_truth(f: Formula, root_val: frozenset[str], succ: dict[str, int], pool: KripkeModel, memo: dict) -> bool:
    """Truth of ``f`` at a fresh root whose ``a``-successors are the pool
    states in ``succ[a]``; the pool never points back to the root."""
    if isinstance(f, Top):
        return True
    if isinstance(f, Bot):
        return False
    if isinstance(f, Atom):
        return f.name in root_val
    if isinstance(f, Not):
        return not _root_truth(f.arg, root_val, succ, pool, memo)
    if isinstance(f, And):
        return all(_root_truth(g, root_val, succ, pool, memo) for g in f.args)
    if isinstance(f, Or):
        return any(_root_truth(g, root_val, succ, pool, memo) for g in f.args)
    if isinstance(f, (Box, Dia)):
        sub = memo.get(f.arg)
        if sub is None:
            sub = memo[f.arg] = truth_mask(pool, f.arg)
        s = succ.get(f.agent, 0)
        return not s & ~sub if isinstance(f, Box) else bool(s & sub)
    raise QuantifierError(f"search body must be quantifier-free: {f}")


def _star_witness(pool: KripkeModel, root_val: frozenset[str], succ: dict[str, int]) -> PointedModel:
    states = ["w"] + list(pool.states)
    val = {"w": root_val, **pool.valuation}
    rel = {a: set(pool.relations[a]) for a in pool.agents}
    for a, mask in succ.items():
        for j, x in enumerate(pool.states):
            if mask >> j & 1:
                rel[a].add(("w", x))
    m = KripkeModel.build(states, val, rel, atoms=pool.atoms, agents=pool.agents)
    return PointedModel(m, "w")


def _star_candidates(pm: PointedModel, kind: str, body: Formula, pool: KripkeModel):
    model = pm.model
    forth, back = (True, False) if kind == "sim" else (False, True)
    z = largest_relation_masks(model, pool, forth, back)
    i = model.index[pm.point]
    agents = sorted(pool.agents)
    root_val = model.valuation[pm.point]
    full = pool.full_mask
    options: list[list[int]] = []
    for a in agents:
        succs = model.succ[a][i]
        if kind == "ref":
            allowed = 0
            for t in succs:
                allowed |= z[t]
            # every subset of the allowed pool states satisfies back
            opts = [sub for sub in range(full + 1) if not sub & ~allowed]
        else:
            needs = [z[t] for t in succs]
            if any(not nz for nz in needs):
                return
            opts = [sub for sub in range(full + 1) if all(sub & nz for nz in needs)]
        options.append(opts)
    memo: dict = {}
    for combo in product(*options):
        succ = dict(zip(agents, combo))
        if _root_truth(body, root_val, succ, pool, memo):
            yield succ


def bounded_quantifier_search(
    pm: PointedModel,
    kind: Literal["ref", "sim"],
    body: Formula,
    max_states: int = DEFAULT_SEARCH_STATES,
    families: Sequence[str] = SEARCH_FAMILIES,
    brute_states: int = 2,
    brute_cap: int = 50_000,
) -> PointedModel | None:
    """Find a ``kind``-successor of ``pm`` with at most ``max_states`` states
    satisfying the quantifier-free ``body``.

    Candidate families, tried in order: ``pm`` itself; star models (a fresh
    root with ``pm``'s valuation pointing into a fixed pool: edgeless leaves
    for refinement, a total ignorance component for simulation); then every
    model with at most ``brute_states`` states.  A returned witness has been
    re-verified with :func:`related` and :func:`check_base`.  ``None`` means
    nothing was found within these families, not that no witness exists.
    """
    if kind not in ("ref", "sim"):
        raise ValueError(f"kind must be 'ref' or 'sim', not {kind!r}")
    if not quantifier_free(body) or any(isinstance(g, Origin) for g in _walk(body)):
        raise QuantifierError("search body must be quantifier- and origin-free")
    agents = pm.model.agents | formula_agents(body)
    model = extend_agents(pm.model, agents)
    pm = PointedModel(model, pm.point)
    q = sorted(model.atoms | formula_atoms(body))

    def verified(w: PointedModel) -> bool:
        return related(kind, pm, w) and check_base(w, body)

    if "identity" in families and len(model.states) <= max_states and check_base(pm, body):
        return pm
    if "star" in families and max_states >= 2:
        pool = _pool_model(kind, q, agents, model, max_states - 1)
        if pool is not None:
            for succ in _star_candidates(pm, kind, body, pool):
                w = _star_witness(pool, model.valuation[pm.point], succ)
                if verified(w):
                    return w
    if "brute" in families:
        n_max = min(brute_states, max_states)
        total = sum(model_count(n, len(q), len(agents)) for n in range(1, n_max + 1))
        if total > brute_cap:
            raise CapExceeded(f"brute-force witness space {total} exceeds {brute_cap}")
        target = _exact_valuation(model.valuation[pm.point], q)
        for n in range(1, n_max + 1):
            for index in range(model_count(n, len(q), len(agents))):
                w_model = decode_model(index, n, q, agents)
                mask = truth_mask(w_model, body)
                for j, s in enumerate(w_model.states):
                    if mask >> j & 1 and w_model.valuation[s] == target:
                        w = PointedModel(w_model, s)
                        if related(kind, pm, w):
                            return w
    return None


def _walk(f: Formula):
    from .syntax import subformulas

    return subformulas(f)

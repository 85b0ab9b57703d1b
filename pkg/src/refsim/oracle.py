"""Brute-force verification harness.

Two independent routes decide validity:

* ``tableau``: reduce with the consistency-gated simulation rule and the
  syntactic origin elimination, then run the K tableau on the negation;
* ``exhaustive``: reduce with the refinement/origin simulation rule and the
  truth-table origin elimination, then evaluate on every pointed model up to
  the state bound with the batch kernel.

Suites record failures instead of raising, so a report always comes back.
"""
from __future__ import annotations

import json
import random
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from . import batch
from .batch import Space
from .kripke import PointedModel, mfi_model, to_json_obj
from .reduce import (
    ReduceConfig, eliminate_origin, eliminate_origin_semantic, naive_simulation_diamond, reduce_full,
)
from .relations import related
from .semantics import bounded_quantifier_search, check_base
from .syntax import (
    BOT, TOP, And, Atom, Box, Dia, Formula, Not, Or, Origin, RefBox, RefDia, SimBox, SimDia,
    agents as formula_agents, atoms as formula_atoms, conj, cover, disj, iff, implies,
    in_negative_fragment, modal_depth, to_text,
)
from .tableau import is_satisfiable, is_valid

TABLEAU_CFG = ReduceConfig(sim_mode="cons", origin_mode="syntactic")
EXHAUSTIVE_CFG = ReduceConfig(sim_mode="rosml", origin_mode="semantic")

AXIOMS = (
    "RQ1", "RQ2", "RQ3", "RQ4", "SQ1", "SQ2", "SQ3", "SQ4", "SQ4_cons",
    "O1", "OT", "O5", "OExch", "OFull", "ODual", "ODisj",
)
RULES = ("AR", "OMP", "ON", "ONec")
QUANTIFIER_PROPS = (
    "T_sim", "4_sim", "CR_sim", "MK_sim", "T_ref", "4_ref", "CR_ref", "MK_ref",
)


# ---------------------------------------------------------------------------
# reports


@dataclass
class Failure:
    label: str
    formula: str
    expected: object
    got: object
    model: dict | None = None


@dataclass
class SuiteReport:
    name: str
    instances: int = 0
    failures: list[Failure] = field(default_factory=list)
    wall_time: float = 0.0
    counts: dict[str, int] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def tally(self, label: str, k: int = 1) -> None:
        self.counts[label] = self.counts.get(label, 0) + k
        self.instances += k

    def fail(self, label: str, f: Formula | str, expected, got, model: PointedModel | None = None) -> None:
        obj = to_json_obj(model.model, model.point) if model is not None else None
        self.failures.append(Failure(label, f if isinstance(f, str) else to_text(f), expected, got, obj))

    def merge(self, other: SuiteReport) -> SuiteReport:
        out = SuiteReport(f"{self.name}+{other.name}", self.instances + other.instances,
                          self.failures + other.failures, self.wall_time + other.wall_time,
                          dict(self.counts), self.notes + other.notes)
        for k, v in other.counts.items():
            out.counts[k] = out.counts.get(k, 0) + v
        return out

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, default=str)


# ---------------------------------------------------------------------------
# random formulas


class FormulaPool:
    """Seeded formula generator, stratified by modal depth."""

    def __init__(self, seed: int = 0, atoms: Sequence[str] = ("p", "q"), agents: Sequence[str] = ("a", "b")):
        self.rng = random.Random(seed)
        self.atoms = tuple(atoms)
        self.agents = tuple(agents)

    def atom(self) -> Formula:
        return Atom(self.rng.choice(self.atoms))

    def literal(self) -> Formula:
        a = self.atom()
        return a if self.rng.random() < 0.5 else Not(a)

    def agent(self) -> str:
        return self.rng.choice(self.agents)

    def prop(self, size: int = 2) -> Formula:
        r = self.rng.random()
        if size <= 0 or r < 0.35:
            return self.rng.choice([self.literal(), self.literal(), self.atom(), TOP, BOT])
        if r < 0.5:
            return Not(self.prop(size - 1))
        left, right = self.prop(size - 1), self.prop(size - 1)
        if left == right:
            return left
        return (And if self.rng.random() < 0.5 else Or)((left, right))

    def literal_conj(self, consistent: bool | None = None) -> Formula:
        k = self.rng.randint(1, len(self.atoms))
        chosen = self.rng.sample(self.atoms, k)
        lits = [Atom(p) if self.rng.random() < 0.5 else Not(Atom(p)) for p in chosen]
        if consistent is False:
            p = self.rng.choice(self.atoms)
            lits += [Atom(p), Not(Atom(p))]
        return lits[0] if len(lits) == 1 else And(tuple(lits))

    def box(self, depth: int, exact: bool = False) -> Formula:
        """Quantifier-free formula of modal depth ``depth`` (at most ``depth``
        unless ``exact``)."""
        d = depth if exact else self.rng.randint(0, depth)
        return self._box(d)

    def _box(self, d: int) -> Formula:
        if d == 0:
            return self.prop()
        r = self.rng.random()
        if r < 0.45:
            op = Box if self.rng.random() < 0.5 else Dia
            return op(self.agent(), self._box(d - 1))
        if r < 0.55:
            return Not(self._box(d))
        left, right = self._box(d), self._box(self.rng.randint(0, d))
        if left == right:
            return left
        pair = (left, right) if self.rng.random() < 0.5 else (right, left)
        return (And if self.rng.random() < 0.5 else Or)(pair)

    def full(self, depth: int, p_quant: float = 0.25) -> Formula:
        """Like :meth:`box` but sometimes wraps a subformula in a quantifier
        or origin operator (these do not add modal depth)."""
        f = self.box(depth)
        if self.rng.random() >= p_quant:
            return f
        op = self.rng.choice([RefDia, RefBox, SimDia, SimBox, Origin])
        return self._wrap_random(f, op)

    def _wrap_random(self, f: Formula, op) -> Formula:
        if isinstance(f, (And, Or)) and self.rng.random() < 0.5:
            i = self.rng.randrange(len(f.args))
            args = list(f.args)
            args[i] = self._wrap_random(args[i], op)
            return type(f)(tuple(args))
        if isinstance(f, (Box, Dia)) and self.rng.random() < 0.5:
            return type(f)(f.agent, self._wrap_random(f.arg, op))
        return op(f)

    def negative(self, depth: int) -> Formula:
        """Literals closed under ``&``, ``|`` and diamonds."""
        d = self.rng.randint(0, depth)
        return self._neg(d)

    def _neg(self, d: int) -> Formula:
        r = self.rng.random()
        if d == 0:
            if r < 0.6:
                return self.literal()
            left, right = self.literal(), self.literal()
            if left == right:
                return left
            return (And if self.rng.random() < 0.5 else Or)((left, right))
        if r < 0.5:
            return Dia(self.agent(), self._neg(d - 1))
        left, right = self._neg(d), self._neg(self.rng.randint(0, d))
        if left == right:
            return left
        return (And if self.rng.random() < 0.5 else Or)((left, right))

    def cover_set(self, depth: int, consistent: bool = False) -> tuple[Formula, ...]:
        out: list[Formula] = []
        for _ in range(self.rng.randint(1, 3)):
            for _attempt in range(50):
                f = self.box(depth)
                if not consistent or is_satisfiable(f):
                    break
            out.append(f)
        return tuple(dict.fromkeys(out))

    def covers(self, depth: int, consistent: bool = False) -> dict[str, tuple[Formula, ...]]:
        k = self.rng.randint(1, len(self.agents))
        chosen = sorted(self.rng.sample(self.agents, k))
        return {a: self.cover_set(depth, consistent) for a in chosen}


def small_formulas(atoms: Sequence[str] = ("p", "q"), agents: Sequence[str] = ("a", "b")) -> list[Formula]:
    """Every literal, constant and single modality over a literal."""
    lits: list[Formula] = [TOP, BOT]
    for p in atoms:
        lits += [Atom(p), Not(Atom(p))]
    out = list(lits)
    for a in agents:
        for l in lits:
            out += [Box(a, l), Dia(a, l)]
    return out


# ---------------------------------------------------------------------------
# exhaustive validity


def _universe(f: Formula, atoms: Iterable[str] = (), agents: Iterable[str] = ()) -> tuple[list[str], list[str]]:
    q = sorted(set(atoms) | formula_atoms(f))
    ags = sorted(set(agents) | formula_agents(f)) or ["a"]
    return q, ags


def exhaustive_countermodel(
    f: Formula,
    max_states: int = 3,
    cfg: ReduceConfig | None = None,
    atoms: Iterable[str] = (),
    agents: Iterable[str] = (),
) -> PointedModel | None:
    """First enumerated pointed model (up to ``max_states``) falsifying ``f``.

    Models range over the atoms and agents of ``f`` (plus any given); atoms
    outside a formula never affect its truth.
    """
    cfg = cfg or EXHAUSTIVE_CFG
    q, ags = _universe(f, atoms, agents)
    reduced = reduce_full(f, cfg)
    for n in range(1, max_states + 1):
        hit = batch.find_countermodel(reduced, Space.of(n, q, ags))
        if hit is not None:
            return hit
    return None


def check_validity_exhaustive(f: Formula, max_states: int = 3, cfg: ReduceConfig | None = None, **kw) -> bool:
    """True iff ``f`` holds at every enumerated pointed model up to ``max_states``."""
    return exhaustive_countermodel(f, max_states, cfg, **kw) is None


def dual_validity(f: Formula, max_states: int = 3) -> tuple[bool, PointedModel | None]:
    """Tableau verdict and, separately, an exhaustive countermodel (if any)."""
    return is_valid(f, TABLEAU_CFG), exhaustive_countermodel(f, max_states, EXHAUSTIVE_CFG)


def _verify_valid(report: SuiteReport, label: str, f: Formula, max_states: int, expect: bool = True) -> bool:
    by_tableau, cm = dual_validity(f, max_states)
    by_models = cm is None
    report.tally(label)
    ok = True
    if by_tableau != expect:
        report.fail(label + "/tableau", f, expect, by_tableau)
        ok = False
    if expect and not by_models:
        report.fail(label + "/exhaustive", f, True, False, cm)
        ok = False
    return ok


# ---------------------------------------------------------------------------
# axiom schemas


def _covers_formula(covers: dict[str, tuple[Formula, ...]]) -> Formula:
    return conj(cover(a, members) for a, members in sorted(covers.items()))


def instantiate(schema: str, pool: FormulaPool) -> Formula:
    """One random instance of an axiom schema, respecting side conditions."""
    rng = pool.rng
    if schema in ("RQ1", "SQ1"):
        q = RefDia if schema == "RQ1" else SimDia
        phi0 = pool.prop()
        return iff(q(phi0), phi0)
    if schema in ("RQ2", "SQ2"):
        q = RefDia if schema == "RQ2" else SimDia
        phi, psi = pool.full(2), pool.full(2)
        return iff(q(Or((phi, psi))), Or((q(phi), q(psi))))
    if schema in ("RQ3", "SQ3"):
        q = RefDia if schema == "RQ3" else SimDia
        phi0, phi = pool.prop(), pool.full(2)
        return iff(q(And((phi0, phi))), And((phi0, q(phi))))
    if schema == "RQ4":
        covers = pool.covers(1)
        rhs = conj(Dia(a, RefDia(phi)) for a, ms in sorted(covers.items()) for phi in ms)
        return iff(RefDia(_covers_formula(covers)), rhs)
    if schema in ("SQ4", "SQ4_cons"):
        cons = schema == "SQ4_cons"
        covers = pool.covers(1, consistent=cons)
        parts = []
        for a, ms in sorted(covers.items()):
            parts.append(Box(a, disj(SimDia(phi) for phi in ms)))
            if not cons:
                parts.append(Origin(conj(Dia(a, RefDia(phi)) for phi in ms)))
        return iff(SimDia(_covers_formula(covers)), conj(parts))
    if schema == "O1":
        phi0 = pool.prop()
        return iff(Origin(phi0), phi0)
    if schema == "OT":
        a, phi = pool.agent(), pool.full(1)
        return Origin(implies(Box(a, phi), phi))
    if schema == "O5":
        a, phi = pool.agent(), pool.full(1)
        return Origin(implies(Dia(a, phi), Box(a, Dia(a, phi))))
    if schema == "OExch":
        a = pool.agent()
        others = [b for b in pool.agents if b != a] or [a]
        b, phi = rng.choice(others), pool.full(1)
        return Origin(implies(Box(a, phi), Box(b, phi)))
    if schema == "OFull":
        q = list(pool.atoms)
        rng.shuffle(q)
        k1 = rng.randint(0, len(q))
        q1 = q[:k1]
        q2 = [p for p in q[k1:] if rng.random() < 0.7]
        return Origin(Dia(pool.agent(), conj([Atom(p) for p in q1] + [Not(Atom(p)) for p in q2])))
    if schema == "ODual":
        phi = pool.full(2)
        return iff(Origin(Not(phi)), Not(Origin(phi)))
    if schema == "ODisj":
        phi, psi = pool.full(2), pool.full(2)
        return iff(Origin(Or((phi, psi))), Or((Origin(phi), Origin(psi))))
    raise ValueError(f"unknown schema {schema!r}")


def run_axiom_suite(
    pool_seed: int = 0,
    n_instances: int = 200,
    max_states: int = 3,
    schemas: Sequence[str] = AXIOMS,
    rules: Sequence[str] = RULES,
    n_rule_instances: int = 50,
) -> SuiteReport:
    """Every axiom schema on ``n_instances`` random instances and every
    derived rule on ``n_rule_instances`` premise/conclusion pairs."""
    t0 = time.perf_counter()
    report = SuiteReport("axioms")
    for k, schema in enumerate(schemas):
        pool = FormulaPool(pool_seed * 1000 + k)
        for _ in range(n_instances):
            _verify_valid(report, schema, instantiate(schema, pool), max_states)
    for k, rule in enumerate(rules):
        pool = FormulaPool(pool_seed * 1000 + 500 + k)
        for _ in range(n_rule_instances):
            _rule_instance(report, rule, pool, max_states)
    missing = [name for name in (*schemas, *rules) if report.counts.get(name, 0) == 0]
    if missing:
        report.fail("coverage", ",".join(missing), "covered", "missing")
    report.wall_time = time.perf_counter() - t0
    return report


def _valid_premise(pool: FormulaPool, make: Callable[[], Formula], test: Callable[[Formula], bool], tries: int = 200) -> Formula:
    for _ in range(tries):
        f = make()
        if test(f):
            return f
    raise RuntimeError("could not generate a premise")


def _s5_tautology(pool: FormulaPool) -> Formula:
    """A formula valid in the ignorance model (so ``[orig]`` of it is valid)."""
    rng = pool.rng
    a, phi = pool.agent(), pool.box(1)
    shapes = [
        lambda: implies(Box(a, phi), phi),
        lambda: implies(Dia(a, phi), Box(a, Dia(a, phi))),
        lambda: implies(phi, Dia(a, phi)),
        lambda: Or((phi, Not(phi))),
        lambda: implies(Box(a, phi), Box(rng.choice(pool.agents), phi)),
        lambda: Dia(a, pool.literal_conj(consistent=True)),
    ]
    return rng.choice(shapes)()


def _k_tautology(pool: FormulaPool) -> Formula:
    rng = pool.rng
    a, phi, psi = pool.agent(), pool.box(1), pool.box(1)
    shapes = [
        lambda: Or((phi, Not(phi))),
        lambda: implies(Box(a, implies(phi, psi)), implies(Box(a, phi), Box(a, psi))),
        lambda: implies(And((Box(a, phi), Dia(a, psi))), Dia(a, And((phi, psi)))),
        lambda: implies(Box(a, And((phi, psi))), Box(a, phi)),
        lambda: iff(Dia(a, Or((phi, psi))), Or((Dia(a, phi), Dia(a, psi)))),
    ]
    return rng.choice(shapes)()


def _rule_instance(report: SuiteReport, rule: str, pool: FormulaPool, max_states: int) -> None:
    """Premises valid (both routes) must give a valid conclusion."""
    rng = pool.rng
    if rule == "AR":
        # from phi -> psi infer <ref>phi -> <ref>psi
        phi = pool.box(2)
        psi = rng.choice([Or((phi, pool.box(2))), phi, Or((pool.box(1), phi))])
        if rng.random() < 0.5:
            phi = And((phi, pool.box(1)))
        premises = [implies(phi, psi)]
        conclusion = implies(RefDia(phi), RefDia(psi))
    elif rule == "OMP":
        # from [orig](phi -> psi) and [orig]phi infer [orig]psi
        phi = _s5_tautology(pool)
        psi = rng.choice([Or((phi, pool.box(1))), _s5_tautology(pool)])
        premises = [Origin(implies(phi, psi)), Origin(phi)]
        conclusion = Origin(psi)
    elif rule == "ON":
        # from [orig]phi infer [orig][a]phi
        phi = _s5_tautology(pool)
        premises = [Origin(phi)]
        conclusion = Origin(Box(pool.agent(), phi))
    elif rule == "ONec":
        # from phi infer [orig]phi
        phi = _k_tautology(pool)
        premises = [phi]
        conclusion = Origin(phi)
    else:
        raise ValueError(f"unknown rule {rule!r}")
    report.tally(rule)
    for prem in premises:
        by_tableau, cm = dual_validity(prem, max_states)
        if not by_tableau or cm is not None:
            report.notes.append(f"{rule}: premise not valid, instance skipped: {to_text(prem)}")
            report.counts[rule] -= 1
            report.instances -= 1
            return
    by_tableau, cm = dual_validity(conclusion, max_states)
    if not by_tableau:
        report.fail(rule + "/tableau", conclusion, True, False)
    if cm is not None:
        report.fail(rule + "/exhaustive", conclusion, True, False, cm)


# ---------------------------------------------------------------------------
# quantifier validities


def quantifier_property(name: str, phi: Formula) -> Formula:
    kind, _, q = name.partition("_")
    dia, box = (SimDia, SimBox) if q == "sim" else (RefDia, RefBox)
    if kind == "T":
        return implies(box(phi), phi)
    if kind == "4":
        return implies(dia(dia(phi)), dia(phi))
    if kind == "CR":
        return implies(dia(box(phi)), box(dia(phi)))
    if kind == "MK":
        return implies(box(dia(phi)), dia(box(phi)))
    raise ValueError(f"unknown property {name!r}")


def run_quantifier_validities(seed: int = 0, n_instances: int = 100, max_states: int = 3,
                              names: Sequence[str] = QUANTIFIER_PROPS) -> SuiteReport:
    t0 = time.perf_counter()
    report = SuiteReport("quantifier-validities")
    for k, name in enumerate(names):
        pool = FormulaPool(seed * 1000 + 700 + k)
        for _ in range(n_instances):
            _verify_valid(report, name, quantifier_property(name, pool.box(2)), max_states)
    report.wall_time = time.perf_counter() - t0
    return report


def unsoundness_regression(max_states: int = 3) -> SuiteReport:
    """The cover {true, false}: gated and naive rewrites must disagree, and
    the gated one must match the models."""
    t0 = time.perf_counter()
    report = SuiteReport("unsoundness-regression")
    body = And((Dia("a", TOP), Dia("a", BOT)))
    f = SimDia(body)
    gated = reduce_full(f, TABLEAU_CFG)
    rosml = reduce_full(f, EXHAUSTIVE_CFG)
    naive = naive_simulation_diamond(body)
    report.tally("gated")
    if gated != BOT:
        report.fail("gated", f, "false", to_text(gated))
    report.tally("rosml")
    if rosml != BOT:
        report.fail("rosml", f, "false", to_text(rosml))
    report.tally("naive")
    if not is_valid(naive):
        report.fail("naive", naive, "valid (unsound)", "not valid")
    report.tally("disagree")
    if is_valid(iff(gated, naive)):
        report.fail("disagree", f, "gated and naive differ", "equivalent")
    # the gated answer against the models: <sim>body is false everywhere
    report.tally("models")
    if not check_validity_exhaustive(Not(f), max_states):
        report.fail("models", f, "false on every model", "true somewhere")
    report.notes.append(f"gated={to_text(gated)} naive={to_text(naive)}")
    report.wall_time = time.perf_counter() - t0
    return report


# ---------------------------------------------------------------------------
# preservation and MI2ref


def negative_pool(seed: int = 0, n: int = 400, depth: int = 2, atoms=("p", "q"), agents=("a", "b")) -> list[Formula]:
    pool = FormulaPool(seed, atoms, agents)
    out = {f: None for f in small_formulas(atoms, agents) if in_negative_fragment(f)}
    tries = 0
    while len(out) < n and tries < 50 * n:
        tries += 1
        f = pool.negative(depth)
        out[f] = None
    return list(out)


def preservation_violations(formulas: Sequence[Formula], max_states: int, atoms, agents) -> list[tuple[Formula, PointedModel, PointedModel]]:
    """Pairs related by the largest simulation where a formula true on the
    left is false on the right (first few per formula)."""
    atoms, agents = sorted(atoms), sorted(agents)
    spaces = [Space.of(n, atoms, agents) for n in range(1, max_states + 1)]
    truth = {sp.n: np.stack([batch.truth_words(f, sp) for f in formulas]) for sp in spaces}
    out = []
    seen: set[int] = set()
    for left_sp in spaces:
        ltruth = truth[left_sp.n]
        for index in range(left_sp.count):
            left = left_sp.model(index)
            w, bit = divmod(index, 64)
            lt = (ltruth[:, :, w] >> np.uint64(bit)) & np.uint64(1) == 1
            for right_sp in spaces:
                z = batch.relation_words(left, "sim", right_sp)
                tr = truth[right_sp.n]
                for x in range(left_sp.n):
                    rows = np.flatnonzero(lt[:, x])
                    if not len(rows):
                        continue
                    bad = z[x][None, :, :] & ~tr[rows]
                    hit = np.flatnonzero(bad.reshape(len(rows), -1).any(axis=1))
                    for h in hit:
                        fi = int(rows[h])
                        if fi in seen:
                            continue
                        seen.add(fi)
                        t, w = np.argwhere(bad[h])[0]
                        word = int(bad[h, t, w])
                        bit = (word & -word).bit_length() - 1
                        out.append((formulas[fi], PointedModel(left, left.states[x]), right_sp.pointed((int(w) << 6) + bit, int(t))))
    return out


def mi2ref_failures(max_states: int, atoms, agents) -> tuple[int, list[PointedModel]]:
    """Checks that every enumerated pointed model refines the ignorance model
    at its valuation.  Returns (pointed models checked, failures)."""
    atoms, agents = sorted(atoms), sorted(agents)
    left = mfi_model(atoms, agents)
    checked = 0
    failures: list[PointedModel] = []
    for n in range(1, max_states + 1):
        sp = Space.of(n, atoms, agents)
        z = batch.relation_words(left, "ref", sp)
        covered = np.zeros((n, sp.words), dtype=np.uint64)
        for x, s in enumerate(left.states):
            exact = conj(Atom(p) if p in left.valuation[s] else Not(Atom(p)) for p in atoms)
            covered |= z[x] & batch.truth_words(exact, sp)
        checked += sp.count * n
        missing = ~covered
        if sp.count < 64:
            missing &= np.uint64(sp.tail)
        for t, w in np.argwhere(missing != 0)[:5]:
            word = int(missing[t, w])
            bit = (word & -word).bit_length() - 1
            failures.append(sp.pointed((int(w) << 6) + bit, int(t)))
    return checked, failures


MI2REF_UNIVERSES = (((), ("a",)), (("p",), ("a",)), (("p",), ("a", "b")), (("p", "q"), ("a",)), (("p", "q"), ("a", "b")))


def run_preservation_suite(max_states: int = 2, seed: int = 0, n_formulas: int = 400,
                           mi2ref_states: int = 3, mi2ref_universes=MI2REF_UNIVERSES) -> SuiteReport:
    """Negative-fragment preservation along simulations, the sensitivity
    control, and every model refining the ignorance model."""
    t0 = time.perf_counter()
    report = SuiteReport("preservation")
    formulas = negative_pool(seed, n_formulas)
    viol = preservation_violations(formulas, max_states, ("p", "q"), ("a", "b"))
    report.tally("negative-fragment", len(formulas))
    for f, pm, pm2 in viol:
        report.fail("negative-fragment", f, "preserved", f"false at right {pm2.point}", pm2)
    control = preservation_violations([Box("a", Atom("p"))], max_states, ("p",), ("a",))
    report.tally("sensitivity")
    if not control:
        report.fail("sensitivity", "[a]p", "violated along some simulation", "never violated")
    else:
        report.notes.append("sensitivity: [a]p is not preserved, as expected")
    for atoms, agents in mi2ref_universes:
        checked, fails = mi2ref_failures(mi2ref_states, atoms, agents)
        label = f"MI2ref[{','.join(atoms) or '-'}|{','.join(agents)}]"
        report.tally(label, checked)
        for pm in fails:
            report.fail(label, "refinement of the ignorance model", True, False, pm)
    report.wall_time = time.perf_counter() - t0
    return report


# ---------------------------------------------------------------------------
# reduction versus search


def _exact(val: frozenset[str], q: Sequence[str]) -> Formula:
    return conj(Atom(p) if p in val else Not(Atom(p)) for p in q)


class ProfileIndex:
    """Depth-one profile of every pointed model of a small space.

    The profile of ``(M, s)`` is ``V(s)`` together with, per agent, the set
    of valuations of its successors.  For bodies of modal depth at most one
    the star-model search is a function of the profile (its candidates and
    the truth of the body at their root depend on nothing else), so one
    search per profile decides it for every member.
    """

    CHUNK = 1 << 14

    def __init__(self, n: int, atoms: Sequence[str], agents: Sequence[str]):
        self.space = Space.of(n, atoms, agents)
        q = self.space.atoms
        self.vals = [frozenset(p for j, p in enumerate(q) if m >> j & 1) for m in range(1 << len(q))]
        preds: list[Formula] = [Atom(p) for p in q]
        for a in self.space.agents:
            preds += [Dia(a, _exact(v, q)) for v in self.vals]
        self.n_bits = len(preds)
        words = [batch.truth_words(f, self.space) for f in preds]
        self.ids = np.zeros((n, self.space.count), dtype=np.uint16)
        for s in range(n):
            acc = np.zeros(self.space.count, dtype=np.uint16)
            for i, w in enumerate(words):
                bits = np.unpackbits(w[s].view(np.uint8), bitorder="little")[: self.space.count]
                acc |= bits.astype(np.uint16) << i
            self.ids[s] = acc
        flat = self.ids.reshape(-1)
        uniq, first = np.unique(flat, return_index=True)
        self.first = dict(zip(uniq.tolist(), first.tolist()))
        self.sizes = dict(zip(*np.unique(flat, return_counts=True)))

    def representative(self, key: int, rng: random.Random | None = None) -> PointedModel:
        pos = self.first[key] if rng is None else self._random_member(key, rng)
        s, index = divmod(pos, self.space.count)
        return self.space.pointed(index, s)

    def _random_member(self, key: int, rng: random.Random) -> int:
        flat = self.ids.reshape(-1)
        start = rng.randrange(len(flat))
        hit = np.flatnonzero(flat[start:] == key)
        if len(hit):
            return start + int(hit[0])
        return int(np.flatnonzero(flat[:start] == key)[0])

    def truth_counts(self, f: Formula) -> dict[int, int]:
        tw = batch.truth_words(f, self.space)
        bits = np.stack([np.unpackbits(tw[s].view(np.uint8), bitorder="little")[: self.space.count] for s in range(self.space.n)])
        trues = self.ids[bits.astype(bool)]
        u, c = np.unique(trues, return_counts=True)
        return dict(zip(u.tolist(), c.tolist()))


def curated_single_quantifier(seed: int = 0, n_random: int = 40) -> list[Formula]:
    """Hand-picked and random ``<ref>body`` / ``<sim>body`` with depth-one bodies."""
    texts = [
        "<ref><a>p", "<ref>[a]false", "<ref>(<a>p & <a>~p)", "<ref>([a]p & <b>q)", "<ref>(p & [a]~p)",
        "<ref>(<a>true & [b]false)", "<ref>(<a>(p & q) | [b]~q)", "<ref>~<a>p", "<ref>([a]q & <a>q & [b]~p)",
        "<ref>(<a>p & <a>q & [a](p | q))", "<sim><a>~p", "<sim>[a]false", "<sim>(<a>true & <a>false)",
        "<sim>([a]p & <a>p)", "<sim>(<a>p & <b>~q)", "<sim>~[a]p", "<sim>(q & [b](p & q))",
        "<sim>([a]false | <b>p)", "<sim>(<a>(p & ~q) & [a]p)", "<sim>([a]p & [b]~p & ~q)",
    ]
    from .syntax import parse

    out = [parse(t) for t in texts]
    pool = FormulaPool(seed + 4242)
    while len(out) < len(texts) + n_random:
        body = pool.box(1, exact=pool.rng.random() < 0.8)
        q = RefDia if len(out) % 2 == 0 else SimDia
        f = q(body)
        if f not in out:
            out.append(f)
    return out


def cross_check_reduction_suite(
    seed: int = 0,
    max_states: int = 3,
    bound: int = 8,
    formulas: Sequence[Formula] | None = None,
    samples_per_class: int = 2,
) -> SuiteReport:
    """Reduction truth versus bounded witness search on every pointed model
    up to ``max_states``, for single-quantifier formulas with depth-one bodies.

    Strict direction (a witness found implies reduction true) is a failure
    when violated; completeness misses (reduction true, no witness within
    ``bound``) are logged and counted under ``completeness-miss``.
    """
    t0 = time.perf_counter()
    report = SuiteReport("reduction-vs-search")
    formulas = list(formulas) if formulas is not None else curated_single_quantifier(seed)
    rng = random.Random(seed)
    indexes: dict[tuple, ProfileIndex] = {}
    misses = 0
    for f in formulas:
        if not isinstance(f, (RefDia, SimDia)) or modal_depth(f.arg) > 1:
            raise ValueError(f"expected a single quantifier over a depth-one body: {to_text(f)}")
        kind = "ref" if isinstance(f, RefDia) else "sim"
        body = f.arg
        q, ags = _universe(f)
        reduced = reduce_full(f, TABLEAU_CFG)
        verdicts: dict[int, PointedModel | None] = {}
        for n in range(1, max_states + 1):
            key = (n, tuple(q), tuple(ags))
            if key not in indexes:
                indexes[key] = ProfileIndex(n, q, ags)
            idx = indexes[key]
            trues = idx.truth_counts(reduced)
            for cls, size in sorted(idx.sizes.items()):
                cls = int(cls)
                if cls not in verdicts:
                    verdicts[cls] = bounded_quantifier_search(idx.representative(cls), kind, body, bound, families=("star",))
                witness = verdicts[cls]
                n_true = trues.get(cls, 0)
                report.tally("pointed-models", int(size))
                if witness is not None:
                    if n_true != size:
                        report.fail("strict", f, "reduction true on the class", f"{size - n_true} of {size} false", idx.representative(cls))
                    for _ in range(samples_per_class):
                        member = idx.representative(cls, rng)
                        report.tally("witness-rechecks")
                        if not (related(kind, member, witness) and check_base(witness, body)):
                            report.fail("witness", f, "witness valid for member", "rejected", member)
                elif n_true:
                    misses += n_true
                    report.notes.append(f"completeness miss: {to_text(f)} on {n_true} pointed models with {n} states")
        report.tally("formulas")
    report.counts["completeness-miss"] = misses
    report.wall_time = time.perf_counter() - t0
    return report


def run_origin_agreement(seed: int = 0, n_instances: int = 200, depth: int = 2) -> SuiteReport:
    """Syntactic and truth-table origin elimination give tableau-equivalent
    results on random quantifier-free bodies."""
    t0 = time.perf_counter()
    report = SuiteReport("origin-agreement")
    pool = FormulaPool(seed * 1000 + 900)
    for _ in range(n_instances):
        body = pool.box(depth)
        syn = eliminate_origin(body, TABLEAU_CFG)
        sem = eliminate_origin_semantic(body)
        report.tally("bodies")
        if not is_valid(iff(syn, sem)):
            report.fail("bodies", Origin(body), to_text(sem), to_text(syn))
    report.wall_time = time.perf_counter() - t0
    return report


def run_all(seed: int = 0, max_states: int = 3, n_instances: int = 200) -> SuiteReport:
    parts = [
        run_axiom_suite(seed, n_instances, max_states),
        run_quantifier_validities(seed, max(100, n_instances // 2), max_states),
        unsoundness_regression(max_states),
        run_preservation_suite(min(max_states, 2), seed),
        run_origin_agreement(seed, max(100, n_instances)),
        cross_check_reduction_suite(seed, max_states),
    ]
    out = parts[0]
    for p in parts[1:]:
        out = out.merge(p)
    out.name = "all"
    return out

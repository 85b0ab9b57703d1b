"""Command-line interface.

Exit codes: 0 true/success, 1 false verdict (or failing suite), 2 usage,
parse or model errors, 3 a resource cap was hit.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .errors import CapExceeded, ModelError
from .kripke import DEFAULT_MFI_ATOM_CAP, PointedModel, extend_agents, mfi_model, mfi_point, read_model_with_point, to_json_obj
from .reduce import ReduceConfig, reduce_full
from .relations import largest
from .semantics import check
from .syntax import ParseError, parse, to_text
from .tableau import DEFAULT_NODE_CAP, is_satisfiable

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

EXIT_TRUE, EXIT_FALSE, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3
CAP_KEYS = {"max_dnf_clauses", "node_cap", "mfi_atoms"}
SUITES = ("axioms", "quantifiers", "regression", "preservation", "origin", "reduction", "all")


class UsageError(Exception):
    pass


def load_caps(path: str | None) -> dict[str, int]:
    caps = {"max_dnf_clauses": 4096, "node_cap": DEFAULT_NODE_CAP, "mfi_atoms": DEFAULT_MFI_ATOM_CAP}
    if path is None:
        return caps
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise UsageError(f"cannot read caps file {path}: {exc}") from exc
    data = data.get("caps", data)
    unknown = set(data) - CAP_KEYS
    if unknown:
        raise UsageError(f"unknown cap(s): {', '.join(sorted(unknown))}")
    for k, v in data.items():
        if not isinstance(v, int) or v < 1:
            raise UsageError(f"cap {k} must be a positive integer")
        caps[k] = v
    return caps


def _config(args, caps) -> ReduceConfig:
    sink = (lambda line: print(line, file=sys.stderr)) if getattr(args, "trace", False) and not args.json else None
    return ReduceConfig(
        sim_mode=getattr(args, "mode", "cons"),
        origin_mode=getattr(args, "origin", "syntactic"),
        max_dnf_clauses=caps["max_dnf_clauses"],
        trace=getattr(args, "trace", False),
        sink=sink,
    )


def _formula(text: str):
    try:
        return parse(text)
    except ParseError as exc:
        raise UsageError(str(exc)) from exc


def _read(path: str, point: str | None = None):
    try:
        with open(path) as fh:
            m, p = read_model_with_point(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    point = point or p
    if point is None:
        raise UsageError(f"{path}: no point given (use the 'point' field or --point)")
    if point not in m.index:
        raise UsageError(f"{path}: {point} is not a state")
    return m, point


def _pointed_json(pm: PointedModel | None):
    return None if pm is None else to_json_obj(pm.model, pm.point)


# ---------------------------------------------------------------------------
# commands; each returns (exit code, JSON payload, human text)


def cmd_check(args, caps):
    f = _formula(args.formula)
    m, point = _read(args.model, args.point)
    cfg = _config(args, caps)
    verdict = check(PointedModel(m, point), f, cfg)
    payload = {"result": verdict, "point": point, "formula": to_text(f)}
    if cfg.trace:
        payload["trace"] = cfg.lines
    return (EXIT_TRUE if verdict else EXIT_FALSE), payload, str(verdict).lower()


def cmd_reduce(args, caps):
    f = _formula(args.formula)
    cfg = _config(args, caps)
    out = reduce_full(f, cfg)
    payload = {"result": to_text(out), "formula": to_text(f), "mode": cfg.sim_mode, "origin": cfg.origin_mode}
    if cfg.trace:
        payload["trace"] = cfg.lines
    return EXIT_TRUE, payload, to_text(out)


def _sat(f, args, caps):
    cfg = _config(args, caps)
    reduced = reduce_full(f, cfg)
    return is_satisfiable(reduced, caps["node_cap"], witness=True)


def cmd_valid(args, caps):
    f = _formula(args.formula)
    sat, cm = _sat(parse(f"~({to_text(f)})"), args, caps)
    payload = {"result": not sat, "formula": to_text(f), "countermodel": _pointed_json(cm)}
    text = "valid" if not sat else "not valid; countermodel:\n" + json.dumps(payload["countermodel"], indent=2)
    return (EXIT_FALSE if sat else EXIT_TRUE), payload, text


def cmd_sat(args, caps):
    f = _formula(args.formula)
    sat, w = _sat(f, args, caps)
    payload = {"result": sat, "formula": to_text(f), "witness": _pointed_json(w)}
    text = ("sat; witness:\n" + json.dumps(payload["witness"], indent=2)) if sat else "unsat"
    return (EXIT_TRUE if sat else EXIT_FALSE), payload, text


def cmd_relate(args, caps):
    m, p = _read(args.left, args.left_point)
    m2, p2 = _read(args.right, args.right_point)
    agents = m.agents | m2.agents
    m, m2 = extend_agents(m, agents), extend_agents(m2, agents)
    z = largest(args.kind, m, m2)
    verdict = (p, p2) in z
    pairs = sorted(z.pairs)
    payload = {"result": verdict, "kind": args.kind, "left_point": p, "right_point": p2, "relation": [list(x) for x in pairs]}
    text = f"{str(verdict).lower()}\n" + "\n".join(f"  {s} -> {t}" for s, t in pairs)
    return (EXIT_TRUE if verdict else EXIT_FALSE), payload, text


def _names(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def cmd_mfi(args, caps):
    atoms, agents = _names(args.atoms), _names(args.agents)
    if not agents:
        raise UsageError("at least one agent is required")
    m = mfi_model(atoms, agents, cap=caps["mfi_atoms"])
    point = mfi_point(atoms, _names(args.point)) if args.point is not None else None
    obj = to_json_obj(m, point)
    return EXIT_TRUE, obj, json.dumps(obj, indent=2)


def cmd_oracle(args, caps):
    from . import oracle

    seed, k, n = args.seed, args.max_states, args.instances
    runs = {
        "axioms": lambda: oracle.run_axiom_suite(seed, n, k),
        "quantifiers": lambda: oracle.run_quantifier_validities(seed, max(1, n // 2), k),
        "regression": lambda: oracle.unsoundness_regression(k),
        "preservation": lambda: oracle.run_preservation_suite(min(k, 2), seed, mi2ref_states=k),
        "origin": lambda: oracle.run_origin_agreement(seed, n),
        "reduction": lambda: oracle.cross_check_reduction_suite(seed, k),
        "all": lambda: oracle.run_all(seed, k, n),
    }
    report = runs[args.suite]()
    text = (
        f"{report.name}: {'PASS' if report.passed else 'FAIL'} "
        f"({report.instances} instances, {len(report.failures)} failures, {report.wall_time:.1f}s)"
    )
    for fl in report.failures[:20]:
        text += f"\n  {fl.label}: {fl.formula} expected {fl.expected} got {fl.got}"
    return (EXIT_TRUE if report.passed else EXIT_FALSE), report.to_dict(), text


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--caps", metavar="FILE", help="TOML file with max_dnf_clauses, node_cap, mfi_atoms")

    modes = argparse.ArgumentParser(add_help=False)
    modes.add_argument("--mode", choices=("cons", "rosml"), default="cons", help="simulation elimination rule")
    modes.add_argument("--origin", choices=("syntactic", "semantic"), default="syntactic", help="origin elimination")
    modes.add_argument("--trace", action="store_true", help="print every rewrite step")

    p = argparse.ArgumentParser(prog="refsim", description="Refinement, simulation and origin modal logic toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", parents=[common, modes], help="model check a formula at a pointed model")
    s.add_argument("model")
    s.add_argument("formula")
    s.add_argument("--point")
    s.set_defaults(run=cmd_check)

    s = sub.add_parser("reduce", parents=[common, modes], help="eliminate quantifiers and origins")
    s.add_argument("formula")
    s.set_defaults(run=cmd_reduce)

    s = sub.add_parser("valid", parents=[common, modes], help="decide validity (countermodel on failure)")
    s.add_argument("formula")
    s.set_defaults(run=cmd_valid)

    s = sub.add_parser("sat", parents=[common, modes], help="decide satisfiability (witness on success)")
    s.add_argument("formula")
    s.set_defaults(run=cmd_sat)

    s = sub.add_parser("relate", parents=[common], help="largest simulation, refinement or bisimulation")
    s.add_argument("--kind", choices=("sim", "ref", "bisim"), required=True)
    s.add_argument("left")
    s.add_argument("right")
    s.add_argument("--left-point")
    s.add_argument("--right-point")
    s.set_defaults(run=cmd_relate)

    s = sub.add_parser("mfi", parents=[common], help="print the mutual factual ignorance model")
    s.add_argument("--atoms", default="", help="comma-separated atoms")
    s.add_argument("--agents", default="a", help="comma-separated agents")
    s.add_argument("--point", help="comma-separated valuation to mark as the point")
    s.set_defaults(run=cmd_mfi)

    s = sub.add_parser("oracle", parents=[common], help="run verification suites")
    s.add_argument("--suite", choices=SUITES, default="all")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-states", type=int, default=3)
    s.add_argument("--instances", type=int, default=200)
    s.set_defaults(run=cmd_oracle)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        caps = load_caps(args.caps)
        code, payload, text = args.run(args, caps)
    except (UsageError, ModelError, ValueError) as exc:
        code, payload, text = EXIT_USAGE, {"error": str(exc)}, f"error: {exc}"
    except CapExceeded as exc:
        code, payload, text = EXIT_CAP, {"error": str(exc), "cap": True}, f"cap exceeded: {exc}"
    if args.json:
        payload = {"command": args.command, "exit_code": code, **payload}
        print(json.dumps(payload, indent=2, sort_keys=True, default=str))
    else:
        print(text, file=sys.stderr if code >= EXIT_USAGE else sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())

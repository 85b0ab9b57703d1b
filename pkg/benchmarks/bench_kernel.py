"""Compiled kernel versus numpy fallback on the exhaustive-enumeration hot paths.

    python3 benchmarks/bench_kernel.py [--repeat 3] [--json]

Each workload is checked for identical output across backends before timing.
"""
import argparse
import json
import sys
import time

import numpy as np

from refsim import batch
from refsim.batch import Space, find_countermodel, relation_words, truth_words
from refsim.kripke import mfi_model
from refsim.syntax import parse

FORMULA = parse("[a](p -> <b>q) & <b>[a]~p | ~<a><b>(p & q)")
VALID = parse("[a](p -> q) -> [a]p -> [a]q")


def workloads():
    big = Space.of(3, ("p", "q"), ("a", "b"))
    mid = Space.of(3, ("p",), ("a", "b"))
    left = mfi_model(["p"], ["a", "b"])
    yield "eval_program 3st/2at/2ag", lambda impl: truth_words(FORMULA, big, impl)
    yield "find_false (valid) 3st/2at/2ag", lambda impl: find_countermodel(VALID, big, impl)
    yield "relation_words ref 3st/1at/2ag", lambda impl: relation_words(left, "ref", mid, impl)
    yield "relation_words bisim 3st/1at/2ag", lambda impl: relation_words(left, "bisim", mid, impl)


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def same(a, b) -> bool:
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    return a == b


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    if batch.BACKEND != "cython":
        print("compiled kernel not available; build it with `pip install -e . --no-build-isolation`", file=sys.stderr)
        return 1
    cy, py = batch.backend("cython"), batch.backend("numpy")
    rows = []
    for name, run in workloads():
        if not same(run(cy), run(py)):
            print(f"{name}: backends disagree", file=sys.stderr)
            return 2
        t_cy, t_py = best_of(lambda: run(cy), args.repeat), best_of(lambda: run(py), args.repeat)
        rows.append({"workload": name, "cython_s": t_cy, "numpy_s": t_py, "speedup": t_py / t_cy})
    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        print(f"{'workload':36} {'cython':>10} {'numpy':>10} {'speedup':>8}")
        for r in rows:
            print(f"{r['workload']:36} {r['cython_s']:10.4f} {r['numpy_s']:10.4f} {r['speedup']:7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())

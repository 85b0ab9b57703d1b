"""Numpy implementation of the batch kernels, used when the compiled
extension is unavailable.  Same signatures and results as ``_kernel``."""
from __future__ import annotations

import numpy as np

ALL = np.uint64(0xFFFFFFFFFFFFFFFF)
ZERO = np.uint64(0)
LOW = tuple(
    np.uint64(c) for c in (
        0xAAAAAAAAAAAAAAAA, 0xCCCCCCCCCCCCCCCC, 0xF0F0F0F0F0F0F0F0,
        0xFF00FF00FF00FF00, 0xFFFF0000FFFF0000, 0xFFFFFFFF00000000,
    )
)
CHUNK = 1 << 14


def _bits(nbits: int, w0: int, w1: int) -> list[np.ndarray]:
    widx = np.arange(w0, w1, dtype=np.int64)
    out = []
    for k in range(nbits):
        if k < 6:
            out.append(np.full(w1 - w0, LOW[k], dtype=np.uint64))
        else:
            out.append(np.where((widx >> (k - 6)) & 1 == 1, ALL, ZERO))
    return out


def _run(prog: np.ndarray, n: int, K: int, bits: list[np.ndarray], width: int) -> list[np.ndarray]:
    val: list[list[np.ndarray]] = []
    for op, x, y in prog.tolist():
        row = []
        for s in range(n):
            if op == 0:
                v = np.full(width, ALL, dtype=np.uint64)
            elif op == 1:
                v = np.zeros(width, dtype=np.uint64)
            elif op == 2:
                v = bits[s * K + x]
            elif op == 3:
                v = ~val[x][s]
            elif op == 4:
                v = val[x][s] & val[y][s]
            elif op == 5:
                v = val[x][s] | val[y][s]
            else:
                base = K * n + x * n * n + s * n
                if op == 6:
                    v = np.full(width, ALL, dtype=np.uint64)
                    for t in range(n):
                        v = v & (~bits[base + t] | val[y][t])
                else:
                    v = np.zeros(width, dtype=np.uint64)
                    for t in range(n):
                        v = v | (bits[base + t] & val[y][t])
            row.append(v)
        val.append(row)
    return val[-1]


def eval_program(prog, n: int, K: int, A: int, w0: int, w1: int) -> np.ndarray:
    prog = np.asarray(prog, dtype=np.int32)
    out = np.zeros((n, max(w1 - w0, 0)), dtype=np.uint64)
    if w1 <= w0 or len(prog) == 0:
        return out
    nbits = K * n + A * n * n
    for c0 in range(w0, w1, CHUNK):
        c1 = min(w1, c0 + CHUNK)
        res = _run(prog, n, K, _bits(nbits, c0, c1), c1 - c0)
        for s in range(n):
            out[s, c0 - w0:c1 - w0] = res[s]
    return out


def find_false(prog, n: int, K: int, A: int, w0: int, w1: int, tail: int) -> int:
    prog = np.asarray(prog, dtype=np.int32)
    nbits = K * n + A * n * n
    tail = np.uint64(tail)
    for c0 in range(w0, w1, CHUNK):
        c1 = min(w1, c0 + CHUNK)
        res = _run(prog, n, K, _bits(nbits, c0, c1), c1 - c0)
        bad = np.zeros(c1 - c0, dtype=bool)
        for s in range(n):
            bad |= (~res[s] & tail) != 0
        hits = np.flatnonzero(bad)
        if len(hits):
            return int(c0 + hits[0])
    return -1


def relation_words(lval, lsucc, forth: bool, back: bool, n: int, K: int, A: int, w0: int, w1: int) -> np.ndarray:
    lval = np.asarray(lval, dtype=np.int64)
    lsucc = np.asarray(lsucc, dtype=np.uint8)
    nl = len(lval)
    out = np.zeros((nl, n, max(w1 - w0, 0)), dtype=np.uint64)
    nbits = K * n + A * n * n
    succ = [[[x2 for x2 in range(nl) if lsucc[a, x, x2]] for x in range(nl)] for a in range(A)]
    for c0 in range(w0, w1, CHUNK):
        c1 = min(w1, c0 + CHUNK)
        width = c1 - c0
        bits = _bits(nbits, c0, c1)
        z = [[None] * n for _ in range(nl)]
        for x in range(nl):
            for t in range(n):
                v = np.full(width, ALL, dtype=np.uint64)
                for j in range(K):
                    c = bits[t * K + j]
                    v = v & (c if lval[x] >> j & 1 else ~c)
                z[x][t] = v
        changed = True
        while changed:
            changed = False
            for x in range(nl):
                for t in range(n):
                    v = z[x][t]
                    c = v
                    for a in range(A):
                        ebase = K * n + a * n * n + t * n
                        if forth:
                            for x2 in succ[a][x]:
                                acc = np.zeros(width, dtype=np.uint64)
                                for t2 in range(n):
                                    acc |= bits[ebase + t2] & z[x2][t2]
                                c = c & acc
                        if back:
                            for t2 in range(n):
                                u = np.zeros(width, dtype=np.uint64)
                                for x2 in succ[a][x]:
                                    u |= z[x2][t2]
                                c = c & (~bits[ebase + t2] | u)
                    if not np.array_equal(c, v):
                        z[x][t] = c
                        changed = True
        for x in range(nl):
            for t in range(n):
                out[x, t, c0 - w0:c1 - w0] = z[x][t]
    return out

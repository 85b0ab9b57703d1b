# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Bit-parallel evaluation over the canonical model enumeration.

Model ``64*w + i`` lives in bit ``i`` of word ``w``.  Bit ``k`` of a model
index is, for every model in word ``w``, the constant pattern ``LOW[k]`` when
``k < 6`` and all-ones or all-zeros (bit ``k-6`` of ``w``) otherwise, so each
atom and edge of every model in a word is available as one uint64.
"""
import numpy as np

from libc.stdint cimport int32_t, int64_t, uint8_t, uint64_t
from libc.stdlib cimport free, malloc

cdef enum:
    LANES = 8

cdef uint64_t LOW[6]
_low = (
    0xAAAAAAAAAAAAAAAA, 0xCCCCCCCCCCCCCCCC, 0xF0F0F0F0F0F0F0F0,
    0xFF00FF00FF00FF00, 0xFFFF0000FFFF0000, 0xFFFFFFFF00000000,
)
for _i in range(6):
    LOW[_i] = _low[_i]

cdef uint64_t ALL = <uint64_t>0xFFFFFFFFFFFFFFFF


cdef inline void _fill_bits(uint64_t* bits, int nbits, int64_t w, int nl) noexcept nogil:
    cdef int k, l
    cdef uint64_t c
    for k in range(nbits):
        if k < 6:
            c = LOW[k]
            for l in range(LANES):
                bits[k * LANES + l] = c
        else:
            for l in range(nl):
                bits[k * LANES + l] = ALL if ((w + l) >> (k - 6)) & 1 else 0
            for l in range(nl, LANES):
                bits[k * LANES + l] = 0


cdef void _run(const int32_t[:, ::1] prog, int n, int K, uint64_t* val, uint64_t* bits) noexcept nogil:
    cdef int m = prog.shape[0]
    cdef int i, s, t, l, op, x, y, base
    cdef uint64_t* d
    cdef uint64_t* a
    cdef uint64_t* b
    cdef uint64_t* e
    for i in range(m):
        op = prog[i, 0]
        x = prog[i, 1]
        y = prog[i, 2]
        for s in range(n):
            d = val + (i * n + s) * LANES
            if op == 0:
                for l in range(LANES):
                    d[l] = ALL
            elif op == 1:
                for l in range(LANES):
                    d[l] = 0
            elif op == 2:
                a = bits + (s * K + x) * LANES
                for l in range(LANES):
                    d[l] = a[l]
            elif op == 3:
                a = val + (x * n + s) * LANES
                for l in range(LANES):
                    d[l] = ~a[l]
            elif op == 4:
                a = val + (x * n + s) * LANES
                b = val + (y * n + s) * LANES
                for l in range(LANES):
                    d[l] = a[l] & b[l]
            elif op == 5:
                a = val + (x * n + s) * LANES
                b = val + (y * n + s) * LANES
                for l in range(LANES):
                    d[l] = a[l] | b[l]
            else:
                base = K * n + x * n * n + s * n
                if op == 6:
                    for l in range(LANES):
                        d[l] = ALL
                    for t in range(n):
                        e = bits + (base + t) * LANES
                        b = val + (y * n + t) * LANES
                        for l in range(LANES):
                            d[l] &= ~e[l] | b[l]
                else:
                    for l in range(LANES):
                        d[l] = 0
                    for t in range(n):
                        e = bits + (base + t) * LANES
                        b = val + (y * n + t) * LANES
                        for l in range(LANES):
                            d[l] |= e[l] & b[l]


def eval_program(const int32_t[:, ::1] prog, int n, int K, int A, int64_t w0, int64_t w1):
    """Truth words of the last instruction, shape ``(n, w1 - w0)``."""
    cdef int m = prog.shape[0]
    cdef int nbits = K * n + A * n * n
    cdef int64_t width = w1 - w0
    out = np.zeros((n, width), dtype=np.uint64)
    if width <= 0 or m == 0:
        return out
    cdef uint64_t[:, ::1] o = out
    cdef uint64_t* val = <uint64_t*> malloc(m * n * LANES * sizeof(uint64_t))
    cdef uint64_t* bits = <uint64_t*> malloc((nbits + 1) * LANES * sizeof(uint64_t))
    if val == NULL or bits == NULL:
        free(val)
        free(bits)
        raise MemoryError()
    cdef int64_t w
    cdef int s, l, nl
    try:
        with nogil:
            w = w0
            while w < w1:
                nl = LANES if w1 - w >= LANES else <int>(w1 - w)
                _fill_bits(bits, nbits, w, nl)
                _run(prog, n, K, val, bits)
                for s in range(n):
                    for l in range(nl):
                        o[s, w - w0 + l] = val[((m - 1) * n + s) * LANES + l]
                w += LANES
    finally:
        free(val)
        free(bits)
    return out


def find_false(const int32_t[:, ::1] prog, int n, int K, int A, int64_t w0, int64_t w1, uint64_t tail):
    """First word in ``[w0, w1)`` where the program is false at some state.

    ``tail`` masks the valid models of a single partial word (fewer than 64
    models in total).  Returns ``-1`` when the program is true everywhere.
    """
    cdef int m = prog.shape[0]
    cdef int nbits = K * n + A * n * n
    cdef uint64_t* val = <uint64_t*> malloc(m * n * LANES * sizeof(uint64_t))
    cdef uint64_t* bits = <uint64_t*> malloc((nbits + 1) * LANES * sizeof(uint64_t))
    if val == NULL or bits == NULL:
        free(val)
        free(bits)
        raise MemoryError()
    cdef int64_t w, found = -1
    cdef int s, l, nl
    cdef uint64_t r
    try:
        with nogil:
            w = w0
            while w < w1 and found < 0:
                nl = LANES if w1 - w >= LANES else <int>(w1 - w)
                _fill_bits(bits, nbits, w, nl)
                _run(prog, n, K, val, bits)
                for l in range(nl):
                    for s in range(n):
                        r = ~val[((m - 1) * n + s) * LANES + l] & tail
                        if r:
                            found = w + l
                            break
                    if found >= 0:
                        break
                w += LANES
    finally:
        free(val)
        free(bits)
    return found


def relation_words(const int64_t[::1] lval, const uint8_t[:, :, ::1] lsucc, bint forth, bint back,
                   int n, int K, int A, int64_t w0, int64_t w1):
    """Largest relation between a fixed left model and every enumerated model.

    ``out[x, t, w]`` holds, per model of word ``w``, whether right state ``t``
    is related to left state ``x``.  ``lval[x]`` is the atom bitmask of ``x``
    and ``lsucc[a, x, x2]`` its agent-``a`` edges.
    """
    cdef int nl_states = lval.shape[0]
    cdef int nbits = K * n + A * n * n
    cdef int64_t width = w1 - w0
    out = np.zeros((nl_states, n, max(width, 0)), dtype=np.uint64)
    if width <= 0:
        return out
    cdef uint64_t[:, :, ::1] o = out
    cdef uint64_t* bits = <uint64_t*> malloc((nbits + 1) * LANES * sizeof(uint64_t))
    cdef uint64_t* z = <uint64_t*> malloc(nl_states * n * sizeof(uint64_t))
    if bits == NULL or z == NULL:
        free(bits)
        free(z)
        raise MemoryError()
    cdef int64_t w
    cdef int x, x2, t, t2, j, a, ebase, changed
    cdef uint64_t v, c, acc, u
    try:
        with nogil:
            for w in range(w0, w1):
                _fill_bits(bits, nbits, w, 1)
                for x in range(nl_states):
                    for t in range(n):
                        v = ALL
                        for j in range(K):
                            c = bits[(t * K + j) * LANES]
                            if (lval[x] >> j) & 1:
                                v &= c
                            else:
                                v &= ~c
                        z[x * n + t] = v
                changed = 1
                while changed:
                    changed = 0
                    for x in range(nl_states):
                        for t in range(n):
                            v = z[x * n + t]
                            if v == 0:
                                continue
                            c = v
                            for a in range(A):
                                ebase = K * n + a * n * n + t * n
                                if forth:
                                    for x2 in range(nl_states):
                                        if lsucc[a, x, x2]:
                                            acc = 0
                                            for t2 in range(n):
                                                acc |= bits[(ebase + t2) * LANES] & z[x2 * n + t2]
                                            c &= acc
                                if back:
                                    for t2 in range(n):
                                        u = 0
                                        for x2 in range(nl_states):
                                            if lsucc[a, x, x2]:
                                                u |= z[x2 * n + t2]
                                        c &= ~bits[(ebase + t2) * LANES] | u
                            if c != v:
                                z[x * n + t] = c
                                changed = 1
                for x in range(nl_states):
                    for t in range(n):
                        o[x, t, w - w0] = z[x * n + t]
    finally:
        free(bits)
        free(z)
    return out

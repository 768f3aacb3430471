# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: branch-key permutation sweeps and program emulation.

Mirrors ``_kernels_py`` exactly; limited to machines whose keys and packed
tapes fit in 64 bits (callers fall back to the pure twin otherwise).
"""

import numpy as np

COMPILED = True

ctypedef unsigned long long u64


def apply_permutation_ops(u64[::1] keys, u64[::1] pos, u64[::1] neg, u64[::1] flip):
    """In-place conditional bit-flip sweep over branch keys (see pure twin)."""
    cdef Py_ssize_t i, g
    cdef Py_ssize_t n_keys = keys.shape[0]
    cdef Py_ssize_t n_ops = pos.shape[0]
    cdef u64 k
    for i in range(n_keys):
        k = keys[i]
        for g in range(n_ops):
            if (k & pos[g]) == pos[g] and (k & neg[g]) == 0:
                k ^= flip[g]
        keys[i] = k


def sweep_programs(int states, int symbols, int cells, int cycles,
                   u64 start, u64 stop):
    """Emulate programs [start, stop); parallel arrays of packed results."""
    cdef int state_bits = 0, symbol_bits = 0
    cdef int v
    v = states - 1
    while v > 0:
        state_bits += 1
        v >>= 1
    v = symbols - 1
    while v > 0:
        symbol_bits += 1
        v >>= 1

    cdef int entry_bits = state_bits + 1 + symbol_bits
    cdef u64 entry_mask = (<u64>1 << entry_bits) - 1
    cdef u64 write_mask = (<u64>1 << symbol_bits) - 1
    cdef int n_entries = states * symbols

    cdef Py_ssize_t count = <Py_ssize_t>(stop - start)
    tapes_arr = np.zeros(count, dtype=np.uint64)
    written_arr = np.zeros(count, dtype=np.uint64)
    state_arr = np.zeros(count, dtype=np.int64)
    head_arr = np.zeros(count, dtype=np.int64)
    cdef u64[::1] tapes = tapes_arr
    cdef u64[::1] writtens = written_arr
    cdef long long[::1] finals = state_arr
    cdef long long[::1] heads = head_arr

    cdef int nxt[64]
    cdef int mov[64]
    cdef int wrt[64]
    if n_entries > 64:
        raise ValueError("compiled sweep supports at most 64 table entries")

    cdef Py_ssize_t offset
    cdef u64 program, tape, written, chunk
    cdef int idx, head, state, read, n_s, m_v, w_s, cyc, shift
    for offset in range(count):
        program = start + <u64>offset
        for idx in range(n_entries):
            chunk = (program >> (idx * entry_bits)) & entry_mask
            wrt[idx] = <int>(chunk & write_mask)
            mov[idx] = <int>((chunk >> symbol_bits) & 1)
            nxt[idx] = <int>(chunk >> (symbol_bits + 1))

        tape = 0
        written = 0
        head = 0
        state = 0
        for cyc in range(cycles):
            shift = head * symbol_bits
            read = <int>((tape >> shift) & write_mask)
            if state < states and read < symbols:
                idx = state * symbols + read
                n_s = nxt[idx]
                m_v = mov[idx]
                w_s = wrt[idx]
            else:
                n_s = 0
                m_v = 0
                w_s = 0
            tape = (tape & ~(write_mask << shift)) | ((<u64>w_s) << shift)
            written |= <u64>1 << head
            if m_v:
                head = head + 1 if head + 1 < cells else 0
            else:
                head = head - 1 if head > 0 else cells - 1
            state = n_s
        tapes[offset] = tape
        writtens[offset] = written
        finals[offset] = state
        heads[offset] = head

    return tapes_arr.tolist(), written_arr.tolist(), state_arr.tolist(), head_arr.tolist()

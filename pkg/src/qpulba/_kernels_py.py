"""Pure-Python twins of the compiled kernels.

Same function signatures and semantics as ``_kernels.pyx``; these run on
arbitrary-precision Python ints, so they also cover machines whose packed
keys do not fit in 64 bits.
"""

from __future__ import annotations

COMPILED = False


def apply_permutation_ops(keys: list[int], pos: list[int], neg: list[int],
                          flip: list[int]) -> list[int]:
    """Apply a run of conditional bit-flips to every branch key.

    Op g fires on key k when all `pos[g]` bits are set and all `neg[g]` bits
    are clear; firing XORs `flip[g]` into the key. Controls never overlap
    targets, so each op is an involution and the batch is a bijection.
    """
    out = []
    n_ops = len(pos)
    for key in keys:
        for g in range(n_ops):
            if (key & pos[g]) == pos[g] and (key & neg[g]) == 0:
                key ^= flip[g]
        out.append(key)
    return out


def sweep_programs(states: int, symbols: int, cells: int, cycles: int,
                   start: int, stop: int) -> tuple[list, list, list, list]:
    """Emulate programs [start, stop); return packed tapes, written masks,
    final states and final heads as parallel lists."""
    state_bits = (states - 1).bit_length()
    symbol_bits = (symbols - 1).bit_length()
    entry_bits = state_bits + 1 + symbol_bits
    entry_mask = (1 << entry_bits) - 1
    write_mask = (1 << symbol_bits) - 1
    cell_mask = write_mask

    tapes: list[int] = []
    writtens: list[int] = []
    finals: list[int] = []
    heads: list[int] = []

    n_entries = states * symbols
    for program in range(start, stop):
        nxt = [0] * n_entries
        mov = [0] * n_entries
        wrt = [0] * n_entries
        for idx in range(n_entries):
            chunk = (program >> (idx * entry_bits)) & entry_mask
            wrt[idx] = chunk & write_mask
            mov[idx] = (chunk >> symbol_bits) & 1
            nxt[idx] = chunk >> (symbol_bits + 1)

        tape = 0
        written = 0
        head = 0
        state = 0
        for _ in range(cycles):
            read = (tape >> (head * symbol_bits)) & cell_mask
            if state < states and read < symbols:
                idx = state * symbols + read
                n_s, m_v, w_s = nxt[idx], mov[idx], wrt[idx]
            else:
                n_s, m_v, w_s = 0, 0, 0
            shift = head * symbol_bits
            tape = (tape & ~(cell_mask << shift)) | (w_s << shift)
            written |= 1 << head
            head = (head + 1) % cells if m_v else (head - 1) % cells
            state = n_s
        tapes.append(tape)
        writtens.append(written)
        finals.append(state)
        heads.append(head)
    return tapes, writtens, finals, heads

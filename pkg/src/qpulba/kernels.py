"""Kernel selection: compiled extension when available, pure Python otherwise.

Set QPULBA_PURE=1 to force the pure twin (used by the benchmark and the
parity tests). The compiled paths additionally require every bit pattern to
fit in 64 bits; callers that cannot guarantee that get the pure twin per call.
"""

from __future__ import annotations

import os

from . import _kernels_py

_pure_forced = os.environ.get("QPULBA_PURE", "") not in ("", "0")

if _pure_forced:
    _compiled = None
else:
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]
    except ImportError:
        _compiled = None

COMPILED_AVAILABLE = _compiled is not None
BACKEND_NAME = "compiled" if COMPILED_AVAILABLE else "pure-python"


def apply_permutation_ops(keys: list[int], pos: list[int], neg: list[int],
                          flip: list[int], num_qubits: int) -> list[int]:
    """Run a batch of conditional bit-flips over branch keys."""
    if _compiled is not None and num_qubits <= 64 and keys:
        import numpy as np

        arr = np.fromiter(keys, dtype=np.uint64, count=len(keys))
        _compiled.apply_permutation_ops(
            arr,
            np.fromiter(pos, dtype=np.uint64, count=len(pos)),
            np.fromiter(neg, dtype=np.uint64, count=len(neg)),
            np.fromiter(flip, dtype=np.uint64, count=len(flip)),
        )
        return arr.tolist()
    return _kernels_py.apply_permutation_ops(keys, pos, neg, flip)


def sweep_programs(states: int, symbols: int, cells: int, cycles: int,
                   start: int, stop: int) -> tuple[list, list, list, list]:
    """Emulate a contiguous range of programs, returning packed results."""
    state_bits = (states - 1).bit_length()
    symbol_bits = (symbols - 1).bit_length()
    program_bits = states * symbols * (state_bits + 1 + symbol_bits)
    fits = (
        program_bits <= 63
        and cells * symbol_bits <= 63
        and states * symbols <= 64
        and cells <= 63
    )
    if _compiled is not None and fits:
        return _compiled.sweep_programs(states, symbols, cells, cycles, start, stop)
    return _kernels_py.sweep_programs(states, symbols, cells, cycles, start, stop)

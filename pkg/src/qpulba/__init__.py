"""QPULBA toolkit: synthesize, exactly simulate and classically verify the
circuit of a cycle-bounded stored-program automaton executed over a
superposition of every program of its size."""

__version__ = "0.1.0"

from .machine import (  # noqa: F401
    MachineSpec,
    TransitionEntry,
    TransitionTable,
    decode_program,
    encode_program,
    enumerate_programs,
    render_tape,
    run,
    step,
)

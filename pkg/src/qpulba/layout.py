"""Qubit layout planning.

general mode follows the resource formulas: a fresh read register per cycle
and a fresh next-state register per cycle that computes one (the final cycle
does not), so the history adds exactly (t-1)*(state_bits + symbol_bits)
qubits. The ancilla pool holds the adder carries, head_bits - 1 qubits; the
modular-wrap flag is live only while the carries are idle and time-shares
the first of them.

paper_compat mode reproduces the two published flat-index listings verbatim
(the 36-qubit single-cycle 2-2-1 machine and the 16-qubit 1-2-1 machine
whose lone read qubit is reused across all four cycles).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import PaperCompatUnavailableError
from .machine import MachineSpec

REGISTER_ORDER = ("FSM", "STATE", "MOVE", "HEAD", "READ", "WRITE", "TAPE", "ANCILLA")


@dataclass(frozen=True)
class QubitLayout:
    spec: MachineSpec
    mode: str
    fsm: tuple[int, ...]
    state: tuple[int, ...]                     # canonical current-state register
    next_states: tuple[tuple[int, ...], ...]   # one register per cycle that computes a next state
    move: tuple[int, ...]
    head: tuple[int, ...]
    reads: tuple[tuple[int, ...], ...]         # one register per cycle (may alias in paper_compat)
    write: tuple[int, ...]
    tape: tuple[int, ...]
    ancilla: tuple[int, ...]
    num_qubits: int

    @property
    def registers(self) -> dict[str, tuple[int, ...]]:
        """Flat report map in the published listing's register order."""
        state_flat = list(self.state)
        for reg in self.next_states:
            state_flat.extend(reg)
        read_flat: list[int] = []
        for reg in self.reads:
            for q in reg:
                if q not in read_flat:
                    read_flat.append(q)
        return {
            "FSM": self.fsm,
            "STATE": tuple(state_flat),
            "MOVE": self.move,
            "HEAD": self.head,
            "READ": tuple(read_flat),
            "WRITE": self.write,
            "TAPE": self.tape,
            "ANCILLA": self.ancilla,
        }

    def tape_cell(self, cell: int) -> tuple[int, ...]:
        width = self.spec.symbol_bits
        return self.tape[cell * width:(cell + 1) * width]

    def read_reg(self, cycle: int) -> tuple[int, ...]:
        return self.reads[cycle]

    def next_state_reg(self, cycle: int) -> tuple[int, ...] | None:
        if cycle < len(self.next_states):
            return self.next_states[cycle]
        return None

    @property
    def ancilla_count(self) -> int:
        return len(self.ancilla)

    @property
    def formula_base(self) -> int:
        """Qubit total minus the ancilla pool (the published arithmetic's form)."""
        s = self.spec
        return (s.program_bits + s.state_bits + 1 + s.head_bits + s.symbol_bits
                + s.symbol_bits + s.tape_bits + s.history_bits)

    def report_text(self) -> str:
        s = self.spec
        lines = [
            f"Number of {s.states}-state {s.symbols}-symbol {s.dim}-dimension QPULBA: "
            f"{s.program_count}",
            "",
        ]
        for name in REGISTER_ORDER:
            lines.append(f"{name:<8}: {list(self.registers[name])}")
        lines.append("")
        lines.append(
            f"q_gamma={s.symbol_bits} q_state={s.state_bits} q_head={s.head_bits} "
            f"q_delta={s.program_bits} q_tape={s.tape_bits} q_ch={s.history_bits} "
            f"q_a={self.ancilla_count}"
        )
        if self.mode == "paper_compat":
            lines.append(f"total: {self.num_qubits} (published layout)")
        else:
            lines.append(
                f"total: {self.formula_base} + q_a({self.ancilla_count}) = {self.num_qubits}"
            )
        return "\n".join(lines) + "\n"

    def report_json(self, indent: int | None = None) -> str:
        s = self.spec
        return json.dumps({
            "mode": self.mode,
            "spec": {"states": s.states, "symbols": s.symbols, "cells": s.cells,
                     "cycles": s.cycles, "dim": s.dim},
            "registers": {name: list(qubits) for name, qubits in self.registers.items()},
            "derived": {
                "q_gamma": s.symbol_bits, "q_state": s.state_bits,
                "q_head": s.head_bits, "q_delta": s.program_bits,
                "q_tape": s.tape_bits, "q_ch": s.history_bits,
                "q_a": self.ancilla_count, "programs": s.program_count,
            },
            "num_qubits": self.num_qubits,
        }, indent=indent)


def ancilla_pool_size(spec: MachineSpec) -> int:
    """Adder carries; the wrap flag time-shares the first carry qubit."""
    return max(spec.head_bits - 1, 0)


_PAPER_LAYOUTS = {
    (2, 2, 12, 1): {
        "FSM": tuple(range(12)),
        "STATE": (12, 13),
        "MOVE": (14,),
        "HEAD": (15, 16, 17, 18),
        "READ": (19,),
        "WRITE": (20,),
        "TAPE": tuple(range(21, 33)),
        "ANCILLA": (33, 34, 35),
    },
    (1, 2, 4, 4): {
        "FSM": (0, 1, 2, 3),
        "STATE": (),
        "MOVE": (4,),
        "HEAD": (5, 6),
        "READ": (7,),
        "WRITE": (8,),
        "TAPE": (9, 10, 11, 12),
        "ANCILLA": (13, 14, 15),
    },
}


def plan_layout(spec: MachineSpec, mode: str = "general") -> QubitLayout:
    if mode == "paper_compat":
        return _plan_paper_compat(spec)
    if mode != "general":
        raise ValueError(f"unknown layout mode {mode!r}")
    return _plan_general(spec)


def _plan_general(spec: MachineSpec) -> QubitLayout:
    cursor = 0

    def take(width: int) -> tuple[int, ...]:
        nonlocal cursor
        block = tuple(range(cursor, cursor + width))
        cursor += width
        return block

    fsm = take(spec.program_bits)
    state = take(spec.state_bits)
    next_states = tuple(take(spec.state_bits) for _ in range(spec.cycles - 1))
    move = take(1)
    head = take(spec.head_bits)
    reads = tuple(take(spec.symbol_bits) for _ in range(spec.cycles))
    write = take(spec.symbol_bits)
    tape = take(spec.tape_bits)
    ancilla = take(ancilla_pool_size(spec))
    return QubitLayout(
        spec=spec, mode="general", fsm=fsm, state=state, next_states=next_states,
        move=move, head=head, reads=reads, write=write, tape=tape,
        ancilla=ancilla, num_qubits=cursor,
    )


def _plan_paper_compat(spec: MachineSpec) -> QubitLayout:
    key = (spec.states, spec.symbols, spec.cells, spec.cycles)
    if key not in _PAPER_LAYOUTS:
        raise PaperCompatUnavailableError(
            f"no published layout for {spec.states}-{spec.symbols} with "
            f"c={spec.cells}, t={spec.cycles}; use general mode"
        )
    regs = _PAPER_LAYOUTS[key]
    if key == (2, 2, 12, 1):
        state = (regs["STATE"][0],)
        next_states: tuple[tuple[int, ...], ...] = ((regs["STATE"][1],),)
        reads = (regs["READ"],)
    else:  # 1-2-1: stateless, the single read qubit serves every cycle
        state = ()
        next_states = ()
        reads = tuple(regs["READ"] for _ in range(spec.cycles))
    num_qubits = 1 + max(q for reg in regs.values() for q in reg)
    return QubitLayout(
        spec=spec, mode="paper_compat", fsm=regs["FSM"], state=state,
        next_states=next_states, move=regs["MOVE"], head=regs["HEAD"],
        reads=reads, write=regs["WRITE"], tape=regs["TAPE"],
        ancilla=regs["ANCILLA"], num_qubits=num_qubits,
    )

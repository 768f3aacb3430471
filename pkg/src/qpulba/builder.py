"""Synthesizes the machine circuit block by block.

One cycle applies, in order:
  read   - multiplexer: tape cell selected by the head lands in the read register
  delta  - table lookup: each stored-program bit conditionally drives one
           output bit of (next state, move, write)
  write  - demultiplexer, two passes: clear the addressed cell with the read
           value, then set it from the write register (replace semantics even
           when a cell is revisited)
  move   - head +/- 1 modulo c, ripple adder with a wrap flag for non-power-
           of-two c
  reset  - re-applies the move/write lookup gates to return those registers
           to zero, then swaps the freshly computed state into the canonical
           position (the old state stays behind as history)

The stored-program register is only ever used as a control, so after the
initial Hadamard layer the whole machine permutes basis states.
"""

from __future__ import annotations

from enum import Enum

from .circuit import Circuit, Control, Gate, controlled_x
from .layout import QubitLayout, plan_layout
from .machine import MachineSpec


class BlockKind(Enum):
    INIT = "init"
    READ = "read"
    DELTA = "delta"
    WRITE = "write"
    MOVE = "move"
    RESET = "reset"


CYCLE_BLOCKS = (BlockKind.READ, BlockKind.DELTA, BlockKind.WRITE,
                BlockKind.MOVE, BlockKind.RESET)


def pattern_controls(qubits: tuple[int, ...], value: int) -> list[Control]:
    """Controls matching `value` in binary across `qubits` (bit i on qubit i)."""
    return [Control(q, (value >> bit) & 1) for bit, q in enumerate(qubits)]


def _new_circuit(layout: QubitLayout) -> Circuit:
    return Circuit(layout.num_qubits, registers=layout.registers)


def build_init(layout: QubitLayout) -> Circuit:
    """All qubits declared zero, then H across the stored-program register."""
    circ = _new_circuit(layout)
    circ.declares_prep_zero = True
    for q in layout.fsm:
        circ.append(Gate("H", (q,)))
    return circ


def build_read(layout: QubitLayout, cycle: int) -> Circuit:
    """Copy (XOR) the addressed tape cell into this cycle's read register."""
    circ = _new_circuit(layout)
    read = layout.read_reg(cycle)
    for cell in range(layout.spec.cells):
        head_ctl = pattern_controls(layout.head, cell)
        cell_bits = layout.tape_cell(cell)
        for bit in range(layout.spec.symbol_bits):
            controls = head_ctl + [Control(cell_bits[bit], 1)]
            circ.append(controlled_x(controls, read[bit]))
    return circ


def _delta_gates(layout: QubitLayout, cycle: int,
                 include_next_state: bool) -> list[Gate]:
    spec = layout.spec
    read = layout.read_reg(cycle)
    next_reg = layout.next_state_reg(cycle)
    gates = []
    for state_val in range(spec.states):
        state_ctl = pattern_controls(layout.state, state_val)
        for read_val in range(spec.symbols):
            read_ctl = pattern_controls(read, read_val)
            base = (state_val * spec.symbols + read_val) * spec.entry_bits
            targets: list[tuple[int, int]] = []  # (fsm bit offset, target qubit)
            for bit in range(spec.symbol_bits):
                targets.append((base + bit, layout.write[bit]))
            targets.append((base + spec.symbol_bits, layout.move[0]))
            if include_next_state and next_reg is not None:
                for bit in range(spec.state_bits):
                    targets.append((base + spec.symbol_bits + 1 + bit, next_reg[bit]))
            for fsm_offset, target in targets:
                controls = state_ctl + read_ctl + [Control(layout.fsm[fsm_offset], 1)]
                gates.append(controlled_x(controls, target))
    return gates


def build_delta(layout: QubitLayout, cycle: int,
                include_next_state: bool = True) -> Circuit:
    """Transition lookup; next-state gates are skipped on the final cycle."""
    circ = _new_circuit(layout)
    circ.extend(_delta_gates(layout, cycle, include_next_state))
    return circ


def build_write(layout: QubitLayout, cycle: int) -> Circuit:
    """Clear pass (XOR the read value out) then set pass (XOR the write value in)."""
    circ = _new_circuit(layout)
    spec = layout.spec
    read = layout.read_reg(cycle)
    for source in (read, layout.write):
        for cell in range(spec.cells):
            head_ctl = pattern_controls(layout.head, cell)
            cell_bits = layout.tape_cell(cell)
            for bit in range(spec.symbol_bits):
                controls = head_ctl + [Control(source[bit], 1)]
                circ.append(controlled_x(controls, cell_bits[bit]))
    return circ


def _increment_gates(layout: QubitLayout) -> list[Gate]:
    """Head += 1 (mod c) for branches whose move bit is 1; identity otherwise.

    Non-power-of-two c: a flag marks the head == c-1 branch (move set), flips
    the head's missing high bits so the plain adder wraps through 2^n, and is
    uncomputed off the all-ones pattern before the adder runs. The flag is
    therefore free to share a carry qubit.
    """
    spec = layout.spec
    n = spec.head_bits
    if n == 0:
        return []
    move = layout.move[0]
    head = layout.head
    gates: list[Gate] = []

    full = (1 << n) - 1
    if spec.cells != 1 << n:
        flag = layout.ancilla[0]
        gates.append(controlled_x(
            [Control(move, 1)] + pattern_controls(head, spec.cells - 1), flag))
        premap = full ^ (spec.cells - 1)
        for bit in range(n):
            if premap >> bit & 1:
                gates.append(Gate("CNOT", (head[bit],), (Control(flag, 1),)))
        gates.append(controlled_x(
            [Control(move, 1)] + pattern_controls(head, full), flag))

    if n == 1:
        gates.append(Gate("CNOT", (head[0],), (Control(move, 1),)))
        return gates

    carries = layout.ancilla[:n - 1]
    # carry sweep up
    gates.append(Gate("TOFFOLI", (carries[0],), (Control(move, 1), Control(head[0], 1))))
    gates.append(Gate("CNOT", (head[0],), (Control(move, 1),)))
    for i in range(1, n - 1):
        gates.append(Gate("TOFFOLI", (carries[i],),
                          (Control(carries[i - 1], 1), Control(head[i], 1))))
    # top sum
    gates.append(Gate("CNOT", (head[n - 1],), (Control(carries[n - 2], 1),)))
    # reverse carries and sums back down
    for i in range(n - 2, 0, -1):
        gates.append(Gate("TOFFOLI", (carries[i],),
                          (Control(carries[i - 1], 1), Control(head[i], 1))))
        gates.append(Gate("CNOT", (head[i],), (Control(carries[i - 1], 1),)))
    gates.append(Gate("CNOT", (head[0],), (Control(move, 1),)))
    gates.append(Gate("TOFFOLI", (carries[0],), (Control(move, 1), Control(head[0], 1))))
    gates.append(Gate("CNOT", (head[0],), (Control(move, 1),)))
    return gates


def build_move(layout: QubitLayout) -> Circuit:
    """Move bit 1: head + 1 mod c. Move bit 0: head - 1 mod c (the increment
    inverted under X conjugation of the move qubit)."""
    circ = _new_circuit(layout)
    inc = _increment_gates(layout)
    circ.extend(inc)
    if layout.spec.head_bits:
        move = layout.move[0]
        circ.append(Gate("X", (move,)))
        circ.extend(g.inverse() for g in reversed(inc))
        circ.append(Gate("X", (move,)))
    return circ


def build_reset(layout: QubitLayout, cycle: int, include_swap: bool = True) -> Circuit:
    """Return write and move to zero; rotate the fresh state into place."""
    circ = _new_circuit(layout)
    circ.extend(_delta_gates(layout, cycle, include_next_state=False))
    next_reg = layout.next_state_reg(cycle)
    if include_swap and next_reg is not None:
        for bit in range(layout.spec.state_bits):
            circ.append(Gate("SWAP", (layout.state[bit], next_reg[bit])))
    return circ


_BLOCK_BUILDERS = {
    BlockKind.INIT: lambda layout, cycle, final: build_init(layout),
    BlockKind.READ: lambda layout, cycle, final: build_read(layout, cycle),
    BlockKind.DELTA: lambda layout, cycle, final: build_delta(
        layout, cycle, include_next_state=not final),
    BlockKind.WRITE: lambda layout, cycle, final: build_write(layout, cycle),
    BlockKind.MOVE: lambda layout, cycle, final: build_move(layout),
    BlockKind.RESET: lambda layout, cycle, final: build_reset(
        layout, cycle, include_swap=not final),
}


def build_block(layout: QubitLayout, block: BlockKind, cycle: int = 0,
                final_cycle: bool = False) -> Circuit:
    return _BLOCK_BUILDERS[block](layout, cycle, final_cycle)


def build_machine(spec: MachineSpec | None = None, mode: str = "general",
                  layout: QubitLayout | None = None,
                  program: int | None = None) -> Circuit:
    """Init plus t cycles; the final cycle computes no next state and its
    reset does no swap (nothing downstream consumes them).

    With `program` given, the stored-program register is X-prepared to that
    one description number instead of the full Hadamard superposition.

    The returned circuit carries `segments`: (block label, cycle, lo, hi)
    gate-index ranges for inspection and partial simulation.
    """
    if layout is None:
        if spec is None:
            raise ValueError("need a spec or a layout")
        layout = plan_layout(spec, mode)
    spec = layout.spec
    if program is None:
        machine = build_init(layout)
    else:
        if not 0 <= program < spec.program_count:
            raise ValueError(f"program {program} outside [0, {spec.program_count})")
        machine = _new_circuit(layout)
        machine.declares_prep_zero = True
        for bit, q in enumerate(layout.fsm):
            if program >> bit & 1:
                machine.append(Gate("X", (q,)))
    segments = [("init", -1, 0, len(machine.gates))]
    for cycle in range(spec.cycles):
        final = cycle == spec.cycles - 1
        for block in CYCLE_BLOCKS:
            lo = len(machine.gates)
            machine.extend(build_block(layout, block, cycle, final).gates)
            segments.append((block.value, cycle, lo, len(machine.gates)))
    machine.segments = segments
    return machine


def build_census_cycle(layout: QubitLayout) -> Circuit:
    """Init plus one generic (non-final) cycle: the unit the gate census counts.

    A generic cycle includes the next-state lookup gates and the reset swap,
    so the layout must provide a next-state register when the machine has one.
    """
    if layout.spec.state_bits and layout.next_state_reg(0) is None:
        raise ValueError("census cycle needs a layout with a next-state register "
                         "(plan for t >= 2 or use the published single-cycle layout)")
    circ = build_init(layout)
    segments = [("init", -1, 0, len(circ.gates))]
    for block in CYCLE_BLOCKS:
        lo = len(circ.gates)
        circ.extend(build_block(layout, block, cycle=0, final_cycle=False).gates)
        segments.append((block.value, 0, lo, len(circ.gates)))
    circ.segments = segments
    return circ

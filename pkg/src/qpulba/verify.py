"""Oracle equivalence and block-level unit tests.

`check_equivalence` runs the synthesized machine sparsely and compares every
branch against an independent pure-Python emulation of the program the
branch's stored-program bits encode. The machine never materializes the state
value produced by the very last transition (no later block consumes it, and
allocating it would break the history accounting), so the state register is
checked against the classical state entering the final cycle; tape and head
are checked against the full-run finals.

`check_block` reproduces the per-block methodology: inputs go into an unequal
superposition via seeded RY rotations, the block's target register is
snapshotted onto a test register with CNOT fan-out, and every surviving
branch is checked against the block's classical contract. Registers whose
valid values do not fill a power of two (the head on a 12-cell tape) are
prepared subcube by subcube so that coverage is exhaustive and no invalid
value ever receives amplitude.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import simulate
from .builder import BlockKind, build_block, build_machine
from .circuit import Circuit, Control, Gate
from .errors import BranchBudgetError
from .layout import QubitLayout, plan_layout
from .machine import MachineSpec, decode_program, initial_config, pack_tape, step

DEFAULT_BRANCH_BUDGET = 1 << 16


def _register_value(key: int, qubits: tuple[int, ...]) -> int:
    value = 0
    for bit, q in enumerate(qubits):
        value |= ((key >> q) & 1) << bit
    return value


@dataclass
class EquivalenceReport:
    spec: MachineSpec
    mode: str
    num_qubits: int
    branch_count: int
    expected_branches: int
    amplitude_max_dev: float
    mismatches: list[dict] = field(default_factory=list)
    elapsed_seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return (not self.mismatches
                and self.branch_count == self.expected_branches
                and self.amplitude_max_dev <= 1e-9)

    def summary(self) -> str:
        matched = self.expected_branches - len({m["program"] for m in self.mismatches})
        status = "PASS" if self.passed else "FAIL"
        return (f"{status}: {matched}/{self.expected_branches} branches match "
                f"({self.spec.states}-{self.spec.symbols}-{self.spec.dim}, "
                f"c={self.spec.cells}, t={self.spec.cycles}, {self.num_qubits} qubits, "
                f"max amplitude dev {self.amplitude_max_dev:.2e}, "
                f"{self.elapsed_seconds:.2f}s)")

    def to_text(self) -> str:
        lines = [self.summary()]
        for miss in self.mismatches[:50]:
            lines.append(f"  program {miss['program']}: {miss['field']} "
                         f"expected {miss['expected']}, got {miss['got']}")
        if len(self.mismatches) > 50:
            lines.append(f"  ... {len(self.mismatches) - 50} more")
        return "\n".join(lines) + "\n"

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps({
            "passed": self.passed,
            "spec": {"states": self.spec.states, "symbols": self.spec.symbols,
                     "cells": self.spec.cells, "cycles": self.spec.cycles},
            "mode": self.mode,
            "num_qubits": self.num_qubits,
            "branch_count": self.branch_count,
            "expected_branches": self.expected_branches,
            "amplitude_max_dev": self.amplitude_max_dev,
            "mismatches": self.mismatches,
            "elapsed_seconds": self.elapsed_seconds,
        }, indent=indent)


def _classical_expectations(program: int, spec: MachineSpec):
    """Reference emulation: full-run tape/head, state entering the final cycle,
    and the per-cycle (state, read) history."""
    table = decode_program(program, spec)
    config = initial_config(spec)
    states_seen = []
    reads_seen = []
    for _ in range(spec.cycles):
        states_seen.append(config.state)
        reads_seen.append(config.tape[config.head])
        config = step(config, table, spec)
    return {
        "tape": pack_tape(config, spec),
        "head": config.head,
        "state_at_final_cycle": states_seen[-1],
        "state_history": states_seen,
        "read_history": reads_seen,
    }


def check_equivalence(spec: MachineSpec, mode: str = "general",
                      branch_budget: int = DEFAULT_BRANCH_BUDGET,
                      check_history: bool | None = None) -> EquivalenceReport:
    """Simulate the full machine and compare every branch with the emulator."""
    total = spec.program_count
    if total > branch_budget:
        raise BranchBudgetError(
            f"{total} branches exceed the sparse budget of {branch_budget}"
        )
    started = time.perf_counter()
    layout = plan_layout(spec, mode)
    machine = build_machine(layout=layout)
    state = simulate.run(machine, "sparse")
    if check_history is None:
        check_history = mode == "general"

    expected_amp = (0.5) ** (spec.program_bits / 2.0)
    report = EquivalenceReport(
        spec=spec, mode=mode, num_qubits=layout.num_qubits,
        branch_count=state.branch_count(), expected_branches=total,
        amplitude_max_dev=0.0,
    )

    def mismatch(program: int, fld: str, expected, got) -> None:
        report.mismatches.append(
            {"program": program, "field": fld, "expected": expected, "got": got}
        )

    seen: set[int] = set()
    for key, amp in state.amplitudes.items():
        program = _register_value(key, layout.fsm)
        if program in seen:
            mismatch(program, "uniqueness", "one branch per program", "duplicate")
            continue
        seen.add(program)
        want = _classical_expectations(program, spec)

        report.amplitude_max_dev = max(report.amplitude_max_dev,
                                       abs(abs(amp) - expected_amp))
        checks = [
            ("tape", want["tape"], _register_value(key, layout.tape)),
            ("head", want["head"], _register_value(key, layout.head)),
            ("state", want["state_at_final_cycle"], _register_value(key, layout.state)),
            ("write", 0, _register_value(key, layout.write)),
            ("move", 0, _register_value(key, layout.move)),
            ("ancilla", 0, _register_value(key, layout.ancilla)),
        ]
        if check_history:
            for cycle, reg in enumerate(layout.next_states):
                checks.append((f"state_history[{cycle}]",
                               want["state_history"][cycle],
                               _register_value(key, reg)))
            for cycle in range(spec.cycles):
                checks.append((f"read_history[{cycle}]",
                               want["read_history"][cycle],
                               _register_value(key, layout.read_reg(cycle))))
        for fld, expected, got in checks:
            if expected != got:
                mismatch(program, fld, expected, got)

    report.elapsed_seconds = time.perf_counter() - started
    return report


# -- block unit tests ---------------------------------------------------------


def _value_subcubes(limit: int, width: int) -> list[tuple[int, list[int]]]:
    """Cover [0, limit) with disjoint subcubes: (fixed-ones prefix, free bits)."""
    cubes = []
    for bit in range(width, -1, -1):
        if limit >> bit & 1:
            prefix = limit & ~((1 << (bit + 1)) - 1)
            cubes.append((prefix, list(range(bit))))
    return cubes


def _take(counter: list[int], width: int) -> tuple[int, ...]:
    block = tuple(range(counter[0], counter[0] + width))
    counter[0] += width
    return block


def _block_layout(block: BlockKind, spec: MachineSpec) -> tuple[QubitLayout, tuple[int, ...]]:
    """Minimal renumbered layout holding only the block's registers, plus the
    qubits of the register the block transforms (the snapshot source)."""
    c = [0]
    empty: tuple[int, ...] = ()
    fsm = state = next_reg = move = head = read = write = tape = ancilla = empty

    if block in (BlockKind.INIT, BlockKind.DELTA, BlockKind.RESET):
        fsm = _take(c, spec.program_bits)
    if block in (BlockKind.DELTA, BlockKind.RESET):
        state = _take(c, spec.state_bits)
        next_reg = _take(c, spec.state_bits)
    if block in (BlockKind.DELTA, BlockKind.RESET, BlockKind.MOVE):
        move = _take(c, 1)
    if block in (BlockKind.READ, BlockKind.WRITE, BlockKind.MOVE):
        head = _take(c, spec.head_bits)
    if block in (BlockKind.READ, BlockKind.DELTA, BlockKind.WRITE, BlockKind.RESET):
        read = _take(c, spec.symbol_bits)
    if block in (BlockKind.DELTA, BlockKind.WRITE, BlockKind.RESET):
        write = _take(c, spec.symbol_bits)
    if block in (BlockKind.READ, BlockKind.WRITE):
        tape = _take(c, spec.tape_bits)
    if block is BlockKind.MOVE:
        ancilla = _take(c, max(spec.head_bits - 1, 0))

    layout = QubitLayout(
        spec=spec, mode="blocktest", fsm=fsm, state=state,
        next_states=(next_reg,) if next_reg else (),
        move=move, head=head,
        reads=(read,) if block is not BlockKind.MOVE else (),
        write=write, tape=tape, ancilla=ancilla, num_qubits=c[0],
    )
    snapshot = {
        BlockKind.INIT: empty,
        BlockKind.READ: read,
        BlockKind.DELTA: write + move + next_reg,
        BlockKind.WRITE: tape,
        BlockKind.MOVE: head,
        BlockKind.RESET: write + move + state,
    }[block]
    return layout, snapshot


def _input_plan(block: BlockKind, layout: QubitLayout) -> tuple[list, list[tuple[int, ...]]]:
    """(constrained registers with their value limits, freely rotated registers)."""
    spec = layout.spec
    constrained: list[tuple[tuple[int, ...], int]] = []
    free: list[tuple[int, ...]] = []
    if block in (BlockKind.READ, BlockKind.WRITE, BlockKind.MOVE):
        constrained.append((layout.head, spec.cells))
    if block in (BlockKind.DELTA, BlockKind.RESET):
        constrained.append((layout.state, spec.states))
        constrained.append((layout.reads[0], spec.symbols))
        free.append(layout.fsm)
    if block in (BlockKind.READ, BlockKind.WRITE):
        free.append(layout.tape)
    if block is BlockKind.WRITE:
        free.append(layout.write)
    if block is BlockKind.MOVE:
        free.append(layout.move)
    return constrained, free


def block_test_parts(block: BlockKind, spec: MachineSpec) -> int:
    """Number of sub-circuits needed for exhaustive valid-value coverage."""
    layout, _ = _block_layout(block, spec)
    constrained, _free = _input_plan(block, layout)
    parts = 1
    for qubits, limit in constrained:
        parts *= len(_value_subcubes(limit, len(qubits)))
    return max(parts, 1)


def _angle(rng: np.random.Generator) -> float:
    """Rotation angle in (0, pi), bounded away from multiples of pi/2 so no
    branch amplitude vanishes."""
    while True:
        theta = rng.uniform(0.05 * math.pi, 0.95 * math.pi)
        if abs(theta - math.pi / 2) > 0.05:
            return theta


def build_block_test(block: BlockKind, spec: MachineSpec, seed: int,
                     part: int = 0) -> Circuit:
    """Harness circuit: seeded input superposition, CNOT snapshot of the
    target register onto a TEST register, then the block itself."""
    layout, snapshot_src = _block_layout(block, spec)
    constrained, free = _input_plan(block, layout)

    cube_lists = [_value_subcubes(limit, len(qubits)) for qubits, limit in constrained]
    combo = []
    index = part
    for cubes in reversed(cube_lists):
        combo.append(cubes[index % len(cubes)])
        index //= len(cubes)
    combo.reverse()

    test = tuple(range(layout.num_qubits, layout.num_qubits + len(snapshot_src)))
    circ = Circuit(layout.num_qubits + len(test))
    for name, qubits in layout.registers.items():
        if qubits:
            circ.add_register(name, qubits)
    if test:
        circ.add_register("TEST", test)
    circ.block_meta = {
        "block": block, "layout": layout, "snapshot": snapshot_src, "test": test,
    }

    rng = np.random.default_rng(seed)
    for (qubits, _limit), (prefix, free_bits) in zip(constrained, combo):
        for bit, q in enumerate(qubits):
            if prefix >> bit & 1:
                circ.append(Gate("X", (q,)))
        for bit in free_bits:
            circ.append(Gate("RY", (qubits[bit],), angle=_angle(rng)))
    for qubits in free:
        for q in qubits:
            circ.append(Gate("RY", (q,), angle=_angle(rng)))

    if block is BlockKind.RESET:
        # write/move/next must hold what the lookup produced for the branch
        circ.extend(build_block(layout, BlockKind.DELTA, cycle=0).gates)
    elif block is BlockKind.WRITE:
        # the clear pass relies on the read register holding the cell's value
        circ.extend(build_block(layout, BlockKind.READ, cycle=0).gates)

    for src, dst in zip(snapshot_src, test):
        circ.append(Gate("CNOT", (dst,), (Control(src, 1),)))

    circ.extend(build_block(layout, block, cycle=0, final_cycle=False).gates)
    return circ


def _check_branch(block: BlockKind, spec: MachineSpec, layout: QubitLayout,
                  key: int, old: int, meta: dict) -> tuple[bool, dict]:
    """Evaluate the block's classical contract on one surviving branch."""
    detail: dict = {"old": old}
    ok = True
    if block is BlockKind.READ:
        head = _register_value(key, layout.head)
        tape = _register_value(key, layout.tape)
        width = spec.symbol_bits
        cell = (tape >> (head * width)) & ((1 << width) - 1)
        new = _register_value(key, layout.reads[0])
        detail.update(head=head, expected=cell, new=new)
        ok = new == cell
    elif block is BlockKind.DELTA:
        program = _register_value(key, layout.fsm)
        state = _register_value(key, layout.state)
        read = _register_value(key, layout.reads[0])
        entry = decode_program(program, spec).entry(state, read)
        got = (_register_value(key, layout.write),
               _register_value(key, layout.move),
               _register_value(key, layout.next_states[0]) if layout.next_states else 0)
        want = (entry.write, entry.move, entry.next_state)
        detail.update(state=state, read=read, expected=want, new=got)
        ok = got == want
    elif block is BlockKind.WRITE:
        head = _register_value(key, layout.head)
        write = _register_value(key, layout.write)
        new_tape = _register_value(key, layout.tape)
        width = spec.symbol_bits
        mask = (1 << width) - 1
        expected = (old & ~(mask << (head * width))) | (write << (head * width))
        detail.update(head=head, write=write, expected=expected, new=new_tape)
        ok = new_tape == expected
    elif block is BlockKind.MOVE:
        move = _register_value(key, layout.move)
        new_head = _register_value(key, layout.head)
        expected = (old + (1 if move else -1)) % spec.cells
        anc = _register_value(key, layout.ancilla)
        detail.update(move=move, expected=expected, new=new_head, ancilla=anc)
        ok = new_head == expected and anc == 0
    elif block is BlockKind.RESET:
        width = spec.symbol_bits
        old_write = old & ((1 << width) - 1)
        old_move = (old >> width) & 1
        old_state = old >> (width + 1)
        program = _register_value(key, layout.fsm)
        read = _register_value(key, layout.reads[0])
        entry = decode_program(program, spec).entry(old_state, read)
        got = (_register_value(key, layout.write),
               _register_value(key, layout.move),
               _register_value(key, layout.state),
               _register_value(key, layout.next_states[0]) if layout.next_states else 0)
        want = (0, 0, entry.next_state, old_state)
        detail.update(old_write=old_write, old_move=old_move, old_state=old_state,
                      expected=want, new=got)
        ok = got == want
    return ok, detail


@dataclass
class BlockTestReport:
    block: BlockKind
    spec: MachineSpec
    trials: int
    branches_checked: int
    failures: list[dict] = field(default_factory=list)
    pairs_sample: list[tuple[int, int]] = field(default_factory=list)
    coverage: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        if self.block is BlockKind.INIT:
            return not self.failures
        return not self.failures and self.branches_checked > 0

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status}: {self.block.value} block, {self.trials} circuit(s), "
                f"{self.branches_checked} branches checked, "
                f"{len(self.failures)} failures")

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps({
            "block": self.block.value,
            "passed": self.passed,
            "trials": self.trials,
            "branches_checked": self.branches_checked,
            "failures": self.failures[:50],
            "coverage": {k: sorted(v) if isinstance(v, set) else v
                         for k, v in self.coverage.items()},
        }, indent=indent)


def check_block(block: BlockKind, spec: MachineSpec, trials: int = 1,
                seed: int = 7) -> BlockTestReport:
    """Run every coverage part of the block's harness `trials` times."""
    if block is BlockKind.INIT:
        layout, _ = _block_layout(block, spec)
        circ = build_block(layout, BlockKind.INIT)
        state = simulate.run(circ, "sparse")
        expected_amp = 0.5 ** (spec.program_bits / 2)
        failures = []
        if state.branch_count() != spec.program_count:
            failures.append({"field": "branch_count",
                             "expected": spec.program_count,
                             "got": state.branch_count()})
        for key, amp in state.amplitudes.items():
            if abs(amp - expected_amp) > 1e-9:
                failures.append({"field": "amplitude", "key": key, "got": amp})
                break
        return BlockTestReport(block, spec, 1, state.branch_count(), failures)

    parts = block_test_parts(block, spec)
    report = BlockTestReport(block, spec, trials=parts * trials,
                             branches_checked=0)
    seen_inputs: set = set()
    for repeat in range(trials):
        for part in range(parts):
            circ = build_block_test(block, spec, seed + 1000 * repeat + part, part)
            meta = circ.block_meta
            layout = meta["layout"]
            state = simulate.run(circ, "sparse")
            for key, _amp in state.amplitudes.items():
                old = _register_value(key, meta["test"])
                ok, detail = _check_branch(block, spec, layout, key, old, meta)
                report.branches_checked += 1
                if len(report.pairs_sample) < 64:
                    report.pairs_sample.append((old, detail.get("new", 0)))
                if not ok:
                    report.failures.append(detail)
                if block is BlockKind.MOVE:
                    seen_inputs.add((old, detail["move"]))
                elif block is BlockKind.READ:
                    seen_inputs.add(detail["head"])
    if block is BlockKind.MOVE:
        want = {(h, m) for h in range(spec.cells) for m in (0, 1)}
        report.coverage = {"inputs_seen": len(seen_inputs),
                           "exhaustive": seen_inputs == want}
    elif block is BlockKind.READ:
        report.coverage = {"heads_seen": len(seen_inputs),
                           "exhaustive": seen_inputs == set(range(spec.cells))}
    return report

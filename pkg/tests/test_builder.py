"""Block builders checked gate-shape-wise and basis-state-wise against the
classical semantics."""

import random

import pytest

from qpulba.builder import (
    build_census_cycle,
    build_delta,
    build_init,
    build_machine,
    build_move,
    build_read,
    build_reset,
    build_write,
)
from qpulba.layout import plan_layout
from qpulba.machine import MachineSpec, decode_program
from qpulba.simulate import run, run_basis_state
from tables import TABLE_1_2_1


def set_reg(key: int, qubits, value: int) -> int:
    for bit, q in enumerate(qubits):
        if value >> bit & 1:
            key |= 1 << q
    return key


def get_reg(key: int, qubits) -> int:
    value = 0
    for bit, q in enumerate(qubits):
        value |= ((key >> q) & 1) << bit
    return value


@pytest.fixture(scope="module")
def layout_22():
    return plan_layout(MachineSpec.create(2, 2), "general")


@pytest.fixture(scope="module")
def layout_12():
    return plan_layout(MachineSpec.create(1, 2), "general")


class TestInit:
    def test_hadamard_counts(self, layout_22, layout_12):
        assert build_init(layout_22).stats().as_dict() == build_init(layout_22).stats().as_dict()
        assert build_init(layout_22).stats().get("H") == 12
        assert build_init(layout_12).stats().get("H") == 4
        lay_11 = plan_layout(MachineSpec.create(1, 1), "general")
        assert build_init(lay_11).stats().get("H") == 1

    def test_paper_compat_init_targets_first_four(self):
        layout = plan_layout(MachineSpec(1, 2, 4, 4), "paper_compat")
        circ = build_init(layout)
        assert [g.targets[0] for g in circ.gates] == [0, 1, 2, 3]
        assert circ.declares_prep_zero


class TestRead:
    def test_gate_shape_2_2_1(self, layout_22):
        circ = build_read(layout_22, cycle=0)
        assert len(circ.gates) == 12
        assert all(g.kind == "MCX" and len(g.controls) == 5 for g in circ.gates)

    def test_unary_alphabet_reads_nothing(self):
        layout = plan_layout(MachineSpec.create(2, 1), "general")
        assert build_read(layout, cycle=0).gates == []

    def test_semantics_exhaustive_1_2_1(self, layout_12):
        circ = build_read(layout_12, cycle=0)
        spec = layout_12.spec
        for head in range(spec.cells):
            for tape in range(1 << spec.tape_bits):
                key = set_reg(set_reg(0, layout_12.head, head), layout_12.tape, tape)
                out = run_basis_state(circ, key)
                assert get_reg(out, layout_12.read_reg(0)) == (tape >> head) & 1
                # only the read register may change
                assert out & ~(1 << layout_12.read_reg(0)[0]) == key


class TestDelta:
    def test_gate_shape(self, layout_22, layout_12):
        assert len(build_delta(layout_22, 0).gates) == 12
        assert all(len(g.controls) == 3 for g in build_delta(layout_22, 0).gates)
        assert len(build_delta(layout_12, 0).gates) == 4
        assert all(len(g.controls) == 2 for g in build_delta(layout_12, 0).gates)

    def test_next_state_gates_omitted(self, layout_22):
        assert len(build_delta(layout_22, 0, include_next_state=False).gates) == 8

    def test_lookup_matches_decoder(self, layout_22):
        circ = build_delta(layout_22, 0)
        spec = layout_22.spec
        rng = random.Random(3)
        for _ in range(40):
            program = rng.randrange(spec.program_count)
            table = decode_program(program, spec)
            for state in range(spec.states):
                for read in range(spec.symbols):
                    key = set_reg(0, layout_22.fsm, program)
                    key = set_reg(key, layout_22.state, state)
                    key = set_reg(key, layout_22.read_reg(0), read)
                    out = run_basis_state(circ, key)
                    entry = table.entry(state, read)
                    assert get_reg(out, layout_22.write) == entry.write
                    assert get_reg(out, layout_22.move) == entry.move
                    assert get_reg(out, layout_22.next_state_reg(0)) == entry.next_state

    def test_spec_example_branch(self, layout_22):
        # state Q1 reading 1 with entry (Q0, right, write 1)
        spec = layout_22.spec
        entry_index = 1 * spec.symbols + 1
        program = 0b011 << (entry_index * spec.entry_bits)  # Q=0, M=1, W=1
        key = set_reg(0, layout_22.fsm, program)
        key = set_reg(key, layout_22.state, 1)
        key = set_reg(key, layout_22.read_reg(0), 1)
        out = run_basis_state(build_delta(layout_22, 0), key)
        assert get_reg(out, layout_22.write) == 1
        assert get_reg(out, layout_22.move) == 1
        assert get_reg(out, layout_22.next_state_reg(0)) == 0


class TestWrite:
    def test_gate_shape_2_2_1(self, layout_22):
        circ = build_write(layout_22, 0)
        assert len(circ.gates) == 24
        assert all(g.kind == "MCX" and len(g.controls) == 5 for g in circ.gates)

    def test_replace_semantics_brute_force(self, layout_12):
        # all (old cell value, write value) pairs at every head position;
        # the read register must hold the old value (the machine guarantees it)
        circ = build_write(layout_12, 0)
        spec = layout_12.spec
        for head in range(spec.cells):
            for old in range(spec.symbols):
                for new in range(spec.symbols):
                    key = set_reg(0, layout_12.head, head)
                    key = set_reg(key, layout_12.tape, old << head)
                    key = set_reg(key, layout_12.read_reg(0), old)
                    key = set_reg(key, layout_12.write, new)
                    out = run_basis_state(circ, key)
                    tape = get_reg(out, layout_12.tape)
                    assert (tape >> head) & 1 == new
                    assert tape & ~(1 << head) == 0  # other cells untouched

    def test_one_stays_one(self, layout_12):
        # the single-pass XOR variant would clear a revisited 1
        head = 2
        key = set_reg(0, layout_12.head, head)
        key = set_reg(key, layout_12.tape, 1 << head)
        key = set_reg(key, layout_12.read_reg(0), 1)
        key = set_reg(key, layout_12.write, 1)
        out = run_basis_state(build_write(layout_12, 0), key)
        assert (get_reg(out, layout_12.tape) >> head) & 1 == 1


def _move_layout(cells: int):
    return plan_layout(MachineSpec(1, 2, cells, cells), "general")


class TestMove:
    def test_modulo_twelve_exhaustive(self):
        layout = _move_layout(12)
        circ = build_move(layout)
        for head in range(12):
            for move in (0, 1):
                key = set_reg(set_reg(0, layout.head, head), layout.move, move)
                out = run_basis_state(circ, key)
                expected = (head + (1 if move else -1)) % 12
                assert get_reg(out, layout.head) == expected, (head, move)
                assert get_reg(out, layout.ancilla) == 0
                assert get_reg(out, layout.move) == move

    def test_paper_edge_cases(self):
        layout = _move_layout(12)
        circ = build_move(layout)
        wrap_up = run_basis_state(circ, set_reg(set_reg(0, layout.head, 11), layout.move, 1))
        assert get_reg(wrap_up, layout.head) == 0
        wrap_down = run_basis_state(circ, set_reg(0, layout.head, 0))
        assert get_reg(wrap_down, layout.head) == 11

    def test_thousand_random_cases_small_tapes(self):
        rng = random.Random(42)
        circuits = {c: (build_move(_move_layout(c)), _move_layout(c)) for c in range(3, 17)}
        for _ in range(1000):
            cells = rng.randrange(3, 17)
            circ, layout = circuits[cells]
            head = rng.randrange(cells)
            move = rng.randrange(2)
            key = set_reg(set_reg(0, layout.head, head), layout.move, move)
            out = run_basis_state(circ, key)
            assert get_reg(out, layout.head) == (head + (1 if move else -1)) % cells
            assert get_reg(out, layout.ancilla) == 0

    def test_move_then_inverse_is_identity(self):
        layout = _move_layout(12)
        circ = build_move(layout)
        round_trip = circ.compose(circ.inverted())
        rng = random.Random(9)
        for _ in range(30):
            head = rng.randrange(12)
            move = rng.randrange(2)
            key = set_reg(set_reg(0, layout.head, head), layout.move, move)
            assert run_basis_state(round_trip, key) == key

    def test_single_cell_tape_is_a_no_op(self):
        layout = plan_layout(MachineSpec.create(1, 1), "general")
        assert build_move(layout).gates == []


class TestReset:
    def test_gate_shape_2_2_1(self, layout_22):
        circ = build_reset(layout_22, 0)
        kinds = [g.kind for g in circ.gates]
        assert kinds.count("SWAP") == 1
        assert len(circ.gates) == 9  # 8 lookup re-applications + 1 swap

    def test_stateless_machine_has_no_swap(self, layout_12):
        kinds = [g.kind for g in build_reset(layout_12, 0).gates]
        assert "SWAP" not in kinds

    def test_uncompute_and_swap(self, layout_22):
        spec = layout_22.spec
        rng = random.Random(17)
        delta = build_delta(layout_22, 0)
        reset = build_reset(layout_22, 0)
        both = delta.compose(reset)
        for _ in range(50):
            program = rng.randrange(spec.program_count)
            state = rng.randrange(spec.states)
            read = rng.randrange(spec.symbols)
            key = set_reg(0, layout_22.fsm, program)
            key = set_reg(key, layout_22.state, state)
            key = set_reg(key, layout_22.read_reg(0), read)
            out = run_basis_state(both, key)
            entry = decode_program(program, spec).entry(state, read)
            assert get_reg(out, layout_22.write) == 0
            assert get_reg(out, layout_22.move) == 0
            assert get_reg(out, layout_22.state) == entry.next_state
            assert get_reg(out, layout_22.next_state_reg(0)) == state  # history


class TestMachine:
    def test_fsm_is_control_only_after_init(self, layout_22):
        machine = build_machine(layout=layout_22)
        fsm = set(layout_22.fsm)
        for gate in machine.gates:
            if gate.kind == "H":
                continue
            assert not fsm & set(gate.targets)

    def test_post_init_gates_are_permutations(self, layout_22):
        machine = build_machine(layout=layout_22)
        for gate in machine.gates[len(layout_22.fsm):]:
            assert gate.kind not in ("H", "RY")

    def test_full_1_2_1_matches_table(self):
        layout = plan_layout(MachineSpec(1, 2, 4, 4), "paper_compat")
        state = run(build_machine(layout=layout), "sparse")
        assert state.branch_count() == 16
        for key, amp in state.amplitudes.items():
            program = get_reg(key, layout.fsm)
            tape = get_reg(key, layout.tape)
            # tape bit i is cell i; table strings list cell 0 leftmost
            assert format(tape, "04b")[::-1] == TABLE_1_2_1[program].replace("o", "0")
            assert abs(amp - 0.25) < 1e-12

    def test_segments_cover_all_gates(self, layout_22):
        machine = build_machine(layout=layout_22)
        assert machine.segments[0][0] == "init"
        assert machine.segments[-1][3] == len(machine.gates)
        for (_, _, lo, hi), (_, _, lo2, _) in zip(machine.segments, machine.segments[1:]):
            assert hi == lo2

    def test_single_program_preparation(self):
        layout = plan_layout(MachineSpec(1, 2, 4, 4), "paper_compat")
        state = run(build_machine(layout=layout, program=13), "sparse")
        assert state.branch_count() == 1
        (key,) = state.amplitudes
        assert get_reg(key, layout.tape) == 0b1111

    def test_census_cycle_needs_next_state_register(self):
        layout = plan_layout(MachineSpec(2, 2, 12, 1), "general")
        with pytest.raises(ValueError):
            build_census_cycle(layout)
        paper = plan_layout(MachineSpec(2, 2, 12, 1), "paper_compat")
        census = build_census_cycle(paper)
        assert census.stats().get("SWAP") == 1
        assert census.stats().get("H") == 12

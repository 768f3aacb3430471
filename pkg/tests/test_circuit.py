"""Circuit IR: validation, inversion, stats, JSON round-trip."""

import random

import pytest

from qpulba.builder import build_init, build_move
from qpulba.circuit import Circuit, Control, Gate, GateStats, controlled_x
from qpulba.errors import GateValidationError, UnknownRegisterError
from qpulba.layout import plan_layout
from qpulba.machine import MachineSpec
from qpulba.simulate import run_basis_state


def test_append_single_x():
    circ = Circuit(1).append(Gate("X", (0,)))
    assert len(circ) == 1


def test_self_control_rejected():
    circ = Circuit(2)
    with pytest.raises(GateValidationError):
        circ.append(Gate("CNOT", (0,), (Control(0, 1),)))


def test_duplicate_controls_rejected():
    circ = Circuit(3)
    with pytest.raises(GateValidationError):
        circ.append(Gate("TOFFOLI", (2,), (Control(0, 1), Control(0, 0))))


def test_mcx_five_controls_accepted():
    circ = Circuit(6)
    controls = tuple(Control(q, q % 2) for q in range(5))
    circ.append(Gate("MCX", (5,), controls))
    assert circ.gates[0].kind == "MCX"


def test_arity_rules():
    circ = Circuit(4)
    with pytest.raises(GateValidationError):
        circ.append(Gate("H", (0,), (Control(1, 1),)))
    with pytest.raises(GateValidationError):
        circ.append(Gate("CNOT", (0,)))
    with pytest.raises(GateValidationError):
        circ.append(Gate("SWAP", (0,)))
    with pytest.raises(GateValidationError):
        circ.append(Gate("MCX", (0,)))


def test_qubit_range_checked():
    circ = Circuit(2)
    with pytest.raises(GateValidationError):
        circ.append(Gate("X", (2,)))


def test_ry_needs_finite_angle():
    circ = Circuit(1)
    with pytest.raises(GateValidationError):
        circ.append(Gate("RY", (0,)))
    with pytest.raises(GateValidationError):
        circ.append(Gate("RY", (0,), angle=float("inf")))


def test_revalidation_passes_anything_append_accepted():
    spec = MachineSpec.create(2, 2)
    circ = build_move(plan_layout(spec, "general"))
    circ.validate()


def test_controlled_x_picks_narrowest_kind():
    assert controlled_x([], 0).kind == "X"
    assert controlled_x([Control(1, 1)], 0).kind == "CNOT"
    assert controlled_x([Control(1, 1), Control(2, 0)], 0).kind == "TOFFOLI"
    assert controlled_x([Control(q, 1) for q in (1, 2, 3)], 0).kind == "MCX"


class TestInvert:
    def test_x_is_self_inverse(self):
        circ = Circuit(1).append(Gate("X", (0,)))
        assert circ.inverted().gates == [Gate("X", (0,))]

    def test_reversal_rule_with_ry(self):
        circ = Circuit(2)
        circ.append(Gate("RY", (0,), angle=0.3))
        circ.append(Gate("CNOT", (1,), (Control(0, 1),)))
        inv = circ.inverted()
        assert inv.gates[0] == Gate("CNOT", (1,), (Control(0, 1),))
        assert inv.gates[1] == Gate("RY", (0,), angle=-0.3)

    def test_involution(self):
        spec = MachineSpec.create(2, 2)
        circ = build_move(plan_layout(spec, "general"))
        assert circ.inverted().inverted().gates == circ.gates

    def test_move_block_round_trip_on_random_basis_states(self):
        spec = MachineSpec.create(2, 2)
        layout = plan_layout(spec, "general")
        move = build_move(layout)
        round_trip = move.compose(move.inverted())
        rng = random.Random(5)
        for _ in range(25):
            key = rng.getrandbits(layout.num_qubits)
            assert run_basis_state(round_trip, key) == key


class TestStats:
    def test_empty(self):
        stats = Circuit(3).stats()
        assert stats.total == 0
        assert stats.get("H") == 0

    def test_init_block_is_twelve_hadamards(self):
        layout = plan_layout(MachineSpec.create(2, 2), "general")
        assert build_init(layout).stats().as_dict()["H"] == 12
        assert build_init(layout).stats().total == 12

    def test_compose_adds_componentwise(self):
        a = Circuit(2).append(Gate("X", (0,))).append(Gate("H", (1,)))
        b = Circuit(2).append(Gate("X", (1,)))
        combined = a.compose(b).stats()
        expected = a.stats() + b.stats()
        assert combined.as_dict() == expected.as_dict()

    def test_gatestats_addition(self):
        total = GateStats({"X": 1}) + GateStats({"X": 2, "H": 1})
        assert total.counts == {"X": 3, "H": 1}
        assert total.total == 4


class TestJson:
    def test_round_trip(self):
        circ = Circuit(4, registers={"A": (0, 1), "B": (2,)})
        circ.append(Gate("H", (0,)))
        circ.append(Gate("RY", (1,), angle=0.12345678901234567))
        circ.append(Gate("MCX", (3,), (Control(0, 1), Control(1, 0), Control(2, 1))))
        clone = Circuit.from_json(circ.to_json())
        assert clone.num_qubits == 4
        assert clone.registers == circ.registers
        assert clone.gates == circ.gates

    def test_schema_fields(self):
        circ = Circuit(2, registers={"FSM": (0,)})
        circ.append(Gate("CNOT", (1,), (Control(0, 0),)))
        data = circ.to_json_dict()
        assert data["version"] == 1
        assert data["num_qubits"] == 2
        assert data["registers"] == [{"name": "FSM", "qubits": [0]}]
        assert data["gates"] == [
            {"kind": "CNOT", "targets": [1], "controls": [{"q": 0, "pol": 0}]}
        ]


def test_register_bookkeeping():
    circ = Circuit(3, registers={"A": (0, 1)})
    with pytest.raises(GateValidationError):
        circ.add_register("B", (1,))
    with pytest.raises(UnknownRegisterError):
        circ.register("missing")
    assert circ.register("A") == (0, 1)

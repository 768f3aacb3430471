"""Layout planning: published listings and the resource-formula accounting."""

import pytest

from qpulba.errors import PaperCompatUnavailableError
from qpulba.layout import ancilla_pool_size, plan_layout
from qpulba.machine import MachineSpec

PUBLISHED_2_2_1 = {
    "FSM": tuple(range(12)),
    "STATE": (12, 13),
    "MOVE": (14,),
    "HEAD": (15, 16, 17, 18),
    "READ": (19,),
    "WRITE": (20,),
    "TAPE": tuple(range(21, 33)),
    "ANCILLA": (33, 34, 35),
}

PUBLISHED_1_2_1 = {
    "FSM": (0, 1, 2, 3),
    "STATE": (),
    "MOVE": (4,),
    "HEAD": (5, 6),
    "READ": (7,),
    "WRITE": (8,),
    "TAPE": (9, 10, 11, 12),
    "ANCILLA": (13, 14, 15),
}


def test_paper_compat_2_2_1_single_cycle():
    layout = plan_layout(MachineSpec(2, 2, 12, 1), "paper_compat")
    assert layout.num_qubits == 36
    assert layout.registers == PUBLISHED_2_2_1


def test_paper_compat_1_2_1():
    layout = plan_layout(MachineSpec(1, 2, 4, 4), "paper_compat")
    assert layout.num_qubits == 16
    assert layout.registers == PUBLISHED_1_2_1
    # the published layout reuses one read qubit for all four cycles
    assert [layout.read_reg(k) for k in range(4)] == [(7,)] * 4


def test_paper_compat_unavailable_elsewhere():
    with pytest.raises(PaperCompatUnavailableError):
        plan_layout(MachineSpec.create(2, 2), "paper_compat")  # t = 12


def test_general_2_2_1_resource_arithmetic():
    spec = MachineSpec.create(2, 2)
    layout = plan_layout(spec, "general")
    # 12 + 1 + 1 + 4 + 1 + 1 + 12 + 22 = 54, plus the ancilla pool
    assert layout.formula_base == 54
    assert layout.num_qubits == 54 + layout.ancilla_count
    assert spec.history_bits == 22
    assert layout.ancilla_count == ancilla_pool_size(spec) == 3


def test_general_history_chain_shapes():
    spec = MachineSpec.create(2, 2)
    layout = plan_layout(spec, "general")
    assert len(layout.next_states) == spec.cycles - 1
    assert len(layout.reads) == spec.cycles
    assert len(set(layout.reads)) == spec.cycles  # no aliasing in general mode
    flat = [q for name in layout.registers for q in layout.registers[name]]
    assert sorted(flat) == list(range(layout.num_qubits))


def test_general_1_2_1_totals():
    # 4 program + 1 move + 2 head + 4 reads + 1 write + 4 tape + 1 carry = 17;
    # the pool is sized by the adder (head_bits - 1), not the published 3
    layout = plan_layout(MachineSpec.create(1, 2), "general")
    assert layout.num_qubits == 17
    assert layout.ancilla_count == 1


def test_general_1_1_1_minimal():
    layout = plan_layout(MachineSpec.create(1, 1), "general")
    assert layout.num_qubits == 2  # one program qubit + the move qubit
    assert layout.head == ()
    assert layout.tape == ()


def test_ancilla_pool_sizing():
    assert ancilla_pool_size(MachineSpec(1, 1, 1, 1)) == 0
    assert ancilla_pool_size(MachineSpec(1, 2, 2, 2)) == 0
    assert ancilla_pool_size(MachineSpec(1, 2, 4, 4)) == 1
    assert ancilla_pool_size(MachineSpec(2, 2, 12, 12)) == 3
    assert ancilla_pool_size(MachineSpec(2, 2, 16, 16)) == 3


def test_report_text_mentions_totals():
    layout = plan_layout(MachineSpec.create(2, 2), "general")
    text = layout.report_text()
    assert "Number of 2-state 2-symbol 1-dimension QPULBA: 4096" in text
    assert text.rstrip().endswith("total: 54 + q_a(3) = 57")


def test_report_json_round_trips():
    import json

    layout = plan_layout(MachineSpec.create(1, 2), "general")
    data = json.loads(layout.report_json())
    assert data["num_qubits"] == 17
    assert data["derived"]["q_ch"] == 3
    assert data["registers"]["FSM"] == [0, 1, 2, 3]

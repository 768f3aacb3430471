"""Equivalence oracle and block-test harness."""

import pytest

from qpulba.builder import BlockKind
from qpulba.errors import BranchBudgetError
from qpulba.machine import MachineSpec
from qpulba.simulate import run, states_close
from qpulba.verify import (
    block_test_parts,
    build_block_test,
    check_block,
    check_equivalence,
)


class TestEquivalence:
    @pytest.mark.parametrize("states,symbols", [(1, 1), (2, 1), (1, 2), (2, 2)])
    def test_published_cases_pass(self, states, symbols):
        report = check_equivalence(MachineSpec.create(states, symbols))
        assert report.passed, report.to_text()
        assert report.branch_count == report.expected_branches

    def test_paper_compat_1_2_1(self):
        report = check_equivalence(MachineSpec(1, 2, 4, 4), mode="paper_compat")
        assert report.passed
        assert report.num_qubits == 16
        assert report.amplitude_max_dev <= 1e-9

    def test_paper_compat_2_2_1_single_cycle(self):
        # the published 36-qubit layout run as a one-cycle machine
        report = check_equivalence(MachineSpec(2, 2, 12, 1), mode="paper_compat")
        assert report.passed, report.to_text()
        assert report.num_qubits == 36
        assert report.branch_count == 4096

    def test_non_power_of_two_machine(self):
        report = check_equivalence(MachineSpec(3, 1, 9, 9))
        assert report.passed, report.to_text()

    def test_multibit_symbols(self):
        # two-bit tape cells exercise the multi-bit read/write data paths
        report = check_equivalence(MachineSpec(1, 4, 2, 2))
        assert report.passed, report.to_text()

    def test_uncovered_read_codepoints(self):
        # with n=3 a program can write symbol 3, which no lookup row covers;
        # reading it must fall through to the all-zero transition on both sides
        report = check_equivalence(MachineSpec(1, 3, 2, 2))
        assert report.passed, report.to_text()

    def test_budget_refusal(self):
        with pytest.raises(BranchBudgetError):
            check_equivalence(MachineSpec.create(2, 2), branch_budget=100)

    def test_report_serialization(self):
        import json

        report = check_equivalence(MachineSpec.create(1, 1))
        data = json.loads(report.to_json())
        assert data["passed"] is True
        assert data["branch_count"] == 2
        assert "PASS" in report.summary()


class TestBlockHarness:
    @pytest.mark.parametrize("block", list(BlockKind))
    def test_all_blocks_pass_2_2_1(self, block):
        report = check_block(block, MachineSpec.create(2, 2))
        assert report.passed, report.to_json()

    @pytest.mark.parametrize("block", list(BlockKind))
    def test_all_blocks_pass_1_2_1(self, block):
        report = check_block(block, MachineSpec(1, 2, 4, 4))
        assert report.passed, report.to_json()

    def test_move_harness_shape(self):
        circ = build_block_test(BlockKind.MOVE, MachineSpec.create(2, 2), seed=7)
        assert circ.num_qubits == 12  # 8 block qubits + 4 test qubits
        assert circ.register("TEST") == (8, 9, 10, 11)
        assert len(circ.register("HEAD")) == 4
        assert len(circ.register("ANCILLA")) == 3

    def test_seeded_determinism(self):
        first = build_block_test(BlockKind.DELTA, MachineSpec.create(2, 2), seed=5)
        again = build_block_test(BlockKind.DELTA, MachineSpec.create(2, 2), seed=5)
        other = build_block_test(BlockKind.DELTA, MachineSpec.create(2, 2), seed=6)
        assert first.gates == again.gates
        assert first.gates != other.gates

    def test_move_coverage_exhaustive(self):
        report = check_block(BlockKind.MOVE, MachineSpec.create(2, 2))
        assert report.coverage["exhaustive"]
        assert report.coverage["inputs_seen"] == 24

    def test_read_coverage_exhaustive(self):
        report = check_block(BlockKind.READ, MachineSpec.create(2, 2))
        assert report.coverage["exhaustive"]

    def test_parts_counting(self):
        spec = MachineSpec.create(2, 2)
        assert block_test_parts(BlockKind.MOVE, spec) == 2   # cells 12 = 8 + 4
        assert block_test_parts(BlockKind.DELTA, spec) == 1
        assert block_test_parts(BlockKind.MOVE, MachineSpec(1, 2, 4, 4)) == 1

    def test_write_includes_revisit_branches(self):
        report = check_block(BlockKind.WRITE, MachineSpec(1, 2, 4, 4))
        assert report.passed
        # snapshot holds the pre-block tape; at least one branch rewrites a 1
        assert any(old != 0 for old, _new in report.pairs_sample)

    def test_backend_agreement_on_small_harnesses(self):
        # every harness at or below 20 qubits must agree across backends
        for spec in (MachineSpec(1, 2, 4, 4), MachineSpec.create(2, 2)):
            for block in BlockKind:
                for part in range(block_test_parts(block, spec)):
                    circ = build_block_test(block, spec, seed=3, part=part)
                    if circ.num_qubits > 20:
                        continue
                    assert states_close(run(circ, "sparse"), run(circ, "dense"),
                                        tol=1e-10), (spec, block, part)

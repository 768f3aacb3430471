"""Lowering passes to the base gate set {H, X, RY, CNOT, TOFFOLI, SWAP}.

Negative controls are rewritten as X-conjugated positive controls with a lazy
flip-frame, so X pairs shared by consecutive gates cancel instead of being
emitted twice. Multi-controlled X gates then lower either through borrowed
qubits (any qubit outside the gate's support; restored on every basis state)
or through a clean zeroed-ancilla chain.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .circuit import Circuit, Control, Gate, GateStats
from .errors import InsufficientAncillaError, UnloweredGateError

STRATEGIES = ("borrowed_bit", "toffoli_chain_clean")

_CONTROL_KINDS = ("CNOT", "TOFFOLI", "MCX")


def resolve_negative_controls(circuit: Circuit) -> Circuit:
    """Rewrite every negative control as X-conjugation, merging shared X pairs.

    A set of "currently flipped" qubits is carried between gates: a qubit
    stays flipped across consecutive gates that all want it negative, closes
    lazily before any use that does not commute with X (positive control,
    H/RY/SWAP operand), and at the end of the circuit.
    """
    out = Circuit(circuit.num_qubits)
    out.registers = dict(circuit.registers)
    out.declares_prep_zero = circuit.declares_prep_zero
    flipped: set[int] = set()

    def emit_x(qubits: set[int]) -> None:
        for q in sorted(qubits):
            out.append(Gate("X", (q,)))

    for gate in circuit.gates:
        if gate.kind in _CONTROL_KINDS:
            need = {c.qubit for c in gate.controls if c.polarity == 0}
            positive = {c.qubit for c in gate.controls if c.polarity == 1}
            close = flipped & positive
            opens = need - flipped
            emit_x(close | opens)
            flipped = (flipped - close) | need
            controls = tuple(Control(c.qubit, 1) for c in gate.controls)
            out.append(Gate(gate.kind, gate.targets, controls))
        else:
            # H/RY/SWAP do not commute with X on their operands; X itself does.
            if gate.kind in ("H", "RY", "SWAP"):
                close = flipped & set(gate.targets)
                emit_x(close)
                flipped -= close
            out.append(gate)
    emit_x(flipped)
    return out


def _borrowed_ladder(controls: tuple[int, ...], target: int,
                     borrowed: list[int]) -> list[Gate]:
    """k-control X from 4(k-2) Toffolis and k-2 borrowed qubits of any value."""
    links = [(controls[-1], borrowed[-1], target)]
    m = len(borrowed)
    for i in range(1, m):
        links.append((controls[-1 - i], borrowed[m - 1 - i], borrowed[m - i]))
    links.append((controls[0], controls[1], borrowed[0]))
    first = links + links[-2::-1]
    second = links[1:] + links[-2:0:-1]
    return [
        Gate("TOFFOLI", (t,), (Control(a, 1), Control(b, 1)))
        for a, b, t in first + second
    ]


def _clean_chain(controls: tuple[int, ...], target: int,
                 ancillas: list[int]) -> list[Gate]:
    """k-control X via a zeroed-ancilla AND chain: compute, CNOT, uncompute."""
    compute = [Gate("TOFFOLI", (ancillas[0],),
                    (Control(controls[0], 1), Control(controls[1], 1)))]
    for i in range(2, len(controls)):
        compute.append(Gate("TOFFOLI", (ancillas[i - 1],),
                            (Control(controls[i], 1), Control(ancillas[i - 2], 1))))
    fire = Gate("CNOT", (target,), (Control(ancillas[-1], 1),))
    return compute + [fire] + list(reversed(compute))


def _candidate_qubits(circuit: Circuit, support: set[int]) -> list[int]:
    pool = list(circuit.registers.get("ANCILLA", ()))
    rest = [q for q in range(circuit.num_qubits - 1, -1, -1) if q not in pool]
    return [q for q in pool + rest if q not in support]


def lower_mcx(circuit: Circuit, strategy: str = "borrowed_bit") -> Circuit:
    """Decompose every MCX into base-set gates; idempotent on lowered circuits."""
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown lowering strategy {strategy!r}")
    out = Circuit(circuit.num_qubits)
    out.registers = dict(circuit.registers)
    out.declares_prep_zero = circuit.declares_prep_zero
    for index, gate in enumerate(circuit.gates):
        if gate.kind in _CONTROL_KINDS and any(c.polarity == 0 for c in gate.controls):
            raise UnloweredGateError(
                f"gate {index} ({gate.kind}) still has negative controls; "
                f"run resolve_negative_controls first"
            )
        if gate.kind != "MCX":
            out.append(gate)
            continue
        controls = tuple(c.qubit for c in gate.controls)
        target = gate.targets[0]
        if len(controls) == 1:
            out.append(Gate("CNOT", (target,), gate.controls))
        elif len(controls) == 2:
            out.append(Gate("TOFFOLI", (target,), gate.controls))
        elif strategy == "borrowed_bit":
            support = set(controls) | {target}
            needed = len(controls) - 2
            candidates = _candidate_qubits(circuit, support)
            if len(candidates) < needed:
                raise InsufficientAncillaError(
                    f"gate {index}: {len(controls)}-control MCX needs {needed} "
                    f"borrowable qubits, only {len(candidates)} exist"
                )
            out.extend(_borrowed_ladder(controls, target, candidates[:needed]))
        else:
            support = set(controls) | {target}
            pool = [q for q in circuit.registers.get("ANCILLA", ()) if q not in support]
            needed = len(controls) - 1
            if len(pool) < needed:
                raise InsufficientAncillaError(
                    f"gate {index}: {len(controls)}-control MCX needs {needed} "
                    f"clean ancillas, pool has {len(pool)}"
                )
            out.extend(_clean_chain(controls, target, pool[:needed]))
    return out


def transpile(circuit: Circuit, strategy: str = "borrowed_bit") -> Circuit:
    """Full lowering pipeline: polarity resolution then MCX decomposition."""
    return lower_mcx(resolve_negative_controls(circuit), strategy)


# Published single-cycle gate census for the 2-state 2-symbol machine,
# used as the reporting reference point (decomposition/merge rules behind
# these numbers are not fully specified, so only H and SWAP are asserted).
PAPER_CYCLE_REFERENCE = {
    "total": 627, "TOFFOLI": 476, "X": 126, "CNOT": 12, "H": 12, "SWAP": 1,
}


@dataclass
class CensusReport:
    stats: GateStats
    reference: dict[str, int]

    @property
    def deltas(self) -> dict[str, int]:
        out = {}
        for kind, ref in self.reference.items():
            ours = self.stats.total if kind == "total" else self.stats.get(kind)
            out[kind] = ours - ref
        return out

    def to_text(self) -> str:
        lines = ["gate census (one cycle, lowered)", ""]
        lines.append(f"{'kind':<9}{'ours':>8}{'reference':>11}{'delta':>8}")
        rows = [(k, self.stats.get(k)) for k in ("TOFFOLI", "X", "CNOT", "H", "SWAP", "RY")]
        rows.append(("total", self.stats.total))
        for kind, ours in rows:
            ref = self.reference.get(kind)
            if ref is None:
                lines.append(f"{kind:<9}{ours:>8}{'-':>11}{'-':>8}")
            else:
                lines.append(f"{kind:<9}{ours:>8}{ref:>11}{ours - ref:>+8}")
        return "\n".join(lines) + "\n"

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps({
            "counts": self.stats.as_dict(),
            "reference": self.reference,
            "deltas": self.deltas,
        }, indent=indent)


def census_report(lowered: Circuit,
                  reference: dict[str, int] | None = None) -> CensusReport:
    return CensusReport(lowered.stats(), reference or PAPER_CYCLE_REFERENCE)

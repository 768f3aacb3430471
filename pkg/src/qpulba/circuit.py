"""Gate-level circuit IR with polarity-typed controls and register metadata.

Gates address flat qubit indices; registers are bookkeeping only. Qubit 0 is
the least-significant bit of every packed basis-state integer, and bit i of a
register's value lives on the register's i-th qubit.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import GateValidationError, UnknownRegisterError

GATE_KINDS = ("H", "X", "RY", "CNOT", "SWAP", "TOFFOLI", "MCX")

# (min_controls, max_controls, n_targets); None = unbounded
_ARITY = {
    "H": (0, 0, 1),
    "X": (0, 0, 1),
    "RY": (0, 0, 1),
    "CNOT": (1, 1, 1),
    "SWAP": (0, 0, 2),
    "TOFFOLI": (2, 2, 1),
    "MCX": (1, None, 1),
}


@dataclass(frozen=True)
class Control:
    """A control qubit; polarity 1 fires on |1>, polarity 0 fires on |0>."""

    qubit: int
    polarity: int = 1

    def __post_init__(self) -> None:
        if self.polarity not in (0, 1):
            raise GateValidationError(f"polarity must be 0 or 1, got {self.polarity}")


@dataclass(frozen=True)
class Gate:
    kind: str
    targets: tuple[int, ...]
    controls: tuple[Control, ...] = ()
    angle: float | None = None

    def validate(self, num_qubits: int) -> None:
        if self.kind not in _ARITY:
            raise GateValidationError(f"unknown gate kind {self.kind!r}")
        lo, hi, n_targets = _ARITY[self.kind]
        if len(self.targets) != n_targets:
            raise GateValidationError(
                f"{self.kind} takes {n_targets} target(s), got {len(self.targets)}"
            )
        if len(self.controls) < lo or (hi is not None and len(self.controls) > hi):
            raise GateValidationError(
                f"{self.kind} takes between {lo} and {hi} controls, got {len(self.controls)}"
            )
        if self.kind == "RY":
            if self.angle is None or not math.isfinite(self.angle):
                raise GateValidationError("RY needs a finite angle")
        elif self.angle is not None:
            raise GateValidationError(f"{self.kind} does not take an angle")
        qubits = list(self.targets) + [c.qubit for c in self.controls]
        if len(set(qubits)) != len(qubits):
            raise GateValidationError(f"{self.kind} qubits must be pairwise distinct: {qubits}")
        for q in qubits:
            if not 0 <= q < num_qubits:
                raise GateValidationError(f"qubit {q} outside [0, {num_qubits})")

    def inverse(self) -> "Gate":
        if self.kind == "RY":
            return Gate("RY", self.targets, self.controls, -self.angle)
        return self  # everything else in the set is self-inverse

    def qubits(self) -> tuple[int, ...]:
        return tuple(self.targets) + tuple(c.qubit for c in self.controls)


def controlled_x(controls: Iterable[Control], target: int) -> Gate:
    """X on `target` under the given controls, using the narrowest gate kind."""
    controls = tuple(controls)
    if not controls:
        return Gate("X", (target,))
    if len(controls) == 1:
        return Gate("CNOT", (target,), controls)
    if len(controls) == 2:
        return Gate("TOFFOLI", (target,), controls)
    return Gate("MCX", (target,), controls)


@dataclass
class GateStats:
    counts: dict[str, int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def __add__(self, other: "GateStats") -> "GateStats":
        merged = dict(self.counts)
        for kind, count in other.counts.items():
            merged[kind] = merged.get(kind, 0) + count
        return GateStats(merged)

    def get(self, kind: str) -> int:
        return self.counts.get(kind, 0)

    def as_dict(self) -> dict[str, int]:
        out = {kind: self.counts.get(kind, 0) for kind in GATE_KINDS}
        out["total"] = self.total
        return out


class Circuit:
    """Ordered gate list over a flat qubit space.

    The builder API mutates in place and returns self for chaining; treat a
    circuit as a read-only value once it is shared (derived circuits come
    from `copy`, `inverted` and `compose`).
    """

    def __init__(self, num_qubits: int,
                 registers: dict[str, tuple[int, ...]] | None = None):
        if num_qubits < 0:
            raise GateValidationError("qubit count must be non-negative")
        self.num_qubits = num_qubits
        self.registers: dict[str, tuple[int, ...]] = {}
        self.gates: list[Gate] = []
        self.declares_prep_zero = False
        if registers:
            for name, qubits in registers.items():
                self.add_register(name, qubits)

    def add_register(self, name: str, qubits: Iterable[int]) -> None:
        qubits = tuple(qubits)
        taken = {q for reg in self.registers.values() for q in reg}
        for q in qubits:
            if not 0 <= q < self.num_qubits:
                raise GateValidationError(f"register {name}: qubit {q} out of range")
            if q in taken:
                raise GateValidationError(f"register {name}: qubit {q} already assigned")
        self.registers[name] = qubits

    def register(self, name: str) -> tuple[int, ...]:
        try:
            return self.registers[name]
        except KeyError:
            raise UnknownRegisterError(name) from None

    def append(self, gate: Gate) -> "Circuit":
        gate.validate(self.num_qubits)
        self.gates.append(gate)
        return self

    def extend(self, gates: Iterable[Gate]) -> "Circuit":
        for gate in gates:
            self.append(gate)
        return self

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self) -> Iterator[Gate]:
        return iter(self.gates)

    def copy(self) -> "Circuit":
        dup = Circuit(self.num_qubits)
        dup.registers = dict(self.registers)
        dup.gates = list(self.gates)
        dup.declares_prep_zero = self.declares_prep_zero
        return dup

    def inverted(self) -> "Circuit":
        """Gates reversed and individually inverted; undoes this circuit."""
        inv = Circuit(self.num_qubits)
        inv.registers = dict(self.registers)
        inv.gates = [g.inverse() for g in reversed(self.gates)]
        return inv

    def compose(self, other: "Circuit") -> "Circuit":
        if other.num_qubits != self.num_qubits:
            raise GateValidationError(
                f"cannot compose circuits of {self.num_qubits} and {other.num_qubits} qubits"
            )
        out = self.copy()
        for name, qubits in other.registers.items():
            if name not in out.registers:
                out.add_register(name, qubits)
            elif out.registers[name] != qubits:
                raise GateValidationError(f"register {name} differs between circuits")
        out.gates.extend(other.gates)
        return out

    def validate(self) -> None:
        """Re-check every gate; anything `append` accepted must pass."""
        for gate in self.gates:
            gate.validate(self.num_qubits)

    def stats(self) -> GateStats:
        counts: dict[str, int] = {}
        for gate in self.gates:
            counts[gate.kind] = counts.get(gate.kind, 0) + 1
        return GateStats(counts)

    # -- JSON wire format ---------------------------------------------------

    def to_json_dict(self) -> dict:
        gates = []
        for gate in self.gates:
            entry: dict = {"kind": gate.kind, "targets": list(gate.targets)}
            if gate.controls:
                entry["controls"] = [{"q": c.qubit, "pol": c.polarity} for c in gate.controls]
            if gate.angle is not None:
                entry["angle"] = gate.angle
            gates.append(entry)
        return {
            "version": 1,
            "num_qubits": self.num_qubits,
            "registers": [
                {"name": name, "qubits": list(qubits)}
                for name, qubits in self.registers.items()
            ],
            "gates": gates,
        }

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_json_dict(), indent=indent)

    @classmethod
    def from_json_dict(cls, data: dict) -> "Circuit":
        circ = cls(data["num_qubits"])
        for reg in data.get("registers", []):
            circ.add_register(reg["name"], reg["qubits"])
        for entry in data.get("gates", []):
            controls = tuple(
                Control(c["q"], c["pol"]) for c in entry.get("controls", [])
            )
            circ.append(Gate(entry["kind"], tuple(entry["targets"]), controls,
                             entry.get("angle")))
        return circ

    @classmethod
    def from_json(cls, text: str) -> "Circuit":
        return cls.from_json_dict(json.loads(text))

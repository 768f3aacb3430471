"""OpenQASM 2.0 emission for fully lowered circuits.

Deterministic text over one flat register; the gate vocabulary is limited to
h, x, ry, cx, ccx and swap. Angles are printed with repr, which round-trips
float64 bit-exactly. Import exists only as a minimal parser inside the test
suite; it is not a package feature.
"""

from __future__ import annotations

from .circuit import Circuit
from .errors import UnloweredGateError

_EMITTERS = {
    "H": lambda g: f"h q[{g.targets[0]}];",
    "X": lambda g: f"x q[{g.targets[0]}];",
    "RY": lambda g: f"ry({g.angle!r}) q[{g.targets[0]}];",
    "CNOT": lambda g: f"cx q[{g.controls[0].qubit}],q[{g.targets[0]}];",
    "TOFFOLI": lambda g: (
        f"ccx q[{g.controls[0].qubit}],q[{g.controls[1].qubit}],q[{g.targets[0]}];"
    ),
    "SWAP": lambda g: f"swap q[{g.targets[0]}],q[{g.targets[1]}];",
}


def emit_qasm(circuit: Circuit) -> str:
    """Serialize a lowered circuit; raises on MCX or negative controls."""
    lines = ['OPENQASM 2.0;', 'include "qelib1.inc";']
    for name, qubits in circuit.registers.items():
        lines.append(f"// register {name}: {list(qubits)}")
    lines.append(f"qreg q[{circuit.num_qubits}];")
    for index, gate in enumerate(circuit.gates):
        emitter = _EMITTERS.get(gate.kind)
        if emitter is None:
            raise UnloweredGateError(
                f"gate {index}: {gate.kind} is not in the OpenQASM 2.0 vocabulary; "
                f"lower the circuit first"
            )
        if any(c.polarity == 0 for c in gate.controls):
            raise UnloweredGateError(
                f"gate {index}: negative control cannot be emitted; "
                f"resolve polarities first"
            )
        lines.append(emitter(gate))
    return "\n".join(lines) + "\n"


def write_qasm(circuit: Circuit, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(emit_qasm(circuit))

"""Exact simulation backends.

Sparse: a map from basis keys to real amplitudes. Everything after the
initial Hadamard layer in a synthesized machine permutes basis states, so
branch counts never grow and runs of permutation gates compile to a batched
conditional-bit-flip sweep (kernel-accelerated).

Dense: a full real amplitude vector for small-circuit cross-validation.

Amplitudes are real throughout: the gate set {H, X, RY, CNOT, TOFFOLI,
SWAP, MCX} is real-orthogonal.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .circuit import Circuit, Gate
from .errors import DenseCapExceededError, UnknownRegisterError

PRUNE_EPS = 1e-12
DEFAULT_DENSE_CAP = 26
_SQRT_HALF = math.sqrt(0.5)


@dataclass(frozen=True)
class Distribution:
    """Probabilities over one register's values."""

    register: str
    width: int
    probs: dict[int, float]

    def as_bitstrings(self) -> dict[str, float]:
        width = max(self.width, 1)
        return {format(v, f"0{width}b"): p for v, p in sorted(self.probs.items())}

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(
            {"register": self.register, "width": self.width,
             "probabilities": self.as_bitstrings()},
            indent=indent,
        )


class SparseState:
    """Branch map: basis key (int, qubit 0 = LSB) -> real amplitude."""

    def __init__(self, num_qubits: int, amplitudes: dict[int, float] | None = None,
                 registers: dict[str, tuple[int, ...]] | None = None):
        self.num_qubits = num_qubits
        self.amplitudes = amplitudes if amplitudes is not None else {0: 1.0}
        self.registers = registers or {}

    @classmethod
    def zero(cls, num_qubits: int,
             registers: dict[str, tuple[int, ...]] | None = None) -> "SparseState":
        return cls(num_qubits, {0: 1.0}, registers)

    def branch_count(self) -> int:
        return len(self.amplitudes)

    def norm_squared(self) -> float:
        return sum(a * a for a in self.amplitudes.values())

    def register_value(self, key: int, register: str) -> int:
        qubits = self._register_qubits(register)
        value = 0
        for bit, q in enumerate(qubits):
            value |= ((key >> q) & 1) << bit
        return value

    def _register_qubits(self, register: str) -> tuple[int, ...]:
        try:
            return self.registers[register]
        except KeyError:
            raise UnknownRegisterError(register) from None

    def marginal(self, register: str) -> Distribution:
        qubits = self._register_qubits(register)
        probs: dict[int, float] = {}
        for key, amp in self.amplitudes.items():
            value = 0
            for bit, q in enumerate(qubits):
                value |= ((key >> q) & 1) << bit
            probs[value] = probs.get(value, 0.0) + amp * amp
        return Distribution(register, len(qubits), probs)

    def sample(self, register: str, shots: int, seed: int) -> dict[int, int]:
        """Seeded shot counts from the exact marginal (parity with shot runs)."""
        dist = self.marginal(register)
        rng = np.random.default_rng(seed)
        values = sorted(dist.probs)
        weights = np.array([dist.probs[v] for v in values])
        weights = weights / weights.sum()
        draws = rng.choice(len(values), size=shots, p=weights)
        counts: dict[int, int] = {}
        for i in draws:
            v = values[int(i)]
            counts[v] = counts.get(v, 0) + 1
        return counts

    def to_json(self, indent: int | None = None) -> str:
        width = max(self.num_qubits, 1)
        entries = [
            {"bits": format(key, f"0{width}b"), "amplitude": amp}
            for key, amp in sorted(self.amplitudes.items())
        ]
        return json.dumps({"num_qubits": self.num_qubits, "branches": entries},
                          indent=indent)

    def to_dense(self) -> "DenseState":
        if self.num_qubits > DEFAULT_DENSE_CAP:
            raise DenseCapExceededError(
                f"{self.num_qubits} qubits above dense cap {DEFAULT_DENSE_CAP}"
            )
        vec = np.zeros(1 << self.num_qubits)
        for key, amp in self.amplitudes.items():
            vec[key] = amp
        return DenseState(self.num_qubits, vec, dict(self.registers))


class DenseState:
    """Full real amplitude vector indexed by basis key."""

    def __init__(self, num_qubits: int, vector: np.ndarray,
                 registers: dict[str, tuple[int, ...]] | None = None):
        self.num_qubits = num_qubits
        self.vector = vector
        self.registers = registers or {}

    @classmethod
    def zero(cls, num_qubits: int, registers=None, cap: int = DEFAULT_DENSE_CAP) -> "DenseState":
        if num_qubits > cap:
            raise DenseCapExceededError(f"{num_qubits} qubits above dense cap {cap}")
        vec = np.zeros(1 << num_qubits)
        vec[0] = 1.0
        return cls(num_qubits, vec, registers)

    def norm_squared(self) -> float:
        return float(np.dot(self.vector, self.vector))

    def to_sparse(self, eps: float = PRUNE_EPS) -> SparseState:
        (nonzero,) = np.nonzero(np.abs(self.vector) > eps)
        amps = {int(i): float(self.vector[i]) for i in nonzero}
        return SparseState(self.num_qubits, amps, dict(self.registers))

    def marginal(self, register: str) -> Distribution:
        return self.to_sparse().marginal(register)


# -- gate compilation --------------------------------------------------------

def _masks(gate: Gate) -> tuple[int, int, int]:
    pos = 0
    neg = 0
    for control in gate.controls:
        if control.polarity == 1:
            pos |= 1 << control.qubit
        else:
            neg |= 1 << control.qubit
    return pos, neg, 1 << gate.targets[0]


def compile_ops(circuit: Circuit) -> list[tuple]:
    """Lower gates to simulator ops: ('perm', pos, neg, flip) or ('split', ...)."""
    ops: list[tuple] = []
    for gate in circuit.gates:
        if gate.kind in ("X", "CNOT", "TOFFOLI", "MCX"):
            ops.append(("perm", *_masks(gate)))
        elif gate.kind == "SWAP":
            a, b = gate.targets
            # three conditional flips = CNOT(a,b); CNOT(b,a); CNOT(a,b)
            ops.append(("perm", 1 << a, 0, 1 << b))
            ops.append(("perm", 1 << b, 0, 1 << a))
            ops.append(("perm", 1 << a, 0, 1 << b))
        elif gate.kind == "H":
            ops.append(("h", gate.targets[0]))
        elif gate.kind == "RY":
            ops.append(("ry", gate.targets[0], gate.angle))
        else:  # pragma: no cover - Circuit.append rejects unknown kinds
            raise ValueError(f"cannot simulate gate kind {gate.kind}")
    return ops


def _sparse_split(amps: dict[int, float], qubit: int, m00: float, m01: float,
                  m10: float, m11: float) -> dict[int, float]:
    """Apply a real 1-qubit matrix [[m00, m01], [m10, m11]] to every branch."""
    bit = 1 << qubit
    out: dict[int, float] = {}
    for key, amp in amps.items():
        if key & bit:
            lo, hi = key & ~bit, key
            a_lo, a_hi = amp * m01, amp * m11
        else:
            lo, hi = key, key | bit
            a_lo, a_hi = amp * m00, amp * m10
        if a_lo:
            out[lo] = out.get(lo, 0.0) + a_lo
        if a_hi:
            out[hi] = out.get(hi, 0.0) + a_hi
    return {k: a for k, a in out.items() if abs(a) > PRUNE_EPS}


def apply_gate(state: SparseState, gate: Gate) -> SparseState:
    """Single-gate application (generic dict path, used by tests and small runs)."""
    gate.validate(state.num_qubits)
    ops = compile_ops(Circuit(state.num_qubits).append(gate))
    return _run_sparse_ops(state, ops)


def _run_sparse_ops(state: SparseState, ops: list[tuple]) -> SparseState:
    amps = state.amplitudes
    i = 0
    n_ops = len(ops)
    while i < n_ops:
        if ops[i][0] == "perm":
            j = i
            pos, neg, flip = [], [], []
            while j < n_ops and ops[j][0] == "perm":
                pos.append(ops[j][1])
                neg.append(ops[j][2])
                flip.append(ops[j][3])
                j += 1
            keys = list(amps.keys())
            values = list(amps.values())
            keys = kernels.apply_permutation_ops(keys, pos, neg, flip, state.num_qubits)
            amps = dict(zip(keys, values))
            i = j
        elif ops[i][0] == "h":
            amps = _sparse_split(amps, ops[i][1], _SQRT_HALF, _SQRT_HALF,
                                 _SQRT_HALF, -_SQRT_HALF)
            i += 1
        else:  # ry
            half = ops[i][2] / 2.0
            c, s = math.cos(half), math.sin(half)
            amps = _sparse_split(amps, ops[i][1], c, -s, s, c)
            i += 1
    return SparseState(state.num_qubits, amps, state.registers)


def _run_dense_ops(num_qubits: int, ops: list[tuple],
                   registers: dict[str, tuple[int, ...]]) -> DenseState:
    dim = 1 << num_qubits
    vec = np.zeros(dim)
    vec[0] = 1.0
    idx = np.arange(dim, dtype=np.int64)
    for op in ops:
        if op[0] == "perm":
            _, pos, neg, flip = op
            fire = ((idx & pos) == pos) & ((idx & neg) == 0)
            dst = np.where(fire, idx ^ flip, idx)
            new = np.empty_like(vec)
            new[dst] = vec
            vec = new
        else:
            qubit = op[1]
            if op[0] == "h":
                m00 = m01 = m10 = _SQRT_HALF
                m11 = -_SQRT_HALF
            else:
                half = op[2] / 2.0
                m00 = m11 = math.cos(half)
                m10 = math.sin(half)
                m01 = -m10
            bit = 1 << qubit
            lo = idx[(idx & bit) == 0]
            hi = lo | bit
            a_lo, a_hi = vec[lo].copy(), vec[hi].copy()
            vec[lo] = m00 * a_lo + m01 * a_hi
            vec[hi] = m10 * a_lo + m11 * a_hi
    return DenseState(num_qubits, vec, registers)


def run(circuit: Circuit, backend: str = "sparse",
        dense_cap: int = DEFAULT_DENSE_CAP) -> SparseState | DenseState:
    """Simulate from the all-zero state; deterministic."""
    ops = compile_ops(circuit)
    if backend == "sparse":
        state = SparseState.zero(circuit.num_qubits, dict(circuit.registers))
        return _run_sparse_ops(state, ops)
    if backend == "dense":
        if circuit.num_qubits > dense_cap:
            raise DenseCapExceededError(
                f"{circuit.num_qubits} qubits above dense cap {dense_cap}"
            )
        return _run_dense_ops(circuit.num_qubits, ops, dict(circuit.registers))
    raise ValueError(f"unknown backend {backend!r}")


def states_close(a: SparseState | DenseState, b: SparseState | DenseState,
                 tol: float = 1e-10) -> bool:
    """Entry-wise comparison across backends."""
    sa = a.to_sparse() if isinstance(a, DenseState) else a
    sb = b.to_sparse() if isinstance(b, DenseState) else b
    keys = set(sa.amplitudes) | set(sb.amplitudes)
    return all(
        abs(sa.amplitudes.get(k, 0.0) - sb.amplitudes.get(k, 0.0)) <= tol for k in keys
    )


def run_basis_state(circuit: Circuit, key: int) -> int:
    """Propagate one basis key through a permutation-only circuit."""
    ops = compile_ops(circuit)
    for op in ops:
        if op[0] != "perm":
            raise ValueError("run_basis_state needs a permutation-only circuit")
    pos = [op[1] for op in ops]
    neg = [op[2] for op in ops]
    flip = [op[3] for op in ops]
    return kernels.apply_permutation_ops([key], pos, neg, flip, circuit.num_qubits)[0]

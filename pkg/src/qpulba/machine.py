"""Classical cycle-bounded automaton: codec, emulator and exhaustive enumerator.

This module is the ground truth every quantum result is checked against.
The reference semantics (``step``/``run``) are deliberately plain Python;
the batch enumerator may dispatch to a compiled kernel, and tests pin the
two against each other.

Conventions:
  - all tape cells start blank; a blank cell reads as symbol 0
  - a per-cell "written" flag exists only for rendering ('o' = still blank)
  - move bit 0 is a left shift, 1 is a right shift, head arithmetic mod c
  - a transition-table entry packs as [next_state | move | write_symbol]
    with the next-state bits most significant; entry (state i, read j)
    occupies bits [(i*n + j)*e, (i*n + j + 1)*e) of the description number,
    counted from the least-significant bit
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import GuardExceededError, ProgramRangeError, UnsupportedSpecError

DEFAULT_ENUMERATION_GUARD = 1 << 20

# Symbols render as 0-9A-Z; lowercase 'o' is reserved for never-written cells.
_SYMBOL_CHARS = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ"


def ceil_log2(value: int) -> int:
    """Bits needed to address `value` distinct items (0 for a single item)."""
    if value < 1:
        raise ValueError(f"ceil_log2 needs a positive argument, got {value}")
    return (value - 1).bit_length()


def transition_bits(states: int, symbols: int) -> int:
    """Width of a full transition table: m*n entries of (state, move, write) bits."""
    return states * symbols * (ceil_log2(states) + ceil_log2(symbols) + 1)


@dataclass(frozen=True)
class MachineSpec:
    """An (m states, n symbols, 1-d circular tape of c cells, t cycles) machine.

    Tape lengths beyond the causal cone (c > 2t+1) cannot be reached by the
    head and are accepted only for compilation parity with the published
    single-cycle layout; the defaults (c = t) always stay inside the cone.
    """

    states: int
    symbols: int
    cells: int
    cycles: int
    dim: int = 1

    def __post_init__(self) -> None:
        if self.dim != 1:
            raise UnsupportedSpecError(f"only 1-dimensional tapes are supported, got d={self.dim}")
        for name in ("states", "symbols", "cells", "cycles"):
            if getattr(self, name) < 1:
                raise UnsupportedSpecError(f"{name} must be >= 1, got {getattr(self, name)}")

    @classmethod
    def create(cls, states: int, symbols: int, cells: int | None = None,
               cycles: int | None = None) -> "MachineSpec":
        """Apply the experiment defaults: t = program bit-width, c = t."""
        if cycles is None:
            cycles = transition_bits(states, symbols)
        if cells is None:
            cells = cycles
        return cls(states, symbols, cells, cycles)

    @property
    def symbol_bits(self) -> int:
        return ceil_log2(self.symbols)

    @property
    def state_bits(self) -> int:
        return ceil_log2(self.states)

    @property
    def head_bits(self) -> int:
        return ceil_log2(self.cells)

    @property
    def entry_bits(self) -> int:
        return self.state_bits + 1 + self.symbol_bits

    @property
    def program_bits(self) -> int:
        return self.states * self.symbols * self.entry_bits

    @property
    def program_count(self) -> int:
        return 1 << self.program_bits

    @property
    def tape_bits(self) -> int:
        return self.cells * self.symbol_bits

    @property
    def history_bits(self) -> int:
        return (self.cycles - 1) * (self.state_bits + self.symbol_bits)

    def label(self) -> str:
        return f"{self.states}-{self.symbols}-{self.dim}"


@dataclass(frozen=True)
class TransitionEntry:
    """One table row: where to go, which way to move, what to write."""

    next_state: int
    move: int  # 0 = left, 1 = right
    write: int


@dataclass(frozen=True)
class TransitionTable:
    """All m*n entries, indexed by (state * n + read)."""

    spec: MachineSpec
    entries: tuple[TransitionEntry, ...]

    def entry(self, state: int, read: int) -> TransitionEntry:
        return self.entries[state * self.spec.symbols + read]


@dataclass(frozen=True)
class MachineConfig:
    """Snapshot of tape, head, state and cycle count."""

    tape: tuple[int, ...]
    written: tuple[bool, ...]
    head: int
    state: int
    cycle: int


@dataclass(frozen=True)
class EnumerationRecord:
    program: int
    final_tape: str
    final_state: int
    final_head: int


def decode_program(number: int, spec: MachineSpec) -> TransitionTable:
    """Unpack a description number into its transition table.

    The unpacking is a pure bijection: field values that exceed m or n for
    non-power-of-two alphabets are kept verbatim (the emulator treats such
    codepoints as no-coverage, matching the circuit's lookup semantics).
    """
    if not 0 <= number < spec.program_count:
        raise ProgramRangeError(
            f"description number {number} outside [0, {spec.program_count})"
        )
    e = spec.entry_bits
    wbits, sbits = spec.symbol_bits, spec.state_bits
    entries = []
    for idx in range(spec.states * spec.symbols):
        chunk = (number >> (idx * e)) & ((1 << e) - 1)
        write = chunk & ((1 << wbits) - 1)
        move = (chunk >> wbits) & 1
        next_state = chunk >> (wbits + 1)
        entries.append(TransitionEntry(next_state, move, write))
    return TransitionTable(spec, tuple(entries))


def encode_program(table: TransitionTable, spec: MachineSpec) -> int:
    """Pack a transition table back into its description number."""
    e = spec.entry_bits
    wbits = spec.symbol_bits
    number = 0
    if len(table.entries) != spec.states * spec.symbols:
        raise ProgramRangeError(
            f"table has {len(table.entries)} entries, spec needs {spec.states * spec.symbols}"
        )
    for idx, entry in enumerate(table.entries):
        if not 0 <= entry.write < (1 << wbits):
            raise ProgramRangeError(f"entry {idx}: write symbol {entry.write} out of range")
        if entry.move not in (0, 1):
            raise ProgramRangeError(f"entry {idx}: move must be 0 or 1, got {entry.move}")
        if not 0 <= entry.next_state < (1 << spec.state_bits):
            raise ProgramRangeError(f"entry {idx}: next state {entry.next_state} out of range")
        chunk = (entry.next_state << (wbits + 1)) | (entry.move << wbits) | entry.write
        number |= chunk << (idx * e)
    return number


def initial_config(spec: MachineSpec) -> MachineConfig:
    return MachineConfig(
        tape=(0,) * spec.cells,
        written=(False,) * spec.cells,
        head=0,
        state=0,
        cycle=0,
    )


def step(config: MachineConfig, table: TransitionTable, spec: MachineSpec) -> MachineConfig:
    """One cycle: read, write, move, state update (in that order).

    State or read values not covered by the table (possible only for
    non-power-of-two m/n) fall through to the all-zero transition, which is
    what the table-lookup circuit does for uncovered control patterns.
    """
    read = config.tape[config.head]
    if config.state < spec.states and read < spec.symbols:
        entry = table.entry(config.state, read)
    else:
        entry = TransitionEntry(0, 0, 0)
    tape = list(config.tape)
    written = list(config.written)
    tape[config.head] = entry.write
    written[config.head] = True
    head = (config.head + (1 if entry.move else -1)) % spec.cells
    return MachineConfig(
        tape=tuple(tape),
        written=tuple(written),
        head=head,
        state=entry.next_state,
        cycle=config.cycle + 1,
    )


def run(program: int, spec: MachineSpec) -> MachineConfig:
    """Emulate one program for the full t cycles from the blank start."""
    table = decode_program(program, spec)
    config = initial_config(spec)
    for _ in range(spec.cycles):
        config = step(config, table, spec)
    return config


def render_tape(config: MachineConfig, spec: MachineSpec) -> str:
    """Cell-per-character string, 'o' where a cell was never written."""
    chars = []
    for symbol, was_written in zip(config.tape, config.written):
        chars.append(_SYMBOL_CHARS[symbol] if was_written else "o")
    return "".join(chars)


def render_packed_tape(tape_packed: int, written_mask: int, spec: MachineSpec) -> str:
    """Rendering twin for the kernels' packed (symbols, written-mask) output."""
    width = spec.symbol_bits
    mask = (1 << width) - 1
    chars = []
    for cell in range(spec.cells):
        if written_mask >> cell & 1:
            chars.append(_SYMBOL_CHARS[(tape_packed >> (cell * width)) & mask])
        else:
            chars.append("o")
    return "".join(chars)


def pack_tape(config: MachineConfig, spec: MachineSpec) -> int:
    """Tape as one integer, cell i at bit offset i * symbol_bits (blanks = 0)."""
    width = spec.symbol_bits
    value = 0
    for cell, symbol in enumerate(config.tape):
        value |= symbol << (cell * width)
    return value


def _resolve_jobs(jobs: int | None) -> int:
    if jobs is None:
        try:
            jobs = int(os.environ.get("QPULBA_JOBS", "1"))
        except ValueError:
            jobs = 1
    return max(1, jobs)


def _records_from_sweep(spec: MachineSpec, start: int,
                        sweep: tuple[list, list, list, list]) -> list[EnumerationRecord]:
    tapes, writtens, states, heads = sweep
    return [
        EnumerationRecord(
            program=start + offset,
            final_tape=render_packed_tape(tapes[offset], writtens[offset], spec),
            final_state=states[offset],
            final_head=heads[offset],
        )
        for offset in range(len(tapes))
    ]


def _sweep_chunk(args: tuple[int, int, int, int, int, int]) -> tuple[list, list, list, list]:
    # Module-level for pickling by process pools.
    from . import kernels

    states, symbols, cells, cycles, start, stop = args
    return kernels.sweep_programs(states, symbols, cells, cycles, start, stop)


def enumerate_programs(spec: MachineSpec, guard: int = DEFAULT_ENUMERATION_GUARD,
                       override_guard: bool = False,
                       jobs: int | None = None) -> list[EnumerationRecord]:
    """Run every program in [0, P) and collect final tape/state/head.

    Refuses program spaces bigger than `guard` unless explicitly overridden;
    `sample_programs` is the supported path for those.
    """
    total = spec.program_count
    if total > guard and not override_guard:
        raise GuardExceededError(
            f"{total} programs exceed the enumeration guard of {guard}; "
            f"pass override_guard=True or use sampling"
        )
    jobs = _resolve_jobs(jobs)
    from . import kernels

    if jobs == 1 or total < 4096:
        sweep = kernels.sweep_programs(spec.states, spec.symbols, spec.cells,
                                       spec.cycles, 0, total)
        return _records_from_sweep(spec, 0, sweep)

    chunk = -(-total // jobs)
    bounds = [(lo, min(lo + chunk, total)) for lo in range(0, total, chunk)]
    args = [(spec.states, spec.symbols, spec.cells, spec.cycles, lo, hi) for lo, hi in bounds]
    from concurrent.futures import ProcessPoolExecutor

    records: list[EnumerationRecord] = []
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for (lo, _hi), sweep in zip(bounds, pool.map(_sweep_chunk, args)):
            records.extend(_records_from_sweep(spec, lo, sweep))
    return records


def sample_programs(spec: MachineSpec, count: int, seed: int) -> list[EnumerationRecord]:
    """Seeded uniform sample of the program space, deduplicated and sorted."""
    import random

    rng = random.Random(seed)
    programs = sorted({rng.randrange(spec.program_count) for _ in range(count)})
    records = []
    for program in programs:
        config = run(program, spec)
        records.append(EnumerationRecord(
            program=program,
            final_tape=render_tape(config, spec),
            final_state=config.state,
            final_head=config.head,
        ))
    return records


CSV_HEADER = "program,final_tape,final_state,final_head"


def records_to_csv(records: Iterable[EnumerationRecord]) -> str:
    lines = [CSV_HEADER]
    lines.extend(
        f"{r.program},{r.final_tape},{r.final_state},{r.final_head}" for r in records
    )
    return "\n".join(lines) + "\n"


def tape_histogram(records: Sequence[EnumerationRecord]) -> dict[str, int]:
    """Tape-string frequency over an enumeration (the universal-distribution data)."""
    counts: dict[str, int] = {}
    for record in records:
        counts[record.final_tape] = counts.get(record.final_tape, 0) + 1
    return dict(sorted(counts.items()))

"""Command-line interface.

Subcommands: plan, enumerate, build, transpile, simulate, verify, export,
blocktest. Exit codes: 0 success, 1 verification or execution failure,
2 usage error, 3 guard/cap refusal. Every file written with --out gets a
sibling <out>.manifest.json recording the exact parameters; identical
manifests imply byte-identical outputs.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys

from . import __version__, machine, simulate
from .builder import BlockKind, build_census_cycle, build_machine
from .errors import (
    BranchBudgetError,
    DenseCapExceededError,
    GuardExceededError,
    QpulbaError,
)
from .layout import plan_layout
from .machine import MachineSpec
from .qasm import emit_qasm
from .transpile import census_report, transpile
from .verify import check_block, check_equivalence

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_REFUSED = 3

_MODE_ALIASES = {"general": "general", "paper-compat": "paper_compat",
                 "paper_compat": "paper_compat"}
_STRATEGY_ALIASES = {"borrowed": "borrowed_bit", "borrowed_bit": "borrowed_bit",
                     "clean": "toffoli_chain_clean",
                     "toffoli_chain_clean": "toffoli_chain_clean"}


def _spec_from_args(args: argparse.Namespace) -> MachineSpec:
    return MachineSpec.create(args.states, args.symbols, args.cells, args.cycles)


def _emit(args: argparse.Namespace, text: str, params: dict) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        manifest = {
            "tool": "qpulba",
            "version": __version__,
            "command": args.command,
            "params": dict(sorted(params.items())),
            "output": {
                "path": args.out,
                "bytes": len(text.encode()),
                "sha256": hashlib.sha256(text.encode()).hexdigest(),
            },
        }
        with open(args.out + ".manifest.json", "w", encoding="utf-8", newline="\n") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")
    else:
        sys.stdout.write(text)


def _spec_params(spec: MachineSpec) -> dict:
    return {"states": spec.states, "symbols": spec.symbols,
            "cells": spec.cells, "cycles": spec.cycles}


def _cmd_plan(args) -> int:
    spec = _spec_from_args(args)
    layout = plan_layout(spec, _MODE_ALIASES[args.mode])
    text = layout.report_json(indent=2) + "\n" if args.format == "json" else layout.report_text()
    _emit(args, text, {**_spec_params(spec), "mode": args.mode, "format": args.format})
    return EXIT_OK


def _cmd_enumerate(args) -> int:
    spec = _spec_from_args(args)
    if args.sample:
        records = machine.sample_programs(spec, args.sample, args.seed)
    else:
        records = machine.enumerate_programs(
            spec, guard=args.guard, override_guard=args.override_guard, jobs=args.jobs)
    text = machine.records_to_csv(records)
    params = {**_spec_params(spec), "sample": args.sample, "seed": args.seed,
              "guard": args.guard}
    _emit(args, text, params)
    if args.out:
        histogram = machine.tape_histogram(records)
        print(f"{len(records)} programs -> {args.out}; "
              f"{len(histogram)} distinct tapes")
    return EXIT_OK


def _cmd_build(args) -> int:
    spec = _spec_from_args(args)
    layout = plan_layout(spec, _MODE_ALIASES[args.mode])
    circ = build_machine(layout=layout)
    _emit(args, circ.to_json(indent=2) + "\n",
          {**_spec_params(spec), "mode": args.mode})
    if args.out:
        print(f"{circ.num_qubits} qubits, {len(circ.gates)} gates -> {args.out}")
    return EXIT_OK


def _cmd_transpile(args) -> int:
    spec = _spec_from_args(args)
    mode = _MODE_ALIASES[args.mode]
    layout = plan_layout(spec, mode)
    strategy = _STRATEGY_ALIASES[args.strategy]
    if args.cycle_only:
        circ = build_census_cycle(layout)
    else:
        circ = build_machine(layout=layout)
    lowered = transpile(circ, strategy)
    report = census_report(lowered)
    text = report.to_json(indent=2) + "\n" if args.format == "json" else report.to_text()
    _emit(args, text, {**_spec_params(spec), "mode": args.mode,
                       "strategy": args.strategy, "cycle_only": args.cycle_only,
                       "format": args.format})
    return EXIT_OK


def _cmd_simulate(args) -> int:
    spec = _spec_from_args(args)
    layout = plan_layout(spec, _MODE_ALIASES[args.mode])
    circ = build_machine(layout=layout, program=args.program)
    state = simulate.run(circ, backend=args.backend)
    sparse = state.to_sparse() if isinstance(state, simulate.DenseState) else state
    text = sparse.to_json(indent=2) + "\n"
    _emit(args, text, {**_spec_params(spec), "mode": args.mode,
                       "backend": args.backend, "program": args.program})
    tape = sparse.marginal("TAPE")
    print(f"{sparse.branch_count()} branches; tape marginal: "
          f"{json.dumps(tape.as_bitstrings())}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    spec = _spec_from_args(args)
    report = check_equivalence(spec, mode=_MODE_ALIASES[args.mode],
                               branch_budget=args.guard)
    text = report.to_json(indent=2) + "\n" if args.format == "json" else report.to_text()
    _emit(args, text, {**_spec_params(spec), "mode": args.mode,
                       "guard": args.guard, "format": args.format})
    if args.out:
        print(report.summary())
    return EXIT_OK if report.passed else EXIT_FAILURE


def _cmd_export(args) -> int:
    spec = _spec_from_args(args)
    layout = plan_layout(spec, _MODE_ALIASES[args.mode])
    circ = build_machine(layout=layout)
    lowered = transpile(circ, _STRATEGY_ALIASES[args.strategy])
    _emit(args, emit_qasm(lowered), {**_spec_params(spec), "mode": args.mode,
                                     "strategy": args.strategy})
    if args.out:
        print(f"{lowered.num_qubits} qubits, {len(lowered.gates)} gates -> {args.out}")
    return EXIT_OK


def _cmd_blocktest(args) -> int:
    spec = _spec_from_args(args)
    block = BlockKind(args.block)
    report = check_block(block, spec, trials=args.trials, seed=args.seed)
    _emit(args, report.to_json(indent=2) + "\n",
          {**_spec_params(spec), "block": args.block, "trials": args.trials,
           "seed": args.seed})
    print(report.summary())
    return EXIT_OK if report.passed else EXIT_FAILURE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qpulba",
        description="Synthesize, simulate and verify cycle-bounded "
                    "stored-program automata circuits.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, *, mode=True) -> None:
        p.add_argument("-m", "--states", type=int, required=True)
        p.add_argument("-n", "--symbols", type=int, required=True)
        p.add_argument("-c", "--cells", type=int, default=None,
                       help="tape length (default: --cycles)")
        p.add_argument("-t", "--cycles", type=int, default=None,
                       help="cycle count (default: the program bit-width)")
        p.add_argument("--out", default=None)
        if mode:
            p.add_argument("--mode", choices=sorted(_MODE_ALIASES), default="general")

    p = sub.add_parser("plan", help="qubit layout report")
    add_common(p)
    p.add_argument("--format", choices=("txt", "json"), default="txt")
    p.set_defaults(func=_cmd_plan)

    p = sub.add_parser("enumerate", help="classical sweep over all programs")
    add_common(p, mode=False)
    p.add_argument("--guard", type=int, default=machine.DEFAULT_ENUMERATION_GUARD)
    p.add_argument("--override-guard", action="store_true")
    p.add_argument("--sample", type=int, default=0,
                   help="sample this many programs instead of sweeping")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=None,
                   help="worker processes (default: QPULBA_JOBS or 1)")
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("build", help="emit the machine circuit as JSON")
    add_common(p)
    p.set_defaults(func=_cmd_build)

    p = sub.add_parser("transpile", help="lower to the base gate set and report the census")
    add_common(p)
    p.add_argument("--strategy", choices=sorted(_STRATEGY_ALIASES), default="borrowed")
    p.add_argument("--cycle-only", action="store_true",
                   help="init plus one generic cycle (the census unit)")
    p.add_argument("--format", choices=("txt", "json"), default="txt")
    p.set_defaults(func=_cmd_transpile)

    p = sub.add_parser("simulate", help="run the machine and dump the state")
    add_common(p)
    p.add_argument("--backend", choices=("sparse", "dense"), default="sparse")
    p.add_argument("--program", type=int, default=None,
                   help="prepare this one program instead of the superposition")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("verify", help="quantum-vs-classical branch equivalence")
    add_common(p)
    p.add_argument("--guard", type=int, default=1 << 16,
                   help="sparse branch budget")
    p.add_argument("--format", choices=("txt", "json"), default="txt")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("export", help="emit lowered OpenQASM 2.0")
    add_common(p)
    p.add_argument("--strategy", choices=sorted(_STRATEGY_ALIASES), default="borrowed")
    p.set_defaults(func=_cmd_export)

    p = sub.add_parser("blocktest", help="block-level unit test harness")
    add_common(p)
    p.add_argument("--block", choices=[b.value for b in BlockKind], required=True)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=7)
    p.set_defaults(func=_cmd_blocktest)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GuardExceededError, BranchBudgetError, DenseCapExceededError) as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except QpulbaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())

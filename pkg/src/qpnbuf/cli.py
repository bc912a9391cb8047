"""Command-line interface: flip-flop checks, buffer runs, enumeration, QASM export.

Exit codes: 0 success, 1 domain error (unfirable transition, bad buffer
parameters), 2 usage or document-parse error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .buffers import BufferSpec, build_cnot_example, build_mimo, build_simo
from .engine import (
    DEFAULT_STEP_BOUND,
    Scripted,
    Trace,
    enumerate_final_markings,
    run,
)
from .errors import QasmError, QpnError, ScenarioError
from .flipflop import (
    ALL_INPUT_ROWS,
    CircuitVariant,
    QsrInputs,
    build_qsr_circuit,
    conformance_report,
    reference_next_state,
    simulate_qsr,
)
from .qasm import export_qasm
from .scenario import emit_marking_table, emit_trace, parse_scenario
from .statevector import basis_state

DEMOS = ("fig2-example", "siso-4b", "simo-4c", "priority-4d", "simo-enum", "mimo-enum")


def _write_output(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _step_bound() -> int:
    return int(os.environ.get("QPN_STEP_BOUND", DEFAULT_STEP_BOUND))


def _fmt_bit(value: int | None) -> str:
    return "Undefined" if value is None else str(value)


def _qsr_table() -> str:
    lines = ["S  R  Q  Q'  Q-Output"]
    for inputs in ALL_INPUT_ROWS:
        out = reference_next_state(inputs)
        lines.append(
            f"{inputs.s}  {inputs.r}  {inputs.q}  {1 - inputs.q}   {_fmt_bit(out.q_next)}"
        )
    return "\n".join(lines) + "\n"


def _qsr_simulate(variant: CircuitVariant, inputs: QsrInputs) -> str:
    outcome = simulate_qsr(variant, inputs)
    readout = " ".join(f"q{q}={b}" for q, b in sorted(outcome.readout.items()))
    return (
        f"variant: {variant.value}\n"
        f"inputs: S={inputs.s} R={inputs.r} Q={inputs.q}\n"
        f"q4 (Q)  = {outcome.q_next}\n"
        f"q3 (Q') = {outcome.q_prime_next}\n"
        f"readout: {readout}\n"
    )


def _flag(ok: bool) -> str:
    return "ok" if ok else "MISMATCH"


def _qsr_conformance() -> str:
    lines = [
        "S R Q | ref Q Q' | verbatim q4 q3 (Q match, Q' match) | "
        "normalized q4 q3 (Q match, Q' match)"
    ]
    for row in conformance_report():
        i, ref = row.inputs, row.reference
        lines.append(
            f"{i.s} {i.r} {i.q} |  {ref.q_next}  {ref.q_prime_next}  | "
            f"        {row.verbatim.q_next}  {row.verbatim.q_prime_next}  "
            f"({_flag(row.verbatim_q_match)}, {_flag(row.verbatim_q_prime_match)}) | "
            f"         {row.normalized.q_next}  {row.normalized.q_prime_next}  "
            f"({_flag(row.normalized_q_match)}, {_flag(row.normalized_q_prime_match)})"
        )
    return "\n".join(lines) + "\n"


def _init_gates(inputs: QsrInputs) -> tuple[int, ...]:
    """X gates preparing q = (S, R, 0, NOT Q, Q, 0, 0) from all-zero."""
    gates = []
    if inputs.s:
        gates.append(0)
    if inputs.r:
        gates.append(1)
    if not inputs.q:
        gates.append(3)
    if inputs.q:
        gates.append(4)
    return tuple(gates)


def _cmd_qsr(args) -> int:
    variant = CircuitVariant(args.variant)
    if args.mode == "table":
        _write_output(_qsr_table(), args.out)
    elif args.mode == "conformance":
        _write_output(_qsr_conformance(), args.out)
    elif args.mode == "simulate":
        if args.S is None or args.R is None or args.Q is None:
            raise ScenarioError("simulate needs -S, -R and -Q")
        _write_output(_qsr_simulate(variant, QsrInputs(args.S, args.R, args.Q)), args.out)
    else:  # export-qasm
        inputs = QsrInputs(args.S or 0, 1 if args.R is None else args.R,
                           args.Q or 0)
        circuit = build_qsr_circuit(variant)
        _write_output(export_qasm(circuit, _init_gates(inputs)), args.out)
    return 0


def _final_places_text(trace: Trace) -> str:
    lines = ["final:"]
    for pid in trace.final.place_ids:
        toks = " ".join(trace.final.tokens_in(pid))
        lines.append(f"  {pid}: {toks}" if toks else f"  {pid}:")
    return "\n".join(lines) + "\n"


def _trace_output(trace: Trace, fmt: str) -> str:
    if fmt == "json":
        return emit_trace(trace)
    return emit_marking_table(trace) + _final_places_text(trace)


def _signature_output(signatures: dict, places: tuple[str, ...], fmt: str) -> str:
    if fmt == "json":
        import json

        doc = [
            {
                "signature": {pid: count for pid, count in sig if pid in places},
                "witness": list(wit),
            }
            for sig, wit in sorted(signatures.items())
        ]
        return json.dumps(doc, sort_keys=True, indent=1) + "\n"
    lines = []
    for sig, wit in sorted(signatures.items()):
        shown = " ".join(f"{pid}={count}" for pid, count in sig if pid in places)
        lines.append(f"{shown}  via {','.join(wit) if wit else '(no firing)'}")
    lines.append(f"{len(signatures)} outcome signatures")
    return "\n".join(lines) + "\n"


def _scenario_trace(args) -> Trace:
    if args.scenario is None:
        raise ScenarioError("missing --scenario path")
    doc = parse_scenario(Path(args.scenario).read_text())
    spec = doc.to_buffer_spec()
    net, marking = spec.build()
    scheduler = doc.build_scheduler(net)
    try:
        return run(net, marking, scheduler)
    except QpnError as exc:
        raise type(exc)(f"in {doc.kind} scenario: {exc}") from exc


def _cmd_buffer(args) -> int:
    if args.mode == "demo":
        return _cmd_demo(args)
    if args.mode == "enumerate":
        if args.scenario is None:
            raise ScenarioError("missing --scenario path")
        doc = parse_scenario(Path(args.scenario).read_text())
        net, marking = doc.to_buffer_spec().build()
        signatures = enumerate_final_markings(net, marking, step_bound=_step_bound())
        _write_output(_signature_output(signatures, marking.place_ids, args.format), args.out)
        return 0
    # run
    doc = parse_scenario(Path(args.scenario).read_text()) if args.scenario else None
    if doc is None:
        raise ScenarioError("missing --scenario path")
    if doc.enumerate_outcomes:
        net, marking = doc.to_buffer_spec().build()
        signatures = enumerate_final_markings(net, marking, step_bound=_step_bound())
        _write_output(_signature_output(signatures, marking.place_ids, args.format), args.out)
        return 0
    trace = _scenario_trace(args)
    _write_output(_trace_output(trace, args.format), args.out)
    return 0


def _demo_spec(name: str) -> tuple[BufferSpec, object]:
    if name == "siso-4b":
        spec = BufferSpec(
            kind="siso",
            n=3,
            m=2,
            payloads={"d1": basis_state(2, "10"), "d2": basis_state(1, "1"),
                      "d3": basis_state(1, "1")},
        )
        return spec, None
    if name == "simo-4c":
        spec = BufferSpec(
            kind="simo",
            n=4,
            m=3,
            k=2,
            payloads={"d1": basis_state(1, "1"), "d2": basis_state(1, "0"),
                      "d3": basis_state(1, "1"), "d4": basis_state(1, "1")},
            addresses=(1, 0, 1),
        )
        return spec, None
    # priority-4d
    spec = BufferSpec(
        kind="priority",
        r_low=1,
        r_high=2,
        m_low=2,
        m_high=2,
        payloads={"d1": basis_state(1, "0"), "d2": basis_state(1, "1"),
                  "d3": basis_state(1, "1")},
    )
    return spec, Scripted(("T2", "T4", "T2", "T4", "T1", "T3"))


def _cmd_demo(args) -> int:
    name = args.demo
    if name is None:
        raise ScenarioError(f"demo needs a name from {DEMOS}")
    if name not in DEMOS:
        raise ScenarioError(f"unknown demo {name!r}; choose from {DEMOS}")
    if name == "fig2-example":
        net, marking = build_cnot_example()
        trace = run(net, marking, Scripted(("T1",)))
        _write_output(_trace_output(trace, args.format), args.out)
        return 0
    if name == "simo-enum":
        net, marking = build_simo(n=4, m=3, k=2)
        signatures = enumerate_final_markings(net, marking, step_bound=_step_bound())
        _write_output(
            _signature_output(signatures, ("P_O1", "P_O2"), args.format), args.out
        )
        return 0
    if name == "mimo-enum":
        net, marking = build_mimo(r=(2, 1), outputs=2, m=2)
        signatures = enumerate_final_markings(net, marking, step_bound=_step_bound())
        _write_output(
            _signature_output(
                signatures, ("P_I1", "P_I2", "P_O1", "P_O2"), args.format
            ),
            args.out,
        )
        return 0
    spec, scheduler = _demo_spec(name)
    net, marking = spec.build()
    if scheduler is None:
        from .engine import AddressDriven

        scheduler = AddressDriven(program=spec.addresses)
    trace = run(net, marking, scheduler)
    _write_output(_trace_output(trace, args.format), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qpnbuf",
        description="Quantum buffer nets and the gate-level flip-flop they build on.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    qsr = sub.add_parser("qsr", help="flip-flop truth table, simulation, conformance, QASM")
    qsr.add_argument("mode", choices=["table", "simulate", "conformance", "export-qasm"])
    qsr.add_argument("--variant", choices=["verbatim", "normalized"], default="normalized")
    qsr.add_argument("-S", type=int, choices=[0, 1], default=None)
    qsr.add_argument("-R", type=int, choices=[0, 1], default=None)
    qsr.add_argument("-Q", type=int, choices=[0, 1], default=None)
    qsr.add_argument("--out", type=Path, default=None)

    buffer_cmd = sub.add_parser("buffer", help="run, enumerate, or demo a buffer net")
    buffer_cmd.add_argument("mode", choices=["run", "enumerate", "demo"])
    buffer_cmd.add_argument("demo", nargs="?", default=None,
                            help=f"demo name, one of {', '.join(DEMOS)}")
    buffer_cmd.add_argument("--scenario", type=Path, default=None)
    buffer_cmd.add_argument("--out", type=Path, default=None)
    buffer_cmd.add_argument("--seed", type=int, default=0)
    buffer_cmd.add_argument("--format", choices=["json", "table"], default="json")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "qsr":
            return _cmd_qsr(args)
        return _cmd_buffer(args)
    except (ScenarioError, QasmError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except QpnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

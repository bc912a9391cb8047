"""Constructors for the five quantum buffer nets and their scenario runner.

All buffer transitions are identity events: payloads move between places
untouched, so a data token of any qubit width flows exactly like a
single-qubit one.  Capacity is provisioned as ancillary supply: once the
supply place drains, no further data can move.

Selector (address) tokens pick among guarded transitions.  Builders accept
an explicit address program to reproduce a concrete run; without one the
selectors are left free, which makes enumeration explore every routing
choice.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .engine import (
    AddressDriven,
    Arc,
    Marking,
    PairRoute,
    Place,
    PlaceKind,
    QPNet,
    QToken,
    Scheduler,
    TokenKind,
    Trace,
    Transition,
    run,
)
from .errors import QpnError, SpecError
from .statevector import StateVector, basis_state, basis_state_from_index, cx

KINDS = ("siso", "simo", "miso", "mimo", "priority")


def _selector_width(choices: int) -> int:
    return max(1, (choices - 1).bit_length())


def _identity_transition(tid, inputs, routing, guard=None, inhibitors=()):
    """Wire an identity transition from (place, label) pairs and a routing map."""
    input_arcs = tuple(
        Arc(place=p, transition=tid, direction="in", label=lbl) for p, lbl in inputs
    )
    out_places = []
    for dest in routing.values():
        if isinstance(dest, PairRoute):
            out_places += [dest.data_to, dest.ancillary_to]
        else:
            out_places.append(dest)
    output_arcs = tuple(
        Arc(place=p, transition=tid, direction="out", label=f"f{i + 1}")
        for i, p in enumerate(dict.fromkeys(out_places))
    )
    inhibitor_arcs = tuple(
        Arc(place=p, transition=tid, direction="in", label=f"inh{i + 1}", inhibitor=True)
        for i, p in enumerate(inhibitors)
    )
    return Transition(
        id=tid,
        input_arcs=input_arcs,
        output_arcs=output_arcs,
        routing=routing,
        inhibitor_arcs=inhibitor_arcs,
        address_guard=guard,
    )


def _data_tokens(ids, payloads: dict[str, StateVector] | None):
    payloads = payloads or {}
    return [
        QToken(tid, TokenKind.DATA, payloads.get(tid, basis_state(1, "0"))) for tid in ids
    ]


def _selector_tokens(prefix, count, choices, addresses):
    """Ancillary selector tokens; seeded with addresses or left free."""
    width = _selector_width(choices)
    if addresses is not None:
        if len(addresses) > count:
            raise SpecError(
                f"address program has {len(addresses)} entries for {count} selectors"
            )
        for i, a in enumerate(addresses):
            if not 0 <= a < choices:
                raise SpecError(
                    f"address {a} at position {i} is out of range for {choices} choices"
                )
    out = []
    for i in range(count):
        if addresses is not None and i < len(addresses):
            a = addresses[i]
            out.append(
                QToken(
                    f"{prefix}{i + 1}",
                    TokenKind.ANCILLARY,
                    basis_state_from_index(width, a),
                    address=a,
                )
            )
        else:
            out.append(
                QToken(
                    f"{prefix}{i + 1}",
                    TokenKind.ANCILLARY,
                    basis_state_from_index(width, 0),
                    address=None,
                )
            )
    return out


def _plain_ancillas(prefix, count):
    return [
        QToken(f"{prefix}{i + 1}", TokenKind.ANCILLARY, basis_state(1, "0"))
        for i in range(count)
    ]


def build_siso(
    n: int, m: int, payloads: dict[str, StateVector] | None = None
) -> tuple[QPNet, Marking]:
    """Single lane: T1 moves one data token to P_O per ancillary qubit in P_A.

    A zero-capacity instance (m=0) is a valid net in which T1 can never fire.
    """
    if not 0 <= m <= n:
        raise SpecError(f"siso requires 0 <= m <= n, got n={n}, m={m}")
    places = [
        Place("P_I", PlaceKind.INPUT),
        Place("P_A", PlaceKind.ANCILLARY),
        Place("P_A1", PlaceKind.ANCILLARY),
        Place("P_O", PlaceKind.OUTPUT),
    ]
    t1 = _identity_transition(
        "T1",
        inputs=[("P_I", "x1"), ("P_A", "x2")],
        routing={"x1": "P_O", "x2": "P_A1"},
    )
    tokens = _data_tokens([f"d{i + 1}" for i in range(n)], payloads) + _plain_ancillas("z", m)
    net = QPNet(places, [t1], tokens)
    marking = net.initial_marking(
        {"P_I": [f"d{i + 1}" for i in range(n)], "P_A": [f"z{j + 1}" for j in range(m)]}
    )
    return net, marking


def build_simo(
    n: int,
    m: int,
    k: int,
    payloads: dict[str, StateVector] | None = None,
    addresses=None,
) -> tuple[QPNet, Marking]:
    """One input place fanning out to k output places through guarded transitions.

    A zero-capacity instance (m=0) is a valid net in which nothing can fire.
    """
    if not 0 <= m <= n:
        raise SpecError(f"simo requires 0 <= m <= n, got n={n}, m={m}")
    if k < 2:
        raise SpecError(f"simo requires k >= 2 outputs, got k={k}")
    places = [
        Place("P_I", PlaceKind.INPUT),
        Place("P_A", PlaceKind.ANCILLARY),
        Place("P_A1", PlaceKind.ANCILLARY),
    ] + [Place(f"P_O{j + 1}", PlaceKind.OUTPUT) for j in range(k)]
    transitions = [
        _identity_transition(
            f"T{j + 1}",
            inputs=[("P_I", "x1"), ("P_A", "x2")],
            routing={"x1": f"P_O{j + 1}", "x2": "P_A1"},
            guard=j,
        )
        for j in range(k)
    ]
    tokens = _data_tokens([f"d{i + 1}" for i in range(n)], payloads)
    tokens += _selector_tokens("z", m, k, addresses)
    net = QPNet(places, transitions, tokens)
    marking = net.initial_marking(
        {"P_I": [f"d{i + 1}" for i in range(n)], "P_A": [f"z{j + 1}" for j in range(m)]}
    )
    return net, marking


def build_miso(
    r: tuple[int, ...],
    m: int,
    payloads: dict[str, StateVector] | None = None,
    addresses=None,
) -> tuple[QPNet, Marking]:
    """k input places feeding one output through a staging place.

    Guarded input transition T_j pairs the head of P_Ij with the head
    selector and stages the pair in P_DA; the unguarded output transition
    forwards the pair's data token to P_O and parks the selector in P_A1.
    """
    k = len(r)
    if k < 2:
        raise SpecError(f"miso requires at least 2 input places, got {k}")
    if m < 1:
        raise SpecError(f"miso requires m >= 1, got m={m}")
    if any(c < 0 for c in r):
        raise SpecError(f"input counts must be nonnegative, got {r}")
    places = [Place(f"P_I{j + 1}", PlaceKind.INPUT) for j in range(k)] + [
        Place("P_DA", PlaceKind.DATA_ANCILLARY),
        Place("P_A", PlaceKind.ANCILLARY),
        Place("P_A1", PlaceKind.ANCILLARY),
        Place("P_O", PlaceKind.OUTPUT),
    ]
    transitions = [
        _identity_transition(
            f"T{j + 1}",
            inputs=[(f"P_I{j + 1}", "x1"), ("P_A", "x2")],
            routing={"x1": "P_DA", "x2": "P_DA"},
            guard=j,
        )
        for j in range(k)
    ]
    transitions.append(
        _identity_transition(
            f"T{k + 1}",
            inputs=[("P_DA", "x1")],
            routing={"x1": PairRoute(data_to="P_O", ancillary_to="P_A1")},
        )
    )
    ids, assignment = [], {}
    counter = 1
    for j, count in enumerate(r):
        assignment[f"P_I{j + 1}"] = [f"d{counter + i}" for i in range(count)]
        ids += assignment[f"P_I{j + 1}"]
        counter += count
    tokens = _data_tokens(ids, payloads) + _selector_tokens("z", m, k, addresses)
    net = QPNet(places, transitions, tokens)
    assignment["P_A"] = [f"z{j + 1}" for j in range(m)]
    marking = net.initial_marking(assignment)
    return net, marking


def build_mimo(
    r: tuple[int, ...],
    outputs: int,
    m: int,
    payloads: dict[str, StateVector] | None = None,
    input_addresses=None,
    output_addresses=None,
) -> tuple[QPNet, Marking]:
    """k input places and several output places, with two selector supplies.

    Input selectors (w, in P_A1) choose which input place feeds the staging
    place; output selectors (z, in P_A2) choose which output place receives
    the staged data token.  Both spent selectors collect in P_A3.
    """
    k = len(r)
    if k < 2:
        raise SpecError(f"mimo requires at least 2 input places, got {k}")
    if outputs < 2:
        raise SpecError(f"mimo requires at least 2 output places, got {outputs}")
    if m < 1:
        raise SpecError(f"mimo requires m >= 1, got m={m}")
    if any(c < 0 for c in r):
        raise SpecError(f"input counts must be nonnegative, got {r}")
    places = (
        [Place(f"P_I{j + 1}", PlaceKind.INPUT) for j in range(k)]
        + [
            Place("P_DA", PlaceKind.DATA_ANCILLARY),
            Place("P_A1", PlaceKind.ANCILLARY),
            Place("P_A2", PlaceKind.ANCILLARY),
            Place("P_A3", PlaceKind.ANCILLARY),
        ]
        + [Place(f"P_O{j + 1}", PlaceKind.OUTPUT) for j in range(outputs)]
    )
    transitions = [
        _identity_transition(
            f"T{j + 1}",
            inputs=[(f"P_I{j + 1}", "x1"), ("P_A1", "x2")],
            routing={"x1": "P_DA", "x2": "P_DA"},
            guard=j,
        )
        for j in range(k)
    ]
    transitions += [
        _identity_transition(
            f"T{k + j + 1}",
            inputs=[("P_DA", "x1"), ("P_A2", "x2")],
            routing={
                "x1": PairRoute(data_to=f"P_O{j + 1}", ancillary_to="P_A3"),
                "x2": "P_A3",
            },
            guard=j,
        )
        for j in range(outputs)
    ]
    ids, assignment = [], {}
    counter = 1
    for j, count in enumerate(r):
        assignment[f"P_I{j + 1}"] = [f"d{counter + i}" for i in range(count)]
        ids += assignment[f"P_I{j + 1}"]
        counter += count
    tokens = _data_tokens(ids, payloads)
    tokens += _selector_tokens("w", m, k, input_addresses)
    tokens += _selector_tokens("z", m, outputs, output_addresses)
    net = QPNet(places, transitions, tokens)
    assignment["P_A1"] = [f"w{j + 1}" for j in range(m)]
    assignment["P_A2"] = [f"z{j + 1}" for j in range(m)]
    marking = net.initial_marking(assignment)
    return net, marking


def build_priority(
    r_low: int,
    r_high: int,
    m_low: int,
    m_high: int,
    payloads: dict[str, StateVector] | None = None,
) -> tuple[QPNet, Marking]:
    """Two-class buffer where staged high-priority pairs block the low lane.

    T1/T2 stage (data, ancillary) pairs from the low/high input places into
    P_DA1/P_DA2; T3 forwards low-priority pairs to P_O but is inhibited
    while P_DA2 holds anything, so T4 always clears high-priority pairs
    first.  Spent ancillas collect in P_A2 in arrival order.
    """
    for name, value in (
        ("r_low", r_low),
        ("r_high", r_high),
        ("m_low", m_low),
        ("m_high", m_high),
    ):
        if value < 0:
            raise SpecError(f"{name} must be nonnegative, got {value}")
    places = [
        Place("P_I1", PlaceKind.INPUT),
        Place("P_I2", PlaceKind.INPUT),
        Place("P_DA1", PlaceKind.DATA_ANCILLARY),
        Place("P_A", PlaceKind.ANCILLARY),
        Place("P_DA2", PlaceKind.DATA_ANCILLARY),
        Place("P_A1", PlaceKind.ANCILLARY),
        Place("P_A2", PlaceKind.ANCILLARY),
        Place("P_O", PlaceKind.OUTPUT),
    ]
    transitions = [
        _identity_transition(
            "T1",
            inputs=[("P_I1", "x1"), ("P_A", "x2")],
            routing={"x1": "P_DA1", "x2": "P_DA1"},
        ),
        _identity_transition(
            "T2",
            inputs=[("P_I2", "x1"), ("P_A1", "x2")],
            routing={"x1": "P_DA2", "x2": "P_DA2"},
        ),
        _identity_transition(
            "T3",
            inputs=[("P_DA1", "x1")],
            routing={"x1": PairRoute(data_to="P_O", ancillary_to="P_A2")},
            inhibitors=["P_DA2"],
        ),
        _identity_transition(
            "T4",
            inputs=[("P_DA2", "x1")],
            routing={"x1": PairRoute(data_to="P_O", ancillary_to="P_A2")},
        ),
    ]
    low_ids = [f"d{i + 1}" for i in range(r_low)]
    high_ids = [f"d{r_low + i + 1}" for i in range(r_high)]
    tokens = _data_tokens(low_ids + high_ids, payloads)
    tokens += _plain_ancillas("w", m_low) + _plain_ancillas("z", m_high)
    net = QPNet(places, transitions, tokens)
    marking = net.initial_marking(
        {
            "P_I1": low_ids,
            "P_I2": high_ids,
            "P_A": [f"w{j + 1}" for j in range(m_low)],
            "P_A1": [f"z{j + 1}" for j in range(m_high)],
        }
    )
    return net, marking


def build_cnot_example() -> tuple[QPNet, Marking]:
    """Two-place demo net whose single transition is a CNOT.

    P1 holds a=|1>, b=|1>, c=(|0>+|1>)/sqrt(2); P2 holds d=|0>, e=|1>.
    T1 consumes the heads of P1 and P2, flips the second payload when the
    first is set (control on the high-order qubit), and deposits both in P3.
    """
    plus = StateVector(1, [2**-0.5, 2**-0.5])
    places = [
        Place("P1", PlaceKind.INPUT),
        Place("P2", PlaceKind.INPUT),
        Place("P3", PlaceKind.OUTPUT),
    ]
    t1 = replace(
        _identity_transition(
            "T1", inputs=[("P1", "x"), ("P2", "y")], routing={"x": "P3", "y": "P3"}
        ),
        gate=(cx(1, 0),),
    )
    tokens = [
        QToken("a", TokenKind.DATA, basis_state(1, "1")),
        QToken("b", TokenKind.DATA, basis_state(1, "1")),
        QToken("c", TokenKind.DATA, plus),
        QToken("d", TokenKind.DATA, basis_state(1, "0")),
        QToken("e", TokenKind.DATA, basis_state(1, "1")),
    ]
    net = QPNet(places, [t1], tokens)
    marking = net.initial_marking({"P1": ["a", "b", "c"], "P2": ["d", "e"]})
    return net, marking


@dataclass(frozen=True)
class BufferSpec:
    """Parameterized buffer instance: topology choice plus token seeding."""

    kind: str
    n: int | None = None
    m: int | None = None
    k: int | None = None
    r: tuple[int, ...] | None = None
    outputs: int | None = None
    r_low: int | None = None
    r_high: int | None = None
    m_low: int | None = None
    m_high: int | None = None
    payloads: dict[str, StateVector] = field(default_factory=dict)
    addresses: tuple[int, ...] | None = None
    input_addresses: tuple[int, ...] | None = None
    output_addresses: tuple[int, ...] | None = None

    def _require(self, **fields):
        for name, value in fields.items():
            if value is None:
                raise SpecError(f"{self.kind} spec needs {name}")

    def build(self) -> tuple[QPNet, Marking]:
        if self.kind == "siso":
            self._require(n=self.n, m=self.m)
            return build_siso(self.n, self.m, self.payloads)
        if self.kind == "simo":
            self._require(n=self.n, m=self.m, k=self.k)
            return build_simo(self.n, self.m, self.k, self.payloads, self.addresses)
        if self.kind == "miso":
            self._require(r=self.r, m=self.m)
            return build_miso(self.r, self.m, self.payloads, self.addresses)
        if self.kind == "mimo":
            self._require(r=self.r, outputs=self.outputs, m=self.m)
            return build_mimo(
                self.r,
                self.outputs,
                self.m,
                self.payloads,
                self.input_addresses,
                self.output_addresses,
            )
        if self.kind == "priority":
            self._require(
                r_low=self.r_low, r_high=self.r_high, m_low=self.m_low, m_high=self.m_high
            )
            return build_priority(
                self.r_low, self.r_high, self.m_low, self.m_high, self.payloads
            )
        raise SpecError(f"unknown buffer kind {self.kind!r}")


def run_scenario(spec: BufferSpec, scheduler: Scheduler | None = None) -> Trace:
    """Build the net, seed the tokens, and run it to a trace.

    Without an explicit scheduler the net is driven by its selector
    addresses (or plain draining when nothing is guarded).
    """
    net, marking = spec.build()
    if scheduler is None:
        scheduler = AddressDriven(program=spec.addresses)
    try:
        return run(net, marking, scheduler)
    except QpnError as exc:
        raise type(exc)(f"in {spec.kind} scenario: {exc}") from exc

"""Quantum Petri net engine: tokens with quantum payloads moving through places.

Places hold FIFO queues of queue *entries*; an entry is usually a single
token, but a data token and its ancillary companion deposited together into
a data/ancillary staging place travel as one fused pair entry until an
output transition splits them again.

Transitions consume the head entries of their input places, optionally pass
the concatenated data payloads through a gate sequence, and append the
tokens at their routed destinations.  Every supported gate permutes basis
states, so firing and unfiring are bit-exact on amplitudes.

Ancillary tokens may carry an *address*: the basis value of their payload,
used by guarded transitions as a selector.  An address of ``None`` is a
free selector that matches any guard and is materialized (payload set to
the guard's basis state) when consumed; building a net with free selectors
is what makes exhaustive outcome enumeration explore every routing choice.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass

import numpy as np

from .errors import (
    ExplosionError,
    ModelError,
    NotEnabledError,
    ReversalError,
)
from .statevector import (
    GateOp,
    StateVector,
    apply_all,
    basis_state_from_index,
    tensor,
)

DEFAULT_STEP_BOUND = 10**6

Entry = tuple[str, ...]


class TokenKind(enum.Enum):
    DATA = "data"
    ANCILLARY = "ancillary"


class PlaceKind(enum.Enum):
    INPUT = "input"
    OUTPUT = "output"
    ANCILLARY = "ancillary"
    DATA_ANCILLARY = "data_ancillary"


@dataclass(frozen=True)
class QToken:
    """A named token and its initial quantum payload.

    ``address`` pins an ancillary token to a basis selector value; it must
    match the payload's basis index.  Payload evolution lives in markings.
    """

    id: str
    kind: TokenKind
    payload: StateVector
    address: int | None = None

    def __post_init__(self):
        if self.address is not None:
            if self.kind is not TokenKind.ANCILLARY:
                raise ModelError(f"token {self.id}: only ancillary tokens carry addresses")
            if not self.payload.is_basis_state():
                raise ModelError(
                    f"token {self.id}: address requires a basis-state payload, "
                    "superposed selectors are not supported"
                )
            if self.payload.basis_index() != self.address:
                raise ModelError(
                    f"token {self.id}: address {self.address} disagrees with payload "
                    f"|{self.payload.basis_label()}>"
                )


@dataclass(frozen=True)
class Place:
    id: str
    kind: PlaceKind


@dataclass(frozen=True)
class Arc:
    """Labeled connection between a place and a transition.

    ``direction`` is "in" (place to transition) or "out"; inhibitor arcs are
    place-to-transition and demand the place be empty.
    """

    place: str
    transition: str
    direction: str
    label: str
    multiplicity: int = 1
    inhibitor: bool = False

    def __post_init__(self):
        if self.direction not in ("in", "out"):
            raise ModelError(f"arc direction must be 'in' or 'out', got {self.direction!r}")
        if self.multiplicity < 1:
            raise ModelError("arc multiplicity must be >= 1")
        if self.inhibitor and self.direction != "in":
            raise ModelError("inhibitor arcs run from a place to a transition")


@dataclass(frozen=True)
class PairRoute:
    """Destination for a consumed pair entry: data one way, ancillary the other."""

    data_to: str
    ancillary_to: str


@dataclass(frozen=True)
class Transition:
    """A quantum event: consume, optionally transform, deposit.

    ``routing`` maps each input-arc label to a destination place (or a
    ``PairRoute`` when the arc consumes fused pair entries).  ``gate`` acts
    on the concatenated data payloads in consumption order, first token on
    the high-order qubits.  ``address_guard`` restricts enabling to markings
    whose selector-supply head token carries a matching (or free) address.
    """

    id: str
    input_arcs: tuple[Arc, ...]
    output_arcs: tuple[Arc, ...]
    routing: dict[str, str | PairRoute]
    inhibitor_arcs: tuple[Arc, ...] = ()
    gate: tuple[GateOp, ...] = ()
    address_guard: int | None = None


def _tid_key(tid: str) -> tuple[str, int]:
    m = re.match(r"^(.*?)(\d*)$", tid)
    return (m.group(1), int(m.group(2)) if m.group(2) else -1)


class QPNet:
    """Static net structure: places, transitions, tokens, arcs."""

    def __init__(self, places, transitions, tokens):
        self.places: tuple[Place, ...] = tuple(places)
        self.transitions: tuple[Transition, ...] = tuple(transitions)
        self.tokens: dict[str, QToken] = {}
        for tok in tokens:
            if tok.id in self.tokens:
                raise ModelError(f"duplicate token id {tok.id!r}")
            self.tokens[tok.id] = tok
        self._places = {p.id: p for p in self.places}
        if len(self._places) != len(self.places):
            raise ModelError("duplicate place ids")
        self._transitions = {t.id: t for t in self.transitions}
        if len(self._transitions) != len(self.transitions):
            raise ModelError("duplicate transition ids")
        for t in self.transitions:
            self._validate_transition(t)

    def _validate_transition(self, t: Transition):
        for arc in t.input_arcs + t.output_arcs + t.inhibitor_arcs:
            if arc.place not in self._places:
                raise ModelError(f"transition {t.id}: unknown place {arc.place!r}")
        labels = [arc.label for arc in t.input_arcs]
        if len(set(labels)) != len(labels):
            raise ModelError(f"transition {t.id}: duplicate input arc labels")
        if set(t.routing) != set(labels):
            raise ModelError(
                f"transition {t.id}: routing must cover exactly the input arc labels"
            )
        out_places = {arc.place for arc in t.output_arcs}
        for label, dest in t.routing.items():
            dests = (
                (dest.data_to, dest.ancillary_to) if isinstance(dest, PairRoute) else (dest,)
            )
            for pid in dests:
                if pid not in out_places:
                    raise ModelError(
                        f"transition {t.id}: routing of {label!r} targets {pid!r}, "
                        "which is not an output-arc place"
                    )
        if t.address_guard is not None and self.selector_place(t) is None:
            raise ModelError(
                f"transition {t.id}: an address guard needs an ancillary input place"
            )

    def place(self, pid: str) -> Place:
        try:
            return self._places[pid]
        except KeyError:
            raise ModelError(f"unknown place {pid!r}") from None

    def transition(self, tid: str) -> Transition:
        try:
            return self._transitions[tid]
        except KeyError:
            raise ModelError(f"unknown transition {tid!r}") from None

    def selector_place(self, t: Transition) -> str | None:
        """The ancillary-supply input place consulted by an address guard."""
        supplies = [
            arc.place
            for arc in t.input_arcs
            if self._places[arc.place].kind is PlaceKind.ANCILLARY
        ]
        return supplies[0] if supplies else None

    def is_output_side(self, t: Transition) -> bool:
        """True when every input place is a data/ancillary staging place."""
        return all(
            self._places[arc.place].kind is PlaceKind.DATA_ANCILLARY for arc in t.input_arcs
        )

    def guard_map(self) -> dict[int, str]:
        """Guard value to transition id; requires guard values to be unique."""
        out: dict[int, str] = {}
        for t in self.transitions:
            if t.address_guard is None:
                continue
            if t.address_guard in out:
                raise ModelError(
                    f"guard value {t.address_guard} is used by both "
                    f"{out[t.address_guard]} and {t.id}"
                )
            out[t.address_guard] = t.id
        return out

    def initial_marking(self, assignment: dict[str, list[str]]) -> "Marking":
        """Marking at t=0 with each listed token queued singly, in order."""
        queues: dict[str, tuple[Entry, ...]] = {p.id: () for p in self.places}
        seen: set[str] = set()
        for pid, toks in assignment.items():
            self.place(pid)
            for tok in toks:
                if tok not in self.tokens:
                    raise ModelError(f"unknown token {tok!r}")
                if tok in seen:
                    raise ModelError(f"token {tok!r} assigned to more than one place")
                seen.add(tok)
            queues[pid] = tuple((tok,) for tok in toks)
        if seen != set(self.tokens):
            raise ModelError(f"tokens never placed: {sorted(set(self.tokens) - seen)}")
        payloads = {tok.id: tok.payload for tok in self.tokens.values()}
        addresses = {tok.id: tok.address for tok in self.tokens.values()}
        return Marking(queues, payloads, addresses, time=0)


class Marking:
    """Immutable snapshot: queue contents, payload table, addresses, time."""

    __slots__ = ("_queues", "_token_place", "_payloads", "_addresses", "time")

    def __init__(self, queues, payloads, addresses, time):
        object.__setattr__(self, "_queues", {p: tuple(es) for p, es in queues.items()})
        object.__setattr__(self, "_payloads", dict(payloads))
        object.__setattr__(self, "_addresses", dict(addresses))
        object.__setattr__(self, "time", time)
        token_place: dict[str, str] = {}
        for pid, entries in self._queues.items():
            for entry in entries:
                for tok in entry:
                    if tok in token_place:
                        raise ModelError(f"token {tok!r} appears in more than one place")
                    token_place[tok] = pid
        object.__setattr__(self, "_token_place", token_place)

    def __setattr__(self, name, value):
        raise AttributeError("Marking is immutable")

    @property
    def place_ids(self) -> tuple[str, ...]:
        return tuple(self._queues)

    def entries(self, pid: str) -> tuple[Entry, ...]:
        return self._queues[pid]

    def entry_count(self, pid: str) -> int:
        return len(self._queues[pid])

    def token_count(self, pid: str) -> int:
        return sum(len(e) for e in self._queues[pid])

    def tokens_in(self, pid: str) -> tuple[str, ...]:
        return tuple(tok for entry in self._queues[pid] for tok in entry)

    def place_of(self, tok: str) -> str:
        try:
            return self._token_place[tok]
        except KeyError:
            raise ModelError(f"token {tok!r} is not in any place") from None

    def payload(self, tok: str) -> StateVector:
        return self._payloads[tok]

    def address(self, tok: str) -> int | None:
        return self._addresses[tok]

    def counts(self) -> dict[str, int]:
        return {pid: self.token_count(pid) for pid in self._queues}

    def key(self) -> tuple:
        """Hashable content key (time excluded) for visited-state tracking."""
        return (
            tuple((pid, self._queues[pid]) for pid in self._queues),
            tuple(sorted((t, a if a is not None else -1) for t, a in self._addresses.items())),
            tuple(sorted((t, p.amplitudes.tobytes()) for t, p in self._payloads.items())),
        )

    def __eq__(self, other):
        if not isinstance(other, Marking):
            return NotImplemented
        return self.time == other.time and self.key() == other.key()

    def __hash__(self):
        return hash((self.time, self.key()))

    def validate(self, net: QPNet):
        if set(self._queues) != {p.id for p in net.places}:
            raise ModelError("marking places disagree with the net")
        if set(self._token_place) != set(net.tokens):
            raise ModelError("marking tokens disagree with the net")


@dataclass(frozen=True)
class TokenMove:
    """One token's role in a firing: where it was/went and its payload there."""

    token: str
    place: str
    payload: StateVector
    address: int | None


@dataclass(frozen=True)
class FiringEvent:
    """One transition firing.

    ``consumed`` lists tokens in consumption order with pre-firing payloads;
    ``produced`` lists them in deposit order with post-firing payloads.  The
    entry-size tuples record how consecutive tokens grouped into queue
    entries, so the firing can be unwound exactly.
    """

    time: int
    transition: str
    consumed: tuple[TokenMove, ...]
    produced: tuple[TokenMove, ...]
    consumed_entry_sizes: tuple[int, ...]
    produced_entry_sizes: tuple[int, ...]

    def _group(self, moves, sizes):
        out, i = [], 0
        for size in sizes:
            out.append(tuple(moves[i : i + size]))
            i += size
        return out

    def consumed_entries(self) -> list[tuple[TokenMove, ...]]:
        return self._group(self.consumed, self.consumed_entry_sizes)

    def produced_entries(self) -> list[tuple[TokenMove, ...]]:
        return self._group(self.produced, self.produced_entry_sizes)


@dataclass(frozen=True)
class SkippedSelection:
    """A scheduler selection that could not fire and was passed over."""

    time: int
    transition: str | None
    reason: str


@dataclass(frozen=True)
class Trace:
    initial: Marking
    events: tuple[FiringEvent | SkippedSelection, ...]
    final: Marking

    def firings(self) -> tuple[FiringEvent, ...]:
        return tuple(e for e in self.events if isinstance(e, FiringEvent))


def _guard_ok(net: QPNet, marking: Marking, t: Transition) -> bool:
    if t.address_guard is None:
        return True
    supply = net.selector_place(t)
    entries = marking.entries(supply)
    if not entries:
        return False
    head = entries[0][0]
    addr = marking.address(head)
    return addr is None or addr == t.address_guard


def _is_enabled(net: QPNet, marking: Marking, t: Transition) -> bool:
    for arc in t.input_arcs:
        if marking.entry_count(arc.place) < arc.multiplicity:
            return False
    for arc in t.inhibitor_arcs:
        if marking.entry_count(arc.place) > 0:
            return False
    return _guard_ok(net, marking, t)


def enabled_transitions(net: QPNet, marking: Marking) -> list[str]:
    """Ids of all currently enabled transitions, ordered by id."""
    marking.validate(net)
    enabled = [t.id for t in net.transitions if _is_enabled(net, marking, t)]
    return sorted(enabled, key=_tid_key)


def _split_product(state: StateVector, widths: list[int]) -> list[StateVector]:
    """Factor a joint state into per-token payloads of the given widths.

    The first width owns the high-order qubits.  Basis states split exactly;
    separable non-basis states split via SVD.  An entangled joint state
    cannot be attributed to individual tokens and is rejected.
    """
    if sum(widths) != state.num_qubits:
        raise ModelError("payload widths disagree with the joint state")
    if len(widths) == 1:
        return [state]
    if state.is_basis_state():
        index = state.basis_index()
        amp = state.amplitudes[index]
        parts: list[StateVector] = []
        rem = state.num_qubits
        for w in widths:
            rem -= w
            parts.append(basis_state_from_index(w, (index >> rem) & ((1 << w) - 1)))
        if amp != 1.0:  # carry any global phase on the last factor
            amps = parts[-1].amplitudes * amp
            parts[-1] = StateVector(widths[-1], amps)
        return parts
    head, rest = widths[0], sum(widths[1:])
    matrix = state.amplitudes.reshape(1 << head, 1 << rest)
    u, s, vh = np.linalg.svd(matrix)
    if len(s) > 1 and s[1] > 1e-9:
        raise ModelError("gate entangled the payloads across token boundaries")
    left = u[:, 0]
    right = vh[0] * s[0]
    pivot = left[np.argmax(np.abs(left))]
    phase = pivot / abs(pivot)
    left = left * np.conj(phase)
    right = right * phase
    return [StateVector(head, left)] + _split_product(
        StateVector(rest, right), widths[1:]
    )


def _tensor_all(payloads: list[StateVector]) -> StateVector:
    joint = payloads[0]
    for p in payloads[1:]:
        joint = tensor(joint, p)
    return joint


def fire(net: QPNet, marking: Marking, tid: str) -> tuple[Marking, FiringEvent]:
    """Fire a transition: consume head entries, transform, deposit, advance time."""
    t = net.transition(tid)
    if not _is_enabled(net, marking, t):
        raise NotEnabledError(f"transition {tid} cannot fire")

    queues = {pid: list(marking.entries(pid)) for pid in marking.place_ids}
    payloads = dict(marking._payloads)
    addresses = dict(marking._addresses)

    consumed_moves: list[TokenMove] = []
    consumed_sizes: list[int] = []
    entries_by_label: dict[str, list[Entry]] = {}
    for arc in t.input_arcs:
        taken = []
        for _ in range(arc.multiplicity):
            entry = queues[arc.place].pop(0)
            taken.append(entry)
            consumed_sizes.append(len(entry))
            for tok in entry:
                consumed_moves.append(
                    TokenMove(tok, arc.place, marking.payload(tok), marking.address(tok))
                )
        entries_by_label[arc.label] = taken

    # Materialize a free selector: consuming it through a guard assigns the
    # guard's basis value as its address and payload.
    if t.address_guard is not None:
        supply = net.selector_place(t)
        selector = next(m.token for m in consumed_moves if m.place == supply)
        if addresses[selector] is None:
            width = payloads[selector].num_qubits
            if t.address_guard >= (1 << width):
                raise ModelError(
                    f"guard {t.address_guard} does not fit selector {selector}'s "
                    f"{width}-qubit payload"
                )
            addresses[selector] = t.address_guard
            payloads[selector] = basis_state_from_index(width, t.address_guard)

    data_tokens = [
        m.token for m in consumed_moves if net.tokens[m.token].kind is TokenKind.DATA
    ]
    if t.gate and data_tokens:
        widths = [payloads[tok].num_qubits for tok in data_tokens]
        joint = apply_all(_tensor_all([payloads[tok] for tok in data_tokens]), t.gate)
        for tok, part in zip(data_tokens, _split_product(joint, widths)):
            payloads[tok] = part

    # Deposit: resolve destinations per label, then fuse a data+ancillary
    # pair arriving together at a staging place into one entry.
    deposits: dict[str, list[str]] = {}
    for arc in t.input_arcs:
        dest = t.routing[arc.label]
        for entry in entries_by_label[arc.label]:
            if isinstance(dest, PairRoute):
                by_kind = {net.tokens[tok].kind: tok for tok in entry}
                if len(entry) != 2 or set(by_kind) != {TokenKind.DATA, TokenKind.ANCILLARY}:
                    raise ModelError(
                        f"transition {tid}: pair routing needs a (data, ancillary) entry, "
                        f"got {entry}"
                    )
                deposits.setdefault(dest.data_to, []).append(by_kind[TokenKind.DATA])
                deposits.setdefault(dest.ancillary_to, []).append(by_kind[TokenKind.ANCILLARY])
            else:
                deposits.setdefault(dest, []).extend(entry)

    produced_moves: list[TokenMove] = []
    produced_sizes: list[int] = []
    for pid, toks in deposits.items():
        kinds = {net.tokens[tok].kind for tok in toks}
        if (
            net.place(pid).kind is PlaceKind.DATA_ANCILLARY
            and len(toks) == 2
            and kinds == {TokenKind.DATA, TokenKind.ANCILLARY}
        ):
            ordered = sorted(toks, key=lambda tok: net.tokens[tok].kind is not TokenKind.DATA)
            queues[pid].append(tuple(ordered))
            produced_sizes.append(2)
            produced_moves.extend(
                TokenMove(tok, pid, payloads[tok], addresses[tok]) for tok in ordered
            )
        else:
            for tok in toks:
                queues[pid].append((tok,))
                produced_sizes.append(1)
                produced_moves.append(TokenMove(tok, pid, payloads[tok], addresses[tok]))

    event = FiringEvent(
        time=marking.time,
        transition=tid,
        consumed=tuple(consumed_moves),
        produced=tuple(produced_moves),
        consumed_entry_sizes=tuple(consumed_sizes),
        produced_entry_sizes=tuple(produced_sizes),
    )
    new_marking = Marking(queues, payloads, addresses, time=marking.time + 1)
    return new_marking, event


def unfire(net: QPNet, marking: Marking, event: FiringEvent) -> Marking:
    """Undo the most recent firing, restoring the pre-firing marking exactly.

    Payloads are recomputed by applying the transition's gate sequence in
    reverse (every supported gate is self-inverse) and cross-checked against
    the event's recorded pre-firing payloads.
    """
    if marking.time != event.time + 1:
        raise ReversalError(
            f"marking time {marking.time} does not follow event time {event.time}"
        )
    t = net.transition(event.transition)
    queues = {pid: list(marking.entries(pid)) for pid in marking.place_ids}
    payloads = dict(marking._payloads)
    addresses = dict(marking._addresses)

    # Produced entries must sit, in order, at the tails of their queues.
    produced = event.produced_entries()
    for entry_moves in reversed(produced):
        pid = entry_moves[0].place
        entry = tuple(m.token for m in entry_moves)
        if not queues[pid] or queues[pid][-1] != entry:
            raise ReversalError(
                f"queue tail of {pid} does not match event entry {entry}"
            )
        queues[pid].pop()
        for move in entry_moves:
            if payloads[move.token] != move.payload or addresses[move.token] != move.address:
                raise ReversalError(f"token {move.token} state does not match the event")

    # Recompute pre-firing data payloads through the inverse gate.
    data_moves = [
        m for m in event.consumed if net.tokens[m.token].kind is TokenKind.DATA
    ]
    if t.gate and data_moves:
        post = {m.token: m.payload for m in event.produced}
        widths = [post[m.token].num_qubits for m in data_moves]
        joint = apply_all(
            _tensor_all([post[m.token] for m in data_moves]), tuple(reversed(t.gate))
        )
        for move, part in zip(data_moves, _split_product(joint, widths)):
            if part != move.payload:
                raise ReversalError(
                    f"inverse gate does not reproduce {move.token}'s recorded payload"
                )

    for move in event.consumed:
        payloads[move.token] = move.payload
        addresses[move.token] = move.address

    # Re-prepend consumed entries at the heads of their source queues.
    consumed = event.consumed_entries()
    for entry_moves in reversed(consumed):
        pid = entry_moves[0].place
        queues[pid].insert(0, tuple(m.token for m in entry_moves))

    return Marking(queues, payloads, addresses, time=event.time)


@dataclass(frozen=True)
class Scripted:
    """Fire a fixed sequence of transitions."""

    steps: tuple[str, ...]
    on_blocked: str = "error"


@dataclass(frozen=True)
class AddressDriven:
    """Select guarded transitions by address, then drain unguarded ones.

    With a ``program``, each entry names the guard value to fire next; a
    selection whose transition is not enabled is skipped and recorded.
    Without a program, selections follow the head selector tokens' own
    addresses until none applies.  Afterwards (``drain``) the lowest-id
    enabled unguarded transition fires repeatedly until quiescence.
    """

    program: tuple[int, ...] | None = None
    drain: bool = True


@dataclass(frozen=True)
class EagerOutputThenScript:
    """Like Scripted, but drain enabled output-side transitions between steps."""

    steps: tuple[str, ...]
    on_blocked: str = "error"


Scheduler = Scripted | AddressDriven | EagerOutputThenScript


def addresses_to_script(net: QPNet, addresses) -> tuple[str, ...]:
    """Translate an address program into the guarded transitions it selects."""
    guards = net.guard_map()
    try:
        return tuple(guards[a] for a in addresses)
    except KeyError as exc:
        raise ModelError(f"no transition is guarded by address {exc.args[0]}") from None


def run(net: QPNet, marking: Marking, scheduler: Scheduler) -> Trace:
    """Drive the net with a scheduler and record the full trace."""
    events: list[FiringEvent | SkippedSelection] = []
    current = marking

    def fire_one(tid: str):
        nonlocal current
        current, event = fire(net, current, tid)
        events.append(event)

    def drain(candidates_filter):
        while True:
            enabled = enabled_transitions(net, current)
            pick = next((tid for tid in enabled if candidates_filter(net.transition(tid))), None)
            if pick is None:
                return
            fire_one(pick)

    def scripted_step(index: int, tid: str, on_blocked: str):
        if _is_enabled(net, current, net.transition(tid)):
            fire_one(tid)
        elif on_blocked == "skip":
            events.append(SkippedSelection(current.time, tid, "not enabled"))
        else:
            raise NotEnabledError(f"scripted transition {tid} is not enabled", step=index)

    if isinstance(scheduler, Scripted):
        for i, tid in enumerate(scheduler.steps):
            scripted_step(i, tid, scheduler.on_blocked)
    elif isinstance(scheduler, EagerOutputThenScript):
        for i, tid in enumerate(scheduler.steps):
            drain(net.is_output_side)
            scripted_step(i, tid, scheduler.on_blocked)
        drain(net.is_output_side)
    elif isinstance(scheduler, AddressDriven):
        if scheduler.program is not None:
            guards = net.guard_map()
            for a in scheduler.program:
                tid = guards.get(a)
                if tid is not None and _is_enabled(net, current, net.transition(tid)):
                    fire_one(tid)
                else:
                    events.append(
                        SkippedSelection(current.time, tid, f"selection {a} not firable")
                    )
        else:
            while True:
                enabled = enabled_transitions(net, current)
                pick = next(
                    (
                        tid
                        for tid in enabled
                        if net.transition(tid).address_guard is not None
                    ),
                    None,
                )
                if pick is None:
                    break
                fire_one(pick)
        if scheduler.drain:
            drain(lambda t: t.address_guard is None)
    else:
        raise ModelError(f"unknown scheduler {scheduler!r}")

    return Trace(initial=marking, events=tuple(events), final=current)


def distribution_signature(marking: Marking) -> tuple[tuple[str, int], ...]:
    """Per-place token counts, in the marking's place order."""
    return tuple((pid, marking.token_count(pid)) for pid in marking.place_ids)


def enumerate_final_markings(
    net: QPNet, marking: Marking, step_bound: int = DEFAULT_STEP_BOUND
) -> dict[tuple[tuple[str, int], ...], tuple[str, ...]]:
    """All quiescent-state signatures reachable by maximal firing sequences.

    Performs an exhaustive depth-first exploration of every enabled choice,
    deduplicating outcomes by distribution signature; each signature keeps
    one witness firing sequence.  Identical intermediate markings share
    their explored suffixes.  Raises once more than ``step_bound`` firings
    have been explored.
    """
    memo: dict[tuple, dict] = {}
    fired = 0

    def explore(m: Marking) -> dict:
        nonlocal fired
        key = m.key()
        if key in memo:
            return memo[key]
        enabled = enabled_transitions(net, m)
        if not enabled:
            result = {distribution_signature(m): ()}
        else:
            result = {}
            for tid in enabled:
                fired += 1
                if fired > step_bound:
                    raise ExplosionError(
                        f"enumeration exceeded the step bound of {step_bound} firings"
                    )
                nxt, _ = fire(net, m, tid)
                for sig, suffix in explore(nxt).items():
                    result.setdefault(sig, (tid,) + suffix)
        memo[key] = result
        return result

    result = explore(marking)
    return dict(sorted(result.items()))

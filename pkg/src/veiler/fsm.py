"""Finite-automaton data model and the graph algorithms shared by every other module.

States are opaque hashable values with a stable display name; events are
(symbol, tag) labels so that fictitious copies of an event can be told apart
from the real one while still sorting next to it.  Transition functions are
partial: a missing (state, label) entry means the move is undefined.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Any, Hashable, Iterable, Mapping, Sequence

State = Hashable


class Tag(IntEnum):
    """How a label relates to the real system output."""

    ACTUAL = 0
    INSERTED = 1
    INSERTED_BEFORE = 2
    INSERTED_AFTER = 3


_SUFFIX = {
    Tag.ACTUAL: "",
    Tag.INSERTED: "_i",
    Tag.INSERTED_BEFORE: "_bi",
    Tag.INSERTED_AFTER: "_ai",
}
# Longest suffix first so "_bi" is not mistaken for "_i".
_SUFFIXES_BY_LENGTH = sorted(
    ((suffix, tag) for tag, suffix in _SUFFIX.items() if suffix),
    key=lambda item: -len(item[0]),
)


@dataclass(frozen=True, order=True)
class EventLabel:
    """An event symbol plus the tag saying whether it is real or inserted.

    Ordering is (symbol, tag) so canonical iteration is stable.  Two labels
    look identical to an outside observer iff their symbols match; the tag
    only matters to the machinery that distinguishes real from fictitious
    output.
    """

    symbol: str
    tag: Tag = Tag.ACTUAL

    def display(self) -> str:
        return self.symbol + _SUFFIX[self.tag]

    def as_actual(self) -> EventLabel:
        return EventLabel(self.symbol)

    @property
    def inserted(self) -> bool:
        return self.tag is not Tag.ACTUAL


def as_label(e: str | EventLabel) -> EventLabel:
    """Coerce a bare symbol to an actual-event label."""
    if isinstance(e, EventLabel):
        return e
    return EventLabel(e)


def word(text: str) -> tuple[EventLabel, ...]:
    """Parse a test-friendly string of labels.

    Tokens are whitespace-separated; a string without whitespace is one
    token when it contains an underscore and a character per token
    otherwise.  A trailing ``_i``/``_bi``/``_ai`` marks a token as inserted.
    """
    if any(ch.isspace() for ch in text):
        tokens = text.split()
    elif "_" in text:
        tokens = [text]
    else:
        tokens = list(text)
    out: list[EventLabel] = []
    for token in tokens:
        for suffix, tag in _SUFFIXES_BY_LENGTH:
            if token.endswith(suffix) and len(token) > len(suffix):
                out.append(EventLabel(token[: -len(suffix)], tag))
                break
        else:
            out.append(EventLabel(token))
    return tuple(out)


def state_display(x: State) -> str:
    """Stable display name of a state; composite states provide display()."""
    method = getattr(x, "display", None)
    if callable(method):
        return method()
    return str(x)


def sorted_states(states: Iterable[State]) -> list[State]:
    return sorted(states, key=state_display)


def sorted_labels(labels: Iterable[EventLabel]) -> list[EventLabel]:
    return sorted(labels)


_EMPTY: frozenset = frozenset()


@dataclass(frozen=True)
class Automaton:
    """A finite automaton with a possibly partial transition relation.

    ``transitions`` maps (state, label) to the nonempty set of successors; a
    missing key means the move is undefined.  The secret set rides along on
    the automaton itself so there is one source of truth for it; modules
    that do not care about secrecy simply never read it.
    """

    states: frozenset
    events: frozenset
    transitions: Mapping[tuple[State, EventLabel], frozenset]
    initial: frozenset
    secret: frozenset = frozenset()
    deterministic: bool = False

    def __post_init__(self) -> None:
        if not self.initial <= self.states:
            raise ValueError("initial states must belong to the state set")
        if not self.secret <= self.states:
            raise ValueError("secret states must belong to the state set")
        outgoing: dict[State, dict[EventLabel, frozenset]] = {}
        for (x, e), targets in self.transitions.items():
            if x not in self.states:
                raise ValueError(f"transition source {state_display(x)!r} is not a state")
            if e not in self.events:
                raise ValueError(f"transition label {e.display()!r} is not an event")
            if not targets:
                raise ValueError("transition entries must be nonempty")
            if not targets <= self.states:
                raise ValueError("transition target outside the state set")
            if self.deterministic and len(targets) > 1:
                raise ValueError("deterministic automaton has a multi-target transition")
            outgoing.setdefault(x, {})[e] = targets
        if self.deterministic and len(self.initial) != 1:
            raise ValueError("deterministic automaton needs exactly one initial state")
        object.__setattr__(self, "_outgoing", outgoing)

    @classmethod
    def dfa(
        cls,
        states: Iterable[State],
        events: Iterable[str | EventLabel],
        transitions: Mapping[tuple[State, str | EventLabel], State],
        initial: State,
        secret: Iterable[State] = (),
    ) -> Automaton:
        """Build a deterministic automaton from single-successor transitions."""
        trans = {
            (x, as_label(e)): frozenset({y}) for (x, e), y in transitions.items()
        }
        return cls(
            frozenset(states),
            frozenset(as_label(e) for e in events),
            trans,
            frozenset({initial}),
            frozenset(secret),
            True,
        )

    @classmethod
    def nfa(
        cls,
        states: Iterable[State],
        events: Iterable[str | EventLabel],
        transitions: Mapping[tuple[State, str | EventLabel], Iterable[State]],
        initial: Iterable[State],
        secret: Iterable[State] = (),
    ) -> Automaton:
        """Build a possibly nondeterministic automaton; determinism is inferred."""
        trans: dict[tuple[State, EventLabel], frozenset] = {}
        for (x, e), ys in transitions.items():
            targets = frozenset(ys)
            if targets:
                trans[(x, as_label(e))] = targets
        initial = frozenset(initial)
        deterministic = len(initial) == 1 and all(
            len(targets) == 1 for targets in trans.values()
        )
        return cls(
            frozenset(states),
            frozenset(as_label(e) for e in events),
            trans,
            initial,
            frozenset(secret),
            deterministic,
        )

    # -- lookups ---------------------------------------------------------

    def _require_state(self, x: State) -> State:
        if x not in self.states:
            raise ValueError(f"unknown state {state_display(x)!r}")
        return x

    def _require_label(self, e: str | EventLabel) -> EventLabel:
        label = as_label(e)
        if label not in self.events:
            raise ValueError(f"unknown event label {label.display()!r}")
        return label

    def step(self, x: State, e: EventLabel) -> frozenset:
        """Successors of x under label e; empty when undefined."""
        return self.transitions.get((x, e), _EMPTY)

    def outgoing(self, x: State) -> Mapping[EventLabel, frozenset]:
        """Defined moves at x as a label -> successor-set mapping."""
        return self._outgoing.get(x, {})

    def run(self, source: State, s: Sequence[str | EventLabel]) -> frozenset:
        """All states reachable from source via exactly s.

        An empty result means s is not generated from source.  For
        deterministic automata the result has at most one element.
        """
        self._require_state(source)
        current: set = {source}
        for e in s:
            label = self._require_label(e)
            nxt: set = set()
            for x in current:
                nxt |= self.step(x, label)
            current = nxt
            if not current:
                break
        return frozenset(current)

    def enabled_events(self, x: State) -> frozenset:
        """Labels with a transition defined at x."""
        self._require_state(x)
        return frozenset(self._outgoing.get(x, {}))

    def incoming_events(self, x: State) -> frozenset:
        """Labels by which some state can reach x in one step."""
        self._require_state(x)
        return frozenset(
            e for (_, e), targets in self.transitions.items() if x in targets
        )

    def postset(self, x: State) -> frozenset:
        """One-step successors of x under any label."""
        self._require_state(x)
        out: set = set()
        for targets in self._outgoing.get(x, {}).values():
            out |= targets
        return frozenset(out)

    def accessible_part(self) -> Automaton:
        """Restriction to the states reachable from the initial set."""
        reached = set(self.initial)
        frontier = list(self.initial)
        while frontier:
            x = frontier.pop()
            for targets in self._outgoing.get(x, {}).values():
                for y in targets:
                    if y not in reached:
                        reached.add(y)
                        frontier.append(y)
        transitions = {
            key: targets for key, targets in self.transitions.items() if key[0] in reached
        }
        return Automaton(
            frozenset(reached),
            self.events,
            transitions,
            self.initial,
            self.secret & frozenset(reached),
            self.deterministic,
        )


@dataclass(frozen=True)
class SccPartition:
    """Partition of a node set into strongly connected components."""

    components: tuple[frozenset, ...]
    component_of: Mapping[State, int]


def strongly_connected_components(
    nodes: Iterable[State], edges: Iterable[tuple[State, State]]
) -> SccPartition:
    """Tarjan's algorithm, iterative so deep graphs cannot blow the stack.

    Nodes and adjacency lists are visited in display order, which makes the
    component order deterministic.  A single node with no self-edge is its
    own component.
    """
    node_set = set(nodes)
    adjacency: dict[State, list[State]] = {x: [] for x in node_set}
    for src, dst in edges:
        if src not in node_set or dst not in node_set:
            raise ValueError("edge endpoint outside the node set")
        adjacency[src].append(dst)
    for x in adjacency:
        adjacency[x].sort(key=state_display)

    index: dict[State, int] = {}
    lowlink: dict[State, int] = {}
    on_stack: set = set()
    stack: list[State] = []
    components: list[frozenset] = []
    counter = 0

    for root in sorted_states(node_set):
        if root in index:
            continue
        index[root] = lowlink[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        work: list[tuple[State, Any]] = [(root, iter(adjacency[root]))]
        while work:
            node, successors = work[-1]
            descended = False
            for succ in successors:
                if succ not in index:
                    index[succ] = lowlink[succ] = counter
                    counter += 1
                    stack.append(succ)
                    on_stack.add(succ)
                    work.append((succ, iter(adjacency[succ])))
                    descended = True
                    break
                if succ in on_stack:
                    lowlink[node] = min(lowlink[node], index[succ])
            if descended:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[node])
            if lowlink[node] == index[node]:
                component = set()
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.add(member)
                    if member == node:
                        break
                components.append(frozenset(component))

    component_of = {
        x: i for i, component in enumerate(components) for x in component
    }
    return SccPartition(tuple(components), component_of)

"""Unconstrained event-insertion analysis.

Builds the insertion automaton (fictitious self-loops), the indicator product
tracking (dummy, actual) state pairs, prunes trapping regions into the
verifier, and decides whether opacity can be enforced by inserting fictitious
events around every real output.

The dummy component of a pair is the state the outside observer believes the
system is in; the actual component is where the system really is.  Dashed
(inserted) moves advance only the dummy; solid moves advance both.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .fsm import (
    Automaton,
    EventLabel,
    State,
    Tag,
    sorted_labels,
    sorted_states,
    state_display,
    strongly_connected_components,
)


def apply_mask_mi(s: Sequence[EventLabel]) -> tuple[EventLabel, ...]:
    """Re-tag every label as actual: inserted and real events look alike outside."""
    return tuple(label.as_actual() for label in s)


def apply_projection_pui(s: Sequence[EventLabel]) -> tuple[EventLabel, ...]:
    """Keep only the actual labels: what the system really produced."""
    return tuple(label for label in s if not label.inserted)


def apply_projection_pi(s: Sequence[EventLabel]) -> tuple[EventLabel, ...]:
    """Keep only the inserted labels."""
    return tuple(label for label in s if label.inserted)


def _actual_labels(a: Automaton) -> list[EventLabel]:
    return sorted_labels(e for e in a.events if not e.inserted)


def build_insertion_automaton(g: Automaton) -> Automaton:
    """The system plus a fictitious self-loop for every symbol at every state.

    The self-loops model the fact that an inserted event never moves the
    system itself, only the observer's belief.
    """
    if not g.deterministic:
        raise ValueError("insertion analysis requires a deterministic automaton")
    actual = _actual_labels(g)
    inserted = [EventLabel(e.symbol, Tag.INSERTED) for e in actual]
    transitions = dict(g.transitions)
    for x in g.states:
        for label in inserted:
            transitions[(x, label)] = frozenset({x})
    return Automaton(
        g.states,
        g.events | frozenset(inserted),
        transitions,
        g.initial,
        g.secret,
        True,
    )


@dataclass(frozen=True)
class IndicatorState:
    """A (dummy, actual) pair: believed state versus true state."""

    dummy: State
    actual: State

    def display(self) -> str:
        return f"({state_display(self.dummy)},{state_display(self.actual)})"


def build_indicator(g: Automaton, gf: Automaton) -> Automaton:
    """Product of the system with its insertion automaton.

    Solid edges relay a real event to both components; dashed edges move the
    dummy through a real transition while the actual state stays put, which
    is exactly what inserting that event does to the observer.  Only the
    accessible part is materialized.  A pair is marked secret when its dummy
    is a secret system state.
    """
    if gf != build_insertion_automaton(g):
        raise ValueError("second argument must be the insertion automaton of the first")
    (x0,) = g.initial
    actual = _actual_labels(g)
    inserted = {e: EventLabel(e.symbol, Tag.INSERTED) for e in actual}

    initial = IndicatorState(x0, x0)
    states = {initial}
    transitions: dict[tuple[State, EventLabel], frozenset] = {}
    frontier = [initial]
    while frontier:
        pair = frontier.pop()
        for e in actual:
            dummy_next = g.step(pair.dummy, e)
            if not dummy_next:
                continue
            (dummy,) = dummy_next
            # Dashed: the insertion moves only the observer's belief.
            dashed_target = IndicatorState(dummy, pair.actual)
            transitions[(pair, inserted[e])] = frozenset({dashed_target})
            if dashed_target not in states:
                states.add(dashed_target)
                frontier.append(dashed_target)
            # Solid: the real event is relayed, both components advance.
            actual_next = g.step(pair.actual, e)
            if actual_next:
                (act,) = actual_next
                solid_target = IndicatorState(dummy, act)
                transitions[(pair, e)] = frozenset({solid_target})
                if solid_target not in states:
                    states.add(solid_target)
                    frontier.append(solid_target)

    secret = frozenset(p for p in states if p.dummy in g.secret)
    return Automaton(
        frozenset(states),
        frozenset(actual) | frozenset(inserted.values()),
        transitions,
        frozenset({initial}),
        secret,
        True,
    )


@dataclass(frozen=True)
class SubspacePartition:
    """Indicator states grouped by actual component, then by inserted-edge SCC."""

    first_level: Mapping[State, frozenset]
    second_level: Mapping[tuple[State, int], frozenset]


def partition_subspaces(ia: Automaton) -> SubspacePartition:
    """Group pairs by their actual component and split each group into the
    SCCs of its internal dashed-edge graph.

    Dashed edges never change the actual component, so every dashed edge is
    internal to its group.
    """
    first: dict[State, set] = {}
    for pair in ia.states:
        first.setdefault(pair.actual, set()).add(pair)

    second: dict[tuple[State, int], frozenset] = {}
    for actual in sorted_states(first):
        members = first[actual]
        edges = []
        for pair in members:
            for label, targets in ia.outgoing(pair).items():
                if not label.inserted:
                    continue
                (target,) = targets
                if target in members:
                    edges.append((pair, target))
        partition = strongly_connected_components(members, edges)
        for index, component in enumerate(partition.components):
            second[(actual, index)] = component

    return SubspacePartition(
        {actual: frozenset(members) for actual, members in first.items()}, second
    )


def find_trapping_sccs(
    ia: Automaton, p: SubspacePartition, g: Automaton
) -> frozenset:
    """Second-level SCCs from which the next real output can never be relayed.

    An SCC of subspace x_k is trapping when (1) no member has a solid move
    for any event enabled at x_k in the system, and (2) every dashed move
    from a member stays inside the SCC or is undefined.  The system g is
    consulted for the enabled-event sets because pruning can remove every
    pair that would otherwise witness them.
    """
    trapping = set()
    for (actual, index), component in p.second_level.items():
        enabled = g.enabled_events(actual)
        solid_possible = any(
            ia.step(pair, e) for pair in component for e in enabled
        )
        if solid_possible:
            continue
        contained = True
        for pair in component:
            for label, targets in ia.outgoing(pair).items():
                if not label.inserted:
                    continue
                (target,) = targets
                if target not in component:
                    contained = False
                    break
            if not contained:
                break
        if contained:
            trapping.add(component)
    return frozenset(trapping)


def _restrict(a: Automaton, keep: frozenset) -> Automaton:
    transitions = {
        (x, e): targets
        for (x, e), targets in a.transitions.items()
        if x in keep and targets <= keep
    }
    return Automaton(
        keep,
        a.events,
        transitions,
        a.initial & keep,
        a.secret & keep,
        a.deterministic if a.initial & keep else False,
    )


def build_verifier(ia: Automaton, g: Automaton) -> Automaton:
    """Iteratively prune trapping SCCs, then keep the accessible part.

    Removing one SCC deletes its incident edges, which can strand another
    SCC; the loop runs to a fixpoint.  If the initial pair itself is pruned
    the verifier is empty and enforceability fails downstream.
    """
    current = ia
    while True:
        partition = partition_subspaces(current)
        trapping = find_trapping_sccs(current, partition, g)
        if not trapping:
            break
        doomed = set()
        for component in trapping:
            doomed |= component
        current = _restrict(current, current.states - frozenset(doomed))
        if not current.initial:
            return _restrict(current, frozenset())
    return current.accessible_part()


def find_staying_nonblocking(v: Automaton, g: Automaton) -> frozenset:
    """Pairs lying in verifier SCCs from which every next real output stays relayable.

    An SCC of subspace x_k qualifies when, for every event enabled at x_k,
    some pair reachable from the SCC by dashed moves inside the subspace
    (possibly the SCC itself, since the inserted string may be empty) still
    has that solid move defined in the verifier.
    """
    partition = partition_subspaces(v)
    by_subspace: dict[State, list[tuple[int, frozenset]]] = {}
    for (actual, index), component in partition.second_level.items():
        by_subspace.setdefault(actual, []).append((index, component))

    result: set = set()
    for actual, sccs in by_subspace.items():
        component_of = {}
        for index, component in sccs:
            for pair in component:
                component_of[pair] = index
        # SCC-level dashed reachability inside this subspace.
        successors: dict[int, set[int]] = {index: set() for index, _ in sccs}
        for index, component in sccs:
            for pair in component:
                for label, targets in v.outgoing(pair).items():
                    if not label.inserted:
                        continue
                    (target,) = targets
                    if target.actual == actual:
                        successors[index].add(component_of[target])
        closures: dict[int, set[int]] = {}
        for index, _ in sccs:
            seen = {index}
            stack = [index]
            while stack:
                node = stack.pop()
                for nxt in successors[node]:
                    if nxt not in seen:
                        seen.add(nxt)
                        stack.append(nxt)
            closures[index] = seen

        members = {index: component for index, component in sccs}
        enabled = g.enabled_events(actual)
        for index, component in sccs:
            reach = set()
            for other in closures[index]:
                reach |= members[other]
            if all(any(v.step(pair, e) for pair in reach) for e in enabled):
                result |= component
    return frozenset(result)


def admissible_states(
    v: Automaton, snb: frozenset, secret: Iterable[State]
) -> frozenset:
    """Staying-nonblocking pairs whose dummy the observer would not flag."""
    secret = frozenset(secret)
    return frozenset(pair for pair in snb if pair.dummy not in secret)


@dataclass(frozen=True)
class EiReport:
    enforceable: bool
    verifier: Automaton
    staying_nonblocking: frozenset
    admissible: frozenset
    uncovered_actual_states: frozenset
    unreachable_actual_states: frozenset


def check_ei_enforceable(g: Automaton) -> EiReport:
    """Full pipeline: enforceable iff every actual state has an admissible pair.

    The quantifier runs over all states of g, including ones unreachable in
    g itself; those can never acquire a pair, so they are reported
    separately to make the verdict legible.
    """
    gf = build_insertion_automaton(g)
    ia = build_indicator(g, gf)
    verifier = build_verifier(ia, g)
    snb = find_staying_nonblocking(verifier, g)
    admissible = admissible_states(verifier, snb, g.secret)
    covered = {pair.actual for pair in admissible}
    uncovered = frozenset(g.states - covered)
    unreachable = frozenset(g.states - g.accessible_part().states)
    return EiReport(
        not uncovered,
        verifier,
        snb,
        admissible,
        uncovered,
        unreachable,
    )

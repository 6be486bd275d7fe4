"""Event-insertion analysis under insertion constraints.

Some events may only be insertable before a real output, others only after
it.  The actual component of each tracked pair carries a decoration saying
where in the insertion pattern the run currently sits: plain between
outputs, ``a`` while inserting after the previous output, ``b`` while
inserting before the next one, ``ab`` once both have happened in that order.
The decoration forbids inserting before-events once the after-phase of the
next output has begun, which is exactly the constraint semantics.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, Mapping

from .fsm import (
    Automaton,
    EventLabel,
    State,
    Tag,
    sorted_labels,
    sorted_states,
    state_display,
)


@dataclass(frozen=True)
class InsertionConstraints:
    """Which symbols may be inserted before and after a real output."""

    before: frozenset
    after: frozenset

    @classmethod
    def of(cls, before: Iterable[str], after: Iterable[str]) -> InsertionConstraints:
        return cls(frozenset(before), frozenset(after))

    def validate_against(self, g: Automaton) -> None:
        alphabet = {e.symbol for e in g.events if not e.inserted}
        stray = (self.before | self.after) - alphabet
        if stray:
            raise ValueError(
                "constraint symbols outside the alphabet: " + ", ".join(sorted(stray))
            )


class Decoration(IntEnum):
    PLAIN = 0
    A = 1
    B = 2
    AB = 3


_DECORATION_SUFFIX = {
    Decoration.PLAIN: "",
    Decoration.A: "_a",
    Decoration.B: "_b",
    Decoration.AB: "_ab",
}


@dataclass(frozen=True)
class DecoratedState:
    """A system state carrying an insertion-phase decoration.

    Plain states are represented by the bare state itself, so an automaton
    built with no insertion capability collapses back to the original.
    """

    base: State
    decoration: Decoration

    def display(self) -> str:
        return state_display(self.base) + _DECORATION_SUFFIX[self.decoration]


def decoration_of(x: State) -> Decoration:
    return x.decoration if isinstance(x, DecoratedState) else Decoration.PLAIN


def base_of(x: State) -> State:
    return x.base if isinstance(x, DecoratedState) else x


def _decorate(base: State, decoration: Decoration) -> State:
    if decoration is Decoration.PLAIN:
        return base
    return DecoratedState(base, decoration)


# Dashed moves allowed per decoration: where a before- or after-insertion leads.
_BEFORE_MOVE = {
    Decoration.PLAIN: Decoration.B,
    Decoration.A: Decoration.AB,
    Decoration.B: Decoration.B,
    Decoration.AB: Decoration.AB,
}
_AFTER_MOVE = {
    Decoration.PLAIN: Decoration.A,
    Decoration.A: Decoration.A,
}


def build_eic_insertion_automaton(
    g: Automaton, c: InsertionConstraints
) -> Automaton:
    """The system enriched with decorated copies tracking the insertion phase.

    Every decoration relays a real event back to the plain target state.
    After-insertions are possible at the initial state only when something
    can actually lead there, since before the first output nothing has been
    produced to insert after; the two decorations that would claim otherwise
    are dropped in that case.
    """
    if not g.deterministic:
        raise ValueError("insertion analysis requires a deterministic automaton")
    c.validate_against(g)
    (x0,) = g.initial
    actual = sorted_labels(e for e in g.events if not e.inserted)
    before_labels = [EventLabel(sym, Tag.INSERTED_BEFORE) for sym in sorted(c.before)]
    after_labels = [EventLabel(sym, Tag.INSERTED_AFTER) for sym in sorted(c.after)]

    states: set = set()
    for x in g.states:
        for decoration in Decoration:
            states.add(_decorate(x, decoration))
    if not g.incoming_events(x0):
        states.discard(_decorate(x0, Decoration.A))
        states.discard(_decorate(x0, Decoration.AB))

    transitions: dict[tuple[State, EventLabel], frozenset] = {}
    for state in states:
        base = base_of(state)
        decoration = decoration_of(state)
        for e in actual:
            target = g.step(base, e)
            if target:
                (y,) = target
                transitions[(state, e)] = frozenset({y})
        for label in before_labels:
            nxt = _decorate(base, _BEFORE_MOVE[decoration])
            if nxt in states:
                transitions[(state, label)] = frozenset({nxt})
        if decoration in _AFTER_MOVE:
            for label in after_labels:
                nxt = _decorate(base, _AFTER_MOVE[decoration])
                if nxt in states:
                    transitions[(state, label)] = frozenset({nxt})

    full = Automaton(
        frozenset(states),
        g.events | frozenset(before_labels) | frozenset(after_labels),
        transitions,
        g.initial,
        g.secret,
        True,
    )
    return full.accessible_part()


def _constraints_of(geic: Automaton) -> InsertionConstraints:
    return InsertionConstraints(
        frozenset(e.symbol for e in geic.events if e.tag is Tag.INSERTED_BEFORE),
        frozenset(e.symbol for e in geic.events if e.tag is Tag.INSERTED_AFTER),
    )


@dataclass(frozen=True)
class EicIndicatorState:
    """A (dummy, decorated actual) pair under insertion constraints."""

    dummy: State
    actual: State

    def display(self) -> str:
        return f"({state_display(self.dummy)},{state_display(self.actual)})"


def build_eic_indicator(g: Automaton, geic: Automaton) -> Automaton:
    """Product of the system with its constrained insertion automaton.

    Dashed edges require both sides to move: the decoration must allow the
    insertion and the dummy must have a real transition on the inserted
    symbol, because the observer re-runs every event it sees.
    """
    if geic != build_eic_insertion_automaton(g, _constraints_of(geic)):
        raise ValueError(
            "second argument must be a constrained insertion automaton of the first"
        )
    (x0,) = g.initial
    actual_labels = sorted_labels(e for e in g.events if not e.inserted)
    dashed_labels = sorted_labels(e for e in geic.events if e.inserted)

    initial = EicIndicatorState(x0, x0)
    states = {initial}
    transitions: dict[tuple[State, EventLabel], frozenset] = {}
    frontier = [initial]
    while frontier:
        pair = frontier.pop()
        for e in actual_labels:
            dummy_next = g.step(pair.dummy, e)
            act_next = geic.step(pair.actual, e)
            if dummy_next and act_next:
                (dummy,) = dummy_next
                (act,) = act_next
                target = EicIndicatorState(dummy, act)
                transitions[(pair, e)] = frozenset({target})
                if target not in states:
                    states.add(target)
                    frontier.append(target)
        for label in dashed_labels:
            dummy_next = g.step(pair.dummy, label.as_actual())
            act_next = geic.step(pair.actual, label)
            if dummy_next and act_next:
                (dummy,) = dummy_next
                (act,) = act_next
                target = EicIndicatorState(dummy, act)
                transitions[(pair, label)] = frozenset({target})
                if target not in states:
                    states.add(target)
                    frontier.append(target)

    secret = frozenset(p for p in states if p.dummy in g.secret)
    return Automaton(
        frozenset(states),
        frozenset(actual_labels) | frozenset(dashed_labels),
        transitions,
        frozenset({initial}),
        secret,
        True,
    )


def find_eic_trapping_states(eia: Automaton) -> frozenset:
    """States with no outgoing move of any kind: nothing can be relayed or inserted."""
    have_out = {x for (x, _) in eia.transitions}
    return frozenset(eia.states - have_out)


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


def build_eic_verifier(eia: Automaton) -> Automaton:
    """Iteratively prune dead-end states, then keep the accessible part.

    Deleting a state deletes its incoming edges, which can leave a
    predecessor with no moves; the loop runs until nothing more dies.
    """
    current = eia
    while True:
        trapping = find_eic_trapping_states(current)
        if not trapping:
            break
        current = _restrict(current, current.states - trapping)
        if not current.initial:
            return _restrict(current, frozenset())
    return current.accessible_part()


def _before_walk_reach(ev: Automaton, start: State) -> set:
    """Pairs reachable from start via before-insertion edges only."""
    reached = set()
    frontier = [start]
    while frontier:
        pair = frontier.pop()
        for label, targets in ev.outgoing(pair).items():
            if label.tag is not Tag.INSERTED_BEFORE:
                continue
            (target,) = targets
            if target not in reached:
                reached.add(target)
                frontier.append(target)
    return reached


def find_staying_eic_nonblocking(ev: Automaton, g: Automaton) -> Mapping:
    """Pairs from which every next real output stays relayable, with their type.

    Type 1 pairs have a plain actual component; type 2 pairs sit in the
    after-phase of the previous output.  Either way the test is the same:
    every event enabled at the actual base state must be solidly defined at
    the pair itself or at some pair reached by inserting before-events.
    The system g supplies the enabled-event sets, which pruning may have
    made unreadable from the verifier alone.
    """
    result: dict = {}
    for pair in sorted_states(ev.states):
        decoration = decoration_of(pair.actual)
        if decoration not in (Decoration.PLAIN, Decoration.A):
            continue
        base = base_of(pair.actual)
        follow = {pair} | _before_walk_reach(ev, pair)
        if all(any(ev.step(q, e) for q in follow) for e in g.enabled_events(base)):
            result[pair] = 1 if decoration is Decoration.PLAIN else 2
    return result


def eic_admissible_states(
    ev: Automaton, nb: Mapping, secret: Iterable[State]
) -> frozenset:
    """Staying-nonblocking pairs whose dummy the observer would not flag."""
    secret = frozenset(secret)
    return frozenset(pair for pair in nb if pair.dummy not in secret)


@dataclass(frozen=True)
class EicReport:
    enforceable: bool
    eic_verifier: Automaton
    staying_nonblocking: Mapping
    admissible: frozenset
    uncovered_actual_states: frozenset
    unreachable_actual_states: frozenset


def check_eic_enforceable(g: Automaton, c: InsertionConstraints) -> EicReport:
    """Full pipeline: enforceable iff every actual state's subspace has an
    admissible pair."""
    geic = build_eic_insertion_automaton(g, c)
    eia = build_eic_indicator(g, geic)
    verifier = build_eic_verifier(eia)
    nb = find_staying_eic_nonblocking(verifier, g)
    admissible = eic_admissible_states(verifier, nb, g.secret)
    covered = {base_of(pair.actual) for pair in admissible}
    uncovered = frozenset(g.states - covered)
    unreachable = frozenset(g.states - g.accessible_part().states)
    return EicReport(
        not uncovered,
        verifier,
        nb,
        admissible,
        uncovered,
        unreachable,
    )

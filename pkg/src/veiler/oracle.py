"""Brute-force string-level checks used to cross-validate the pipelines.

Everything here is deliberately naive: insertion walks are bounded
breadth-first searches, sustainability is a fixpoint over (believed, actual)
state pairs, and inputs are gated to toy sizes.  The whole value of the
module is that it reaches verdicts by a route independent of the verifier
constructions it is meant to check.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .constrained import InsertionConstraints
from .fsm import Automaton, EventLabel, State, Tag, as_label

_ORACLE_STATE_LIMIT = 6


@dataclass(frozen=True)
class SearchBudget:
    """Bounds for the brute-force searches.

    max_segment_len caps each inserted walk; horizon caps the continuation
    depth explored by the bounded desirability check.  Walks revisit states
    once they are longer than the state count, so the defaults are generous
    enough to make the bounded answers exact.
    """

    max_segment_len: int
    horizon: int

    @classmethod
    def default_for(cls, g: Automaton, gf: Optional[Automaton] = None) -> SearchBudget:
        n = len(g.states)
        m = len(gf.states) if gf is not None else n
        return cls(n * n, n * m)


@dataclass(frozen=True)
class ExtendedInsertionSequence:
    """Per-event inserted segments: symbols inserted before and after each output.

    The modified observation interleaves them as
    before[0] s[0] after[0] before[1] s[1] after[1] ...
    When constraints are attached, before-segments may only use
    before-insertable symbols and after-segments only after-insertable ones,
    and the labels are tagged accordingly.
    """

    before: tuple[tuple[str, ...], ...]
    after: tuple[tuple[str, ...], ...]
    constraints: Optional[InsertionConstraints] = None

    def __post_init__(self) -> None:
        if len(self.before) != len(self.after):
            raise ValueError("before- and after-segment counts must match")
        if self.constraints is not None:
            for segment in self.before:
                stray = set(segment) - self.constraints.before
                if stray:
                    raise ValueError(
                        "not insertable before an output: " + ", ".join(sorted(stray))
                    )
            for segment in self.after:
                stray = set(segment) - self.constraints.after
                if stray:
                    raise ValueError(
                        "not insertable after an output: " + ", ".join(sorted(stray))
                    )

    @classmethod
    def ei(
        cls,
        before: Iterable[Iterable[str]],
        after: Iterable[Iterable[str]],
    ) -> ExtendedInsertionSequence:
        return cls(
            tuple(tuple(seg) for seg in before),
            tuple(tuple(seg) for seg in after),
        )

    @classmethod
    def eic(
        cls,
        before: Iterable[Iterable[str]],
        after: Iterable[Iterable[str]],
        constraints: InsertionConstraints,
    ) -> ExtendedInsertionSequence:
        return cls(
            tuple(tuple(seg) for seg in before),
            tuple(tuple(seg) for seg in after),
            constraints,
        )

    def modified_observation(
        self, s: Sequence[str | EventLabel]
    ) -> tuple[EventLabel, ...]:
        events = [as_label(e) for e in s]
        if len(events) != len(self.before):
            raise ValueError("segment count must equal the observation length")
        before_tag = Tag.INSERTED if self.constraints is None else Tag.INSERTED_BEFORE
        after_tag = Tag.INSERTED if self.constraints is None else Tag.INSERTED_AFTER
        out: list[EventLabel] = []
        for k, event in enumerate(events):
            out.extend(EventLabel(sym, before_tag) for sym in self.before[k])
            out.append(event)
            out.extend(EventLabel(sym, after_tag) for sym in self.after[k])
        return tuple(out)


def _single_initial(g: Automaton) -> State:
    if not g.deterministic:
        raise ValueError("string-level checks require a deterministic automaton")
    (x0,) = g.initial
    return x0


def is_feasible(
    g: Automaton, s: Sequence[str | EventLabel], ei: ExtendedInsertionSequence
) -> bool:
    """True iff every masked prefix of the modified observation stays in the language.

    The observer replays everything it sees through its model of the system,
    so one dead prefix means the insertion has given the game away.
    """
    x0 = _single_initial(g)
    events = [as_label(e) for e in s]
    if not g.run(x0, events):
        raise ValueError("the observation itself is not in the language")
    current: frozenset = frozenset({x0})
    for label in ei.modified_observation(events):
        stepped: set = set()
        masked = label.as_actual()
        for x in current:
            stepped |= g.step(x, masked)
        if not stepped:
            return False
        current = frozenset(stepped)
    return True


def _bounded_reach(
    g: Automaton, starts: Iterable[State], symbols: Iterable[str], limit: int
) -> frozenset:
    """States reachable from starts in at most limit steps over the given symbols."""
    labels = [as_label(sym) for sym in symbols]
    reached = set(starts)
    frontier = set(starts)
    for _ in range(limit):
        if not frontier:
            break
        nxt: set = set()
        for x in frontier:
            for label in labels:
                for y in g.step(x, label):
                    if y not in reached:
                        reached.add(y)
                        nxt.add(y)
        frontier = nxt
    return frozenset(reached)


def is_desirable_bounded(
    g: Automaton,
    s: Sequence[str | EventLabel],
    ei: ExtendedInsertionSequence,
    b: SearchBudget,
) -> bool:
    """Bounded check that an insertion hides the secret and can be kept alive.

    Clause one: the masked modified observation must end in a non-secret
    state.  Clause two: for every continuation of the observation up to the
    horizon there must exist inserted segments keeping every masked prefix
    in the language.  The continuation check tracks the set of believed
    states still consistent with some choice of segments, so the
    per-continuation existential is answered exactly up to the horizon.
    """
    if not is_feasible(g, s, ei):
        raise ValueError("the insertion is not feasible for this observation")
    x0 = _single_initial(g)
    events = [as_label(e) for e in s]
    (genuine_end,) = g.run(x0, events)
    masked = [label.as_actual() for label in ei.modified_observation(events)]
    (dummy_end,) = g.run(x0, masked)
    if dummy_end in g.secret:
        return False

    alphabet = {e.symbol for e in g.events if not e.inserted}
    if ei.constraints is None:
        before_syms: frozenset = frozenset(alphabet)
        after_syms: frozenset = frozenset(alphabet)
    else:
        before_syms = ei.constraints.before
        after_syms = ei.constraints.after

    memo: dict = {}

    def survivable(believed: frozenset, actual: State, depth: int) -> bool:
        if not believed:
            return False
        if depth == 0:
            return True
        key = (believed, actual, depth)
        if key in memo:
            return memo[key]
        verdict = True
        for e in sorted(g.enabled_events(actual)):
            (actual_next,) = g.step(actual, e)
            staged = _bounded_reach(g, believed, before_syms, b.max_segment_len)
            relayed: set = set()
            for d in staged:
                relayed |= g.step(d, e)
            settled = _bounded_reach(g, relayed, after_syms, b.max_segment_len)
            if not survivable(settled, actual_next, depth - 1):
                verdict = False
                break
        memo[key] = verdict
        return verdict

    return survivable(frozenset({dummy_end}), genuine_end, b.horizon)


def _guard_size(g: Automaton) -> None:
    if len(g.states) > _ORACLE_STATE_LIMIT:
        raise ValueError(
            f"oracle checks are gated to at most {_ORACLE_STATE_LIMIT} states"
        )


def oracle_ei_enforceable(g: Automaton, b: Optional[SearchBudget] = None) -> bool:
    """Fixpoint answer to unconstrained enforceability.

    W is the largest set of (believed, actual) pairs such that every event
    enabled at the actual state can be relayed after some inserted walk of
    the believed state, landing back in W.  Enforceability requires every
    actual state to be paired, somewhere reachable, with a non-secret
    believed state inside W.
    """
    _guard_size(g)
    if b is None:
        b = SearchBudget.default_for(g)
    x0 = _single_initial(g)
    alphabet = [e for e in sorted(g.events) if not e.inserted]
    symbols = [e.symbol for e in alphabet]
    walk = {
        d: _bounded_reach(g, {d}, symbols, b.max_segment_len) for d in g.states
    }

    w = {(d, x) for d in g.states for x in g.states}
    changed = True
    while changed:
        changed = False
        for pair in sorted(w, key=repr):
            d, x = pair
            ok = True
            for e in g.enabled_events(x):
                (x_next,) = g.step(x, e)
                if not any(
                    (d_next, x_next) in w
                    for d_relay in walk[d]
                    for d_next in g.step(d_relay, e)
                ):
                    ok = False
                    break
            if not ok:
                w.discard(pair)
                changed = True

    reachable = {(x0, x0)}
    frontier = [(x0, x0)]
    while frontier:
        d, x = frontier.pop()
        for e in alphabet:
            for d_next in g.step(d, e):
                inserted_pair = (d_next, x)
                if inserted_pair not in reachable:
                    reachable.add(inserted_pair)
                    frontier.append(inserted_pair)
                for x_next in g.step(x, e):
                    relayed_pair = (d_next, x_next)
                    if relayed_pair not in reachable:
                        reachable.add(relayed_pair)
                        frontier.append(relayed_pair)

    covered = {x for (d, x) in reachable if d not in g.secret and (d, x) in w}
    return g.states <= covered


def oracle_eic_enforceable(
    g: Automaton, c: InsertionConstraints, b: Optional[SearchBudget] = None
) -> bool:
    """Fixpoint answer to constrained enforceability.

    Same shape as the unconstrained oracle, but a step now means: walk the
    believed state over before-insertable symbols, relay the event, then
    walk over after-insertable symbols.  Pairs are tracked at the resting
    points between outputs.  When something can lead back to the initial
    state the believed state may also take an after-walk before the first
    output, mirroring what the constrained product construction allows
    there.
    """
    _guard_size(g)
    c.validate_against(g)
    if b is None:
        b = SearchBudget.default_for(g)
    x0 = _single_initial(g)
    breach = {
        d: _bounded_reach(g, {d}, c.before, b.max_segment_len) for d in g.states
    }
    areach = {
        d: _bounded_reach(g, {d}, c.after, b.max_segment_len) for d in g.states
    }

    w = {(d, x) for d in g.states for x in g.states}
    changed = True
    while changed:
        changed = False
        for pair in sorted(w, key=repr):
            d, x = pair
            ok = True
            for e in g.enabled_events(x):
                (x_next,) = g.step(x, e)
                served = False
                for d_staged in breach[d]:
                    for d_relay in g.step(d_staged, e):
                        if any(
                            (d_next, x_next) in w for d_next in areach[d_relay]
                        ):
                            served = True
                            break
                    if served:
                        break
                if not served:
                    ok = False
                    break
            if not ok:
                w.discard(pair)
                changed = True

    if g.incoming_events(x0):
        resting = {(d, x0) for d in areach[x0]}
    else:
        resting = {(x0, x0)}
    frontier = list(resting)
    while frontier:
        d, x = frontier.pop()
        for e in g.enabled_events(x):
            (x_next,) = g.step(x, e)
            for d_staged in breach[d]:
                for d_relay in g.step(d_staged, e):
                    for d_next in areach[d_relay]:
                        pair = (d_next, x_next)
                        if pair not in resting:
                            resting.add(pair)
                            frontier.append(pair)

    covered = {x for (d, x) in resting if d not in g.secret and (d, x) in w}
    return g.states <= covered


def random_dfa(
    seed: int,
    n_states: int = 4,
    n_events: int = 3,
    trans_density: float = 0.5,
    secret_density: float = 0.3,
    live: bool = False,
) -> Automaton:
    """Seeded random deterministic automaton, always accessible.

    A spanning structure guarantees accessibility; with live=True every
    state also keeps at least one outgoing transition, matching the
    standing assumption of the enforceability analyses that the system
    never simply halts.
    """
    rng = random.Random(seed)
    states = list(range(n_states))
    symbols = [chr(ord("a") + i) for i in range(n_events)]
    transitions: dict = {}
    for x in states[1:]:
        # pick an unused slot so no earlier spanning edge is overwritten
        free = [
            (src, sym)
            for src in range(x)
            for sym in symbols
            if (src, sym) not in transitions
        ]
        transitions[rng.choice(free)] = x
    for x in states:
        for sym in symbols:
            if (x, sym) not in transitions and rng.random() < trans_density:
                transitions[(x, sym)] = rng.randrange(n_states)
    if live:
        with_out = {x for (x, _) in transitions}
        for x in states:
            if x not in with_out:
                transitions[(x, rng.choice(symbols))] = rng.randrange(n_states)
    secret = [x for x in states if rng.random() < secret_density]
    return Automaton.dfa(states, symbols, transitions, 0, secret)


def random_nfa(
    seed: int,
    n_states: int = 5,
    n_events: int = 3,
    trans_density: float = 0.4,
    secret_density: float = 0.3,
) -> Automaton:
    """Seeded random nondeterministic automaton, always accessible."""
    rng = random.Random(seed)
    states = list(range(n_states))
    symbols = [chr(ord("a") + i) for i in range(n_events)]
    transitions: dict = {}
    for x in states[1:]:
        key = (rng.randrange(x), rng.choice(symbols))
        transitions.setdefault(key, set()).add(x)
    for x in states:
        for sym in symbols:
            if rng.random() < trans_density:
                targets = {y for y in states if rng.random() < 0.4}
                if not targets:
                    targets = {rng.randrange(n_states)}
                transitions.setdefault((x, sym), set()).update(targets)
    secret = [x for x in states if rng.random() < secret_density]
    return Automaton.nfa(states, symbols, transitions, {0}, secret)


def random_constraints(seed: int, symbols: Iterable[str]) -> InsertionConstraints:
    """Seeded random insertion constraints over the given symbols."""
    rng = random.Random(seed)
    before = [sym for sym in symbols if rng.random() < 0.5]
    after = [sym for sym in symbols if rng.random() < 0.5]
    return InsertionConstraints.of(before, after)

"""Line-oriented text format for automata.

The format is deliberately plain: one declaration per line, '#' starts a
comment, tokens are whitespace-separated.  Sections appear in a fixed order
so error messages can point at the exact line that breaks the grammar::

    automaton g1
    events a b c
    unobservable          # optional
    states 0 1 2 3 4 5
    initial 0
    secret 2 3            # optional
    trans 0 a 1
    trans 0 b 3
    end

State tokens consisting of digits parse as integers so that files written by
hand line up with programmatically built fixtures.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .fsm import Automaton, EventLabel, State, sorted_states, state_display


class ParseError(ValueError):
    """A grammar violation, carrying the 1-based line number."""

    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class AutomatonDocument:
    """A parsed file: the automaton plus file-level declarations."""

    name: str
    automaton: Automaton
    unobservable: frozenset


def _state_token(token: str) -> State:
    return int(token) if token.isdigit() else token


_SECTION_ORDER = ["automaton", "events", "unobservable", "states", "initial", "secret", "trans", "end"]
_REQUIRED = {"automaton", "events", "states", "initial", "end"}


def parse_document(text: str) -> AutomatonDocument:
    name = ""
    events: list[str] = []
    unobservable: list[str] = []
    states: list[State] = []
    initial: list[State] = []
    secret: list[State] = []
    trans: list[tuple[State, str, State, int]] = []
    seen: dict[str, int] = {}
    ended = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        keyword, args = tokens[0], tokens[1:]
        if ended:
            raise ParseError(lineno, "text after end")
        if keyword not in _SECTION_ORDER:
            raise ParseError(lineno, f"unknown declaration {keyword!r}")
        if keyword != "trans":
            if keyword in seen:
                raise ParseError(lineno, f"duplicate {keyword} section")
            seen[keyword] = lineno
        elif "trans" not in seen:
            seen["trans"] = lineno
        later = _SECTION_ORDER[_SECTION_ORDER.index(keyword) + 1 :]
        out_of_order = [k for k in later if k in seen and seen[k] < lineno]
        if out_of_order:
            raise ParseError(
                lineno, f"{keyword} must come before {out_of_order[0]}"
            )

        if keyword == "automaton":
            if len(args) != 1:
                raise ParseError(lineno, "automaton takes exactly one name")
            name = args[0]
        elif keyword == "events":
            events = args
        elif keyword == "unobservable":
            unobservable = args
        elif keyword == "states":
            states = [_state_token(t) for t in args]
        elif keyword == "initial":
            initial = [_state_token(t) for t in args]
        elif keyword == "secret":
            secret = [_state_token(t) for t in args]
        elif keyword == "trans":
            if "initial" not in seen:
                raise ParseError(lineno, "trans must come after initial")
            if len(args) != 3:
                raise ParseError(lineno, "trans takes source, event, target")
            src, sym, dst = _state_token(args[0]), args[1], _state_token(args[2])
            if src not in set(states):
                raise ParseError(lineno, f"undeclared state {args[0]!r}")
            if dst not in set(states):
                raise ParseError(lineno, f"undeclared state {args[2]!r}")
            if sym not in set(events):
                raise ParseError(lineno, f"undeclared event {sym!r}")
            trans.append((src, sym, dst, lineno))
        elif keyword == "end":
            ended = True

    last_line = len(text.splitlines())
    missing = [k for k in _SECTION_ORDER if k in _REQUIRED and k not in seen]
    if missing:
        raise ParseError(last_line or 1, f"missing {missing[0]} section")

    state_set = set(states)
    for group, label in ((initial, "initial"), (secret, "secret")):
        for x in group:
            if x not in state_set:
                raise ParseError(
                    seen[label], f"undeclared state {state_display(x)!r}"
                )
    for sym in unobservable:
        if sym not in set(events):
            raise ParseError(seen["unobservable"], f"undeclared event {sym!r}")

    table: dict[tuple[State, str], set] = {}
    for src, sym, dst, _ in trans:
        table.setdefault((src, sym), set()).add(dst)
    automaton = Automaton.nfa(states, events, table, initial, secret)
    return AutomatonDocument(name, automaton, frozenset(unobservable))


def parse_automaton(text: str) -> Automaton:
    return parse_document(text).automaton


def emit_document(doc: AutomatonDocument) -> str:
    return emit_automaton(doc.automaton, doc.name, doc.unobservable)


def emit_automaton(
    a: Automaton, name: str = "g", unobservable: Iterable[str] = ()
) -> str:
    """Canonical text form; parse(emit(a)) equals a for file-representable automata."""
    if any(e.inserted for e in a.events):
        raise ValueError("only automata over actual events have a text form")
    lines = [f"automaton {name}"]
    lines.append(("events " + " ".join(sorted(e.symbol for e in a.events))).rstrip())
    unobservable = sorted(unobservable)
    if unobservable:
        lines.append("unobservable " + " ".join(unobservable))
    lines.append("states " + " ".join(state_display(x) for x in sorted_states(a.states)))
    lines.append(
        "initial " + " ".join(state_display(x) for x in sorted_states(a.initial))
    )
    if a.secret:
        lines.append(
            "secret " + " ".join(state_display(x) for x in sorted_states(a.secret))
        )
    rows = []
    for (src, label), targets in a.transitions.items():
        for dst in targets:
            rows.append((state_display(src), label.symbol, state_display(dst)))
    for src, sym, dst in sorted(rows):
        lines.append(f"trans {src} {sym} {dst}")
    lines.append("end")
    return "\n".join(lines) + "\n"

from __future__ import annotations

import pytest

from veiler.fsm import Automaton


@pytest.fixture
def g1() -> Automaton:
    """Six-state running example: two secret states, one cycle through each."""
    return Automaton.dfa(
        states=range(6),
        events=["a", "b", "c"],
        transitions={
            (0, "a"): 1,
            (0, "b"): 3,
            (0, "c"): 2,
            (1, "a"): 1,
            (2, "a"): 4,
            (3, "a"): 5,
            (4, "b"): 2,
            (5, "c"): 3,
        },
        initial=0,
        secret=[2, 3],
    )


@pytest.fixture
def tracking_trap() -> Automaton:
    """Four-state system built to pin the documented construction/search divergence.

    With only 'a' insertable before outputs, observing b (true state 2,
    secret) leaves two disguises: relay from 0 and look like 2 itself, or
    insert a and look like 3.  The first ends secret; the second strands
    one step later, when the true run continues a b and the believed state
    3 has no b move and no way to walk to one.  The one-step nonblocking
    check in the verifier construction still accepts, so the construction
    and the search oracle disagree here by design of the fixture.
    """
    return Automaton.dfa(
        states=range(4),
        events=["a", "b"],
        transitions={
            (0, "a"): 1,
            (0, "b"): 2,
            (1, "b"): 3,
            (2, "a"): 0,
            (3, "a"): 3,
        },
        initial=0,
        secret=[2],
    )

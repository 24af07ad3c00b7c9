"""Length-(l+1) windows of a machine's external behavior.

The initial windows are the first l+1 symbols of any behavior; the recurring
windows are the l+1 symbols starting at any time.  Together they determine the
strongest asynchronous l-complete approximation.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .automata import Fsm, Word, iter_paths, node_budget, parse_word, word_token
from .errors import DepthBudgetExceeded


@dataclass(frozen=True)
class WindowSet:
    l: int
    initial: frozenset[Word]
    recurring: frozenset[Word]
    # symbols of the originating machine; defaults to those used by the windows
    alphabet: frozenset[str] = field(default=frozenset())

    def __post_init__(self):
        if self.l < 0:
            raise ValueError("l must be nonnegative")
        object.__setattr__(self, "initial", frozenset(tuple(w) for w in self.initial))
        object.__setattr__(self, "recurring", frozenset(tuple(w) for w in self.recurring))
        for w in self.initial | self.recurring:
            if len(w) != self.l + 1:
                raise ValueError(f"window {word_token(w)!r} does not have length {self.l + 1}")
        used = frozenset(s for w in self.initial | self.recurring for s in w)
        object.__setattr__(self, "alphabet", frozenset(self.alphabet) | used)

    def is_domino_closed(self) -> bool:
        """Every recurring window can be followed by one overlapping it in l symbols."""
        heads = {w[:-1] for w in self.recurring}
        return all(w[1:] in heads for w in self.recurring)

    def to_json(self) -> dict:
        return {
            "l": self.l,
            "alphabet": sorted(self.alphabet),
            "initial": sorted(word_token(w) for w in self.initial),
            "recurring": sorted(word_token(w) for w in self.recurring),
        }

    @classmethod
    def from_json(cls, data: dict) -> "WindowSet":
        return cls(
            l=int(data["l"]),
            initial=frozenset(parse_word(t) for t in data["initial"]),
            recurring=frozenset(parse_word(t) for t in data["recurring"]),
            alphabet=frozenset(data.get("alphabet", ())),
        )


def extract_windows(m: Fsm, l: int) -> WindowSet:
    """Windows of a trimmed machine.

    Every state of a trimmed machine is occupied at some step, so the windows
    occurring at any time are exactly the labels of length-(l+1) paths leaving
    any state.
    """
    if l < 0:
        raise ValueError("l must be nonnegative")
    initial = {w for w, _ in iter_paths(m, l + 1, m.initial)}
    recurring = {w for w, _ in iter_paths(m, l + 1, m.states)}
    return WindowSet(l, frozenset(initial), frozenset(recurring), m.alphabet)


def windows_oracle(m: Fsm, l: int, horizon: int, budget: int | None = None) -> WindowSet:
    """Slice every window out of all runs of length ``horizon`` from the initial states.

    Runs that agree on position, current state and the last l symbols produce
    the same future slices, so they are explored once; the result equals plain
    enumeration of every run.
    """
    if horizon < l + 1:
        raise ValueError("horizon must be at least l + 1")
    budget = node_budget() if budget is None else budget
    initial: set[Word] = set()
    recurring: set[Word] = set()
    seen: set = set()
    stack: list[tuple[int, str, Word]] = [(0, s, ()) for s in m.initial]
    while stack:
        pos, state, tail = stack.pop()
        if len(tail) == l + 1:
            recurring.add(tail)
            if pos == l + 1:
                initial.add(tail)
        key = (pos, state, tail[-l:] if l else ())
        if key in seen:
            continue
        seen.add(key)
        if len(seen) > budget:
            raise DepthBudgetExceeded(f"window oracle exceeded {budget} nodes")
        if pos == horizon:
            continue
        for sym, targets in m.successors[state].items():
            nxt = (tail + (sym,))[-(l + 1):]
            for dst in targets:
                stack.append((pos + 1, dst, nxt))
    return WindowSet(l, frozenset(initial), frozenset(recurring), m.alphabet)

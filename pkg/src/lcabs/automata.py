"""Finite state machines over a finite alphabet and their infinite-path languages.

A machine ``(states, alphabet, transitions, initial)`` induces the set of its
infinite labelled paths starting in an initial state.  Once the machine is
trimmed (every state reachable and live) that set is a safety language and is
fully determined by its prefix-closed set of finite labels, which is what the
comparison routines here decide on.
"""
from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from .errors import (
    AlphabetMismatch,
    DepthBudgetExceeded,
    EmptyAfterTrim,
    InvalidMachine,
    UnknownSymbol,
)

Word = tuple[str, ...]

EMPTY_WORD_TOKEN = "^"
DEFAULT_NODE_BUDGET = 2_000_000


def word_token(word: Iterable[str]) -> str:
    """Serialize a word as space-joined symbols, the empty word as ``^``."""
    word = tuple(word)
    return " ".join(word) if word else EMPTY_WORD_TOKEN


def parse_word(text: str) -> Word:
    text = text.strip()
    if text in ("", EMPTY_WORD_TOKEN):
        return ()
    return tuple(text.split())


def node_budget() -> int:
    """Oracle node budget, overridable through ``LCABS_NODE_BUDGET``."""
    raw = os.environ.get("LCABS_NODE_BUDGET")
    if raw is None:
        return DEFAULT_NODE_BUDGET
    value = int(raw)
    if value <= 0:
        raise ValueError("LCABS_NODE_BUDGET must be positive")
    return value


def _check_token(kind: str, token: str) -> None:
    if not isinstance(token, str) or not token or any(c.isspace() for c in token):
        raise InvalidMachine(f"{kind} {token!r} must be a nonempty token without whitespace")


@dataclass(frozen=True)
class Fsm:
    states: frozenset[str]
    alphabet: frozenset[str]
    initial: frozenset[str]
    transitions: frozenset[tuple[str, str, str]]

    def __init__(self, states, alphabet, initial, transitions):
        object.__setattr__(self, "states", frozenset(states))
        object.__setattr__(self, "alphabet", frozenset(alphabet))
        object.__setattr__(self, "initial", frozenset(initial))
        object.__setattr__(self, "transitions", frozenset(tuple(t) for t in transitions))
        self._validate()

    def _validate(self) -> None:
        for sym in self.alphabet:
            _check_token("symbol", sym)
        for state in self.states:
            if not isinstance(state, str) or not state:
                raise InvalidMachine(f"state id {state!r} must be a nonempty string")
        if not self.initial:
            raise InvalidMachine("initial state set is empty")
        if not self.initial <= self.states:
            raise InvalidMachine(f"initial states {sorted(self.initial - self.states)} are not states")
        for src, sym, dst in self.transitions:
            if src not in self.states or dst not in self.states:
                raise InvalidMachine(f"transition {(src, sym, dst)} mentions an unknown state")
            if sym not in self.alphabet:
                raise InvalidMachine(f"transition {(src, sym, dst)} uses a symbol outside the alphabet")

    @cached_property
    def successors(self) -> dict[str, dict[str, frozenset[str]]]:
        """``state -> symbol -> targets``; states without moves map to ``{}``."""
        table: dict[str, dict[str, set[str]]] = {s: {} for s in self.states}
        for src, sym, dst in self.transitions:
            table[src].setdefault(sym, set()).add(dst)
        return {s: {a: frozenset(t) for a, t in row.items()} for s, row in table.items()}

    def enabled(self, state: str) -> frozenset[str]:
        return frozenset(self.successors[state])

    def post(self, states: Iterable[str], symbol: str) -> frozenset[str]:
        out: set[str] = set()
        for s in states:
            out |= self.successors[s].get(symbol, frozenset())
        return frozenset(out)

    def post_word(self, states: Iterable[str], word: Iterable[str]) -> frozenset[str]:
        current = frozenset(states)
        for sym in word:
            if sym not in self.alphabet:
                raise UnknownSymbol(sym)
            current = self.post(current, sym)
        return current

    def step(self, states: Iterable[str]) -> frozenset[str]:
        """Successors of ``states`` under any symbol."""
        out: set[str] = set()
        for s in states:
            for targets in self.successors[s].values():
                out |= targets
        return frozenset(out)

    def is_deterministic(self) -> bool:
        return len(self.initial) == 1 and all(
            len(t) == 1 for row in self.successors.values() for t in row.values()
        )

    def accepts(self, word: Iterable[str]) -> bool:
        """True if ``word`` labels a path from an initial state."""
        return bool(self.post_word(self.initial, word))

    def to_json(self) -> dict:
        return {
            "alphabet": sorted(self.alphabet),
            "states": sorted(self.states),
            "initial": sorted(self.initial),
            "transitions": [list(t) for t in sorted(self.transitions)],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Fsm":
        try:
            return cls(
                states=data["states"],
                alphabet=data["alphabet"],
                initial=data["initial"],
                transitions=[tuple(t) for t in data["transitions"]],
            )
        except KeyError as exc:
            raise InvalidMachine(f"machine JSON lacks key {exc}") from None

    def to_dot(self, name: str = "fsm") -> str:
        lines = [f"digraph {_dot_id(name)} {{", "  rankdir=LR;"]
        lines.append('  node [shape=circle];')
        for state in sorted(self.states):
            lines.append(f"  {_dot_id(state)};")
        for i, state in enumerate(sorted(self.initial)):
            start = _dot_id(f"__start{i}")
            lines.append(f"  {start} [shape=point, style=invis];")
            lines.append(f"  {start} -> {_dot_id(state)};")
        for src, sym, dst in sorted(self.transitions):
            lines.append(f"  {_dot_id(src)} -> {_dot_id(dst)} [label={_dot_id(sym)}];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _dot_id(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def reachable_states(m: Fsm) -> frozenset[str]:
    seen = set(m.initial)
    todo = list(m.initial)
    while todo:
        for dst in m.step([todo.pop()]):
            if dst not in seen:
                seen.add(dst)
                todo.append(dst)
    return frozenset(seen)


def trim(m: Fsm) -> Fsm:
    """Largest sub-machine whose states are all reachable and live.

    Raises EmptyAfterTrim if no initial state lies on an infinite path.
    """
    keep = set(reachable_states(m))
    changed = True
    while changed:
        changed = False
        for state in list(keep):
            if not (m.step([state]) & keep):
                keep.discard(state)
                changed = True
    initial = m.initial & keep
    if not initial:
        raise EmptyAfterTrim("machine has no infinite behavior")
    transitions = {(s, a, d) for (s, a, d) in m.transitions if s in keep and d in keep}
    return Fsm(keep, m.alphabet, initial, transitions)


def is_trim(m: Fsm) -> bool:
    return reachable_states(m) == m.states and all(m.successors[s] for s in m.states)


@dataclass(frozen=True)
class StateSetSequence:
    """Eventually periodic sequence of state sets: ``prefix`` then ``period`` forever."""

    prefix: tuple[frozenset[str], ...]
    period: tuple[frozenset[str], ...]

    def at(self, k: int) -> frozenset[str]:
        if k < 0:
            raise ValueError("index must be nonnegative")
        if k < len(self.prefix):
            return self.prefix[k]
        return self.period[(k - len(self.prefix)) % len(self.period)]

    def distinct(self) -> set[frozenset[str]]:
        return set(self.prefix) | set(self.period)

    def union(self) -> frozenset[str]:
        return frozenset().union(*self.prefix, *self.period)


def lasso(first, advance) -> tuple[tuple, tuple]:
    """Split the orbit ``first, advance(first), ...`` of a finite map into prefix and cycle."""
    seen: dict = {}
    orbit = []
    current = first
    while current not in seen:
        seen[current] = len(orbit)
        orbit.append(current)
        current = advance(current)
    start = seen[current]
    return tuple(orbit[:start]), tuple(orbit[start:])


def reachable_sequence(m: Fsm) -> StateSetSequence:
    """The sequence ``k -> {x(k)}`` over all runs, as prefix plus period."""
    prefix, period = lasso(frozenset(m.initial), m.step)
    return StateSetSequence(prefix, period)


def reachable_at(m: Fsm, k: int) -> frozenset[str]:
    """States occupied at step ``k`` by some run of the (trimmed) machine."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return reachable_sequence(m).at(k)


def shortest_words_to(m: Fsm) -> dict[str, Word]:
    """Shortest label sequence reaching each reachable state (symbol order breaks ties)."""
    best: dict[str, Word] = {s: () for s in sorted(m.initial)}
    queue = deque(sorted(m.initial))
    while queue:
        state = queue.popleft()
        row = m.successors[state]
        for sym in sorted(row):
            for dst in sorted(row[sym]):
                if dst not in best:
                    best[dst] = best[state] + (sym,)
                    queue.append(dst)
    return best


def shortest_word_to_at(m: Fsm, target: str, k: int) -> Word | None:
    """A word of length exactly ``k`` leading from an initial state to ``target``."""
    layers = [frozenset(m.initial)]
    for _ in range(k):
        layers.append(m.step(layers[-1]))
    if target not in layers[k]:
        return None
    word: list[str] = []
    current = target
    for i in range(k, 0, -1):
        found = False
        for src in sorted(layers[i - 1]):
            row = m.successors[src]
            for sym in sorted(row):
                if current in row[sym]:
                    word.append(sym)
                    current = src
                    found = True
                    break
            if found:
                break
    return tuple(reversed(word))


def determinize(m: Fsm) -> tuple[frozenset[str], dict[frozenset[str], dict[str, frozenset[str]]]]:
    """Subset construction restricted to nonempty subsets.

    Returns the initial subset and ``subset -> symbol -> subset``; a symbol
    missing from a row means the prefix language does not continue with it.
    """
    start = frozenset(m.initial)
    table: dict[frozenset[str], dict[str, frozenset[str]]] = {}
    todo = [start]
    while todo:
        subset = todo.pop()
        if subset in table:
            continue
        row = {}
        for sym in sorted(m.alphabet):
            nxt = m.post(subset, sym)
            if nxt:
                row[sym] = nxt
                if nxt not in table:
                    todo.append(nxt)
        table[subset] = row
    return start, table


@dataclass(frozen=True)
class Comparison:
    """Outcome of comparing two prefix languages.

    ``only_first`` is a shortest word in the first language but not the second,
    ``only_second`` the converse; each is ``None`` when no such word exists.
    """

    verdict: str
    only_first: Word | None = None
    only_second: Word | None = None


def prefix_language_compare(m1: Fsm, m2: Fsm) -> Comparison:
    if m1.alphabet != m2.alphabet:
        raise AlphabetMismatch(
            f"alphabets differ: {sorted(m1.alphabet)} vs {sorted(m2.alphabet)}"
        )
    start1, table1 = determinize(m1)
    start2, table2 = determinize(m2)
    only_first: Word | None = None
    only_second: Word | None = None
    start = (start1, start2)
    parent: dict = {start: None}
    queue = deque([start])
    symbols = sorted(m1.alphabet)

    def word_of(node, sym) -> Word:
        out = [sym]
        while parent[node] is not None:
            node, s = parent[node]
            out.append(s)
        return tuple(reversed(out))

    while queue and (only_first is None or only_second is None):
        node = queue.popleft()
        row1, row2 = table1[node[0]], table2[node[1]]
        for sym in symbols:
            in1, in2 = sym in row1, sym in row2
            if in1 and in2:
                nxt = (row1[sym], row2[sym])
                if nxt not in parent:
                    parent[nxt] = (node, sym)
                    queue.append(nxt)
            elif in1 and only_first is None:
                only_first = word_of(node, sym)
            elif in2 and only_second is None:
                only_second = word_of(node, sym)

    if only_first is None and only_second is None:
        verdict = "equal"
    elif only_first is None:
        verdict = "m1-strict-subset"
    elif only_second is None:
        verdict = "m2-strict-subset"
    else:
        verdict = "incomparable"
    return Comparison(verdict, only_first, only_second)


def enumerate_paths(m: Fsm, depth: int, budget: int | None = None) -> set[Word]:
    """All label sequences of length <= ``depth`` read along paths from initial states.

    Exhaustive layer-by-layer enumeration; meant as a test oracle.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    budget = node_budget() if budget is None else budget
    words: set[Word] = {()}
    frontier: dict[Word, frozenset[str]] = {(): frozenset(m.initial)}
    nodes = 1
    for _ in range(depth):
        nxt: dict[Word, set[str]] = {}
        for word, states in frontier.items():
            for src in states:
                for sym, targets in m.successors[src].items():
                    nxt.setdefault(word + (sym,), set()).update(targets)
        nodes += len(nxt)
        if nodes > budget:
            raise DepthBudgetExceeded(f"node budget exceeded: more than {budget} nodes at depth {depth}")
        frontier = {w: frozenset(s) for w, s in nxt.items()}
        words.update(frontier)
    return words


def iter_paths(m: Fsm, length: int, starts: Iterable[str]) -> Iterator[tuple[Word, str]]:
    """Yield ``(labels, end state)`` for every path of exactly ``length`` steps."""
    stack = [((), s, 0) for s in sorted(starts)]
    while stack:
        word, state, n = stack.pop()
        if n == length:
            yield word, state
            continue
        for sym, targets in m.successors[state].items():
            for dst in targets:
                stack.append((word + (sym,), dst, n + 1))


def canonical_form(m: Fsm) -> tuple:
    """Renaming-invariant form of a deterministic machine via BFS numbering.

    Two deterministic machines are isomorphic iff their canonical forms agree.
    """
    if not m.is_deterministic():
        raise InvalidMachine("canonical BFS numbering needs a deterministic machine")
    (start,) = m.initial
    number = {start: 0}
    queue = deque([start])
    edges = []
    while queue:
        state = queue.popleft()
        for sym in sorted(m.successors[state]):
            (dst,) = m.successors[state][sym]
            if dst not in number:
                number[dst] = len(number)
                queue.append(dst)
            edges.append((number[state], sym, number[dst]))
    return (len(number), tuple(sorted(m.alphabet)), tuple(sorted(edges)))

"""Strongest asynchronous l-complete approximation and the l-completeness test.

The approximation stores the last l external symbols as its state: below
length l a state is a prefix of an initial window, at length l it shifts one
symbol per step along the recurring windows.

The first l+1 symbols must form an initial window, so the state reached at
step l may only continue along initial windows.  When that restricts its
moves compared with the same recent past seen later, the step-l state is kept
apart and named by its recent past followed by the token ``#``; such names
have l+1 tokens and cannot clash with recent-past names.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .automata import Fsm, Word, parse_word, prefix_language_compare, trim, word_token
from .errors import EmptyWindows, InternalInconsistency
from .verdict import Counterexample, Verdict
from .windows import WindowSet, extract_windows


OPENING_MARK = "#"


@dataclass(frozen=True)
class ApproxMachine:
    fsm: Fsm
    l: int

    def recent_past(self, state: str) -> Word:
        """The last (at most l) symbols read on entering ``state``."""
        tokens = parse_word(state)
        if len(tokens) == self.l + 1 and tokens[-1] == OPENING_MARK:
            return tokens[:-1]
        return tokens

    def is_opening(self, state: str) -> bool:
        """True for states only occupied at the single step ``len(recent_past)``."""
        tokens = parse_word(state)
        return len(tokens) < self.l or (len(tokens) == self.l + 1 and tokens[-1] == OPENING_MARK)

    def to_json(self) -> dict:
        return {**self.fsm.to_json(), "l": self.l}

    @classmethod
    def from_json(cls, data: dict) -> "ApproxMachine":
        return cls(Fsm.from_json(data), int(data["l"]))


def approximate(ws: WindowSet) -> ApproxMachine:
    """Realize the domino language of ``ws`` as a deterministic machine over recent-past states."""
    if not ws.initial:
        raise EmptyWindows("no initial windows")
    l = ws.l
    initial_prefixes = {w[:r] for w in ws.initial for r in range(l + 1)}

    def continuations(windows, zeta: Word) -> frozenset[Word]:
        return frozenset(w for w in windows if w[:-1] == zeta)

    # a node is (recent past, opening); opening length-l nodes whose initial
    # continuations equal the recurring ones are the plain recent-past node
    def node(zeta: Word, opening: bool):
        if opening and len(zeta) == l and continuations(ws.initial, zeta) == continuations(ws.recurring, zeta):
            opening = False
        return zeta, opening

    def name(n) -> str:
        zeta, opening = n
        return word_token(zeta + (OPENING_MARK,) if opening and len(zeta) == l else zeta)

    def moves(n):
        zeta, opening = n
        if len(zeta) < l:
            for w in initial_prefixes:
                if len(w) == len(zeta) + 1 and w[:-1] == zeta:
                    yield w[-1], node(w, True)
        else:
            for w in continuations(ws.initial if opening else ws.recurring, zeta):
                yield w[-1], (w[1:], False)

    start = node((), True)
    seen = {start}
    queue = deque([start])
    transitions = set()
    while queue:
        n = queue.popleft()
        for sym, nxt in moves(n):
            transitions.add((name(n), sym, name(nxt)))
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    fsm = Fsm(
        states={name(n) for n in seen},
        alphabet=ws.alphabet,
        initial={name(start)},
        transitions=transitions,
    )
    return ApproxMachine(trim(fsm), l)


def z_trajectory(gamma, l: int) -> list[Word]:
    """Recent-past states visited while reading ``gamma``: the last min(k, l) symbols at step k."""
    gamma = tuple(gamma)
    return [gamma[max(0, k - l):k] for k in range(len(gamma) + 1)]


def approximate_machine(m: Fsm, l: int) -> ApproxMachine:
    return approximate(extract_windows(m, l))


def is_l_complete(m: Fsm, l: int) -> Verdict:
    """Decide whether the trimmed machine's behavior equals its l-approximation.

    The machine's language is always contained in the approximation's, so a
    failure carries a shortest word accepted only by the approximation.
    """
    approx = approximate_machine(m, l)
    cmp = prefix_language_compare(m, approx.fsm)
    if cmp.verdict == "equal":
        return Verdict(True, certificate=approx)
    witness = cmp.only_second
    if witness is None or cmp.only_first is not None:
        raise InternalInconsistency(f"approximation does not contain the machine language ({cmp})")
    return Verdict(False, counterexample=Counterexample("language", witness))

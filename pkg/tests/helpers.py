"""Shared fixtures data, random machine generators and independent oracles for the tests.

The oracles here deliberately avoid the library's own search routines: they
work on raw transition triples so that a bug in the library cannot cancel out.
"""
from __future__ import annotations

import contextlib
import random
from fractions import Fraction
from itertools import product
from pathlib import Path

from hypothesis import strategies as st

from lcabs.automata import Fsm, trim
from lcabs.errors import EmptyAfterTrim
from lcabs.quantizer import Interval, QuantizerSpec

DATA = Path(__file__).parent / "data"

# xi2 is initial; xi2 -a-> xi1 -b-> xi2 and xi2 -a-> xi3 -c-> xi2.
# 1-complete, yet xi1 and xi3 share the recent past 'a' with different futures.
PSI1 = Fsm(
    {"xi1", "xi2", "xi3"},
    {"a", "b", "c"},
    {"xi2"},
    {("xi2", "a", "xi1"), ("xi1", "b", "xi2"), ("xi2", "a", "xi3"), ("xi3", "c", "xi2")},
)

# the 1-approximation of PSI1, states named by their recent past
PSI2 = Fsm(
    {"^", "a", "b", "c"},
    {"a", "b", "c"},
    {"^"},
    {("^", "a", "a"), ("a", "b", "b"), ("a", "c", "c"), ("b", "a", "a"), ("c", "a", "a")},
)

# 1-approximation of the four-interval quantizer EX1
EX1_APPROX = Fsm(
    {"^", "m2", "m1", "p1", "p2"},
    {"m2", "m1", "p1", "p2"},
    {"^"},
    {
        ("^", "m2", "m2"), ("^", "p2", "p2"), ("m2", "m1", "m1"), ("m1", "p1", "p1"),
        ("p1", "p2", "p2"), ("p2", "p1", "p1"), ("p1", "m1", "m1"), ("m1", "m2", "m2"),
    },
)

# (aab)^omega
C = Fsm({"s0", "s1", "s2"}, {"a", "b"}, {"s0"}, {("s0", "a", "s1"), ("s1", "a", "s2"), ("s2", "b", "s0")})

EX1 = QuantizerSpec(
    domain=Interval(-10, 10, True, True),
    symbols={
        "m2": Interval(-10, -4, True, False),
        "m1": Interval(-6, 1, False, False),
        "p1": Interval(-1, 6, False, False),
        "p2": Interval(4, 10, False, True),
    },
    initial_values=frozenset({Fraction(-10), Fraction(10)}),
    mode="point",
)


def w(text: str) -> tuple[str, ...]:
    """Word from space-separated symbols; '' is the empty word."""
    return tuple(text.split())


# ---------------------------------------------------------------- generators

def random_machine(rng: random.Random, max_states: int = 6, max_symbols: int = 3) -> Fsm:
    """A random trimmed machine; about half are deterministic."""
    while True:
        n = rng.randint(1, max_states)
        k = rng.randint(1, max_symbols)
        states = [f"s{i}" for i in range(n)]
        alphabet = "abc"[:k]
        p = rng.uniform(0.15, 0.6)
        deterministic = rng.random() < 0.5
        transitions = set()
        for s, a in product(states, alphabet):
            if deterministic:
                if rng.random() < p:
                    transitions.add((s, a, rng.choice(states)))
            else:
                for d in states:
                    if rng.random() < p / max(1, n // 2):
                        transitions.add((s, a, d))
        initial = rng.sample(states, rng.randint(1, min(2, n)))
        try:
            return trim(Fsm(states, alphabet, initial, transitions))
        except EmptyAfterTrim:
            continue


def corpus(size: int = 200, seed: int = 20140101) -> list[Fsm]:
    rng = random.Random(seed)
    return [random_machine(rng) for _ in range(size)]


@st.composite
def machines(draw, max_states: int = 6, max_symbols: int = 3):
    n = draw(st.integers(1, max_states))
    k = draw(st.integers(1, max_symbols))
    states = [f"s{i}" for i in range(n)]
    alphabet = list("abc"[:k])
    triples = st.tuples(st.sampled_from(states), st.sampled_from(alphabet), st.sampled_from(states))
    transitions = draw(st.sets(triples, min_size=1, max_size=3 * n * k))
    initial = draw(st.sets(st.sampled_from(states), min_size=1, max_size=n))
    try:
        return trim(Fsm(states, alphabet, initial, transitions))
    except EmptyAfterTrim:
        from hypothesis import assume

        assume(False)


# ---------------------------------------------------------------- oracles

def brute_paths(m: Fsm, depth: int) -> set[tuple[str, ...]]:
    """Every label sequence of length <= depth, by extending raw transition lists."""
    paths = [((), s) for s in m.initial]
    words = {()}
    for _ in range(depth):
        paths = [(word + (a,), d) for word, s in paths for (src, a, d) in m.transitions if src == s]
        words |= {word for word, _ in paths}
    return words


def brute_occupied(m: Fsm, k: int) -> set[str]:
    ends = set(m.initial)
    for _ in range(k):
        ends = {d for (s, _, d) in m.transitions if s in ends}
    return ends


def domino_language(initial, recurring, l: int, depth: int) -> set[tuple[str, ...]]:
    """Prefixes up to ``depth`` of words built by chaining windows overlapping in l symbols."""
    words = set(initial)
    frontier = set(initial)
    while frontier:
        nxt = set()
        for word in frontier:
            if len(word) >= depth:
                continue
            tail = word[len(word) - l:] if l else ()
            for d in recurring:
                if d[:l] == tail:
                    nxt.add(word + d[l:])
        frontier = nxt - words
        words |= nxt
    return {word[:r] for word in words for r in range(min(len(word), depth) + 1)}


def step_condition_holds(pairs, m1: Fsm, m2: Fsm) -> bool:
    """Plain restatement of the step condition on transition triples."""
    pairs = set(pairs)
    for (x1, x2) in pairs:
        for (s, a, t) in m1.transitions:
            if s != x1:
                continue
            if not any(s2 == x2 and b == a and (t, t2) in pairs for (s2, b, t2) in m2.transitions):
                return False
    return True


def replays_from_initial(m: Fsm, word, target: str) -> bool:
    ends = set(m.initial)
    for a in word:
        ends = {d for (s, b, d) in m.transitions if s in ends and b == a}
    return target in ends


# ---------------------------------------------------------------- acceptance log

ACCEPTANCE: dict[str, tuple[bool, str]] = {}
DEVIATIONS: list[str] = []


@contextlib.contextmanager
def criterion(key: str, title: str):
    """Record pass/fail of one acceptance criterion for the terminal summary."""
    try:
        yield
    except BaseException:
        ACCEPTANCE[key] = (False, title)
        raise
    ACCEPTANCE[key] = (True, title)

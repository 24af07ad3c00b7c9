"""Event-triggered interval quantization of a continuous scalar signal.

A continuous signal in ``domain`` starts at one of ``initial_values``.  The
current symbol G names an interval I_G containing the signal; an event fires
at the first instant the signal is no longer in I_G, which for a continuous
signal is an endpoint of I_G, and the next symbol is any G' whose interval
contains that endpoint.

Two machines are compiled from a specification.  In ``point`` mode each
external step corresponds to the event instant alone, so the state is the
signal value at the event.  In ``set`` mode each step covers the whole stay in
one interval, so the state is the current symbol and stands for every value
of its interval.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .automata import Fsm, Word, reachable_states, trim
from .errors import Blocking, UnknownSymbol

log = logging.getLogger(__name__)

MODES = ("point", "set")


def to_rational(value) -> Fraction:
    """Parse an int, a ``[num, den]`` pair, or a decimal/fraction string exactly."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return Fraction(int(value[0]), int(value[1]))
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        return Fraction(repr(value))
    raise TypeError(f"cannot read {value!r} as a rational")


def rational_token(x: Fraction) -> str:
    return str(Fraction(x))


@dataclass(frozen=True, order=True)
class Interval:
    lo: Fraction
    hi: Fraction
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "lo", to_rational(self.lo))
        object.__setattr__(self, "hi", to_rational(self.hi))
        if self.lo > self.hi or (self.lo == self.hi and not (self.lo_closed and self.hi_closed)):
            raise ValueError(f"empty interval {self}")

    @classmethod
    def point(cls, value) -> "Interval":
        return cls(value, value, True, True)

    def is_point(self) -> bool:
        return self.lo == self.hi

    def __contains__(self, x) -> bool:
        x = Fraction(x)
        above = x > self.lo or (self.lo_closed and x == self.lo)
        below = x < self.hi or (self.hi_closed and x == self.hi)
        return above and below

    def issubset(self, other: "Interval") -> bool:
        lo_ok = self.lo > other.lo or (self.lo == other.lo and (other.lo_closed or not self.lo_closed))
        hi_ok = self.hi < other.hi or (self.hi == other.hi and (other.hi_closed or not self.hi_closed))
        return lo_ok and hi_ok

    def __str__(self) -> str:
        if self.is_point():
            return "{" + rational_token(self.lo) + "}"
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{rational_token(self.lo)},{rational_token(self.hi)}{right}"

    def to_json(self) -> dict:
        return {
            "lo": rational_token(self.lo),
            "hi": rational_token(self.hi),
            "lo_closed": self.lo_closed,
            "hi_closed": self.hi_closed,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Interval":
        return cls(
            to_rational(data["lo"]),
            to_rational(data["hi"]),
            bool(data.get("lo_closed", True)),
            bool(data.get("hi_closed", True)),
        )


def parse_interval(text: str) -> Interval:
    """Read ``[a,b)``-style notation or ``{v}`` for a point."""
    text = text.strip()
    if text.startswith("{") and text.endswith("}"):
        return Interval.point(to_rational(text[1:-1]))
    lo_text, hi_text = text[1:-1].split(",")
    return Interval(to_rational(lo_text), to_rational(hi_text), text[0] == "[", text[-1] == "]")


@dataclass(frozen=True)
class IntervalSet:
    """A finite union of intervals kept in canonical normal form."""

    parts: tuple[Interval, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "parts", _normalize(self.parts))

    @classmethod
    def of(cls, *intervals: Interval) -> "IntervalSet":
        return cls(tuple(intervals))

    @classmethod
    def parse(cls, text: str) -> "IntervalSet":
        text = text.strip()
        if text in ("", "{}", "∅"):
            return cls()
        return cls(tuple(parse_interval(p) for p in text.split("∪")))

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(self.parts + other.parts)

    __or__ = union

    def __contains__(self, x) -> bool:
        return any(x in p for p in self.parts)

    def __bool__(self) -> bool:
        return bool(self.parts)

    def issubset(self, other: "IntervalSet") -> bool:
        return all(any(p.issubset(q) for q in other.parts) for p in self.parts)

    def __str__(self) -> str:
        if not self.parts:
            return "∅"
        return " ∪ ".join(str(p) for p in self.parts)

    def to_json(self) -> list:
        return [p.to_json() for p in self.parts]

    @classmethod
    def from_json(cls, data: list) -> "IntervalSet":
        return cls(tuple(Interval.from_json(p) for p in data))


def _normalize(parts: Iterable[Interval]) -> tuple[Interval, ...]:
    ordered = sorted(parts, key=lambda p: (p.lo, not p.lo_closed, p.hi, p.hi_closed))
    merged: list[Interval] = []
    for part in ordered:
        if merged:
            cur = merged[-1]
            touches = part.lo < cur.hi or (part.lo == cur.hi and (cur.hi_closed or part.lo_closed))
            if touches:
                if part.hi > cur.hi:
                    hi, hi_closed = part.hi, part.hi_closed
                elif part.hi == cur.hi:
                    hi, hi_closed = cur.hi, cur.hi_closed or part.hi_closed
                else:
                    hi, hi_closed = cur.hi, cur.hi_closed
                merged[-1] = Interval(cur.lo, hi, cur.lo_closed, hi_closed)
                continue
        merged.append(part)
    return tuple(merged)


@dataclass(frozen=True)
class QuantizerSpec:
    domain: Interval
    symbols: dict[str, Interval]
    initial_values: frozenset[Fraction]
    mode: str = "point"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not self.symbols:
            raise ValueError("no symbols")
        for name in self.symbols:
            if not name or any(c.isspace() for c in name):
                raise ValueError(f"symbol {name!r} must be a nonempty token without whitespace")
        object.__setattr__(self, "initial_values", frozenset(to_rational(v) for v in self.initial_values))

    def __hash__(self):
        return hash((self.domain, tuple(sorted(self.symbols.items())), self.initial_values, self.mode))

    def with_mode(self, mode: str) -> "QuantizerSpec":
        return QuantizerSpec(self.domain, dict(self.symbols), self.initial_values, mode)

    def labels(self, value) -> frozenset[str]:
        """Symbols whose interval contains ``value``."""
        return frozenset(g for g, iv in self.symbols.items() if value in iv)

    def exit_points(self, symbol: str) -> list[Fraction]:
        """Endpoints through which a continuous signal inside ``symbol``'s interval can leave it.

        An endpoint is an exit if the signal can attain it and then be outside
        the interval: it lies in the domain and is either open on the interval
        side or strictly inside the domain.
        """
        iv = self._interval(symbol)
        points = []
        for value, closed in ((iv.lo, iv.lo_closed), (iv.hi, iv.hi_closed)):
            if value not in self.domain:
                continue
            interior = self.domain.lo < value < self.domain.hi
            if (not closed or interior) and value not in points:
                points.append(value)
        return points

    def _interval(self, symbol: str) -> Interval:
        try:
            return self.symbols[symbol]
        except KeyError:
            raise UnknownSymbol(symbol) from None

    def to_json(self) -> dict:
        return {
            "domain": self.domain.to_json(),
            "symbols": {g: iv.to_json() for g, iv in sorted(self.symbols.items())},
            "initial_values": sorted(rational_token(v) for v in self.initial_values),
            "mode": self.mode,
        }

    @classmethod
    def from_json(cls, data: dict) -> "QuantizerSpec":
        return cls(
            domain=Interval.from_json(data["domain"]),
            symbols={g: Interval.from_json(iv) for g, iv in data["symbols"].items()},
            initial_values=frozenset(to_rational(v) for v in data["initial_values"]),
            mode=data.get("mode", "point"),
        )


def validate(spec: QuantizerSpec) -> list[str]:
    """Diagnostics that make compilation unsound; empty means the spec is usable."""
    out = []
    for g in sorted(spec.symbols):
        iv = spec.symbols[g]
        if not iv.issubset(spec.domain):
            out.append(f"symbol {g}: interval {iv} is not contained in the domain {spec.domain}")
        exits = spec.exit_points(g)
        if not exits:
            out.append(f"symbol {g}: no exit endpoints: external behavior has no events")
        for e in exits:
            if not spec.labels(e):
                out.append(f"symbol {g}: exit endpoint {rational_token(e)} is covered by no symbol interval")
    for v in sorted(spec.initial_values):
        if v not in spec.domain:
            out.append(f"initial value {rational_token(v)} lies outside the domain")
        if not spec.labels(v):
            out.append(f"initial value {rational_token(v)} is covered by no symbol interval")
    return out


def exit_successors(spec: QuantizerSpec, symbol: str) -> set[tuple[Fraction, str]]:
    """Pairs (exit value, next symbol) reachable when the signal leaves ``symbol``'s interval."""
    return {(e, g) for e in spec.exit_points(symbol) for g in spec.labels(e)}


@dataclass(frozen=True)
class CompiledSystem:
    fsm: Fsm
    concretize: dict[str, IntervalSet]
    mode: str

    def __hash__(self):
        return hash((self.fsm, self.mode))

    def concretize_states(self, states: Iterable[str]) -> IntervalSet:
        out = IntervalSet()
        for s in states:
            out = out | self.concretize[s]
        return out


def compile_spec(spec: QuantizerSpec, mode: str | None = None) -> CompiledSystem:
    """Build the finite machine whose path labels are the quantizer's external signals."""
    mode = spec.mode if mode is None else mode
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    diagnostics = validate(spec)
    if diagnostics:
        raise Blocking(diagnostics)
    succ = {g: exit_successors(spec, g) for g in spec.symbols}
    transitions = set()
    if mode == "point":
        values = set(spec.initial_values)
        for pairs in succ.values():
            values |= {e for e, _ in pairs}
        for v in values:
            for g in spec.labels(v):
                for e, _ in succ[g]:
                    transitions.add((rational_token(v), g, rational_token(e)))
        states = {rational_token(v) for v in values}
        initial = {rational_token(v) for v in spec.initial_values}
        fsm = trim(Fsm(states, spec.symbols, initial, transitions))
        concretize = {s: IntervalSet.of(Interval.point(Fraction(s))) for s in fsm.states}
    else:
        for g, pairs in succ.items():
            for _, nxt in pairs:
                transitions.add((g, g, nxt))
        initial = set().union(*(spec.labels(v) for v in spec.initial_values))
        fsm = trim(Fsm(spec.symbols, spec.symbols, initial, transitions))
        concretize = {g: IntervalSet.of(spec.symbols[g]) for g in fsm.states}
    log.debug("compiled %s-mode machine with %d states", mode, len(fsm.states))
    return CompiledSystem(fsm, concretize, mode)


def reach_past(cs: CompiledSystem, zeta: Word) -> IntervalSet:
    """Signal values compatible with the recent past ``zeta``.

    For nonempty ``zeta`` these are the concretized states entered right after
    reading ``zeta`` from any occupied state; for the empty word, every
    occupied state.
    """
    zeta = tuple(zeta)
    for sym in zeta:
        if sym not in cs.fsm.alphabet:
            raise UnknownSymbol(sym)
    states = cs.fsm.post_word(reachable_states(cs.fsm), zeta)
    return cs.concretize_states(states)

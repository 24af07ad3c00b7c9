"""Recent-past state sets and the canonical relations between a system and its approximation."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .automata import Fsm, Word, reachable_sequence
from .errors import UnknownSymbol
from .lcomplete import ApproxMachine
from .quantizer import CompiledSystem, IntervalSet

INVERSE_SUFFIX = "^-1"


@dataclass(frozen=True)
class Relation:
    pairs: frozenset[tuple[str, str]]
    flavor: str = "custom"
    l: int | None = None
    # interval meaning of system-side states, for reporting only
    concretization: dict[str, IntervalSet] | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "pairs", frozenset(tuple(p) for p in self.pairs))

    def __hash__(self):
        return hash((self.pairs, self.flavor, self.l))

    def __contains__(self, pair) -> bool:
        return tuple(pair) in self.pairs

    def __len__(self) -> int:
        return len(self.pairs)

    def inverse(self) -> "Relation":
        if self.flavor.endswith(INVERSE_SUFFIX):
            flavor = self.flavor[: -len(INVERSE_SUFFIX)]
        else:
            flavor = self.flavor + INVERSE_SUFFIX
        return Relation(frozenset((b, a) for a, b in self.pairs), flavor, self.l, self.concretization)

    def image(self, left: str) -> set[str]:
        return {b for a, b in self.pairs if a == left}

    def restrict(self, predicate) -> "Relation":
        return Relation(frozenset(p for p in self.pairs if predicate(p)), self.flavor, self.l, self.concretization)

    def to_json(self) -> dict:
        out = {"flavor": self.flavor, "l": self.l, "pairs": [list(p) for p in sorted(self.pairs)]}
        if self.concretization is not None:
            out["concretization"] = {s: iv.to_json() for s, iv in sorted(self.concretization.items())}
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Relation":
        conc = data.get("concretization")
        return cls(
            frozenset(tuple(p) for p in data["pairs"]),
            data.get("flavor", "custom"),
            data.get("l"),
            {s: IntervalSet.from_json(iv) for s, iv in conc.items()} if conc is not None else None,
        )


def _check_word(m: Fsm, zeta: Word) -> None:
    for sym in zeta:
        if sym not in m.alphabet:
            raise UnknownSymbol(sym)


def reach_past_at(m: Fsm, k: int, zeta: Word) -> frozenset[str]:
    """States occupied at step ``k`` by runs whose last ``len(zeta)`` labels were ``zeta``."""
    zeta = tuple(zeta)
    if k < len(zeta):
        raise ValueError("k must be at least the length of the recent past")
    _check_word(m, zeta)
    return m.post_word(reachable_sequence(m).at(k - len(zeta)), zeta)


def reach_past_any(m: Fsm, zeta: Word) -> frozenset[str]:
    """Union of ``reach_past_at(m, k, zeta)`` over every ``k >= len(zeta)``.

    The occupied sets repeat with a finite lasso, so the union over the
    distinct sets of the lasso covers every step.
    """
    zeta = tuple(zeta)
    _check_word(m, zeta)
    return m.post_word(reachable_sequence(m).union(), zeta)


def _related(sys: Fsm, approx: ApproxMachine, state: str) -> frozenset[str]:
    """System states sharing the recent past of ``state`` at the steps ``state`` is occupied."""
    zeta = approx.recent_past(state)
    if approx.is_opening(state):
        return reach_past_at(sys, len(zeta), zeta)
    return reach_past_any(sys, zeta)


def build_R0(sys: Fsm, approx: ApproxMachine, concretize: dict | None = None) -> Relation:
    l = approx.l
    pairs = set()
    for state in approx.fsm.states:
        pairs.update((xi, state) for xi in _related(sys, approx, state))
    return Relation(frozenset(pairs), "R0", l, concretize)


def build_Rl(sys: Fsm, approx: ApproxMachine, concretize: dict | None = None) -> Relation:
    l = approx.l
    pairs = set()
    for state in approx.fsm.states:
        if len(approx.recent_past(state)) == l:
            pairs.update((xi, state) for xi in _related(sys, approx, state))
    return Relation(frozenset(pairs), "Rl", l, concretize)


def build_RX(sys: Fsm, l: int, concretize: dict | None = None) -> Relation:
    """Pairs of states sharing some recent past of length ``l``."""
    pairs = set()
    for zeta in product(sorted(sys.alphabet), repeat=l):
        group = reach_past_any(sys, zeta)
        pairs.update(product(group, group))
    return Relation(frozenset(pairs), "RX", l, concretize)


def concretize_right(rel: Relation, cs: CompiledSystem) -> dict[str, IntervalSet]:
    """For each right-hand state, the union of the intervals of its related system states."""
    out: dict[str, IntervalSet] = {}
    for xi, zeta in rel.pairs:
        out[zeta] = out.get(zeta, IntervalSet()) | cs.concretize[xi]
    return out


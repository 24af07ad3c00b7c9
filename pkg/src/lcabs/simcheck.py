"""Simulation checks between finite machines with identical internal and external time.

For machines the general step condition on concatenated trajectories reduces
to the familiar one: whenever ``(x1, x2)`` is related and ``x1`` reads a symbol
into ``x1'``, ``x2`` reads the same symbol into some ``x2'`` related to
``x1'``.  Flavors differ only in which states must be covered initially:

* ``async``      every reachable state of the left machine
* ``l-initial``  the states occupied at step l (``0-initial`` is l = 0)
* ``e-sync``     the states occupied at every step k, pairwise at equal k
* ``sync``       as ``e-sync``; internal time equals external time here
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .automata import (
    Fsm,
    lasso,
    reachable_sequence,
    reachable_states,
    shortest_word_to_at,
    shortest_words_to,
)
from .errors import InternalInconsistency, UnknownState
from .lcomplete import ApproxMachine, approximate_machine, is_l_complete
from .relations import Relation, build_R0, build_Rl, build_RX
from .verdict import Counterexample, Verdict

log = logging.getLogger(__name__)

FLAVORS = ("async", "l-initial", "e-sync", "sync")


def _check_pairs(R: Relation, sys1: Fsm, sys2: Fsm) -> None:
    live1, live2 = reachable_states(sys1), reachable_states(sys2)
    for a, b in sorted(R.pairs):
        if a not in sys1.states:
            raise UnknownState(f"left state {a!r} is not a state of the left machine")
        if b not in sys2.states:
            raise UnknownState(f"right state {b!r} is not a state of the right machine")
        if a not in live1 or b not in live2:
            raise UnknownState(f"pair {(a, b)} mentions an unreachable state")


def check_step(R: Relation, sys1: Fsm, sys2: Fsm) -> Verdict:
    """Check the step condition at every pair.

    Violations are listed symbol by symbol, then by pair, so the reported
    counterexample names the first symbol that breaks the relation.
    """
    _check_pairs(R, sys1, sys2)
    replay = shortest_words_to(sys1)
    violations = []
    for sym in sorted(sys1.alphabet):
        for a, b in sorted(R.pairs):
            for a_next in sorted(sys1.successors[a].get(sym, ())):
                matches = sys2.successors[b].get(sym, frozenset())
                if not any((a_next, b_next) in R.pairs for b_next in matches):
                    violations.append(Counterexample("step", replay[a], a, b, sym))
                    break
    if violations:
        return Verdict(False, counterexample=violations[0], violations=tuple(violations))
    return Verdict(True, certificate=R)


def _coverage_fail(R: Relation, sys1: Fsm, k: int, uncovered: list[str]) -> Verdict:
    found = [Counterexample("coverage", shortest_word_to_at(sys1, x, k), x) for x in uncovered]
    return Verdict(False, counterexample=found[0], violations=tuple(found))


def check_initial(R: Relation, sys1: Fsm, sys2: Fsm, flavor: str, l: int = 0) -> Verdict:
    """Check the covering condition of ``flavor``; ``l`` is used by ``l-initial`` only."""
    if flavor not in FLAVORS:
        raise ValueError(f"unknown flavor {flavor!r}; expected one of {FLAVORS}")
    _check_pairs(R, sys1, sys2)

    def uncovered(left: frozenset[str], right: frozenset[str]) -> list[str]:
        return sorted(x for x in left if not (R.image(x) & right))

    if flavor == "async":
        left, right = reachable_states(sys1), reachable_states(sys2)
        missing = uncovered(left, right)
        if missing:
            words = shortest_words_to(sys1)
            found = [Counterexample("coverage", words[x], x) for x in missing]
            return Verdict(False, counterexample=found[0], violations=tuple(found))
        return Verdict(True, certificate=R)

    if flavor == "l-initial":
        seq1, seq2 = reachable_sequence(sys1), reachable_sequence(sys2)
        missing = uncovered(seq1.at(l), seq2.at(l))
        if missing:
            return _coverage_fail(R, sys1, l, missing)
        return Verdict(True, certificate=R)

    # e-sync and sync: every step k, over the lasso of the paired occupied sets
    first = (frozenset(sys1.initial), frozenset(sys2.initial))
    prefix, cycle = lasso(first, lambda pair: (sys1.step(pair[0]), sys2.step(pair[1])))
    for k, (left, right) in enumerate(prefix + cycle):
        missing = uncovered(left, right)
        if missing:
            return _coverage_fail(R, sys1, k, missing)
    return Verdict(True, certificate=R)


def check_relation(R: Relation, sys1: Fsm, sys2: Fsm, flavor: str, l: int = 0) -> Verdict:
    initial = check_initial(R, sys1, sys2, flavor, l)
    if not initial:
        return initial
    return check_step(R, sys1, sys2)


def greatest_simulation(sys1: Fsm, sys2: Fsm) -> Relation:
    """Largest relation over reachable states satisfying the step condition."""
    left, right = reachable_states(sys1), reachable_states(sys2)
    rel = {(a, b) for a in left for b in right}
    changed = True
    while changed:
        changed = False
        for a, b in list(rel):
            for sym, targets in sys1.successors[a].items():
                options = sys2.successors[b].get(sym, frozenset())
                if not all(any((t, o) in rel for o in options) for t in targets):
                    rel.discard((a, b))
                    changed = True
                    break
    return Relation(frozenset(rel), "custom")


ITEMS = ("i", "ii", "iii", "iv", "v", "vi")


@dataclass
class ItemResult:
    item: str
    claim: str
    relation: str
    verdict: Verdict

    def to_json(self) -> dict:
        return {"item": self.item, "claim": self.claim, "relation": self.relation, **self.verdict.to_json()}


@dataclass
class Theorem1Report:
    l: int
    approx: ApproxMachine
    relations: dict[str, Relation]
    items: dict[str, ItemResult]
    l_complete: Verdict
    rx_simulation: Verdict
    rl_simulation: Verdict
    rl_inverse_simulation: Verdict
    flags: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "l": self.l,
            "premises": {
                "l_complete": self.l_complete.to_json(),
                "RX_l_initial": self.rx_simulation.to_json(),
            },
            "cross_check": {
                "Rl_l_initial": self.rl_simulation.to_json(),
                "Rl_inverse_l_initial": self.rl_inverse_simulation.to_json(),
            },
            "items": [self.items[i].to_json() for i in ITEMS],
            "flags": list(self.flags),
        }


def theorem1_report(sys: Fsm, l: int) -> Theorem1Report:
    """Evaluate every similarity claim between ``sys`` and its l-approximation.

    Raises InternalInconsistency if the R_X route and the direct R_l inverse
    route disagree on bisimilarity.
    """
    approx = approximate_machine(sys, l)
    A = approx.fsm
    R0 = build_R0(sys, approx)
    Rl = build_Rl(sys, approx)
    RX = build_RX(sys, l)
    items = {
        "i": ItemResult("i", "0-initial simulation", "R0", check_relation(R0, sys, A, "l-initial", 0)),
        "ii": ItemResult("ii", "externally synchronous simulation", "R0", check_relation(R0, sys, A, "e-sync")),
        "iii": ItemResult("iii", "asynchronous simulation", "R0", check_relation(R0, sys, A, "async")),
        "iv": ItemResult("iv", "synchronous simulation", "R0", check_relation(R0, sys, A, "sync")),
        "v": ItemResult("v", f"{l}-initial simulation", "Rl", check_relation(Rl, sys, A, "l-initial", l)),
    }
    l_complete = is_l_complete(sys, l)
    rx = check_relation(RX, sys, sys, "l-initial", l)
    rl = items["v"].verdict
    rl_inv = check_relation(Rl.inverse(), A, sys, "l-initial", l)
    premise = l_complete.passed and rx.passed
    if premise != rl_inv.passed:
        raise InternalInconsistency(
            f"l-completeness ({l_complete.status}) and RX ({rx.status}) disagree with "
            f"the inverse of Rl ({rl_inv.status})"
        )
    bisimilar = premise and rl.passed and rl_inv.passed
    if bisimilar:
        vi = Verdict(True, certificate=Rl)
    else:
        reason = rx if not rx.passed else (l_complete if not l_complete.passed else rl_inv)
        vi = Verdict(False, counterexample=reason.counterexample)
    items["vi"] = ItemResult("vi", f"{l}-initial bisimilarity", "RX", vi)
    flags = []
    if l_complete.passed and not rx.passed:
        flags.append("l-complete-without-RX-simulation")
        log.info("behavior is %d-complete but RX is not a %d-initial simulation", l, l)
    return Theorem1Report(
        l=l,
        approx=approx,
        relations={"R0": R0, "Rl": Rl, "RX": RX},
        items=items,
        l_complete=l_complete,
        rx_simulation=rx,
        rl_simulation=rl,
        rl_inverse_simulation=rl_inv,
        flags=flags,
    )

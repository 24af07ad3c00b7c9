from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .automata import Word, word_token


@dataclass(frozen=True)
class Counterexample:
    """Why a check failed, in a form that can be replayed on the machines.

    kind ``step``: ``left`` is reached by ``replay`` and can read ``symbol``,
    but ``right`` has no ``symbol``-successor related to the left successor.
    kind ``coverage``: ``left`` is reached by ``replay`` at step ``len(replay)``
    and no right state occupied at that step is related to it.
    kind ``language``: ``replay`` is a word of one language but not the other.
    """

    kind: str
    replay: Word
    left: str | None = None
    right: str | None = None
    symbol: str | None = None

    def to_json(self) -> dict:
        out: dict[str, Any] = {"kind": self.kind}
        if self.left is not None:
            out["left"] = self.left
        if self.right is not None:
            out["right"] = self.right
        if self.symbol is not None:
            out["symbol"] = self.symbol
        out["replay"] = word_token(self.replay)
        return out


@dataclass(frozen=True)
class Verdict:
    passed: bool
    certificate: Any = None
    counterexample: Counterexample | None = None
    violations: tuple[Counterexample, ...] = field(default=())

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict:
        out: dict[str, Any] = {"status": self.status}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample.to_json()
        return out

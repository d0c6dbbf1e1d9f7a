"""Natural deduction for first-order logic: kernel, prover and exporters."""

from __future__ import annotations

import json as _json

from . import _natded
from ._natded import NatdedError, export_isar, parse, prove, render

__all__ = [
    "NatdedError",
    "Session",
    "check_proof",
    "countermodel",
    "export_isar",
    "parse",
    "prove",
    "render",
]


def check_proof(proof: str) -> dict:
    return _json.loads(_natded.check_proof(proof))


def countermodel(formula: str, max_size: int = 3, budget: int = 100000, seed: int = 0x5EED) -> dict:
    return _json.loads(_natded.countermodel(formula, max_size, budget, seed))


class Session:
    """A backward-chaining proof of one goal; lines are 1-based."""

    def __init__(self, goal: str):
        self._s = _natded._Session(goal)

    def apply(self, line: int, rule: str, witness: str | None = None, formula: str | None = None) -> dict:
        return _json.loads(self._s.apply(line, rule, witness, formula))

    def undo(self) -> dict:
        return _json.loads(self._s.undo())

    @property
    def state(self) -> dict:
        return _json.loads(self._s.state())

    @property
    def complete(self) -> bool:
        return self._s.complete

    def export_proof(self) -> str:
        return self._s.export_proof()

    def export_isar(self, scratch: bool = False) -> str:
        return self._s.export_isar(scratch)

"""Resolved per-unit actions.

Commands in the policy language resolve to one of six concrete action forms
at each decision point. Equality intentionally ignores the originating
command verb: an unassigned unit, ``idle()``, and ``attack_if_in_range()``
resolve to identical actions in identical situations, so behavior comparison
sees through surface-level rewording of a policy.
"""
from __future__ import annotations

from dataclasses import dataclass, field

STAND = "stand"
ATTACK = "attack"
MOVE = "move"
HARVEST = "harvest"
DEPOSIT = "deposit"
SPAWN = "spawn"


@dataclass(frozen=True)
class Action:
    op: str
    target: int | None = None  # victim / resource node / deposit base
    cell: tuple[int, int] | None = None  # move destination / spawn placement
    unit_type: str | None = None  # spawned kind
    source: str = field(default="", compare=False)  # originating command verb

    def to_json(self) -> dict:
        data: dict = {"op": self.op}
        if self.target is not None:
            data["target"] = self.target
        if self.cell is not None:
            data["cell"] = list(self.cell)
        if self.unit_type is not None:
            data["unit_type"] = self.unit_type
        if self.source:
            data["source"] = self.source
        return data


STAND_ACTION = Action(STAND)

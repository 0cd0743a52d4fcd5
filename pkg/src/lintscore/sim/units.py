"""Unit kinds and combat statistics."""
from __future__ import annotations

from dataclasses import dataclass, replace

BASE = "Base"
BARRACKS = "Barracks"
WORKER = "Worker"
LIGHT = "Light"
HEAVY = "Heavy"
RANGED = "Ranged"
RESOURCE = "Resource"

PLAYER_KINDS = (BASE, BARRACKS, WORKER, LIGHT, HEAVY, RANGED)


@dataclass(frozen=True)
class UnitStats:
    hp: int
    cost: int
    attack_damage: int = 0
    attack_range: int = 0
    can_move: bool = False
    can_attack: bool = False
    can_harvest: bool = False
    move_period: int = 1
    builds: tuple[str, ...] = ()
    trains: tuple[str, ...] = ()


DEFAULT_STATS: dict[str, UnitStats] = {
    BASE: UnitStats(hp=10, cost=10, trains=(WORKER,)),
    BARRACKS: UnitStats(hp=4, cost=5, trains=(LIGHT, HEAVY, RANGED)),
    WORKER: UnitStats(
        hp=1,
        cost=1,
        attack_damage=1,
        attack_range=1,
        can_move=True,
        can_attack=True,
        can_harvest=True,
        builds=(BASE, BARRACKS),
    ),
    LIGHT: UnitStats(
        hp=4, cost=2, attack_damage=2, attack_range=1, can_move=True, can_attack=True
    ),
    HEAVY: UnitStats(
        hp=4, cost=2, attack_damage=4, attack_range=1, can_move=True, can_attack=True
    ),
    RANGED: UnitStats(
        hp=1, cost=2, attack_damage=1, attack_range=3, can_move=True, can_attack=True
    ),
    RESOURCE: UnitStats(hp=1, cost=0),
}


def load_stats(overrides: dict | None = None) -> dict[str, UnitStats]:
    """The default stat table with optional per-kind field overrides.

    ``overrides`` maps kind name to a dict of :class:`UnitStats` fields, e.g.
    ``{"Heavy": {"hp": 8}}``.
    """
    stats = dict(DEFAULT_STATS)
    for kind, fields in (overrides or {}).items():
        if kind not in stats:
            raise KeyError(f"unknown unit kind {kind!r}")
        coerced = {
            key: tuple(value) if isinstance(value, list) else value
            for key, value in fields.items()
        }
        stats[kind] = replace(stats[kind], **coerced)
    return stats

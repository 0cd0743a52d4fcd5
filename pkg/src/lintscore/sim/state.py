"""Mutable game state, map loading, and state snapshots."""
from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .units import DEFAULT_STATS, RESOURCE, UnitStats, load_stats

Cell = tuple[int, int]


class Unit:
    __slots__ = ("uid", "kind", "owner", "x", "y", "hp", "carried", "resources")

    def __init__(
        self,
        uid: int,
        kind: str,
        owner: int | None,
        x: int,
        y: int,
        hp: int,
        carried: int = 0,
        resources: int = 0,
    ):
        self.uid = uid
        self.kind = kind
        self.owner = owner  # 0, 1, or None for resource nodes
        self.x = x
        self.y = y
        self.hp = hp
        self.carried = carried
        self.resources = resources  # remaining amount, resource nodes only

    @property
    def pos(self) -> Cell:
        return (self.x, self.y)

    def as_tuple(self) -> tuple:
        return (
            self.uid,
            self.kind,
            self.owner,
            self.x,
            self.y,
            self.hp,
            self.carried,
            self.resources,
        )

    def __repr__(self) -> str:
        return f"Unit{self.as_tuple()!r}"


class GameState:
    """Grid world with at most one unit per cell.

    The ``tick`` counter is excluded from :meth:`snapshot` so that states
    which differ only by elapsed time compare equal; this keeps decision-state
    deduplication and seeded random choices consistent under replay.
    """

    def __init__(
        self,
        width: int,
        height: int,
        seed: int = 0,
        player_resources: tuple[int, int] = (0, 0),
        stats: dict[str, UnitStats] | None = None,
    ):
        self.width = width
        self.height = height
        self.seed = seed
        self.tick = 0
        self.player_resources = [player_resources[0], player_resources[1]]
        self.stats = stats if stats is not None else DEFAULT_STATS
        self.units: dict[int, Unit] = {}
        self.occupancy: dict[Cell, int] = {}
        self.next_uid = 0

    # -- construction -------------------------------------------------------

    def add_unit(
        self,
        kind: str,
        owner: int | None,
        x: int,
        y: int,
        hp: int | None = None,
        carried: int = 0,
        resources: int = 0,
    ) -> Unit:
        if not self.in_bounds(x, y):
            raise ValueError(f"cell ({x}, {y}) out of bounds")
        if (x, y) in self.occupancy:
            raise ValueError(f"cell ({x}, {y}) already occupied")
        uid = self.next_uid
        self.next_uid += 1
        unit = Unit(
            uid,
            kind,
            owner,
            x,
            y,
            self.stats[kind].hp if hp is None else hp,
            carried,
            resources,
        )
        self.units[uid] = unit
        self.occupancy[(x, y)] = uid
        return unit

    def remove_unit(self, uid: int) -> None:
        unit = self.units.pop(uid)
        del self.occupancy[unit.pos]

    def move_unit(self, uid: int, cell: Cell) -> None:
        unit = self.units[uid]
        del self.occupancy[unit.pos]
        unit.x, unit.y = cell
        self.occupancy[cell] = uid

    # -- queries ------------------------------------------------------------

    def in_bounds(self, x: int, y: int) -> bool:
        return 0 <= x < self.width and 0 <= y < self.height

    def is_free(self, cell: Cell) -> bool:
        return self.in_bounds(*cell) and cell not in self.occupancy

    def player_units(self, player: int) -> list[Unit]:
        return [u for u in self.units.values() if u.owner == player]

    def resource_nodes(self) -> list[Unit]:
        return [u for u in self.units.values() if u.kind == RESOURCE]

    # -- snapshots ----------------------------------------------------------

    def snapshot(self) -> tuple:
        """Hashable, tick-free description of the full state."""
        return (
            self.width,
            self.height,
            self.seed,
            self.player_resources[0],
            self.player_resources[1],
            tuple(self.units[uid].as_tuple() for uid in sorted(self.units)),
        )

    def digest(self) -> str:
        raw = repr(self.snapshot()).encode()
        return hashlib.sha256(raw).hexdigest()[:16]

    def clone(self) -> "GameState":
        other = GameState(
            self.width,
            self.height,
            self.seed,
            (self.player_resources[0], self.player_resources[1]),
            self.stats,
        )
        other.tick = self.tick
        other.next_uid = self.next_uid
        for uid, unit in self.units.items():
            copy = Unit(*unit.as_tuple())
            other.units[uid] = copy
            other.occupancy[copy.pos] = uid
        return other


def restore_state(
    snapshot: tuple, stats: dict[str, UnitStats] | None = None
) -> GameState:
    """Rebuild a state from :meth:`GameState.snapshot` output.

    Restored states are meant for policy re-evaluation; the unit-id counter
    restarts above the highest live id.
    """
    width, height, seed, res0, res1, unit_tuples = snapshot
    state = GameState(width, height, seed, (res0, res1), stats)
    for fields in unit_tuples:
        uid, kind, owner, x, y, hp, carried, resources = fields
        unit = Unit(uid, kind, owner, x, y, hp, carried, resources)
        state.units[uid] = unit
        state.occupancy[(x, y)] = uid
    state.next_uid = max(state.units, default=-1) + 1
    return state


# ---------------------------------------------------------------------------
# map files
# ---------------------------------------------------------------------------

_OWNER_NAMES = {"P0": 0, "P1": 1, None: None}


def state_from_map_dict(
    data: dict, seed: int = 0, stats: dict[str, UnitStats] | None = None
) -> GameState:
    resources = data.get("player_resources", [0, 0])
    state = GameState(
        data["width"],
        data["height"],
        seed,
        (resources[0], resources[1]),
        stats,
    )
    for cell in data["cells"]:
        x, y = cell["pos"]
        owner = _OWNER_NAMES[cell.get("owner")]
        state.add_unit(
            cell["kind"], owner, x, y, resources=cell.get("resources", 0)
        )
    return state


def load_map(
    path: str | Path,
    seed: int = 0,
    stats_overrides: dict | None = None,
) -> GameState:
    data = json.loads(Path(path).read_text())
    stats = load_stats(stats_overrides) if stats_overrides else None
    return state_from_map_dict(data, seed, stats)

"""One decision point: run a policy over a state, producing unit assignments.

Semantics:

* ``for(Unit u)`` iterates the executing player's own units in ascending id
  order; the statement list inside runs once per unit.
* Assignments are write-once: the first command a unit becomes eligible for
  wins, so earlier statements have strictly higher priority.
* A command is skipped (without consuming the unit) when its kind cannot
  perform it, its count limit is reached, resources are insufficient, or no
  target resolves; evaluation then falls through to later statements.
* Top-level statements execute once. A bare command or guard outside any loop
  has no unit bound to ``u``: the command is inert and the guard is false.
* Guards are pure predicates; the two activity counters (units attacking,
  workers harvesting) read the assignment map built so far at this decision
  point.

Resolved actions are concrete (exact target ids and cells), and units left
unassigned act as if assigned ``idle()``: hold position, auto-attacking the
closest enemy in range.
"""
from __future__ import annotations

import hashlib

from ..microlang.ast import (
    BoolCall,
    Command,
    Empty,
    ForLoop,
    If,
    Program,
    Statement,
)
from .actions import (
    ATTACK,
    DEPOSIT,
    HARVEST,
    MOVE,
    SPAWN,
    Action,
    STAND_ACTION,
)
from .state import Cell, GameState, Unit
from .units import RESOURCE, BASE

# direction -> grid delta; y grows downward
_DELTAS = {"Up": (0, -1), "Right": (1, 0), "Down": (0, 1), "Left": (-1, 0)}
_CLOCKWISE = ("Up", "Right", "Down", "Left")

# movement is 8-directional so strict Chebyshev descent cannot stall on a
# diagonal approach; order fixes tie-breaks, clockwise from Up
_MOVE_DELTAS = (
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
)

_ATTACK_VERBS = ("attack", "attack_if_in_range")


def chebyshev(a: Cell, b: Cell) -> int:
    return max(abs(a[0] - b[0]), abs(a[1] - b[1]))


def _distance_pair(a: Cell, b: Cell) -> tuple[int, int]:
    dx, dy = abs(a[0] - b[0]), abs(a[1] - b[1])
    return (max(dx, dy), dx + dy)


def _stable_index(key: tuple, size: int) -> int:
    digest = hashlib.blake2b(repr(key).encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big") % size


class _Context:
    """Per-evaluation scratch state and caches."""

    def __init__(self, state: GameState, player: int):
        self.state = state
        self.player = player
        self.own = sorted(
            (u for u in state.units.values() if u.owner == player),
            key=lambda u: u.uid,
        )
        self.enemies = sorted(
            (u for u in state.units.values() if u.owner == (1 - player)),
            key=lambda u: u.uid,
        )
        self.nodes = sorted(
            (u for u in state.units.values() if u.kind == RESOURCE and u.resources > 0),
            key=lambda u: u.uid,
        )
        self.own_counts: dict[str, int] = {}
        for u in self.own:
            self.own_counts[u.kind] = self.own_counts.get(u.kind, 0) + 1
        self.enemy_counts: dict[str, int] = {}
        for u in self.enemies:
            self.enemy_counts[u.kind] = self.enemy_counts.get(u.kind, 0) + 1
        self.assigned: dict[int, Action] = {}
        self.attacking = 0
        self.harvesting = 0
        self.committed_cost = 0
        self.pending_spawns: dict[str, int] = {}
        self.reserved: set[Cell] = set()

    # -- assignment ---------------------------------------------------------

    def assign(self, unit: Unit, action: Action) -> None:
        if unit.uid in self.assigned:
            raise AssertionError(f"unit {unit.uid} assigned twice")
        self.assigned[unit.uid] = action
        if action.source in _ATTACK_VERBS:
            self.attacking += 1
        elif action.source == "harvest":
            self.harvesting += 1

    @property
    def all_assigned(self) -> bool:
        return len(self.assigned) == len(self.own)

    # -- target helpers -----------------------------------------------------

    def free_cell(self, cell: Cell) -> bool:
        return self.state.is_free(cell) and cell not in self.reserved

    def spawn_cell(self, unit: Unit, direction: str) -> Cell | None:
        if direction == "EnemyDir":
            best: tuple[int, int] | None = None
            best_cell: Cell | None = None
            for rank, name in enumerate(_CLOCKWISE):
                dx, dy = _DELTAS[name]
                cell = (unit.x + dx, unit.y + dy)
                if not self.free_cell(cell):
                    continue
                dist = self.nearest_enemy_distance(cell)
                key = (dist, rank)
                if best is None or key < best:
                    best, best_cell = key, cell
            return best_cell
        start = _CLOCKWISE.index(direction)
        for i in range(4):
            name = _CLOCKWISE[(start + i) % 4]
            dx, dy = _DELTAS[name]
            cell = (unit.x + dx, unit.y + dy)
            if self.free_cell(cell):
                return cell
        return None

    def nearest_enemy_distance(self, cell: Cell) -> int:
        if not self.enemies:
            return 0
        return min(chebyshev(cell, e.pos) for e in self.enemies)

    def step_toward(self, unit: Unit, goal: Cell) -> Cell | None:
        """Free adjacent cell improving (Chebyshev, Manhattan) distance to
        goal, so a blocked diagonal approach slides around the obstacle."""
        current = _distance_pair(unit.pos, goal)
        best: Cell | None = None
        best_key: tuple[int, int, int] | None = None
        for rank, (dx, dy) in enumerate(_MOVE_DELTAS):
            cell = (unit.x + dx, unit.y + dy)
            if not self.free_cell(cell):
                continue
            pair = _distance_pair(cell, goal)
            if pair >= current:
                continue
            key = (*pair, rank)
            if best_key is None or key < best_key:
                best_key, best = key, cell
        return best

    def step_away(self, unit: Unit, anchor: Cell) -> Cell | None:
        """Free adjacent cell worsening (Chebyshev, Manhattan) distance from
        the anchor."""
        current = _distance_pair(unit.pos, anchor)
        best: Cell | None = None
        best_key: tuple[int, int, int] | None = None
        for rank, (dx, dy) in enumerate(_MOVE_DELTAS):
            cell = (unit.x + dx, unit.y + dy)
            if not self.free_cell(cell):
                continue
            pair = _distance_pair(cell, anchor)
            if pair <= current:
                continue
            key = (-pair[0], -pair[1], rank)
            if best_key is None or key < best_key:
                best_key, best = key, cell
        return best

    def select(self, unit: Unit, pool: list[Unit], criterion: str) -> Unit | None:
        if not pool:
            return None
        if criterion == "Random":
            ids = tuple(u.uid for u in pool)
            idx = _stable_index((self.state.seed, unit.uid, ids), len(pool))
            return pool[idx]
        stats = self.state.stats
        keys = {
            "Strongest": lambda v: (-stats[v.kind].attack_damage, v.uid),
            "Weakest": lambda v: (stats[v.kind].attack_damage, v.uid),
            "Closest": lambda v: (chebyshev(unit.pos, v.pos), v.uid),
            "Farthest": lambda v: (-chebyshev(unit.pos, v.pos), v.uid),
            "LessHealthy": lambda v: (v.hp, v.uid),
            "MostHealthy": lambda v: (-v.hp, v.uid),
        }
        return min(pool, key=keys[criterion])

    def closest_enemy_in_range(self, unit: Unit) -> Unit | None:
        rng = self.state.stats[unit.kind].attack_range
        best: Unit | None = None
        best_key: tuple[int, int] | None = None
        for enemy in self.enemies:
            dist = chebyshev(unit.pos, enemy.pos)
            if dist > rng:
                continue
            key = (dist, enemy.uid)
            if best_key is None or key < best_key:
                best_key, best = key, enemy
        return best

    def idle_resolution(self, unit: Unit) -> Action:
        if self.state.stats[unit.kind].can_attack:
            victim = self.closest_enemy_in_range(unit)
            if victim is not None:
                return Action(ATTACK, target=victim.uid, source="idle")
        return Action("stand", source="idle")


# ---------------------------------------------------------------------------
# guards
# ---------------------------------------------------------------------------


def _eval_guard(call: BoolCall, unit: Unit | None, ctx: _Context) -> bool:
    name, args = call.name, call.args
    stats = ctx.state.stats
    if name == "hasNumberOfUnits":
        return ctx.own_counts.get(args[0], 0) >= args[1]
    if name == "opponentHasNumberOfUnits":
        return ctx.enemy_counts.get(args[0], 0) >= args[1]
    if name == "hasLessNumberOfUnits":
        return ctx.own_counts.get(args[0], 0) < args[1]
    if name == "haveQtdUnitsAttacking":
        return ctx.attacking >= args[0]
    if name == "hasNumberOfWorkersHarvesting":
        return ctx.harvesting >= args[0]
    if name == "hasUnitWithinDistanceFromOpponent":
        limit = args[0]
        return any(
            chebyshev(mine.pos, enemy.pos) <= limit
            for mine in ctx.own
            for enemy in ctx.enemies
        )
    if unit is None:
        return False
    if name == "is_Type":
        return unit.kind == args[0]
    if name == "isBuilder":
        return bool(stats[unit.kind].builds)
    if name == "canAttack":
        return stats[unit.kind].can_attack
    if name == "canHarvest":
        return stats[unit.kind].can_harvest and (
            unit.carried > 0 or bool(ctx.nodes)
        )
    if name == "hasUnitThatKillsInOneAttack":
        return any(
            stats[mine.kind].can_attack
            and any(stats[mine.kind].attack_damage >= e.hp for e in ctx.enemies)
            for mine in ctx.own
        )
    if name == "opponentHasUnitThatKillsUnitInOneAttack":
        return any(
            stats[enemy.kind].can_attack
            and any(stats[enemy.kind].attack_damage >= m.hp for m in ctx.own)
            for enemy in ctx.enemies
        )
    if name == "hasUnitInOpponentRange":
        return any(
            chebyshev(mine.pos, enemy.pos) <= stats[enemy.kind].attack_range
            for mine in ctx.own
            for enemy in ctx.enemies
            if stats[enemy.kind].can_attack
        )
    if name == "opponentHasUnitInPlayerRange":
        return any(
            chebyshev(mine.pos, enemy.pos) <= stats[mine.kind].attack_range
            for mine in ctx.own
            if stats[mine.kind].can_attack
            for enemy in ctx.enemies
        )
    raise ValueError(f"unknown guard {name!r}")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _try_command(cmd: Command, unit: Unit | None, ctx: _Context) -> None:
    if unit is None or unit.uid in ctx.assigned:
        return
    name, args = cmd.name, cmd.args
    stats = ctx.state.stats
    mine = stats[unit.kind]

    if name in ("train", "build"):
        kind, direction, limit = args
        allowed = mine.trains if name == "train" else mine.builds
        if kind not in allowed:
            return
        have = ctx.own_counts.get(kind, 0) + ctx.pending_spawns.get(kind, 0)
        if have >= limit:
            return
        cost = stats[kind].cost
        if ctx.state.player_resources[ctx.player] - ctx.committed_cost < cost:
            return
        cell = ctx.spawn_cell(unit, direction)
        if cell is None:
            return
        ctx.committed_cost += cost
        ctx.pending_spawns[kind] = ctx.pending_spawns.get(kind, 0) + 1
        ctx.reserved.add(cell)
        ctx.assign(unit, Action(SPAWN, cell=cell, unit_type=kind, source=name))
        return

    if name == "attack":
        if not mine.can_attack or not ctx.enemies:
            return
        victim = ctx.select(unit, ctx.enemies, args[0])
        if victim is None:
            return
        if chebyshev(unit.pos, victim.pos) <= mine.attack_range:
            ctx.assign(unit, Action(ATTACK, target=victim.uid, source="attack"))
            return
        step = ctx.step_toward(unit, victim.pos) if mine.can_move else None
        if step is not None:
            ctx.assign(unit, Action(MOVE, cell=step, source="attack"))
        else:
            ctx.assign(unit, Action("stand", source="attack"))
        return

    if name == "attack_if_in_range":
        if not mine.can_attack:
            return
        victim = ctx.closest_enemy_in_range(unit)
        if victim is None:
            return
        ctx.assign(
            unit, Action(ATTACK, target=victim.uid, source="attack_if_in_range")
        )
        return

    if name == "harvest":
        if not mine.can_harvest:
            return
        if ctx.harvesting >= args[0]:
            return
        if unit.carried > 0:
            bases = [u for u in ctx.own if u.kind == BASE]
            depot = ctx.select(unit, bases, "Closest")
            if depot is None:
                return
            if chebyshev(unit.pos, depot.pos) <= 1:
                ctx.assign(unit, Action(DEPOSIT, target=depot.uid, source="harvest"))
                return
            step = ctx.step_toward(unit, depot.pos)
            action = (
                Action(MOVE, cell=step, source="harvest")
                if step is not None
                else Action("stand", source="harvest")
            )
            ctx.assign(unit, action)
            return
        node = ctx.select(unit, ctx.nodes, "Closest")
        if node is None:
            return
        if chebyshev(unit.pos, node.pos) <= 1:
            ctx.assign(unit, Action(HARVEST, target=node.uid, source="harvest"))
            return
        step = ctx.step_toward(unit, node.pos)
        action = (
            Action(MOVE, cell=step, source="harvest")
            if step is not None
            else Action("stand", source="harvest")
        )
        ctx.assign(unit, action)
        return

    if name == "moveToUnit":
        if not mine.can_move:
            return
        side, criterion = args
        pool = (
            [u for u in ctx.own if u.uid != unit.uid]
            if side == "Ally"
            else list(ctx.enemies)
        )
        goal = ctx.select(unit, pool, criterion)
        if goal is None:
            return
        step = ctx.step_toward(unit, goal.pos)
        action = (
            Action(MOVE, cell=step, source="moveToUnit")
            if step is not None
            else Action("stand", source="moveToUnit")
        )
        ctx.assign(unit, action)
        return

    if name == "moveAway":
        if not mine.can_move:
            return
        bases = [u for u in ctx.own if u.kind == BASE]
        anchor = ctx.select(unit, bases, "Closest")
        if anchor is None:
            return
        step = ctx.step_away(unit, anchor.pos)
        action = (
            Action(MOVE, cell=step, source="moveAway")
            if step is not None
            else Action("stand", source="moveAway")
        )
        ctx.assign(unit, action)
        return

    if name == "idle":
        ctx.assign(unit, ctx.idle_resolution(unit))
        return

    raise ValueError(f"unknown command {name!r}")


# ---------------------------------------------------------------------------
# statement execution
# ---------------------------------------------------------------------------


def _exec_block(
    stmts: tuple[Statement, ...], unit: Unit | None, ctx: _Context
) -> None:
    for stmt in stmts:
        if ctx.all_assigned:
            return
        if isinstance(stmt, Command):
            _try_command(stmt, unit, ctx)
        elif isinstance(stmt, ForLoop):
            for looped in ctx.own:
                if ctx.all_assigned:
                    return
                _exec_block(stmt.body, looped, ctx)
        elif isinstance(stmt, If):
            if _eval_guard(stmt.cond, unit, ctx):
                _exec_block(stmt.then, unit, ctx)
            elif stmt.orelse is not None:
                _exec_block(stmt.orelse, unit, ctx)
        elif isinstance(stmt, Empty):
            pass
        else:
            raise TypeError(f"not a statement: {stmt!r}")


def evaluate_policy(
    program: Program, state: GameState, player: int
) -> dict[int, Action]:
    """Assignments for one decision point; units absent from the map are idle.

    The returned map contains an entry for every unit the policy assigned;
    callers treat missing units as ``idle()``.
    """
    ctx = _Context(state, player)
    _exec_block(program.body, None, ctx)
    return ctx.assigned


def resolve_joint(
    program: Program, state: GameState, player: int
) -> dict[int, Action]:
    """Like :func:`evaluate_policy` but with idle resolution filled in for
    unassigned units, so two joint maps compare positionally."""
    ctx = _Context(state, player)
    _exec_block(program.body, None, ctx)
    joint = ctx.assigned
    for unit in ctx.own:
        if unit.uid not in joint:
            joint[unit.uid] = ctx.idle_resolution(unit)
    return joint

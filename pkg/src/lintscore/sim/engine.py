"""Tick resolution and full-match execution."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from ..microlang.ast import Program
from .actions import ATTACK, DEPOSIT, HARVEST, MOVE, SPAWN, Action
from .evaluator import chebyshev, resolve_joint
from .state import GameState
from .units import BARRACKS, BASE, HEAVY, LIGHT, RANGED, WORKER

FEATURE_KINDS = (WORKER, LIGHT, HEAVY, RANGED, BASE, BARRACKS)


@dataclass
class MatchCounters:
    spawned: tuple[dict, dict] = field(default_factory=lambda: ({}, {}))
    collected: list[int] = field(default_factory=lambda: [0, 0])
    dropped: int = 0

    def feature_vector(self, player: int) -> tuple[int, ...]:
        kinds = self.spawned[player]
        return tuple(kinds.get(k, 0) for k in FEATURE_KINDS) + (
            self.collected[player],
        )


def step(state: GameState, actions: dict[int, Action], counters: MatchCounters) -> None:
    """Advance one tick: attacks, harvest/deposit, moves, then spawns.

    Attacks land simultaneously against start-of-tick hit points; other
    phases resolve in ascending unit-id order. Actions invalidated by earlier
    resolution (occupied cell, depleted node, spent resources) are dropped.
    Deaths and node depletion apply at end of tick, so a unit killed this
    tick still completes its own action.
    """
    stats = state.stats
    units = state.units

    damage: dict[int, int] = {}
    for uid in sorted(actions):
        action = actions[uid]
        if action.op != ATTACK or uid not in units:
            continue
        attacker = units[uid]
        victim = units.get(action.target)
        if (
            victim is None
            or victim.owner is None
            or victim.owner == attacker.owner
            or chebyshev(attacker.pos, victim.pos)
            > stats[attacker.kind].attack_range
        ):
            counters.dropped += 1
            continue
        damage[victim.uid] = damage.get(victim.uid, 0) + stats[
            attacker.kind
        ].attack_damage
    for uid, dealt in damage.items():
        units[uid].hp -= dealt

    for uid in sorted(actions):
        action = actions[uid]
        if uid not in units:
            continue
        unit = units[uid]
        if action.op == HARVEST:
            node = units.get(action.target)
            if (
                node is None
                or node.resources <= 0
                or unit.carried > 0
                or chebyshev(unit.pos, node.pos) > 1
            ):
                counters.dropped += 1
                continue
            node.resources -= 1
            unit.carried = 1
            counters.collected[unit.owner] += 1
        elif action.op == DEPOSIT:
            depot = units.get(action.target)
            if (
                depot is None
                or depot.owner != unit.owner
                or unit.carried <= 0
                or chebyshev(unit.pos, depot.pos) > 1
            ):
                counters.dropped += 1
                continue
            state.player_resources[unit.owner] += unit.carried
            unit.carried = 0

    for uid in sorted(actions):
        action = actions[uid]
        if action.op != MOVE or uid not in units:
            continue
        unit = units[uid]
        kind = stats[unit.kind]
        if not kind.can_move or state.tick % kind.move_period != 0:
            continue
        if state.is_free(action.cell):
            state.move_unit(uid, action.cell)
        else:
            counters.dropped += 1

    for uid in sorted(actions):
        action = actions[uid]
        if action.op != SPAWN or uid not in units:
            continue
        owner = units[uid].owner
        cost = stats[action.unit_type].cost
        if not state.is_free(action.cell) or state.player_resources[owner] < cost:
            counters.dropped += 1
            continue
        state.player_resources[owner] -= cost
        state.add_unit(action.unit_type, owner, *action.cell)
        spawned = counters.spawned[owner]
        spawned[action.unit_type] = spawned.get(action.unit_type, 0) + 1

    for uid in [u.uid for u in units.values() if u.hp <= 0]:
        state.remove_unit(uid)
    for uid in [
        u.uid for u in units.values() if u.kind == "Resource" and u.resources <= 0
    ]:
        state.remove_unit(uid)
    state.tick += 1


# ---------------------------------------------------------------------------
# matches
# ---------------------------------------------------------------------------


def snapshot_digest(snapshot: tuple) -> str:
    return hashlib.sha256(repr(snapshot).encode()).hexdigest()[:16]


@dataclass
class DecisionEntry:
    snapshot: tuple
    actions: dict[int, Action]  # resolved joint assignment for player 0

    @property
    def digest(self) -> str:
        return snapshot_digest(self.snapshot)


@dataclass
class MatchRecord:
    """Everything observed from one match, from player 0's perspective."""

    outcome: int  # +1 win, 0 draw, -1 loss for player 0
    ticks: int
    fixed_point: bool
    entries: list[DecisionEntry]
    features: tuple[tuple[int, ...], tuple[int, ...]]  # per player
    dropped: int

    def to_json(self) -> dict:
        return {
            "outcome": self.outcome,
            "ticks": self.ticks,
            "fixed_point": self.fixed_point,
            "features": [list(f) for f in self.features],
            "dropped_actions": self.dropped,
            "decisions": [
                {
                    "state": entry.digest,
                    "actions": {
                        str(uid): entry.actions[uid].to_json()
                        for uid in sorted(entry.actions)
                    },
                }
                for entry in self.entries
            ],
        }


def play_match(
    program0: Program,
    program1: Program,
    initial: GameState,
    max_ticks: int = 2000,
    decision_period: int = 1,
) -> MatchRecord:
    """Run both policies to elimination, a repeated state, or the tick limit.

    With one-tick decision and move periods, a repeated full state implies
    the remainder of the match repeats forever, so it ends early as a draw
    with ``fixed_point`` set. Decision entries record player 0's resolved
    assignments at each decision state (first occurrence only).
    """
    state = initial.clone()
    counters = MatchCounters()
    entries: list[DecisionEntry] = []
    seen: set[tuple] = set()
    can_short_circuit = decision_period == 1 and all(
        s.move_period == 1 for s in state.stats.values()
    )
    joint0: dict[int, Action] = {}
    joint1: dict[int, Action] = {}
    outcome: int | None = None
    fixed_point = False

    for _ in range(max_ticks):
        alive0 = any(u.owner == 0 for u in state.units.values())
        alive1 = any(u.owner == 1 for u in state.units.values())
        if not alive0 or not alive1:
            outcome = (1 if alive0 else 0) - (1 if alive1 else 0)
            break
        snap = state.snapshot()
        if can_short_circuit:
            if snap in seen:
                fixed_point = True
                outcome = 0
                break
            seen.add(snap)
        if state.tick % decision_period == 0:
            joint0 = resolve_joint(program0, state, 0)
            joint1 = resolve_joint(program1, state, 1)
            entries.append(DecisionEntry(snap, joint0))
        step(state, {**joint0, **joint1}, counters)

    if outcome is None:
        outcome = 0
    return MatchRecord(
        outcome=outcome,
        ticks=state.tick,
        fixed_point=fixed_point,
        entries=entries,
        features=(counters.feature_vector(0), counters.feature_vector(1)),
        dropped=counters.dropped,
    )

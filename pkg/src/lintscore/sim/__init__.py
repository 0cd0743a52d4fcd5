"""Deterministic grid RTS: state, policy evaluation, and match execution."""
from .actions import Action
from .engine import (
    FEATURE_KINDS,
    DecisionEntry,
    MatchRecord,
    play_match,
    snapshot_digest,
    step,
)
from .evaluator import chebyshev, evaluate_policy, resolve_joint
from .state import GameState, Unit, load_map, restore_state, state_from_map_dict
from .units import DEFAULT_STATS, UnitStats, load_stats

__all__ = [
    "Action",
    "DEFAULT_STATS",
    "DecisionEntry",
    "FEATURE_KINDS",
    "GameState",
    "MatchRecord",
    "Unit",
    "UnitStats",
    "chebyshev",
    "evaluate_policy",
    "load_map",
    "load_stats",
    "play_match",
    "resolve_joint",
    "restore_state",
    "snapshot_digest",
    "state_from_map_dict",
    "step",
]

"""Seeded random program generation over the full grammar.

Used for round-trip and property testing; every generated program is valid by
construction.
"""
from __future__ import annotations

import random

from .ast import (
    BOOL_FUNCTIONS,
    COMMANDS,
    CRITERIA,
    DIRECTIONS,
    NUMBERS,
    PLAYER_TARGETS,
    UNIT_TYPES,
    BoolCall,
    Command,
    Empty,
    ForLoop,
    If,
    Program,
    Statement,
)

_DOMAINS = {
    "T": UNIT_TYPES,
    "N": NUMBERS,
    "D": DIRECTIONS,
    "O": CRITERIA,
    "P": PLAYER_TARGETS,
}


def _random_args(rng: random.Random, signature: tuple[str, ...]):
    return tuple(rng.choice(_DOMAINS[slot]) for slot in signature)


def random_command(rng: random.Random) -> Command:
    name = rng.choice(sorted(COMMANDS))
    return Command(name, _random_args(rng, COMMANDS[name]))


def random_bool_call(rng: random.Random) -> BoolCall:
    name = rng.choice(sorted(BOOL_FUNCTIONS))
    return BoolCall(name, _random_args(rng, BOOL_FUNCTIONS[name]))


def random_statement(rng: random.Random, depth: int) -> Statement:
    roll = rng.random()
    if depth <= 0 or roll < 0.5:
        if roll < 0.05:
            return Empty()
        return random_command(rng)
    if roll < 0.75:
        return ForLoop(_random_body(rng, depth - 1))
    cond = random_bool_call(rng)
    then = _random_body(rng, depth - 1)
    orelse = _random_body(rng, depth - 1) if rng.random() < 0.4 else None
    return If(cond, then, orelse)


def _random_body(rng: random.Random, depth: int) -> tuple[Statement, ...]:
    return tuple(
        random_statement(rng, depth) for _ in range(rng.randint(0, 3))
    )


def random_program(rng: random.Random, max_depth: int = 4) -> Program:
    body = tuple(
        random_statement(rng, max_depth) for _ in range(rng.randint(0, 6))
    )
    return Program(body)

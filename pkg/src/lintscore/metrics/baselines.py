"""Reference-point policy selection: random draws, nearest neighbors, and
evenly spread pool sampling."""
from __future__ import annotations

import math
import random

from ..microlang import Program, syntax_set
from .behavior import mean_feature_vector
from .opponents import OpponentSet


def select_policy_indices(pool_size: int, count: int) -> list[int]:
    """``count`` indices evenly spread over ``range(pool_size)``, endpoints
    included."""
    if count < 1 or pool_size < 1:
        raise ValueError("pool_size and count must be positive")
    if count == 1:
        return [0]
    return [i * (pool_size - 1) // (count - 1) for i in range(count)]


def rand_index(rng: random.Random, pool_size: int, exclude: int | None = None) -> int:
    """A random pool index, optionally excluding the policy's own slot."""
    choices = [i for i in range(pool_size) if i != exclude]
    return rng.choice(choices)


def closest_syntax(target_source: str, pool_sources: list[str]) -> int:
    """Index of the pool program sharing the most distinct normalized lines
    with the target; ties go to the lowest index."""
    target = syntax_set(target_source)
    best, best_overlap = 0, -1
    for index, source in enumerate(pool_sources):
        overlap = len(target & syntax_set(source))
        if overlap > best_overlap:
            best, best_overlap = index, overlap
    return best


def closest_feature(
    target: Program, pool: list[Program], oset: OpponentSet
) -> int:
    """Index of the pool program with the nearest mean feature vector
    (Euclidean); ties go to the lowest index."""
    anchor = mean_feature_vector(target, oset)
    best, best_dist = 0, math.inf
    for index, program in enumerate(pool):
        vec = mean_feature_vector(program, oset)
        dist = math.dist(anchor, vec)
        if dist < best_dist:
            best, best_dist = index, dist
    return best

"""Inert statement blocks used to pad policies without changing behavior.

Each level contributes head statements (inserted at the top of the first
top-level loop) and a tail loop (appended after everything else). Inertness
is structural:

* every command sits under a guard chain only satisfiable by a unit kind
  that cannot execute it (Workers asked to train, non-builders asked to
  harvest under a builder-only branch, and so on);
* the tail loops assign ``attack_if_in_range()`` or ``idle()``, both of
  which resolve to exactly what an unassigned unit does anyway.
"""
from __future__ import annotations

from ..microlang import Program, parse

_LEVEL1_HEAD = """
if(u.canHarvest()) then {
    for(Unit u){
        if(u.isBuilder()) then {
        } else {
            u.harvest(50)
        }
    }
}
if(u.is_Type(Worker)) then {
    u.train(Heavy,EnemyDir,10)
}
if(u.canAttack()) then {
    u.train(Ranged,Up,15)
}
"""

_LEVEL1_TAIL = """
for(Unit u){
    u.attack_if_in_range()
}
"""

_LEVEL2_HEAD = """
if(u.canHarvest()) then {
    for(Unit u){
        if(u.isBuilder()) then {
            u.train(Heavy,Left,9)
        } else {
            u.harvest(50)
        }
    }
}
for(Unit u){
    if(u.is_Type(Worker)) then {
        u.train(Heavy,EnemyDir,10)
        if(u.canAttack()) then {
            u.train(Ranged,Up,15)
            if(u.canHarvest()) then {
                u.train(Worker,Right,9)
                if(u.isBuilder()) then {
                    if(u.is_Type(Barracks)) then {
                        u.harvest(10)
                        u.train(Worker,Right,2)
                    } else {
                        u.train(Light,Down,5)
                    }
                }
            }
        }
    } else {
        u.harvest(1)
    }
}
"""

_LEVEL2_TAIL = """
for(Unit u){
    u.idle()
}
"""


def _stmts(source: str):
    return parse(source).body


SNIPPETS: dict[int, tuple[tuple, tuple]] = {
    1: (_stmts(_LEVEL1_HEAD), _stmts(_LEVEL1_TAIL)),
    2: (_stmts(_LEVEL2_HEAD), _stmts(_LEVEL2_TAIL)),
}

LEVELS = tuple(sorted(SNIPPETS))


def snippet_program(level: int) -> Program:
    """The whole injected block as one program (head then tail)."""
    head, tail = SNIPPETS[level]
    return Program(head + tail)

"""Apply padding snippets to a policy."""
from __future__ import annotations

from ..microlang import ForLoop, Program, line_count, print_program
from .snippets import SNIPPETS


def obfuscate(program: Program, level: int) -> Program:
    """Pad a policy with the inert block for ``level`` (1 or 2).

    Head statements become the first statements of the first top-level loop,
    so they are visited every decision point; a program with no top-level
    loop gets a fresh one. The tail loop lands after all original
    statements. The result parses, prints, and simulates like any other
    policy.
    """
    if level not in SNIPPETS:
        raise ValueError(f"no obfuscation level {level}")
    head, tail = SNIPPETS[level]
    body = list(program.body)
    for index, stmt in enumerate(body):
        if isinstance(stmt, ForLoop):
            body[index] = ForLoop(head + stmt.body)
            break
    else:
        body.append(ForLoop(head))
    body.extend(tail)
    return Program(tuple(body))


def added_lines(program: Program, level: int) -> int:
    """Normalized line-count growth from obfuscating ``program``."""
    before = line_count(print_program(program))
    after = line_count(print_program(obfuscate(program, level)))
    return after - before

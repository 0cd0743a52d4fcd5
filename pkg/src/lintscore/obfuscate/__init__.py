"""Semantics-preserving policy padding and its verification."""
from .neutrality import Divergence, NeutralityReport, verify_neutral
from .snippets import LEVELS, SNIPPETS, snippet_program
from .transform import added_lines, obfuscate

__all__ = [
    "Divergence",
    "LEVELS",
    "NeutralityReport",
    "SNIPPETS",
    "added_lines",
    "obfuscate",
    "snippet_program",
    "verify_neutral",
]

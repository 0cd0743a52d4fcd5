"""Prompt templates for the explainer/verifier/reconstructor roles.

Templates are plain text files with ``{DSL_DESCRIPTION}``, ``{PROGRAM}``,
``{EXPLANATION}``, and (for the k-shot prompt) ``{MAP_DESCRIPTION}``
placeholders.  Rendering is literal substitution, not ``str.format``, because
the templates and the substituted programs both contain braces.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from ..resources import data_path

TRACKS = ("microrts", "c-problems")

_TRACK_PREFIX = {"microrts": "microrts", "c-problems": "c"}


@dataclass(frozen=True)
class PromptBundle:
    """The prompt templates for one program track."""

    track: str
    dsl_description: str
    explainer_template: str
    reconstructor_template: str
    verifier_template: str
    kshot_template: str | None = None

    def render_explainer(self, program_source: str) -> str:
        return _render(
            self.explainer_template,
            dsl_description=self.dsl_description,
            program=program_source,
        )

    def render_reconstructor(self, explanation: str) -> str:
        return _render(
            self.reconstructor_template,
            dsl_description=self.dsl_description,
            explanation=explanation,
        )

    def render_verifier(self, program_source: str, explanation: str) -> str:
        return _render(
            self.verifier_template,
            dsl_description=self.dsl_description,
            program=program_source,
            explanation=explanation,
        )

    def render_kshot(self, map_description: str) -> str:
        if self.kshot_template is None:
            raise ValueError(f"track {self.track!r} has no k-shot template")
        return _render(
            self.kshot_template,
            dsl_description=self.dsl_description,
            map_description=map_description,
        )


def _render(
    template: str,
    *,
    dsl_description: str = "",
    program: str = "",
    explanation: str = "",
    map_description: str = "",
) -> str:
    rendered = template.replace("{DSL_DESCRIPTION}", dsl_description)
    rendered = rendered.replace("{PROGRAM}", program)
    rendered = rendered.replace("{EXPLANATION}", explanation)
    rendered = rendered.replace("{MAP_DESCRIPTION}", map_description)
    return rendered


def load_bundle(track: str = "microrts", directory: Path | None = None) -> PromptBundle:
    """Load the prompt bundle for ``track`` from ``directory``.

    ``directory`` defaults to the templates shipped with the package.
    """

    if track not in TRACKS:
        raise ValueError(f"unknown track {track!r}; expected one of {TRACKS}")
    root = directory if directory is not None else data_path("prompts")
    prefix = _TRACK_PREFIX[track]

    def read(name: str) -> str:
        return (root / name).read_text(encoding="utf-8")

    kshot_path = root / f"{prefix}_kshot.txt"
    return PromptBundle(
        track=track,
        dsl_description=read(f"{prefix}_dsl.txt"),
        explainer_template=read(f"{prefix}_explainer.txt"),
        reconstructor_template=read(f"{prefix}_reconstructor.txt"),
        verifier_template=read(f"{prefix}_verifier.txt"),
        kshot_template=(
            kshot_path.read_text(encoding="utf-8") if kshot_path.exists() else None
        ),
    )


def load_map_description(map_name: str, directory: Path | None = None) -> str:
    """Load the natural-language description of a bundled map."""

    root = directory if directory is not None else data_path("prompts")
    return (root / f"map_{map_name}.txt").read_text(encoding="utf-8")


def extract_tag(text: str, tag: str) -> str | None:
    """Return the body of the first ``<tag>...</tag>`` block, or None."""

    match = re.search(
        rf"<{re.escape(tag)}>(.*?)</{re.escape(tag)}>", text, re.DOTALL
    )
    if match is None:
        return None
    return match.group(1).strip()

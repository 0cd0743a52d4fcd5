"""Black-box equivalence rate between two executables over an input suite."""
from __future__ import annotations

import random
import subprocess
from dataclasses import dataclass, field
from pathlib import Path


class ExecFailure(Exception):
    """The reference executable could not produce output for an input."""


@dataclass
class IoReport:
    value: float
    total: int
    matched: int
    mismatched: list[int] = field(default_factory=list)
    failures: list[dict] = field(default_factory=list)  # candidate-side only


def normalize_output(text: str) -> str:
    """Trailing whitespace per line and trailing blank lines are ignored."""
    lines = [line.rstrip() for line in text.splitlines()]
    while lines and not lines[-1]:
        lines.pop()
    return "\n".join(lines)


def _run(command: list[str], input_text: str, timeout: float) -> tuple[int | None, str]:
    try:
        proc = subprocess.run(
            command,
            input=input_text,
            capture_output=True,
            text=True,
            timeout=timeout,
        )
        return proc.returncode, proc.stdout
    except subprocess.TimeoutExpired:
        return None, ""


def io_metric(
    reference: list[str],
    candidate: list[str],
    inputs: list[str],
    timeout: float = 10.0,
) -> IoReport:
    """Fraction of inputs on which both commands print the same normalized
    stdout. A candidate crash or timeout counts as a mismatch and is noted;
    a reference failure aborts with :class:`ExecFailure`.
    """
    matched = 0
    mismatched: list[int] = []
    failures: list[dict] = []
    for index, input_text in enumerate(inputs):
        ref_code, ref_out = _run(reference, input_text, timeout)
        if ref_code != 0:
            detail = "timeout" if ref_code is None else f"exit code {ref_code}"
            raise ExecFailure(f"reference failed on input {index}: {detail}")
        cand_code, cand_out = _run(candidate, input_text, timeout)
        if cand_code != 0:
            detail = "timeout" if cand_code is None else f"exit code {cand_code}"
            failures.append({"input": index, "reason": detail})
            mismatched.append(index)
            continue
        if normalize_output(ref_out) == normalize_output(cand_out):
            matched += 1
        else:
            mismatched.append(index)
    return IoReport(
        value=matched / len(inputs) if inputs else 1.0,
        total=len(inputs),
        matched=matched,
        mismatched=mismatched,
        failures=failures,
    )


def generate_suite(seed: int, count: int = 20, values_per_line: int = 1) -> list[str]:
    """Deterministic integer input texts: one line, space-separated values."""
    rng = random.Random(seed)
    return [
        " ".join(str(rng.randint(0, 99)) for _ in range(values_per_line)) + "\n"
        for _ in range(count)
    ]


def load_suite(directory: str | Path) -> list[str]:
    """Input texts from a directory, one file per input, name-ordered."""
    paths = sorted(p for p in Path(directory).iterdir() if p.is_file())
    if not paths:
        raise FileNotFoundError(f"no input files in {directory}")
    return [p.read_text() for p in paths]

"""Deterministic mock providers for offline pipeline runs and tests.

All mocks answer from the structured fields of the request (program source,
explanation, trial) rather than re-parsing prompt text, and every response is
a pure function of the request — no hidden state, no wall clock.
"""

from __future__ import annotations

import hashlib
import random

from .providers import PromptRequest, Provider, ProviderError

ACCEPT_RESPONSE = (
    "No.\n\nThe explanation does not use computer programming jargon, and it "
    "does not provide step-by-step instructions to reconstruct the program."
)


class MockProvider(Provider):
    """Dispatches a request to a per-role handler."""

    kind = "mock"

    def complete(self, request: PromptRequest) -> str:
        handler = getattr(self, f"_{request.role}", None)
        if handler is None:
            raise ProviderError(f"mock {self.model} cannot handle role {request.role!r}")
        return handler(request)


class EchoProvider(MockProvider):
    """Perfect oracle: the explanation carries the source verbatim and the
    reconstructor echoes it back, so every reconstruction equals the original."""

    model = "mock-echo"

    def _explainer(self, request: PromptRequest) -> str:
        return f"<explanation>{request.program_source}</explanation>"

    def _verifier(self, request: PromptRequest) -> str:
        return ACCEPT_RESPONSE

    def _reconstructor(self, request: PromptRequest) -> str:
        return f"<strategy>{request.explanation}</strategy>"

    def _kshot(self, request: PromptRequest) -> str:
        return f"<strategy>{request.program_source}</strategy>"


class EmptyProvider(MockProvider):
    """Floor oracle: every reconstruction is the empty program."""

    model = "mock-empty"

    def _explainer(self, request: PromptRequest) -> str:
        return (
            "<explanation>This strategy keeps every unit waiting and never "
            "gives any orders.</explanation>"
        )

    def _verifier(self, request: PromptRequest) -> str:
        return ACCEPT_RESPONSE

    def _reconstructor(self, request: PromptRequest) -> str:
        return "<strategy></strategy>"

    def _kshot(self, request: PromptRequest) -> str:
        return "<strategy></strategy>"


class LineDropProvider(MockProvider):
    """Echo with noise: drops each command line with probability ``q``.

    Only command statements (lines starting with ``u.``, plus bare ``e``) are
    eligible, so the degraded source still parses; structural lines (loops,
    guards, braces) are kept.  The per-line random draws depend on (seed,
    trial, prompt) but not on ``q``, so the dropped sets for increasing ``q``
    are nested — raising ``q`` can only remove more lines.
    """

    def __init__(self, q: float, seed: int = 0) -> None:
        if not 0.0 <= q <= 1.0:
            raise ValueError(f"q must be in [0, 1], got {q}")
        self.q = q
        self.seed = seed
        self.model = f"mock-line-drop-q{q}-s{seed}"

    def _explainer(self, request: PromptRequest) -> str:
        return f"<explanation>{request.program_source}</explanation>"

    def _verifier(self, request: PromptRequest) -> str:
        return ACCEPT_RESPONSE

    def _reconstructor(self, request: PromptRequest) -> str:
        return f"<strategy>{self._degrade(request.explanation, request)}</strategy>"

    def _kshot(self, request: PromptRequest) -> str:
        return f"<strategy>{self._degrade(request.program_source, request)}</strategy>"

    def _degrade(self, source: str, request: PromptRequest) -> str:
        rng = random.Random(self._rng_seed(request))
        kept = []
        for line in source.splitlines():
            stripped = line.strip()
            droppable = stripped.startswith("u.") or stripped == "e"
            if droppable and rng.random() < self.q:
                continue
            kept.append(line)
        return "\n".join(kept)

    def _rng_seed(self, request: PromptRequest) -> int:
        digest = hashlib.blake2b(digest_size=8)
        digest.update(str(self.seed).encode("ascii"))
        digest.update(b"\x00")
        digest.update(str(request.trial).encode("ascii"))
        digest.update(b"\x00")
        digest.update(request.prompt.encode("utf-8"))
        return int.from_bytes(digest.digest(), "big")


class ScriptedProvider(MockProvider):
    """Plays back canned responses per role, in call order.

    ``responses`` maps a role name to a response string or a list of response
    strings; a list is consumed one call at a time and its last entry repeats
    once exhausted.  Every request is appended to ``call_log``.
    """

    model = "mock-scripted"

    def __init__(self, responses: dict[str, str | list[str]]) -> None:
        self.responses = responses
        self.call_log: list[PromptRequest] = []
        self._cursor: dict[str, int] = {}

    def complete(self, request: PromptRequest) -> str:
        self.call_log.append(request)
        return super().complete(request)

    def calls(self, role: str) -> int:
        return sum(1 for req in self.call_log if req.role == role)

    def _scripted(self, request: PromptRequest) -> str:
        try:
            entry = self.responses[request.role]
        except KeyError:
            raise ProviderError(
                f"no scripted response for role {request.role!r}"
            ) from None
        if isinstance(entry, str):
            return entry
        index = self._cursor.get(request.role, 0)
        self._cursor[request.role] = index + 1
        return entry[min(index, len(entry) - 1)]

    _explainer = _scripted
    _verifier = _scripted
    _reconstructor = _scripted
    _kshot = _scripted

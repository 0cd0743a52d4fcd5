"""Language-model providers: live HTTP, deterministic replay, and caching.

Every completion is addressed by ``cache_key(model, prompt, trial)`` so that
responses can be recorded once and replayed byte-for-byte.  Mock and replay
providers are pure functions of (prompt, trial): two calls with the same
arguments always return the same text.
"""

from __future__ import annotations

import hashlib
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import requests


class ProviderError(RuntimeError):
    """A provider failed to produce a completion."""


@dataclass(frozen=True)
class PromptRequest:
    """One completion request.

    ``role`` names the pipeline stage (explainer, verifier, reconstructor,
    kshot).  ``program_source`` and ``explanation`` duplicate material already
    substituted into ``prompt``; mock providers use them to build structured
    responses without re-parsing the prompt text.
    """

    role: str
    prompt: str
    trial: int = 0
    program_source: str = ""
    explanation: str = ""


def cache_key(model: str, prompt: str, trial: int) -> str:
    digest = hashlib.sha256()
    digest.update(model.encode("utf-8"))
    digest.update(b"\x00")
    digest.update(str(trial).encode("ascii"))
    digest.update(b"\x00")
    digest.update(prompt.encode("utf-8"))
    return digest.hexdigest()


class Provider:
    """Base class for completion providers."""

    kind: str = "base"
    model: str = "unknown"

    def complete(self, request: PromptRequest) -> str:
        raise NotImplementedError

    @property
    def deterministic(self) -> bool:
        """True when outputs are a pure function of (prompt, trial)."""

        return self.kind in ("mock", "replay-cache")


class HttpProvider(Provider):
    """Chat-completion provider speaking the common JSON-over-HTTP shape.

    The API key is read from the environment (``LINT_API_KEY`` by default)
    at request time, never stored in config files.
    """

    kind = "http"

    def __init__(
        self,
        endpoint: str,
        model: str,
        temperature: float = 0.0,
        timeout: float = 60.0,
        api_key_env: str = "LINT_API_KEY",
    ) -> None:
        self.endpoint = endpoint
        self.model = model
        self.temperature = temperature
        self.timeout = timeout
        self.api_key_env = api_key_env

    def complete(self, request: PromptRequest) -> str:
        headers = {"Content-Type": "application/json"}
        api_key = os.environ.get(self.api_key_env)
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        payload = {
            "model": self.model,
            "messages": [{"role": "user", "content": request.prompt}],
            "temperature": self.temperature,
        }
        try:
            response = requests.post(
                self.endpoint, json=payload, headers=headers, timeout=self.timeout
            )
        except requests.RequestException as exc:
            raise ProviderError(f"request to {self.endpoint} failed: {exc}") from exc
        if response.status_code != 200:
            raise ProviderError(
                f"provider returned HTTP {response.status_code}: {response.text[:200]}"
            )
        try:
            data = response.json()
            return data["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise ProviderError(f"malformed provider response: {exc}") from exc


class ReplayCacheProvider(Provider):
    """Serves completions from a directory of recorded responses.

    A missing recording is an error: replay runs must be fully deterministic,
    so there is no fallback to a live provider.
    """

    kind = "replay-cache"

    def __init__(self, directory: str | Path, model: str = "replay") -> None:
        self.directory = Path(directory)
        self.model = model

    def _path(self, key: str) -> Path:
        return self.directory / f"{key}.txt"

    def complete(self, request: PromptRequest) -> str:
        key = cache_key(self.model, request.prompt, request.trial)
        path = self._path(key)
        if not path.exists():
            raise ProviderError(
                f"replay cache miss for role={request.role} trial={request.trial} "
                f"key={key}"
            )
        return path.read_text(encoding="utf-8")

    def seed(self, prompt: str, trial: int, response: str) -> str:
        """Record ``response`` for (prompt, trial); returns the cache key."""

        key = cache_key(self.model, prompt, trial)
        self.directory.mkdir(parents=True, exist_ok=True)
        _atomic_write(self._path(key), response)
        return key


class CachingProvider(Provider):
    """Write-through cache around another provider.

    Reads are lock-free; writes go through a temp file and an atomic rename,
    so concurrent readers never observe partial responses.
    """

    def __init__(self, inner: Provider, directory: str | Path) -> None:
        self.inner = inner
        self.directory = Path(directory)

    @property
    def kind(self) -> str:  # type: ignore[override]
        return self.inner.kind

    @property
    def model(self) -> str:  # type: ignore[override]
        return self.inner.model

    def complete(self, request: PromptRequest) -> str:
        key = cache_key(self.model, request.prompt, request.trial)
        path = self.directory / f"{key}.txt"
        if path.exists():
            return path.read_text(encoding="utf-8")
        response = self.inner.complete(request)
        self.directory.mkdir(parents=True, exist_ok=True)
        _atomic_write(path, response)
        return response


def _atomic_write(path: Path, text: str) -> None:
    handle = tempfile.NamedTemporaryFile(
        "w", encoding="utf-8", dir=path.parent, delete=False, suffix=".tmp"
    )
    try:
        handle.write(text)
        handle.close()
        os.replace(handle.name, path)
    except BaseException:
        handle.close()
        os.unlink(handle.name)
        raise


def make_provider(config: dict) -> Provider:
    """Build a provider from a config mapping.

    Recognized shapes::

        {"kind": "http", "endpoint": ..., "model": ..., "temperature": 0.0,
         "timeout": 60, "api_key_env": "LINT_API_KEY", "cache": "runs/cache"}
        {"kind": "replay-cache", "directory": "runs/cache", "model": "replay"}
        {"kind": "mock", "mock": "echo" | "empty" | "line-drop" | "scripted",
         "q": 0.2, "seed": 7, "responses": {...}}
    """

    from . import mocks

    kind = config.get("kind")
    if kind == "http":
        provider: Provider = HttpProvider(
            endpoint=config["endpoint"],
            model=config["model"],
            temperature=float(config.get("temperature", 0.0)),
            timeout=float(config.get("timeout", 60.0)),
            api_key_env=config.get("api_key_env", "LINT_API_KEY"),
        )
        cache_dir = config.get("cache")
        if cache_dir:
            provider = CachingProvider(provider, cache_dir)
        return provider
    if kind == "replay-cache":
        return ReplayCacheProvider(
            config["directory"], model=config.get("model", "replay")
        )
    if kind == "mock":
        name = config.get("mock", "echo")
        if name == "echo":
            provider = mocks.EchoProvider()
        elif name == "empty":
            provider = mocks.EmptyProvider()
        elif name == "line-drop":
            provider = mocks.LineDropProvider(
                q=float(config.get("q", 0.0)), seed=int(config.get("seed", 0))
            )
        elif name == "scripted":
            provider = mocks.ScriptedProvider(config.get("responses", {}))
        else:
            raise ProviderError(f"unknown mock provider {name!r}")
        cache_dir = config.get("cache")
        if cache_dir:
            provider = CachingProvider(provider, cache_dir)
        return provider
    raise ProviderError(f"unknown provider kind {kind!r}")

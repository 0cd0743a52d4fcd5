"""LLM pipeline: prompt rendering, providers, and the scoring loop."""

from .mocks import (
    EchoProvider,
    EmptyProvider,
    LineDropProvider,
    MockProvider,
    ScriptedProvider,
)
from .prompts import PromptBundle, extract_tag, load_bundle, load_map_description
from .providers import (
    CachingProvider,
    HttpProvider,
    PromptRequest,
    Provider,
    ProviderError,
    ReplayCacheProvider,
    cache_key,
    make_provider,
)
from .runner import (
    KshotResult,
    KshotTrial,
    LintRun,
    Trial,
    Verdict,
    VerifierExhausted,
    aggregate_trials,
    explain,
    kshot_baseline,
    lint_score,
    parse_verdict,
    reconstruct,
    score_program,
    verify,
)

__all__ = [
    "CachingProvider",
    "EchoProvider",
    "EmptyProvider",
    "HttpProvider",
    "KshotResult",
    "KshotTrial",
    "LineDropProvider",
    "LintRun",
    "MockProvider",
    "PromptBundle",
    "PromptRequest",
    "Provider",
    "ProviderError",
    "ReplayCacheProvider",
    "ScriptedProvider",
    "Trial",
    "Verdict",
    "VerifierExhausted",
    "aggregate_trials",
    "cache_key",
    "explain",
    "extract_tag",
    "kshot_baseline",
    "lint_score",
    "load_bundle",
    "load_map_description",
    "make_provider",
    "parse_verdict",
    "reconstruct",
    "score_program",
    "verify",
]

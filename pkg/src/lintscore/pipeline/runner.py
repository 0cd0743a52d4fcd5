"""Explainer → verifier → reconstructor orchestration and score aggregation.

One accepted explanation per program feeds k reconstruction trials; per-trial
behavior reports aggregate conservatively (minimum for the similarity metrics,
maximum for the feature distance), and a program whose explanation or trials
fail contributes the worst possible values rather than aborting the batch.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone

from ..metrics.behavior import BehaviorReport, compare
from ..metrics.opponents import OpponentSet
from ..microlang import ParseError, Program, parse, print_program
from .prompts import PromptBundle, extract_tag
from .providers import PromptRequest, Provider, ProviderError, cache_key

WORST = {"action": 0.0, "outcome": 0.0, "feature": 1.0}
METRICS = ("action", "outcome", "feature")


class VerifierExhausted(Exception):
    """Every explanation attempt was rejected by the verifier."""

    def __init__(self, verdicts: list["Verdict"]) -> None:
        super().__init__(
            f"verifier rejected all {len(verdicts)} explanation attempts"
        )
        self.verdicts = verdicts


@dataclass(frozen=True)
class Verdict:
    """One verifier decision.  A response without a leading yes/no is an
    unparseable verdict: treated as a rejection and flagged."""

    accept: bool
    rationale: str
    unparseable: bool = False

    def to_json(self) -> dict:
        return {
            "accept": self.accept,
            "rationale": self.rationale,
            "unparseable": self.unparseable,
        }


@dataclass(frozen=True)
class Trial:
    """One reconstruction trial and its behavior scores."""

    trial: int
    source: str | None
    action: float
    outcome: float
    feature: float
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.source is None

    def to_json(self) -> dict:
        return {
            "trial": self.trial,
            "source": self.source,
            "action": self.action,
            "outcome": self.outcome,
            "feature": self.feature,
            "error": self.error,
        }


@dataclass
class LintRun:
    """Full record of scoring one program."""

    program_id: str
    source: str
    explanation: str | None
    verdicts: list[Verdict]
    trials: list[Trial]
    aggregated: dict[str, float]
    error: str | None
    provenance: dict

    def to_json(self) -> dict:
        return {
            "program_id": self.program_id,
            "source": self.source,
            "explanation": self.explanation,
            "verdicts": [v.to_json() for v in self.verdicts],
            "trials": [t.to_json() for t in self.trials],
            "aggregated": dict(self.aggregated),
            "error": self.error,
            "provenance": dict(self.provenance),
        }


@dataclass(frozen=True)
class KshotTrial:
    trial: int
    source: str | None
    action: float
    outcome: float
    feature: float
    error: str | None = None


@dataclass(frozen=True)
class KshotResult:
    """Best-of-k sample from the map-description-only prompt."""

    report: BehaviorReport
    best_trial: int
    trials: tuple[KshotTrial, ...]


class _Tracker(Provider):
    """Pass-through provider that records issued cache keys for provenance."""

    def __init__(self, provider: Provider) -> None:
        self.provider = provider
        self.kind = provider.kind
        self.model = provider.model
        self.keys: list[dict] = []

    def complete(self, request: PromptRequest) -> str:
        self.keys.append(
            {
                "role": request.role,
                "trial": request.trial,
                "key": cache_key(self.provider.model, request.prompt, request.trial),
            }
        )
        return self.provider.complete(request)


def parse_verdict(response: str) -> Verdict:
    """Leading 'yes' → reject (jargon found), leading 'no' → accept."""

    text = response.strip()
    leading = ""
    for char in text:
        if char.isalpha():
            leading += char
        else:
            break
    token = leading.lower()
    if token == "yes":
        return Verdict(accept=False, rationale=text)
    if token == "no":
        return Verdict(accept=True, rationale=text)
    return Verdict(
        accept=False,
        rationale=f"unparseable verdict: {text[:200]}",
        unparseable=True,
    )


def verify(
    explanation: str,
    program: Program,
    bundle: PromptBundle,
    provider: Provider,
    trial: int = 0,
) -> Verdict:
    """Ask the verifier whether the explanation leaks programming jargon."""

    source = print_program(program)
    prompt = bundle.render_verifier(source, explanation)
    response = provider.complete(
        PromptRequest(
            "verifier",
            prompt,
            trial,
            program_source=source,
            explanation=explanation,
        )
    )
    return parse_verdict(response)


def explain(
    program: Program,
    bundle: PromptBundle,
    provider: Provider,
    max_retries: int = 3,
) -> tuple[str, list[Verdict]]:
    """Sample explanations until the verifier accepts one.

    Each attempt submits a fresh explainer prompt (trial index = attempt) and
    one verifier call; a response without an ``<explanation>`` tag counts as a
    rejected attempt.  Raises VerifierExhausted after ``max_retries``
    rejections.
    """

    source = print_program(program)
    prompt = bundle.render_explainer(source)
    verdicts: list[Verdict] = []
    for attempt in range(max_retries):
        response = provider.complete(
            PromptRequest("explainer", prompt, attempt, program_source=source)
        )
        explanation = extract_tag(response, "explanation")
        if explanation is None:
            verdicts.append(
                Verdict(
                    accept=False,
                    rationale="response missing <explanation> tag",
                    unparseable=True,
                )
            )
            continue
        verdict = verify(explanation, program, bundle, provider, trial=attempt)
        verdicts.append(verdict)
        if verdict.accept:
            return explanation, verdicts
    raise VerifierExhausted(verdicts)


def reconstruct(
    explanation: str,
    bundle: PromptBundle,
    provider: Provider,
    k: int,
) -> list[Trial]:
    """Draw k independent reconstructions from one explanation.

    Each trial's ``<strategy>`` body is parsed as a Microlanguage program.  A
    missing tag falls back to the raw response text; an unparseable trial is
    recorded as failed (scores filled in later), never retried.
    """

    prompt = bundle.render_reconstructor(explanation)
    trials: list[Trial] = []
    for index in range(k):
        try:
            response = provider.complete(
                PromptRequest(
                    "reconstructor", prompt, index, explanation=explanation
                )
            )
        except ProviderError as exc:
            trials.append(_failed_trial(index, f"provider error: {exc}"))
            continue
        body = extract_tag(response, "strategy")
        if body is None:
            body = response
        try:
            candidate = parse(body)
        except ParseError as exc:
            trials.append(_failed_trial(index, f"parse error: {exc}"))
            continue
        trials.append(
            Trial(
                trial=index,
                source=print_program(candidate),
                action=0.0,
                outcome=0.0,
                feature=1.0,
            )
        )
    return trials


def _failed_trial(index: int, error: str) -> Trial:
    return Trial(
        trial=index,
        source=None,
        action=WORST["action"],
        outcome=WORST["outcome"],
        feature=WORST["feature"],
        error=error,
    )


def aggregate_trials(
    trials: list[Trial], literal_min: bool = False
) -> dict[str, float]:
    """Min over trials for action/outcome; max for the feature distance.

    ``literal_min`` applies the minimum rule to all three metrics instead.
    Failed trials already carry worst-case values, so they dominate the
    aggregation as required.
    """

    if not trials:
        return dict(WORST)
    result = {
        "action": min(t.action for t in trials),
        "outcome": min(t.outcome for t in trials),
    }
    features = [t.feature for t in trials]
    result["feature"] = min(features) if literal_min else max(features)
    return result


def score_program(
    program: Program,
    program_id: str,
    oset: OpponentSet,
    bundle: PromptBundle,
    provider: Provider,
    *,
    k: int = 5,
    max_retries: int = 3,
    literal_min: bool = False,
    per_unit: bool = False,
) -> LintRun:
    """Run the full explain/verify/reconstruct/score loop for one program.

    Failures (provider errors, verifier exhaustion) are recorded on the run
    and scored as worst-case rather than raised, so a batch never aborts on
    one bad program.
    """

    source = print_program(program)
    tracker = _Tracker(provider)
    live = provider.kind == "http"
    started = _now() if live else None
    explanation: str | None = None
    verdicts: list[Verdict] = []
    trials: list[Trial] = []
    error: str | None = None

    try:
        explanation, verdicts = explain(
            program, bundle, tracker, max_retries=max_retries
        )
    except VerifierExhausted as exc:
        verdicts = exc.verdicts
        error = str(exc)
    except ProviderError as exc:
        error = f"provider error: {exc}"

    if explanation is not None:
        raw_trials = reconstruct(explanation, bundle, tracker, k)
        for trial in raw_trials:
            if trial.failed:
                trials.append(trial)
                continue
            report = compare(program, parse(trial.source), oset, per_unit=per_unit)
            trials.append(
                Trial(
                    trial=trial.trial,
                    source=trial.source,
                    action=report.action,
                    outcome=report.outcome,
                    feature=report.feature,
                )
            )
        aggregated = aggregate_trials(trials, literal_min=literal_min)
    else:
        aggregated = dict(WORST)

    provenance = {
        "provider": provider.kind,
        "model": provider.model,
        "k": k,
        "max_retries": max_retries,
        "literal_min": literal_min,
        "opponents": oset.name,
        "started_at": started,
        "finished_at": _now() if live else None,
        "cache_keys": tracker.keys,
    }
    return LintRun(
        program_id=program_id,
        source=source,
        explanation=explanation,
        verdicts=verdicts,
        trials=trials,
        aggregated=aggregated,
        error=error,
        provenance=provenance,
    )


def lint_score(
    programs: list[tuple[str, Program]],
    oset: OpponentSet,
    bundle: PromptBundle,
    provider: Provider,
    *,
    k: int = 5,
    max_retries: int = 3,
    literal_min: bool = False,
    per_unit: bool = False,
    workers: int = 1,
) -> tuple[dict[str, float], list[LintRun]]:
    """LINT score of a program set: mean aggregated value per metric.

    Programs are independent work items; with ``workers`` > 1 they run on a
    bounded thread pool (results keep input order), while trials within one
    program always run sequentially against the provider.
    """

    if not programs:
        raise ValueError("program set must be non-empty")
    if k < 1:
        raise ValueError("k must be >= 1")

    def work(item: tuple[str, Program]) -> LintRun:
        ident, program = item
        return score_program(
            program,
            ident,
            oset,
            bundle,
            provider,
            k=k,
            max_retries=max_retries,
            literal_min=literal_min,
            per_unit=per_unit,
        )

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(work, programs))
    else:
        runs = [work(item) for item in programs]

    score = {
        metric: sum(run.aggregated[metric] for run in runs) / len(runs)
        for metric in METRICS
    }
    return score, runs


def kshot_baseline(
    map_description: str,
    bundle: PromptBundle,
    provider: Provider,
    k: int,
    pi: Program,
    oset: OpponentSet,
    *,
    per_unit: bool = False,
) -> KshotResult:
    """Best of k programs sampled from the map description alone.

    Each sample is compared against ``pi``; the best trial is the one with
    the highest (action, outcome) and lowest feature distance, earliest trial
    winning ties.  Failed samples score worst-case.
    """

    if k < 1:
        raise ValueError("k must be >= 1")
    prompt = bundle.render_kshot(map_description)
    source = print_program(pi)
    trials: list[KshotTrial] = []
    for index in range(k):
        try:
            response = provider.complete(
                PromptRequest("kshot", prompt, index, program_source=source)
            )
        except ProviderError as exc:
            trials.append(
                KshotTrial(index, None, 0.0, 0.0, 1.0, f"provider error: {exc}")
            )
            continue
        body = extract_tag(response, "strategy")
        if body is None:
            body = response
        try:
            candidate = parse(body)
        except ParseError as exc:
            trials.append(
                KshotTrial(index, None, 0.0, 0.0, 1.0, f"parse error: {exc}")
            )
            continue
        report = compare(pi, candidate, oset, per_unit=per_unit)
        trials.append(
            KshotTrial(
                index,
                print_program(candidate),
                report.action,
                report.outcome,
                report.feature,
            )
        )
    best = min(trials, key=lambda t: (-t.action, -t.outcome, t.feature, t.trial))
    return KshotResult(
        report=BehaviorReport(best.action, best.outcome, best.feature),
        best_trial=best.trial,
        trials=tuple(trials),
    )


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()

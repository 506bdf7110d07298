"""Reasoning-engine contract: question generation and matter analysis.

Ships a deterministic scripted stub for offline runs and a thin HTTP adapter
for live deployments. Stub script format (JSON):

    {
      "steps": [
        {"questions": [{"id": "q1", "text": "...", "rationale": "..."}]},
        ...
      ],
      "analysis": {
        "material_facts": [...],
        "legal_issues": [...],
        "authority_hints": [...],
        "recommended_actions": [...]
      }
    }

The stub replays steps in order: it returns the first step that still
contains an unasked question (matched on normalized text against the
question/answer history), and signals done once every step is exhausted.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol, Sequence

import httpx

from .conflicts import normalize_text
from .domain import Jurisdiction
from .errors import AdapterUnavailable, MalformedResponse

MAX_QUESTIONS_PER_BATCH = 5


@dataclass(frozen=True)
class LlmContext:
    matter_summary: str
    document_texts: tuple[str, ...]
    qa_history: tuple[tuple[str, str], ...]
    jurisdiction: Jurisdiction


@dataclass(frozen=True)
class Question:
    question_id: str
    text: str
    rationale: str | None = None


@dataclass(frozen=True)
class QuestionBatch:
    questions: tuple[Question, ...]
    done: bool = False

    def __post_init__(self) -> None:
        if self.done and self.questions:
            raise MalformedResponse("done batch must carry no questions")
        if not self.done and not (1 <= len(self.questions) <= MAX_QUESTIONS_PER_BATCH):
            raise MalformedResponse(
                f"batch must hold 1..{MAX_QUESTIONS_PER_BATCH} questions, got {len(self.questions)}"
            )


@dataclass(frozen=True)
class StructuredAnalysis:
    material_facts: tuple[str, ...]
    legal_issues: tuple[str, ...]
    authority_hints: tuple[str, ...]
    recommended_actions: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.legal_issues:
            raise MalformedResponse("analysis is missing legal_issues")


class LlmAdapter(Protocol):
    """Side-effect-free reasoning engine boundary."""

    def generate_questions(self, ctx: LlmContext) -> QuestionBatch: ...

    def analyze_matter(self, ctx: LlmContext, authorities: Sequence) -> StructuredAnalysis: ...


def _analysis_from_payload(payload: dict) -> StructuredAnalysis:
    try:
        return StructuredAnalysis(
            material_facts=tuple(payload.get("material_facts", ())),
            legal_issues=tuple(payload.get("legal_issues", ())),
            authority_hints=tuple(payload.get("authority_hints", ())),
            recommended_actions=tuple(payload.get("recommended_actions", ())),
        )
    except TypeError as exc:
        raise MalformedResponse(f"bad analysis payload: {exc}") from exc


def _questions_from_payload(items: list[dict]) -> tuple[Question, ...]:
    out = []
    for item in items:
        try:
            out.append(
                Question(
                    question_id=str(item["id"]),
                    text=str(item["text"]),
                    rationale=item.get("rationale"),
                )
            )
        except KeyError as exc:
            raise MalformedResponse(f"question missing field {exc}") from exc
    return tuple(out)


class ScriptedStubAdapter:
    """Pure replay adapter: output is a function of (script, context) only."""

    def __init__(self, script: dict):
        steps = script.get("steps")
        if not isinstance(steps, list):
            raise MalformedResponse("stub script must define a steps list")
        self._steps: list[tuple[Question, ...]] = []
        for step in steps:
            batch = QuestionBatch(questions=_questions_from_payload(step.get("questions", [])))
            self._steps.append(batch.questions)
        self._analysis_payload = script.get("analysis", {})

    @classmethod
    def from_file(cls, path: str | Path) -> "ScriptedStubAdapter":
        try:
            return cls(json.loads(Path(path).read_text("utf-8")))
        except (OSError, json.JSONDecodeError) as exc:
            raise AdapterUnavailable(f"stub script unusable: {exc}") from exc

    def generate_questions(self, ctx: LlmContext) -> QuestionBatch:
        asked = {normalize_text(question) for question, _ in ctx.qa_history}
        for questions in self._steps:
            if any(normalize_text(q.text) not in asked for q in questions):
                return QuestionBatch(questions=questions)
        return QuestionBatch(questions=(), done=True)

    def analyze_matter(self, ctx: LlmContext, authorities: Sequence) -> StructuredAnalysis:
        return _analysis_from_payload(self._analysis_payload)


class HttpLlmAdapter:
    """Live adapter: POSTs JSON to a configured endpoint with bearer auth.

    Request body: {"model": ..., "task": "questions"|"analysis", "context":
    {summary, documents, history, jurisdiction}}. Expected responses:
    {"questions": [{id, text, rationale?}], "done": bool} for questions and
    the analysis payload shape for analysis. Excluded from offline tests.
    """

    def __init__(
        self,
        endpoint: str,
        model: str,
        api_key_env: str = "LICES_LLM_API_KEY",
        client: httpx.Client | None = None,
        timeout: float = 30.0,
    ):
        self._endpoint = endpoint
        self._model = model
        self._api_key = os.environ.get(api_key_env, "")
        self._client = client or httpx.Client(timeout=timeout)

    def _post(self, task: str, ctx: LlmContext, extra: dict | None = None) -> dict:
        body = {
            "model": self._model,
            "task": task,
            "context": {
                "summary": ctx.matter_summary,
                "documents": list(ctx.document_texts),
                "history": [{"question": q, "answer": a} for q, a in ctx.qa_history],
                "jurisdiction": ctx.jurisdiction.code,
            },
        }
        if extra:
            body.update(extra)
        try:
            response = self._client.post(
                self._endpoint,
                json=body,
                headers={"Authorization": f"Bearer {self._api_key}"},
            )
        except httpx.HTTPError as exc:
            raise AdapterUnavailable(f"adapter request failed: {exc}") from exc
        if response.status_code >= 500:
            raise AdapterUnavailable(f"adapter returned {response.status_code}")
        if response.status_code != 200:
            raise MalformedResponse(f"adapter returned {response.status_code}")
        try:
            return response.json()
        except json.JSONDecodeError as exc:
            raise MalformedResponse("adapter response is not JSON") from exc

    def generate_questions(self, ctx: LlmContext) -> QuestionBatch:
        payload = self._post("questions", ctx)
        if payload.get("done"):
            return QuestionBatch(questions=(), done=True)
        items = payload.get("questions")
        if not isinstance(items, list):
            raise MalformedResponse("adapter response missing questions")
        return QuestionBatch(questions=_questions_from_payload(items))

    def analyze_matter(self, ctx: LlmContext, authorities: Sequence) -> StructuredAnalysis:
        hints = [getattr(a, "canonical_key").key for a in authorities if hasattr(a, "canonical_key")]
        payload = self._post("analysis", ctx, extra={"authorities": hints})
        return _analysis_from_payload(payload)


@dataclass(frozen=True)
class CitationResolution:
    hint: str
    authority_id: str | None  # None = unresolved


class CitationVerifier(Protocol):
    """Optional second reasoning engine, used only for citation verification.

    Given a hint that failed key matching, the verifier may propose a cleaned
    citation string (or None when it cannot help). Disabled by default.
    """

    def suggest_citation(self, hint: str) -> str | None: ...


class HttpCitationVerifier:
    """Live secondary verifier: POSTs {"task": "verify_citation", "hint": ...}
    and expects {"citation": "..."} or {"citation": null}."""

    def __init__(
        self,
        endpoint: str,
        model: str,
        api_key_env: str = "LICES_VERIFIER_API_KEY",
        client: httpx.Client | None = None,
        timeout: float = 15.0,
    ):
        self._endpoint = endpoint
        self._model = model
        self._api_key = os.environ.get(api_key_env, "")
        self._client = client or httpx.Client(timeout=timeout)

    def suggest_citation(self, hint: str) -> str | None:
        try:
            response = self._client.post(
                self._endpoint,
                json={"model": self._model, "task": "verify_citation", "hint": hint},
                headers={"Authorization": f"Bearer {self._api_key}"},
            )
        except httpx.HTTPError as exc:
            raise AdapterUnavailable(f"verifier request failed: {exc}") from exc
        if response.status_code != 200:
            raise AdapterUnavailable(f"verifier returned {response.status_code}")
        try:
            citation = response.json().get("citation")
        except json.JSONDecodeError as exc:
            raise MalformedResponse("verifier response is not JSON") from exc
        return citation if isinstance(citation, str) and citation.strip() else None


def _resolve_hint(hint: str, by_key: dict[str, str]) -> str | None:
    from .consolidation import canonical_citation_key
    from .errors import Unkeyable

    try:
        key = canonical_citation_key(hint)
    except Unkeyable:
        return None
    return by_key.get(key.key)


def verify_citations(
    analysis: StructuredAnalysis,
    authorities: Sequence,
    verifier: CitationVerifier | None = None,
) -> list[CitationResolution]:
    """Resolve each authority hint by canonical citation key, else mark unresolved.

    With a secondary verifier configured, a hint that fails key matching gets
    one cleanup suggestion and one re-match; a hint that still fails stays
    unresolved (the verifier can never invent a resolution).
    """
    by_key = {a.canonical_key.key: a.authority_id for a in authorities}
    resolutions: list[CitationResolution] = []
    for hint in analysis.authority_hints:
        resolved = _resolve_hint(hint, by_key)
        if resolved is None and verifier is not None:
            suggestion = verifier.suggest_citation(hint)
            if suggestion:
                resolved = _resolve_hint(suggestion, by_key)
        resolutions.append(CitationResolution(hint=hint, authority_id=resolved))
    return resolutions

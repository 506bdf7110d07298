"""Fixture-backed search connectors emulating the legal databases.

Corpus file: JSON lines, one entry per line with fields provider_id, doc_id,
title, citation_string, neutral_citation (optional), court, jurisdiction,
date (ISO), headnote, body, url. (provider_id, doc_id) must be unique.

Simulators apply conjunctive term matching over an inverted index of
lowercase title+headnote+body tokens, honour jurisdiction/date filters, and
support latency and failure injection. An optional live CanLII client speaks
the same connector contract.
"""

from __future__ import annotations

import json
import os
import re
import time
from dataclasses import dataclass
from datetime import date
from enum import Enum
from pathlib import Path

import httpx

from .errors import (
    CorpusParseError,
    DuplicateDocId,
    SimulatedTimeout,
    SimulatedUnavailable,
    UnsupportedDialect,
)
from .federation import Dialect, ProviderId, ProviderQuery, RawResult

_TOKEN_RE = re.compile(r"[a-z0-9]+")


class FailureMode(str, Enum):
    NONE = "None"
    TIMEOUT = "Timeout"
    UNAVAILABLE = "Unavailable"


@dataclass(frozen=True)
class SimBehavior:
    latency: float = 0.0
    failure_mode: FailureMode = FailureMode.NONE
    seed: int = 0

    def __post_init__(self) -> None:
        if self.latency < 0:
            raise ValueError("latency must be >= 0")


@dataclass(frozen=True)
class CorpusEntry:
    provider_id: ProviderId
    doc_id: str
    title: str
    citation_string: str
    court: str
    jurisdiction: str
    date: str
    headnote: str
    body: str
    url: str
    neutral_citation: str | None = None


def _tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


class Corpus:
    """Immutable post-load index over corpus entries, sliced per provider."""

    def __init__(self, entries: list[CorpusEntry]):
        self.entries = tuple(entries)
        self._by_provider: dict[ProviderId, list[CorpusEntry]] = {}
        # token -> provider -> doc_id -> term count
        self._index: dict[str, dict[ProviderId, dict[str, int]]] = {}
        for entry in entries:
            self._by_provider.setdefault(entry.provider_id, []).append(entry)
            counts: dict[str, int] = {}
            for token in _tokenize(f"{entry.title} {entry.headnote} {entry.body}"):
                counts[token] = counts.get(token, 0) + 1
            for token, count in counts.items():
                self._index.setdefault(token, {}).setdefault(entry.provider_id, {})[
                    entry.doc_id
                ] = count
        self._entries_by_id = {(e.provider_id, e.doc_id): e for e in entries}

    def provider_entries(self, provider_id: ProviderId) -> list[CorpusEntry]:
        return list(self._by_provider.get(provider_id, []))

    def search(
        self,
        provider_id: ProviderId,
        terms: list[str],
        country: str | None,
        date_from: date | None,
        date_to: date | None,
        limit: int,
    ) -> list[CorpusEntry]:
        """Conjunctive term match, ordered by total term frequency then doc_id."""
        if not terms:
            return []
        doc_scores: dict[str, int] | None = None
        for term in terms:
            postings = self._index.get(term.lower(), {}).get(provider_id, {})
            if doc_scores is None:
                doc_scores = dict(postings)
            else:
                doc_scores = {
                    doc_id: doc_scores[doc_id] + count
                    for doc_id, count in postings.items()
                    if doc_id in doc_scores
                }
            if not doc_scores:
                return []
        assert doc_scores is not None
        hits = []
        for doc_id, score in doc_scores.items():
            entry = self._entries_by_id[(provider_id, doc_id)]
            if country is not None and not entry.jurisdiction.startswith(country):
                continue
            if date_from is not None or date_to is not None:
                entry_date = date.fromisoformat(entry.date)
                if date_from is not None and entry_date < date_from:
                    continue
                if date_to is not None and entry_date > date_to:
                    continue
            hits.append((score, entry))
        hits.sort(key=lambda pair: (-pair[0], pair[1].doc_id))
        return [entry for _, entry in hits[:limit]]


def load_corpus(path: str | Path) -> Corpus:
    """Parse a JSON-lines corpus file; duplicate (provider, doc) ids are fatal."""
    path = Path(path)
    entries: list[CorpusEntry] = []
    seen: set[tuple[ProviderId, str]] = set()
    with open(path, encoding="utf-8") as f:
        for number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
                entry = CorpusEntry(
                    provider_id=ProviderId(raw["provider_id"]),
                    doc_id=str(raw["doc_id"]),
                    title=raw["title"],
                    citation_string=raw.get("citation_string", ""),
                    neutral_citation=raw.get("neutral_citation"),
                    court=raw.get("court", ""),
                    jurisdiction=raw.get("jurisdiction", ""),
                    date=raw["date"],
                    headnote=raw.get("headnote", ""),
                    body=raw.get("body", ""),
                    url=raw.get("url", ""),
                )
                date.fromisoformat(entry.date)
            except (KeyError, ValueError, TypeError) as exc:
                raise CorpusParseError(number, str(exc)) from exc
            key = (entry.provider_id, entry.doc_id)
            if key in seen:
                raise DuplicateDocId(f"{entry.provider_id.value}/{entry.doc_id} at line {number}")
            seen.add(key)
            entries.append(entry)
    return Corpus(entries)


def _parse_sim_boolean(text: str) -> tuple[list[str], str | None, date | None, date | None]:
    terms: list[str] = []
    country: str | None = None
    date_from: date | None = None
    date_to: date | None = None
    term_part = text
    for token in text.split():
        if ":" in token:
            term_part = text[: text.index(token)].strip()
            break
    for token in term_part.split(" AND "):
        token = token.strip()
        if token:
            terms.append(token)
    for token in text.split():
        if ":" not in token:
            continue
        key, _, value = token.partition(":")
        if key == "jurisdiction":
            country = value.split("-")[0]
        elif key == "date_from":
            date_from = date.fromisoformat(value)
        elif key == "date_to":
            date_to = date.fromisoformat(value)
    return terms, country, date_from, date_to


def _parse_params(
    pq: ProviderQuery, text_key: str, after_key: str, before_key: str
) -> tuple[list[str], str | None, date | None, date | None]:
    params = pq.param_dict()
    terms = params.get(text_key, "").split()
    jurisdiction = params.get("jurisdiction")
    country = jurisdiction.split("-")[0] if jurisdiction else None
    date_from = date.fromisoformat(params[after_key]) if after_key in params else None
    date_to = date.fromisoformat(params[before_key]) if before_key in params else None
    return terms, country, date_from, date_to


def parse_provider_query(pq: ProviderQuery) -> tuple[list[str], str | None, date | None, date | None]:
    """Decode a dialect-specific query back into match criteria."""
    if pq.dialect is Dialect.SIM_BOOLEAN:
        return _parse_sim_boolean(pq.text)
    if pq.dialect is Dialect.CANLII_REST:
        return _parse_params(pq, "fullText", "decisionDateAfter", "decisionDateBefore")
    if pq.dialect is Dialect.STATUTORY_FULLTEXT:
        return _parse_params(pq, "text", "inForceAfter", "inForceBefore")
    raise UnsupportedDialect(f"simulator cannot parse dialect {pq.dialect!r}")


class SearchSimulator:
    """One provider's connector over the shared corpus, with injected behavior."""

    def __init__(self, provider_id: ProviderId, corpus: Corpus, behavior: SimBehavior | None = None):
        self.provider_id = provider_id
        self._corpus = corpus
        self.behavior = behavior or SimBehavior()
        self.call_count = 0

    def search(self, pq: ProviderQuery, behavior: SimBehavior | None = None) -> list[RawResult]:
        self.call_count += 1
        behavior = behavior or self.behavior
        if behavior.failure_mode is FailureMode.UNAVAILABLE:
            raise SimulatedUnavailable(f"{self.provider_id.value} unavailable")
        if behavior.latency > 0:
            time.sleep(behavior.latency)
        if behavior.failure_mode is FailureMode.TIMEOUT:
            raise SimulatedTimeout(f"{self.provider_id.value} timed out")
        terms, country, date_from, date_to = parse_provider_query(pq)
        entries = self._corpus.search(
            self.provider_id, terms, country, date_from, date_to, pq.max_results
        )
        results = []
        for rank, entry in enumerate(entries):
            results.append(
                RawResult(
                    provider_id=self.provider_id,
                    doc_id=entry.doc_id,
                    title=entry.title,
                    citation_string=entry.citation_string,
                    court=entry.court,
                    jurisdiction=entry.jurisdiction,
                    date=entry.date,
                    headnote=entry.headnote,
                    score_provider=1.0 / (1 + rank),
                    url=entry.url,
                )
            )
        return results


CANLII_API_KEY_ENV = "CANLII_API_KEY"
CANLII_BASE_URL = "https://api.canlii.org/v1"


class CanLiiHttpClient:
    """Live CanLII REST connector (same contract as the simulators).

    Needs an API key in the CANLII_API_KEY environment variable; excluded
    from the offline test suite.
    """

    def __init__(self, client: httpx.Client | None = None, language: str = "en"):
        self._client = client or httpx.Client(timeout=10.0)
        self._language = language
        self.call_count = 0

    def search(self, pq: ProviderQuery) -> list[RawResult]:
        self.call_count += 1
        api_key = os.environ.get(CANLII_API_KEY_ENV, "")
        if not api_key:
            raise SimulatedUnavailable(f"{CANLII_API_KEY_ENV} not set")
        params = pq.param_dict()
        params["apiKey"] = api_key
        response = self._client.get(f"{CANLII_BASE_URL}/search/{self._language}/", params=params)
        if response.status_code != 200:
            raise SimulatedUnavailable(f"canlii returned {response.status_code}")
        payload = response.json()
        results = []
        for item in payload.get("results", []):
            case = item.get("case", {})
            results.append(
                RawResult(
                    provider_id=ProviderId.CANLII,
                    doc_id=case.get("caseId", {}).get(self._language, ""),
                    title=case.get("title", ""),
                    citation_string=case.get("citation", ""),
                    url=f"https://www.canlii.org/{case.get('databaseId', '')}",
                )
            )
        return results[: pq.max_results]

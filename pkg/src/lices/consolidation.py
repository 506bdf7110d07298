"""Citation canonicalization, cross-provider dedup, and unified relevance ranking.

Provider-native scores are ignored (not comparable across databases); every
authority is re-scored with one weighted linear model. Aging is computed at
year granularity against an injected clock so scores are time-stable in tests.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, replace
from datetime import date
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .conflicts import normalize_text
from .errors import BadWeights, Unkeyable
from .federation import GenericQuery, ProviderId, RawResult

# Priority-pyramid tiers; used for merge precedence and ranking tie-breaks.
DEFAULT_PROVIDER_TIERS: dict[ProviderId, int] = {
    ProviderId.LEXISNEXIS_SIM: 1,
    ProviderId.WESTLAW_SIM: 1,
    ProviderId.CANLII: 2,
    ProviderId.JUSTICE_LAWS: 3,
    ProviderId.SCC: 4,
}

COURT_WEIGHTS = {
    "supreme": 1.0,
    "appellate": 0.8,
    "trial": 0.6,
    "tribunal": 0.4,
    "unknown": 0.3,
}

DEFAULT_COURT_CLASSES: dict[str, str] = {
    "scc": "supreme",
    "ussc": "supreme",
    "fca": "appellate",
    "onca": "appellate",
    "bcca": "appellate",
    "abca": "appellate",
    "qcca": "appellate",
    "mbca": "appellate",
    "skca": "appellate",
    "nsca": "appellate",
    "nbca": "appellate",
    "fc": "trial",
    "onsc": "trial",
    "bcsc": "trial",
    "abqb": "trial",
    "qccs": "trial",
    "mbqb": "trial",
    "skqb": "trial",
    "nssc": "trial",
    "nbqb": "trial",
    "ltb": "tribunal",
    "hrto": "tribunal",
    "olrb": "tribunal",
}

_NEUTRAL_RE = re.compile(r"^(\d{4})\s+([A-Za-z]+)\s+(\d+)$")
_REPORTER_RE = re.compile(r"^\[(\d{4})\]\s+(\d+)\s+([A-Za-z][A-Za-z.\s]*?)\s+(\d+)$")


class KeyKind(str, Enum):
    NEUTRAL = "neutral"
    REPORTER = "reporter"
    METADATA = "metadata"


@dataclass(frozen=True)
class CitationKey:
    kind: KeyKind
    key: str


def canonical_citation_key(
    citation_string: str, title: str | None = None, year: str | None = None
) -> CitationKey:
    """Derive the canonical key: neutral form, then reporter, then title+year.

    Raises Unkeyable only when the citation is empty and no title is available.
    """
    citation = (citation_string or "").strip()
    match = _NEUTRAL_RE.match(citation)
    if match:
        cite_year, court, number = match.groups()
        return CitationKey(kind=KeyKind.NEUTRAL, key=f"{court.lower()}:{cite_year}:{int(number)}")
    match = _REPORTER_RE.match(citation)
    if match:
        cite_year, volume, reporter, page = match.groups()
        reporter_norm = re.sub(r"[.\s]", "", reporter).lower()
        return CitationKey(
            kind=KeyKind.REPORTER, key=f"{cite_year}:{int(volume)}:{reporter_norm}:{int(page)}"
        )
    if title and title.strip():
        return CitationKey(
            kind=KeyKind.METADATA, key=f"{normalize_text(title)}:{(year or '').strip()}"
        )
    raise Unkeyable(f"cannot key citation {citation_string!r} without a title")


@dataclass(frozen=True)
class Provenance:
    provider_id: ProviderId
    doc_id: str
    url: str | None = None


@dataclass(frozen=True)
class Authority:
    authority_id: str
    canonical_key: CitationKey
    title: str
    court: str | None
    jurisdiction: str | None
    date: str | None
    headnote: str | None
    provenance: tuple[Provenance, ...]
    relevance: float = 0.0

    def min_tier(self, tiers: Mapping[ProviderId, int] | None = None) -> int:
        tiers = tiers or DEFAULT_PROVIDER_TIERS
        return min(tiers.get(p.provider_id, 99) for p in self.provenance)


def _result_key(result: RawResult) -> CitationKey:
    year = (result.date or "")[:4]
    return canonical_citation_key(result.citation_string, title=result.title, year=year)


def deduplicate(
    results: Sequence[RawResult], tiers: Mapping[ProviderId, int] | None = None
) -> list[Authority]:
    """Merge raw results that share a canonical citation key.

    Merge rules: provenance is the union of contributing records, the longest
    headnote survives, and descriptive fields come from the record whose
    provider sits lowest in the tier pyramid. Unkeyable records (no citation
    and no title) are dropped. Output is ordered by key.
    """
    tiers = tiers or DEFAULT_PROVIDER_TIERS
    groups: dict[str, list[RawResult]] = {}
    keys: dict[str, CitationKey] = {}
    for result in results:
        try:
            key = _result_key(result)
        except Unkeyable:
            continue
        groups.setdefault(key.key, []).append(result)
        keys.setdefault(key.key, key)

    def precedence(r: RawResult) -> tuple[int, str, str]:
        return (tiers.get(r.provider_id, 99), r.provider_id.value, r.doc_id)

    authorities: list[Authority] = []
    for key_str in sorted(groups):
        members = sorted(groups[key_str], key=precedence)
        winner = members[0]
        headnote = max(members, key=lambda r: len(r.headnote or "")).headnote
        provenance = tuple(Provenance(r.provider_id, r.doc_id, r.url) for r in members)
        digest = hashlib.sha1(key_str.encode("utf-8")).hexdigest()[:12]
        authorities.append(
            Authority(
                authority_id=f"auth-{digest}",
                canonical_key=keys[key_str],
                title=winner.title,
                court=winner.court,
                jurisdiction=winner.jurisdiction,
                date=winner.date,
                headnote=headnote,
                provenance=provenance,
            )
        )
    return authorities


@dataclass(frozen=True)
class RelevanceWeights:
    term: float = 0.5
    jurisdiction: float = 0.2
    court: float = 0.2
    recency: float = 0.1

    def validate(self) -> None:
        total = self.term + self.jurisdiction + self.court + self.recency
        if abs(total - 1.0) > 1e-9:
            raise BadWeights(f"weights sum to {total}, expected 1.0")


_WORD_RE = re.compile(r"[a-z0-9]+")


def _term_overlap(authority: Authority, terms: Iterable[str]) -> float:
    tokens = set(_WORD_RE.findall(f"{authority.title} {authority.headnote or ''}".lower()))
    unique_terms = {t.lower() for t in terms}
    if not unique_terms:
        return 0.0
    return len([t for t in unique_terms if t in tokens]) / len(unique_terms)


def _jurisdiction_match(authority: Authority, query: GenericQuery) -> float:
    code = (authority.jurisdiction or "").upper()
    if not code:
        return 0.0
    if code == query.jurisdiction.code:
        return 1.0
    if code.split("-")[0] == query.jurisdiction.country:
        return 0.5
    return 0.0


def _court_weight(authority: Authority, court_classes: Mapping[str, str]) -> float:
    court_class = court_classes.get((authority.court or "").lower(), "unknown")
    return COURT_WEIGHTS.get(court_class, COURT_WEIGHTS["unknown"])


def _recency(authority: Authority, now: date) -> float:
    if not authority.date:
        return 0.0
    try:
        year = int(authority.date[:4])
    except ValueError:
        return 0.0
    age_years = max(0, now.year - year)
    return max(0.0, 1.0 - age_years / 50.0)


def relevance_score(
    authority: Authority,
    query: GenericQuery,
    weights: RelevanceWeights | None = None,
    court_classes: Mapping[str, str] | None = None,
    now: date | None = None,
) -> float:
    """Weighted linear relevance in [0, 1].

    score = w_t*term_overlap + w_j*jurisdiction_match + w_c*court_weight
            + w_r*recency
    """
    weights = weights or RelevanceWeights()
    weights.validate()
    court_classes = court_classes if court_classes is not None else DEFAULT_COURT_CLASSES
    now = now or date.today()
    return (
        weights.term * _term_overlap(authority, query.terms)
        + weights.jurisdiction * _jurisdiction_match(authority, query)
        + weights.court * _court_weight(authority, court_classes)
        + weights.recency * _recency(authority, now)
    )


def score_authorities(
    authorities: Sequence[Authority],
    query: GenericQuery,
    weights: RelevanceWeights | None = None,
    court_classes: Mapping[str, str] | None = None,
    now: date | None = None,
) -> list[Authority]:
    return [
        replace(a, relevance=relevance_score(a, query, weights, court_classes, now))
        for a in authorities
    ]


def rank(
    authorities: Sequence[Authority], tiers: Mapping[ProviderId, int] | None = None
) -> list[Authority]:
    """Descending relevance; ties broken by pyramid tier, then key."""
    return sorted(
        authorities,
        key=lambda a: (-a.relevance, a.min_tier(tiers), a.canonical_key.key),
    )

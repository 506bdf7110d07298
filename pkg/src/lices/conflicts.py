"""Two-stage conflict-of-interest screening against the firm's record store.

Name matching is deliberately conservative: exact normalized equality is the
only way to reach similarity 1.0 (an automatic conflict), while near matches
fall into a "potential" band that also halts the pipeline but is
distinguishable in the audit trail.
"""

from __future__ import annotations

import hashlib
import json
import re
import threading
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np
from scipy.optimize import linear_sum_assignment

from .domain import ClientProfile, Party
from .errors import EmptyAfterNormalization, StoreUnavailable

DEFAULT_THRESHOLD = 0.85

# A token pair counts toward overlap when its edit ratio clears this bar.
# 0.75 keeps a one-edit typo in a four-letter token ("jon" / "john")
# inside the potential-conflict band; strict token equality would not.
_SHARED_TOKEN_BAR = 0.75

# Ceiling for non-identical strings: permuted token sets would otherwise
# score 1.0, which is reserved for exact normalized equality.
_NON_IDENTICAL_CAP = 0.99

_CORPORATE_SUFFIXES = frozenset({"inc", "ltd", "llc", "llp", "corp", "co", "plc", "sa", "gmbh"})
_HONORIFICS = frozenset({"mr", "ms", "mrs", "dr"})

_PUNCT_RE = re.compile(r"[^\w\s]", re.UNICODE)


def normalize_text(raw: str) -> str:
    """Lowercase, drop punctuation, collapse whitespace."""
    lowered = raw.lower()
    stripped = _PUNCT_RE.sub("", lowered).replace("_", "")
    return " ".join(stripped.split())


def normalize_party_name(raw: str) -> str:
    """Canonical matching form of a party name.

    Honorifics are peeled off the head and corporate suffixes off the tail;
    a name reduced to nothing is an error, not an empty key.
    """
    tokens = normalize_text(raw).split()
    while tokens and tokens[0] in _HONORIFICS:
        tokens = tokens[1:]
    while tokens and tokens[-1] in _CORPORATE_SUFFIXES:
        tokens = tokens[:-1]
    if not tokens:
        raise EmptyAfterNormalization(f"nothing left of {raw!r} after normalization")
    return " ".join(tokens)


def levenshtein(a: str, b: str) -> int:
    """Plain edit distance (insert/delete/substitute), two-row DP."""
    if a == b:
        return 0
    if not a or not b:
        return max(len(a), len(b))
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(
                min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + (ca != cb))
            )
        previous = current
    return previous[-1]


def _edit_ratio(a: str, b: str) -> float:
    """Symmetric edit-distance ratio: 1 - dist/max(len)."""
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return 1.0 - levenshtein(a, b) / longest


def name_similarity(a: str, b: str) -> float:
    """Token-set similarity between two normalized names, in [0, 1].

    Mean of two components over the token sets A and B:
      - overlap: 2*|shared|/(|A|+|B|) where |shared| is the largest number of
        disjoint token pairs with edit ratio >= 0.75
      - pairing: the maximum-sum one-to-one token pairing of edit ratios,
        averaged over max(|A|, |B|)

    Symmetric; returns exactly 1.0 iff a == b.
    """
    if a == b:
        return 1.0
    tokens_a = sorted(set(a.split()))
    tokens_b = sorted(set(b.split()))
    if not tokens_a or not tokens_b:
        return 0.0
    ratios = np.array([[_edit_ratio(ta, tb) for tb in tokens_b] for ta in tokens_a])

    rows, cols = linear_sum_assignment(ratios, maximize=True)
    pairing_avg = float(ratios[rows, cols].sum()) / max(len(tokens_a), len(tokens_b))

    above_bar = (ratios >= _SHARED_TOKEN_BAR).astype(float)
    rows, cols = linear_sum_assignment(above_bar, maximize=True)
    shared = int(above_bar[rows, cols].sum())
    overlap = 2.0 * shared / (len(tokens_a) + len(tokens_b))

    return min((overlap + pairing_avg) / 2.0, _NON_IDENTICAL_CAP)


class ConflictSide(str, Enum):
    OUR_CLIENT = "our_client"
    ADVERSE = "adverse"
    RELATED = "related"


class CheckStage(str, Enum):
    PRELIMINARY = "preliminary"
    COMPREHENSIVE = "comprehensive"


class Verdict(str, Enum):
    CLEAR = "Clear"
    POTENTIAL_CONFLICT = "PotentialConflict"
    CONFLICT = "Conflict"


# Ordering used by the monotonicity guarantee.
VERDICT_RANK = {Verdict.CLEAR: 0, Verdict.POTENTIAL_CONFLICT: 1, Verdict.CONFLICT: 2}


@dataclass(frozen=True)
class ConflictRecord:
    record_id: str
    matter_ref: str
    party_name: str
    side: ConflictSide
    normalized_name: str = ""

    def __post_init__(self) -> None:
        if not self.normalized_name:
            object.__setattr__(self, "normalized_name", normalize_party_name(self.party_name))


@dataclass(frozen=True)
class ConflictHit:
    query_party: Party
    record: ConflictRecord
    similarity: float


@dataclass(frozen=True)
class ConflictOutcome:
    verdict: Verdict
    hits: tuple[ConflictHit, ...]
    stage: CheckStage


class ConflictStore:
    """Read-mostly store of historical party records, backed by a JSON-lines file.

    File fields per record: record_id, matter_ref, party_name, side.
    Normalized names are computed on load. Appends are serialized.
    """

    def __init__(self, records: list[ConflictRecord] | None = None, path: Path | None = None):
        self._records: list[ConflictRecord] = list(records or [])
        self._path = path
        self._lock = threading.Lock()

    @classmethod
    def load(cls, path: str | Path) -> "ConflictStore":
        path = Path(path)
        if not path.exists():
            raise StoreUnavailable(f"conflict db not found: {path}")
        records: list[ConflictRecord] = []
        try:
            lines = path.read_text("utf-8").splitlines()
        except OSError as exc:
            raise StoreUnavailable(f"conflict db unreadable: {exc}") from exc
        for number, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
                records.append(
                    ConflictRecord(
                        record_id=raw["record_id"],
                        matter_ref=raw["matter_ref"],
                        party_name=raw["party_name"],
                        side=ConflictSide(raw["side"]),
                    )
                )
            except (KeyError, ValueError, EmptyAfterNormalization) as exc:
                raise StoreUnavailable(f"conflict db line {number} invalid: {exc}") from exc
        return cls(records, path=path)

    def __len__(self) -> int:
        return len(self._records)

    def records(self) -> tuple[ConflictRecord, ...]:
        return tuple(self._records)

    def append(self, record: ConflictRecord) -> None:
        with self._lock:
            self._records.append(record)
            if self._path is not None:
                entry = {
                    "record_id": record.record_id,
                    "matter_ref": record.matter_ref,
                    "party_name": record.party_name,
                    "side": record.side.value,
                }
                with open(self._path, "a", encoding="utf-8") as f:
                    f.write(json.dumps(entry) + "\n")


def _check_parties(
    parties: list[Party], store: ConflictStore, stage: CheckStage, threshold: float
) -> ConflictOutcome:
    hits: list[ConflictHit] = []
    for party in parties:
        try:
            query_norm = normalize_party_name(party.raw_name)
        except EmptyAfterNormalization:
            continue
        for record in store.records():
            score = name_similarity(query_norm, record.normalized_name)
            if score >= threshold:
                hits.append(ConflictHit(query_party=party, record=record, similarity=score))
    hits.sort(key=lambda h: (-h.similarity, h.record.record_id))
    if any(h.similarity == 1.0 for h in hits):
        verdict = Verdict.CONFLICT
    elif hits:
        verdict = Verdict.POTENTIAL_CONFLICT
    else:
        verdict = Verdict.CLEAR
    return ConflictOutcome(verdict=verdict, hits=tuple(hits), stage=stage)


def preliminary_check(
    client: ClientProfile, store: ConflictStore, threshold: float = DEFAULT_THRESHOLD
) -> ConflictOutcome:
    """Screen every intake party against the store before any work begins."""
    return _check_parties(list(client.parties), store, CheckStage.PRELIMINARY, threshold)


def comprehensive_check(
    all_parties: list[Party], store: ConflictStore, threshold: float = DEFAULT_THRESHOLD
) -> ConflictOutcome:
    """Re-screen the expanded party set (documents + interview) post-interview."""
    return _check_parties(list(all_parties), store, CheckStage.COMPREHENSIVE, threshold)


def salted_name_hash(name: str, salt: str) -> str:
    """One-way fingerprint of a party name for audit output."""
    try:
        normalized = normalize_party_name(name)
    except EmptyAfterNormalization:
        normalized = normalize_text(name)
    return hashlib.sha256(f"{salt}:{normalized}".encode("utf-8")).hexdigest()[:32]

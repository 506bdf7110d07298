"""Core vocabulary types shared by every stage of the consultation pipeline."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources

from .errors import UnknownJurisdiction

_JURISDICTION_RE = re.compile(r"^[A-Z]{2}(-[A-Z0-9]{1,3})?$")


def _load_jurisdiction_table() -> dict[str, str]:
    table: dict[str, str] = {}
    text = resources.files("lices.data").joinpath("jurisdictions.tsv").read_text("utf-8")
    for line in text.splitlines():
        if not line.strip():
            continue
        code, name = line.split("\t", 1)
        table[code] = name
    return table


SUPPORTED_JURISDICTIONS: dict[str, str] = _load_jurisdiction_table()


class PartyRole(str, Enum):
    CLIENT = "client"
    OPPOSING = "opposing"
    RELATED = "related"
    WITNESS = "witness"


class EntityKind(str, Enum):
    PERSON = "person"
    ORGANIZATION = "organization"
    UNKNOWN = "unknown"


class IssueCategory(str, Enum):
    CASE_LAW = "case_law"
    STATUTE = "statute"
    PROCEDURE = "procedure"
    MIXED = "mixed"


class SessionStatus(str, Enum):
    REGISTERED = "Registered"
    PRELIM_CLEARED = "PrelimCleared"
    DOCUMENTS_COLLECTED = "DocumentsCollected"
    INTERVIEW_IN_PROGRESS = "InterviewInProgress"
    INTERVIEW_COMPLETE = "InterviewComplete"
    COMPREHENSIVE_CLEARED = "ComprehensiveCleared"
    RESEARCHING = "Researching"
    CONSOLIDATING = "Consolidating"
    ANALYZED = "Analyzed"
    REPORT_READY = "ReportReady"
    TERMINATED_CONFLICT = "TerminatedConflict"
    TERMINATED_ERROR = "TerminatedError"


# Legal edges of the intake pipeline. TerminatedConflict is absorbing,
# ReportReady and TerminatedError are terminal; the only self-loop is the
# interview round loop.
PIPELINE_TRANSITIONS: dict[SessionStatus, frozenset[SessionStatus]] = {
    SessionStatus.REGISTERED: frozenset(
        {SessionStatus.PRELIM_CLEARED, SessionStatus.TERMINATED_CONFLICT, SessionStatus.TERMINATED_ERROR}
    ),
    SessionStatus.PRELIM_CLEARED: frozenset(
        {SessionStatus.DOCUMENTS_COLLECTED, SessionStatus.TERMINATED_ERROR}
    ),
    SessionStatus.DOCUMENTS_COLLECTED: frozenset(
        {
            SessionStatus.INTERVIEW_IN_PROGRESS,
            # zero-question interviews skip straight to complete
            SessionStatus.INTERVIEW_COMPLETE,
            SessionStatus.TERMINATED_ERROR,
        }
    ),
    SessionStatus.INTERVIEW_IN_PROGRESS: frozenset(
        {
            SessionStatus.INTERVIEW_IN_PROGRESS,
            SessionStatus.INTERVIEW_COMPLETE,
            SessionStatus.TERMINATED_ERROR,
        }
    ),
    SessionStatus.INTERVIEW_COMPLETE: frozenset(
        {
            SessionStatus.COMPREHENSIVE_CLEARED,
            SessionStatus.TERMINATED_CONFLICT,
            SessionStatus.TERMINATED_ERROR,
        }
    ),
    SessionStatus.COMPREHENSIVE_CLEARED: frozenset(
        {SessionStatus.RESEARCHING, SessionStatus.TERMINATED_ERROR}
    ),
    SessionStatus.RESEARCHING: frozenset(
        {SessionStatus.CONSOLIDATING, SessionStatus.TERMINATED_ERROR}
    ),
    SessionStatus.CONSOLIDATING: frozenset(
        {SessionStatus.ANALYZED, SessionStatus.TERMINATED_ERROR}
    ),
    SessionStatus.ANALYZED: frozenset(
        {SessionStatus.REPORT_READY, SessionStatus.TERMINATED_ERROR}
    ),
    SessionStatus.REPORT_READY: frozenset(),
    SessionStatus.TERMINATED_CONFLICT: frozenset(),
    SessionStatus.TERMINATED_ERROR: frozenset(),
}


@dataclass(frozen=True)
class Jurisdiction:
    """Two-letter country code plus optional sub-national region code."""

    country: str
    region: str | None = None

    @property
    def code(self) -> str:
        return self.country if self.region is None else f"{self.country}-{self.region}"

    def __str__(self) -> str:
        return self.code


def parse_jurisdiction(code: str) -> Jurisdiction:
    """Parse ``CC`` or ``CC-RR`` against the supported-jurisdiction table."""
    code = code.strip().upper()
    if not _JURISDICTION_RE.match(code):
        raise UnknownJurisdiction(f"malformed jurisdiction code {code!r}")
    if code not in SUPPORTED_JURISDICTIONS:
        raise UnknownJurisdiction(f"unsupported jurisdiction {code!r}")
    if "-" in code:
        country, region = code.split("-", 1)
        return Jurisdiction(country=country, region=region)
    return Jurisdiction(country=code)


@dataclass(frozen=True)
class Party:
    raw_name: str
    role: PartyRole
    entity_kind: EntityKind = EntityKind.UNKNOWN

    def __post_init__(self) -> None:
        if not self.raw_name.strip():
            raise ValueError("party name empty after trimming")


@dataclass(frozen=True)
class ClientProfile:
    client_id: str
    parties: tuple[Party, ...]
    jurisdiction: Jurisdiction
    contact: str = ""


@dataclass
class Matter:
    matter_id: str
    client: ClientProfile
    summary: str
    issue_categories: tuple[IssueCategory, ...]
    documents: list[str] = field(default_factory=list)
    status: SessionStatus = SessionStatus.REGISTERED


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    violations: tuple[str, ...] = ()


MISSING_CLIENT_PARTY = "MISSING_CLIENT_PARTY"
MULTIPLE_CLIENT_PARTIES = "MULTIPLE_CLIENT_PARTIES"


def validate_client_profile(profile: ClientProfile) -> ValidationResult:
    """Check profile invariants; violations are data, not faults."""
    violations: list[str] = []
    client_parties = [p for p in profile.parties if p.role is PartyRole.CLIENT]
    if not client_parties:
        violations.append(MISSING_CLIENT_PARTY)
    elif len(client_parties) > 1:
        violations.append(MULTIPLE_CLIENT_PARTIES)
    return ValidationResult(ok=not violations, violations=tuple(violations))

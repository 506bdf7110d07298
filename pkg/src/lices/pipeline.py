"""Orchestrator core: drives one consultation through the intake pipeline.

Owns the status state machine, both conflict gates, and the audit trail.
Every status change is validated against the pipeline transition table and
written ahead to the audit log; a conflict (or potential conflict) at either
gate moves the matter into the absorbing TerminatedConflict state, after
which no research or analysis call can ever be issued.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Mapping

from .audit import AuditEventKind, AuditLog
from .config import AppConfig
from .conflicts import (
    CheckStage,
    ConflictOutcome,
    ConflictStore,
    Verdict,
    comprehensive_check,
    normalize_party_name,
    preliminary_check,
)
from .consolidation import Authority, deduplicate, rank, score_authorities
from .documents import (
    Document,
    extract_parties_from_text,
    ingest_document,
    key_terms_from_text,
)
from .domain import (
    PIPELINE_TRANSITIONS,
    ClientProfile,
    EntityKind,
    IssueCategory,
    Matter,
    Party,
    PartyRole,
    SessionStatus,
    parse_jurisdiction,
    validate_client_profile,
)
from .errors import (
    EmptyAfterNormalization,
    IllegalTransition,
    NoQueryTerms,
    NotFound,
    SessionTerminated,
)
from .federation import (
    Connector,
    FanoutOutcome,
    GenericQuery,
    ProviderId,
    RoutingTable,
    build_query_plan,
    execute_plan,
)
from .interview import (
    Done,
    InterviewPhase,
    InterviewState,
    next_question,
    record_answer,
    start_interview,
    transcript,
)
from .llm import (
    CitationVerifier,
    HttpCitationVerifier,
    LlmAdapter,
    Question,
    ScriptedStubAdapter,
    StructuredAnalysis,
)
from .report import AnalysisReport, assemble_report, render_report

MAX_QUERY_TERMS = 3

Clock = Callable[[], datetime]
IdFactory = Callable[[str], str]


def utc_clock() -> datetime:
    return datetime.now(timezone.utc)


def uuid_ids(prefix: str) -> str:
    return f"{prefix}-{uuid.uuid4().hex[:12]}"


def counter_ids() -> IdFactory:
    """Deterministic id factory for reproducible fixture runs."""
    counters: dict[str, int] = {}

    def make(prefix: str) -> str:
        counters[prefix] = counters.get(prefix, 0) + 1
        return f"{prefix}-{counters[prefix]:04d}"

    return make


@dataclass
class MatterRecord:
    matter: Matter
    docs: list[Document] = field(default_factory=list)
    interview: InterviewState | None = None
    prelim: ConflictOutcome | None = None
    comprehensive: ConflictOutcome | None = None
    fanout: FanoutOutcome | None = None
    ranked: list[Authority] = field(default_factory=list)
    query: GenericQuery | None = None
    analysis: StructuredAnalysis | None = None
    report: AnalysisReport | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)


class ConsultationPipeline:
    """All stages of the consultation flow over shared module services."""

    def __init__(
        self,
        config: AppConfig,
        conflict_store: ConflictStore,
        adapter: LlmAdapter,
        registry: Mapping[ProviderId, Connector],
        routing: RoutingTable,
        audit: AuditLog,
        clock: Clock = utc_clock,
        ids: IdFactory = uuid_ids,
        verifier: CitationVerifier | None = None,
    ):
        self.config = config
        self.conflict_store = conflict_store
        self.adapter = adapter
        self.registry = registry
        self.routing = routing
        self.audit = audit
        self.clock = clock
        self.ids = ids
        self.verifier = verifier
        self.clients: dict[str, ClientProfile] = {}
        self.matters: dict[str, MatterRecord] = {}
        self._data_dir = Path(config.data_dir)

    @classmethod
    def from_config(
        cls,
        config: AppConfig,
        adapter: LlmAdapter | None = None,
        clock: Clock = utc_clock,
        ids: IdFactory = uuid_ids,
        audit_path: str | Path | None = None,
    ) -> "ConsultationPipeline":
        store = ConflictStore.load(config.conflict_db_path)
        registry = config.build_registry()
        routing = config.routing_table()
        if adapter is None:
            adapter = ScriptedStubAdapter.from_file(config.stub_script_path)
        audit = AuditLog(
            audit_path or Path(config.data_dir) / "audit.jsonl", config.audit_salt, clock
        )
        verifier = (
            HttpCitationVerifier(config.verifier_endpoint, config.verifier_model)
            if config.verifier_enabled and config.verifier_endpoint
            else None
        )
        return cls(config, store, adapter, registry, routing, audit, clock, ids, verifier)

    # -- helpers -----------------------------------------------------------

    def _record(self, matter_id: str) -> MatterRecord:
        record = self.matters.get(matter_id)
        if record is None:
            raise NotFound(f"no such matter {matter_id!r}")
        return record

    def _guard_active(self, record: MatterRecord) -> None:
        if record.matter.status is SessionStatus.TERMINATED_CONFLICT:
            raise SessionTerminated("session terminated by conflict check")

    def _require_status(self, record: MatterRecord, *allowed: SessionStatus) -> None:
        self._guard_active(record)
        if record.matter.status not in allowed:
            raise IllegalTransition(
                f"stage not legal from {record.matter.status.value}; "
                f"expected {', '.join(s.value for s in allowed)}"
            )

    def _transition(
        self,
        record: MatterRecord,
        to: SessionStatus,
        event: AuditEventKind,
        detail: dict | None = None,
    ) -> None:
        current = record.matter.status
        if to not in PIPELINE_TRANSITIONS[current]:
            raise IllegalTransition(f"{current.value} -> {to.value} is not a pipeline edge")
        self.audit.append(record.matter.matter_id, event, detail, transition=(current, to))
        record.matter.status = to
        self._persist_matter(record)

    def _emit(self, record: MatterRecord, event: AuditEventKind, detail: dict | None = None) -> None:
        self.audit.append(record.matter.matter_id, event, detail, transition=None)

    def _persist_matter(self, record: MatterRecord) -> None:
        matter_dir = self._data_dir / "matters" / record.matter.matter_id
        matter_dir.mkdir(parents=True, exist_ok=True)
        snapshot = {
            "matter_id": record.matter.matter_id,
            "client_id": record.matter.client.client_id,
            "status": record.matter.status.value,
            "summary": record.matter.summary,
            "issue_categories": [c.value for c in record.matter.issue_categories],
            "documents": list(record.matter.documents),
        }
        (matter_dir / "matter.json").write_text(
            json.dumps(snapshot, indent=2, sort_keys=True) + "\n", "utf-8"
        )

    def _hashed_hits(self, outcome: ConflictOutcome) -> list[dict]:
        return [
            {
                "party_hash": self.audit.hash_name(hit.query_party.raw_name),
                "record_id": hit.record.record_id,
                "similarity": round(hit.similarity, 9),
            }
            for hit in outcome.hits
        ]

    # -- intake ------------------------------------------------------------

    def register_client(
        self,
        name: str,
        jurisdiction_code: str,
        contact: str = "",
        opposing: list[str] | None = None,
        related: list[str] | None = None,
    ) -> ClientProfile:
        parties = [Party(raw_name=name, role=PartyRole.CLIENT, entity_kind=EntityKind.UNKNOWN)]
        for raw in opposing or []:
            parties.append(Party(raw_name=raw, role=PartyRole.OPPOSING))
        for raw in related or []:
            parties.append(Party(raw_name=raw, role=PartyRole.RELATED))
        profile = ClientProfile(
            client_id=self.ids("client"),
            parties=tuple(parties),
            jurisdiction=parse_jurisdiction(jurisdiction_code),
            contact=contact,
        )
        result = validate_client_profile(profile)
        if not result.ok:
            raise ValueError(f"invalid client profile: {', '.join(result.violations)}")
        self.clients[profile.client_id] = profile
        return profile

    def create_matter(
        self, client_id: str, summary: str, issue_categories: list[IssueCategory]
    ) -> Matter:
        client = self.clients.get(client_id)
        if client is None:
            raise NotFound(f"no such client {client_id!r}")
        matter = Matter(
            matter_id=self.ids("matter"),
            client=client,
            summary=summary,
            issue_categories=tuple(issue_categories),
        )
        record = MatterRecord(matter=matter)
        self.matters[matter.matter_id] = record
        self.audit.append(
            matter.matter_id,
            AuditEventKind.REGISTERED,
            {"client_hash": self.audit.hash_name(client.parties[0].raw_name)},
            transition=(None, SessionStatus.REGISTERED),
        )
        self._persist_matter(record)
        return matter

    # -- conflict gates ------------------------------------------------------

    def conflict_check(self, matter_id: str, stage: CheckStage) -> ConflictOutcome:
        record = self._record(matter_id)
        with record.lock:
            if stage is CheckStage.PRELIMINARY:
                self._require_status(record, SessionStatus.REGISTERED)
                outcome = preliminary_check(
                    record.matter.client, self.conflict_store, self.config.conflict_threshold
                )
                record.prelim = outcome
                check_event = AuditEventKind.PRELIM_CONFLICT_CHECKED
                clear_status = SessionStatus.PRELIM_CLEARED
            else:
                self._require_status(record, SessionStatus.INTERVIEW_COMPLETE)
                outcome = comprehensive_check(
                    self._expanded_parties(record), self.conflict_store, self.config.conflict_threshold
                )
                record.comprehensive = outcome
                check_event = AuditEventKind.COMPREHENSIVE_CONFLICT_CHECKED
                clear_status = SessionStatus.COMPREHENSIVE_CLEARED

            detail = {
                "stage": stage.value,
                "verdict": outcome.verdict.value,
                "hits": self._hashed_hits(outcome),
            }
            if outcome.verdict is Verdict.CLEAR:
                self._transition(record, clear_status, check_event, detail)
            else:
                # Conservative policy: a potential conflict halts the pipeline
                # too; the audit trail keeps the two verdicts distinguishable.
                self._emit(record, check_event, detail)
                self._transition(
                    record,
                    SessionStatus.TERMINATED_CONFLICT,
                    AuditEventKind.CONFLICT_TERMINATED,
                    detail,
                )
            return outcome

    def _expanded_parties(self, record: MatterRecord) -> list[Party]:
        """Intake parties plus candidates mined from documents and answers."""
        parties = list(record.matter.client.parties)
        for doc in record.docs:
            if doc.text:
                parties.extend(extract_parties_from_text(doc.text))
        if record.interview is not None:
            answers = "\n".join(
                e.answer for e in record.interview.qa_history if e.answer
            )
            if answers:
                parties.extend(extract_parties_from_text(answers))
        seen: set[str] = set()
        unique: list[Party] = []
        for party in parties:
            try:
                key = normalize_party_name(party.raw_name)
            except EmptyAfterNormalization:
                continue
            if key not in seen:
                seen.add(key)
                unique.append(party)
        return unique

    # -- documents -----------------------------------------------------------

    def ingest_documents(self, matter_id: str, files: list[tuple[bytes, str]]) -> list[Document]:
        """Ingest a batch (possibly empty) and close the collection stage."""
        record = self._record(matter_id)
        with record.lock:
            self._require_status(
                record, SessionStatus.PRELIM_CLEARED, SessionStatus.DOCUMENTS_COLLECTED
            )
            ingested: list[Document] = []
            for data, filename in files:
                doc = ingest_document(
                    data,
                    filename,
                    matter_id,
                    doc_id=self.ids("doc"),
                    now=self.clock(),
                    max_bytes=self.config.max_doc_bytes,
                )
                ingested.append(doc)

            first = record.matter.status is SessionStatus.PRELIM_CLEARED
            for i, doc in enumerate(ingested):
                detail = {
                    "doc_id": doc.doc_id,
                    "filename": doc.filename,
                    "format": doc.declared_format.value,
                    "unextracted": doc.unextracted,
                }
                if first and i == 0:
                    self._transition(
                        record, SessionStatus.DOCUMENTS_COLLECTED, AuditEventKind.DOCUMENT_INGESTED, detail
                    )
                else:
                    self._emit(record, AuditEventKind.DOCUMENT_INGESTED, detail)
                record.docs.append(doc)
                record.matter.documents.append(doc.doc_id)
                self._write_doc(record, doc)
            if first and not ingested:
                self._transition(
                    record,
                    SessionStatus.DOCUMENTS_COLLECTED,
                    AuditEventKind.DOCUMENT_INGESTED,
                    {"count": 0},
                )
            self._persist_matter(record)
            return ingested

    def _write_doc(self, record: MatterRecord, doc: Document) -> None:
        docs_dir = self._data_dir / "matters" / record.matter.matter_id / "docs"
        docs_dir.mkdir(parents=True, exist_ok=True)
        (docs_dir / f"{doc.doc_id}.txt").write_text(doc.text, "utf-8")

    # -- interview -----------------------------------------------------------

    def interview_next(self, matter_id: str) -> Question | Done:
        record = self._record(matter_id)
        with record.lock:
            self._require_status(
                record, SessionStatus.DOCUMENTS_COLLECTED, SessionStatus.INTERVIEW_IN_PROGRESS
            )
            if record.interview is None:
                record.interview = start_interview(
                    record.matter, record.docs, self.config.max_rounds
                )
            state, outcome = next_question(record.interview, self.adapter)
            record.interview = state
            if isinstance(outcome, Done):
                detail = {"done": True, "reason": outcome.reason, "round": state.round}
                if record.matter.status is not SessionStatus.INTERVIEW_COMPLETE:
                    self._transition(
                        record, SessionStatus.INTERVIEW_COMPLETE, AuditEventKind.QUESTION_ASKED, detail
                    )
            else:
                detail = {"question_id": outcome.question_id, "round": state.round}
                if record.matter.status is SessionStatus.DOCUMENTS_COLLECTED:
                    self._transition(
                        record,
                        SessionStatus.INTERVIEW_IN_PROGRESS,
                        AuditEventKind.QUESTION_ASKED,
                        detail,
                    )
                else:
                    self._emit(record, AuditEventKind.QUESTION_ASKED, detail)
            return outcome

    def interview_answer(self, matter_id: str, question_id: str, answer: str) -> None:
        record = self._record(matter_id)
        with record.lock:
            self._require_status(record, SessionStatus.INTERVIEW_IN_PROGRESS)
            assert record.interview is not None
            state = record_answer(record.interview, question_id, answer)
            record.interview = state
            detail = {"question_id": question_id, "round": state.round}
            if state.phase is InterviewPhase.COMPLETE:
                # cap reached on this answer; the interview is over
                self._transition(
                    record, SessionStatus.INTERVIEW_COMPLETE, AuditEventKind.ANSWER_RECORDED, detail
                )
            else:
                self._emit(record, AuditEventKind.ANSWER_RECORDED, detail)

    # -- research ------------------------------------------------------------

    def _build_query(self, record: MatterRecord) -> GenericQuery:
        texts = [doc.text for doc in record.docs if doc.text]
        if record.interview is not None:
            texts.append(transcript(record.interview))
        combined = "\n".join(texts)
        source = combined if combined.strip() else record.matter.summary
        terms = key_terms_from_text(source, MAX_QUERY_TERMS)
        if not terms:
            raise NoQueryTerms("no query terms derivable from matter content")
        categories = record.matter.issue_categories
        if len(categories) == 1:
            category = categories[0]
        else:
            category = IssueCategory.MIXED
        return GenericQuery(
            terms=tuple(terms),
            jurisdiction=record.matter.client.jurisdiction,
            issue_category=category,
        )

    def run_research(self, matter_id: str) -> tuple[FanoutOutcome, list[Authority]]:
        record = self._record(matter_id)
        with record.lock:
            self._require_status(record, SessionStatus.COMPREHENSIVE_CLEARED)
            query = self._build_query(record)
            plan = build_query_plan(query, self.routing)
            self._transition(
                record,
                SessionStatus.RESEARCHING,
                AuditEventKind.RESEARCH_DISPATCHED,
                {
                    "terms": list(query.terms),
                    "providers": [p.value for p in plan.provider_ids()],
                    "rationale": plan.rationale,
                },
            )
            outcome = execute_plan(plan, self.registry)
            authorities = deduplicate(outcome.results)
            scored = score_authorities(
                authorities,
                query,
                self.config.weights,
                self.config.court_classes,
                now=self.clock().date(),
            )
            ranked = rank(scored)
            record.query = query
            record.fanout = outcome
            record.ranked = ranked
            self._transition(
                record,
                SessionStatus.CONSOLIDATING,
                AuditEventKind.RESEARCH_CONSOLIDATED,
                {
                    "raw_results": len(outcome.results),
                    "unique_authorities": len(ranked),
                    "failures": [
                        {"provider_id": f.provider_id.value, "reason": f.reason.value}
                        for f in outcome.failures
                    ],
                },
            )
            return outcome, ranked

    # -- analysis and report ---------------------------------------------------

    def run_analysis(self, matter_id: str) -> StructuredAnalysis:
        record = self._record(matter_id)
        with record.lock:
            self._require_status(record, SessionStatus.CONSOLIDATING)
            assert record.interview is not None
            analysis = self.adapter.analyze_matter(record.interview.context(), record.ranked)
            record.analysis = analysis
            self._transition(
                record,
                SessionStatus.ANALYZED,
                AuditEventKind.ANALYSIS_COMPLETED,
                {"facts": len(analysis.material_facts), "issues": len(analysis.legal_issues)},
            )
            return analysis

    def generate_report(self, matter_id: str, fmt: str = "json") -> bytes:
        record = self._record(matter_id)
        with record.lock:
            self._require_status(record, SessionStatus.ANALYZED, SessionStatus.REPORT_READY)
            if record.report is None:
                assert record.analysis is not None and record.fanout is not None
                record.report = assemble_report(
                    record.analysis,
                    record.ranked,
                    record.fanout.failures,
                    matter_id,
                    self.config.disclaimer,
                    generated_at=self.clock(),
                    verifier=self.verifier,
                )
            rendered = render_report(record.report, fmt)
            if record.matter.status is SessionStatus.ANALYZED:
                self._transition(
                    record,
                    SessionStatus.REPORT_READY,
                    AuditEventKind.REPORT_GENERATED,
                    {"format": fmt, "authorities": len(record.report.authorities)},
                )
            return rendered

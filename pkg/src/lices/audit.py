"""Append-only audit log with per-matter gapless sequence numbers.

Events are persisted (write-ahead) before the triggering response is
returned; a write failure is fatal for the request. Party names never appear
raw in event details, only as salted one-way hashes.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from pathlib import Path
from typing import Callable

from .conflicts import salted_name_hash
from .domain import SessionStatus
from .errors import AuditUnavailable


class AuditEventKind(str, Enum):
    REGISTERED = "Registered"
    PRELIM_CONFLICT_CHECKED = "PrelimConflictChecked"
    CONFLICT_TERMINATED = "ConflictTerminated"
    DOCUMENT_INGESTED = "DocumentIngested"
    QUESTION_ASKED = "QuestionAsked"
    ANSWER_RECORDED = "AnswerRecorded"
    COMPREHENSIVE_CONFLICT_CHECKED = "ComprehensiveConflictChecked"
    RESEARCH_DISPATCHED = "ResearchDispatched"
    RESEARCH_CONSOLIDATED = "ResearchConsolidated"
    ANALYSIS_COMPLETED = "AnalysisCompleted"
    REPORT_GENERATED = "ReportGenerated"


@dataclass(frozen=True)
class AuditEvent:
    seq: int
    timestamp: str
    matter_id: str
    event: AuditEventKind
    detail: dict


class AuditLog:
    """JSON-lines audit sink. Each event detail may carry a ``transition``
    entry {"from": status, "to": status} when it effected a status change."""

    def __init__(self, path: str | Path, salt: str, clock: Callable[[], datetime]):
        self._path = Path(path)
        self._salt = salt
        self._clock = clock
        self._lock = threading.Lock()
        self._seq: dict[str, int] = {}
        if self._path.exists():
            for line in self._path.read_text("utf-8").splitlines():
                if not line.strip():
                    continue
                entry = json.loads(line)
                matter_id = entry["matter_id"]
                self._seq[matter_id] = max(self._seq.get(matter_id, 0), entry["seq"])

    @property
    def path(self) -> Path:
        return self._path

    def hash_name(self, name: str) -> str:
        return salted_name_hash(name, self._salt)

    def append(
        self,
        matter_id: str,
        event: AuditEventKind,
        detail: dict | None = None,
        transition: tuple[SessionStatus | None, SessionStatus] | None = None,
    ) -> int:
        """Persist one event and return its per-matter sequence number."""
        payload = dict(detail or {})
        payload["transition"] = (
            {
                "from": transition[0].value if transition[0] is not None else None,
                "to": transition[1].value,
            }
            if transition
            else None
        )
        with self._lock:
            seq = self._seq.get(matter_id, 0) + 1
            entry = {
                "seq": seq,
                "timestamp": self._clock().isoformat(),
                "matter_id": matter_id,
                "event": event.value,
                "detail": payload,
            }
            try:
                self._path.parent.mkdir(parents=True, exist_ok=True)
                with open(self._path, "a", encoding="utf-8") as f:
                    f.write(json.dumps(entry, sort_keys=True) + "\n")
                    f.flush()
            except OSError as exc:
                raise AuditUnavailable(f"audit write failed: {exc}") from exc
            self._seq[matter_id] = seq
        return seq

    def events(self, matter_id: str | None = None) -> list[AuditEvent]:
        """Read back persisted events, optionally filtered to one matter."""
        if not self._path.exists():
            return []
        out: list[AuditEvent] = []
        for line in self._path.read_text("utf-8").splitlines():
            if not line.strip():
                continue
            entry = json.loads(line)
            if matter_id is not None and entry["matter_id"] != matter_id:
                continue
            out.append(
                AuditEvent(
                    seq=entry["seq"],
                    timestamp=entry["timestamp"],
                    matter_id=entry["matter_id"],
                    event=AuditEventKind(entry["event"]),
                    detail=entry["detail"],
                )
            )
        return out

"""HTTP layer over the consultation pipeline.

Session tokens are opaque 256-bit values carried in the Authorization header;
they bind one caller to one matter, expire after idle time, and never reach
the audit log. Errors are returned as {"code", "message"}.

Endpoints:
    POST /clients
    POST /matters
    POST /matters/{id}/conflict-check?stage=preliminary|comprehensive
    POST /matters/{id}/documents
    GET  /matters/{id}/interview/next
    POST /matters/{id}/interview/answer
    POST /matters/{id}/research
    POST /matters/{id}/analysis
    GET  /matters/{id}/report?format=json|markdown|html
"""

from __future__ import annotations

import base64
import binascii
import secrets
from dataclasses import dataclass
from datetime import datetime

from fastapi import Depends, FastAPI, Header, Query, Request, Response
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .conflicts import CheckStage
from .domain import IssueCategory
from .errors import IllegalTransition, LicesError, NotFound, SessionExpired
from .interview import Done
from .pipeline import ConsultationPipeline

_STATUS_BY_CODE = {
    "NOT_FOUND": 404,
    "ILLEGAL_TRANSITION": 409,
    "WRONG_STATUS": 409,
    "SESSION_EXPIRED": 401,
    "SESSION_TERMINATED": 409,
    "UNKNOWN_JURISDICTION": 422,
    "UNSUPPORTED_FORMAT": 422,
    "TOO_LARGE": 413,
    "EMPTY_DOCUMENT": 422,
    "NO_SUCH_PENDING": 409,
    "ADAPTER_UNAVAILABLE": 503,
    "MALFORMED_RESPONSE": 502,
    "STORE_UNAVAILABLE": 503,
    "AUDIT_UNAVAILABLE": 503,
    "NO_QUERY_TERMS": 422,
    "NO_ELIGIBLE_PROVIDERS": 422,
    "MISSING_DISCLAIMER_CONFIG": 500,
    "INVALID_ANALYSIS": 502,
}


@dataclass
class Session:
    session_token: str
    matter_id: str
    created_at: datetime
    last_active: datetime


class SessionManager:
    def __init__(self, pipeline: ConsultationPipeline, idle_minutes: float):
        self._pipeline = pipeline
        self._idle_seconds = idle_minutes * 60.0
        self._sessions: dict[str, Session] = {}

    def create(self, matter_id: str) -> str:
        token = secrets.token_hex(32)
        now = self._pipeline.clock()
        self._sessions[token] = Session(token, matter_id, now, now)
        return token

    def validate(self, token: str | None, matter_id: str) -> Session:
        if not token:
            raise SessionExpired("missing session token")
        session = self._sessions.get(token)
        if session is None or session.matter_id != matter_id:
            raise SessionExpired("unknown session token for this matter")
        now = self._pipeline.clock()
        if (now - session.last_active).total_seconds() > self._idle_seconds:
            raise SessionExpired("session idle timeout exceeded")
        session.last_active = now
        return session


class ClientIn(BaseModel):
    name: str
    jurisdiction: str
    contact: str = ""
    opposing: list[str] = Field(default_factory=list)
    related: list[str] = Field(default_factory=list)


class MatterIn(BaseModel):
    client_id: str
    summary: str
    issue_categories: list[str] = Field(default_factory=lambda: ["mixed"])


class DocumentIn(BaseModel):
    filename: str
    content_base64: str


class DocumentsIn(BaseModel):
    documents: list[DocumentIn] = Field(default_factory=list)


class AnswerIn(BaseModel):
    question_id: str
    answer: str


def create_app(pipeline: ConsultationPipeline) -> FastAPI:
    app = FastAPI(title="lices", version="0.1.0")
    sessions = SessionManager(pipeline, pipeline.config.session_idle_minutes)
    app.state.pipeline = pipeline
    app.state.sessions = sessions

    @app.exception_handler(LicesError)
    async def lices_error_handler(request: Request, exc: LicesError) -> JSONResponse:
        status = _STATUS_BY_CODE.get(exc.code, 400)
        return JSONResponse(status_code=status, content={"code": exc.code, "message": exc.message})

    @app.exception_handler(ValueError)
    async def value_error_handler(request: Request, exc: ValueError) -> JSONResponse:
        return JSONResponse(status_code=422, content={"code": "INVALID_INPUT", "message": str(exc)})

    def bearer(authorization: str | None = Header(default=None)) -> str | None:
        if authorization and authorization.startswith("Bearer "):
            return authorization.removeprefix("Bearer ")
        return None

    def authorized(matter_id: str, token: str | None = Depends(bearer)) -> str:
        sessions.validate(token, matter_id)
        return matter_id

    @app.post("/clients", status_code=201)
    def create_client(body: ClientIn) -> dict:
        profile = pipeline.register_client(
            name=body.name,
            jurisdiction_code=body.jurisdiction,
            contact=body.contact,
            opposing=body.opposing,
            related=body.related,
        )
        return {"client_id": profile.client_id}

    @app.post("/matters", status_code=201)
    def create_matter(body: MatterIn) -> dict:
        categories = [IssueCategory(c) for c in body.issue_categories]
        matter = pipeline.create_matter(body.client_id, body.summary, categories)
        token = sessions.create(matter.matter_id)
        return {
            "matter_id": matter.matter_id,
            "session_token": token,
            "status": matter.status.value,
        }

    @app.post("/matters/{matter_id}/conflict-check")
    def conflict_check(
        matter_id: str = Depends(authorized),
        stage: str = Query(default="preliminary"),
    ) -> dict:
        try:
            check_stage = CheckStage(stage)
        except ValueError:
            raise IllegalTransition(f"unknown conflict stage {stage!r}")
        outcome = pipeline.conflict_check(matter_id, check_stage)
        status = pipeline.matters[matter_id].matter.status
        return {
            "stage": outcome.stage.value,
            "verdict": outcome.verdict.value,
            "hit_count": len(outcome.hits),
            "status": status.value,
        }

    @app.post("/matters/{matter_id}/documents")
    def upload_documents(body: DocumentsIn, matter_id: str = Depends(authorized)) -> dict:
        files: list[tuple[bytes, str]] = []
        for doc in body.documents:
            try:
                files.append((base64.b64decode(doc.content_base64, validate=True), doc.filename))
            except (binascii.Error, ValueError):
                raise ValueError(f"document {doc.filename!r} is not valid base64")
        ingested = pipeline.ingest_documents(matter_id, files)
        status = pipeline.matters[matter_id].matter.status
        return {
            "documents": [
                {"doc_id": d.doc_id, "filename": d.filename, "unextracted": d.unextracted}
                for d in ingested
            ],
            "status": status.value,
        }

    @app.get("/matters/{matter_id}/interview/next")
    def interview_next(matter_id: str = Depends(authorized)) -> dict:
        outcome = pipeline.interview_next(matter_id)
        status = pipeline.matters[matter_id].matter.status
        if isinstance(outcome, Done):
            return {"done": True, "reason": outcome.reason, "status": status.value}
        return {
            "done": False,
            "question": {"question_id": outcome.question_id, "text": outcome.text},
            "status": status.value,
        }

    @app.post("/matters/{matter_id}/interview/answer")
    def interview_answer(body: AnswerIn, matter_id: str = Depends(authorized)) -> dict:
        pipeline.interview_answer(matter_id, body.question_id, body.answer)
        status = pipeline.matters[matter_id].matter.status
        return {"recorded": True, "status": status.value}

    @app.post("/matters/{matter_id}/research")
    def research(matter_id: str = Depends(authorized)) -> dict:
        outcome, ranked = pipeline.run_research(matter_id)
        status = pipeline.matters[matter_id].matter.status
        return {
            "raw_results": len(outcome.results),
            "unique_authorities": len(ranked),
            "failures": [
                {"provider_id": f.provider_id.value, "reason": f.reason.value}
                for f in outcome.failures
            ],
            "wall_time": outcome.wall_time,
            "status": status.value,
        }

    @app.post("/matters/{matter_id}/analysis")
    def analysis(matter_id: str = Depends(authorized)) -> dict:
        result = pipeline.run_analysis(matter_id)
        status = pipeline.matters[matter_id].matter.status
        return {
            "material_facts": len(result.material_facts),
            "legal_issues": len(result.legal_issues),
            "status": status.value,
        }

    _MEDIA_TYPES = {
        "json": "application/json",
        "markdown": "text/markdown; charset=utf-8",
        "html": "text/html; charset=utf-8",
    }

    @app.get("/matters/{matter_id}/report")
    def report(
        matter_id: str = Depends(authorized),
        format: str = Query(default="json"),
    ) -> Response:
        rendered = pipeline.generate_report(matter_id, format)
        return Response(content=rendered, media_type=_MEDIA_TYPES.get(format, "application/json"))

    @app.get("/matters/{matter_id}/status")
    def matter_status(matter_id: str = Depends(authorized)) -> dict:
        record = pipeline.matters.get(matter_id)
        if record is None:
            raise NotFound(f"no such matter {matter_id!r}")
        return {"matter_id": matter_id, "status": record.matter.status.value}

    return app

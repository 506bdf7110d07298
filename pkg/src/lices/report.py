"""Final report assembly and rendering.

Five sections in fixed order: Material Facts, Legal Issues, Case Law &
Precedents, Recommended Actions, Disclaimer. The disclaimer text comes from
configuration, must be present, and always closes the document. Citation
hints that fail verification are surfaced in an "Unverified References"
subsection rather than dropped.
"""

from __future__ import annotations

import html as _html
import json
from dataclasses import dataclass
from datetime import datetime
from typing import Sequence

from .consolidation import Authority, CitationKey, KeyKind, Provenance
from .errors import InvalidAnalysis, MissingDisclaimerConfig, UnsupportedReportFormat
from .federation import ProviderFailure, ProviderId, FailureReason
from .llm import CitationVerifier, StructuredAnalysis, verify_citations

REPORT_FORMATS = ("json", "markdown", "html")


@dataclass(frozen=True)
class AnalysisReport:
    matter_id: str
    material_facts: tuple[str, ...]
    legal_issues: tuple[str, ...]
    authorities: tuple[Authority, ...]
    recommended_actions: tuple[str, ...]
    disclaimer: str
    provider_failures: tuple[ProviderFailure, ...]
    unverified_references: tuple[str, ...]
    generated_at: str  # ISO timestamp


def assemble_report(
    analysis: StructuredAnalysis,
    ranked: Sequence[Authority],
    failures: Sequence[ProviderFailure],
    matter_id: str,
    disclaimer: str | None,
    generated_at: datetime,
    verifier: CitationVerifier | None = None,
) -> AnalysisReport:
    """Combine the structured analysis with the ranked authorities.

    Authority hints are resolved against the consolidated list; whatever does
    not resolve is kept visible as an unverified reference.
    """
    if not disclaimer or not disclaimer.strip():
        raise MissingDisclaimerConfig("no disclaimer text configured")
    if not analysis.legal_issues:
        raise InvalidAnalysis("analysis carries no legal issues")
    resolutions = verify_citations(analysis, ranked, verifier)
    unverified = tuple(r.hint for r in resolutions if r.authority_id is None)
    return AnalysisReport(
        matter_id=matter_id,
        material_facts=tuple(analysis.material_facts),
        legal_issues=tuple(analysis.legal_issues),
        authorities=tuple(ranked),
        recommended_actions=tuple(analysis.recommended_actions),
        disclaimer=disclaimer,
        provider_failures=tuple(failures),
        unverified_references=unverified,
        generated_at=generated_at.isoformat(),
    )


def _authority_dict(a: Authority) -> dict:
    return {
        "authority_id": a.authority_id,
        "canonical_key": {"kind": a.canonical_key.kind.value, "key": a.canonical_key.key},
        "title": a.title,
        "court": a.court,
        "jurisdiction": a.jurisdiction,
        "date": a.date,
        "headnote": a.headnote,
        "provenance": [
            {"provider_id": p.provider_id.value, "doc_id": p.doc_id, "url": p.url}
            for p in a.provenance
        ],
        "relevance": round(a.relevance, 9),
    }


def report_to_dict(r: AnalysisReport) -> dict:
    return {
        "matter_id": r.matter_id,
        "generated_at": r.generated_at,
        "material_facts": list(r.material_facts),
        "legal_issues": list(r.legal_issues),
        "authorities": [_authority_dict(a) for a in r.authorities],
        "recommended_actions": list(r.recommended_actions),
        "unverified_references": list(r.unverified_references),
        "provider_failures": [
            {"provider_id": f.provider_id.value, "reason": f.reason.value}
            for f in r.provider_failures
        ],
        "disclaimer": r.disclaimer,
    }


def report_from_dict(payload: dict) -> AnalysisReport:
    authorities = []
    for raw in payload["authorities"]:
        authorities.append(
            Authority(
                authority_id=raw["authority_id"],
                canonical_key=CitationKey(
                    kind=KeyKind(raw["canonical_key"]["kind"]), key=raw["canonical_key"]["key"]
                ),
                title=raw["title"],
                court=raw["court"],
                jurisdiction=raw["jurisdiction"],
                date=raw["date"],
                headnote=raw["headnote"],
                provenance=tuple(
                    Provenance(ProviderId(p["provider_id"]), p["doc_id"], p["url"])
                    for p in raw["provenance"]
                ),
                relevance=raw["relevance"],
            )
        )
    return AnalysisReport(
        matter_id=payload["matter_id"],
        material_facts=tuple(payload["material_facts"]),
        legal_issues=tuple(payload["legal_issues"]),
        authorities=tuple(authorities),
        recommended_actions=tuple(payload["recommended_actions"]),
        disclaimer=payload["disclaimer"],
        provider_failures=tuple(
            ProviderFailure(ProviderId(f["provider_id"]), FailureReason(f["reason"]))
            for f in payload["provider_failures"]
        ),
        unverified_references=tuple(payload["unverified_references"]),
        generated_at=payload["generated_at"],
    )


def _render_json(r: AnalysisReport) -> bytes:
    return (json.dumps(report_to_dict(r), indent=2, sort_keys=True, ensure_ascii=False) + "\n").encode(
        "utf-8"
    )


def _bullets(items: Sequence[str]) -> list[str]:
    return [f"- {item}" for item in items] if items else ["- none identified"]


def _render_markdown(r: AnalysisReport) -> bytes:
    lines: list[str] = [
        "# Consultation Analysis Report",
        "",
        f"Matter: {r.matter_id}",
        f"Generated: {r.generated_at}",
        "",
        "## Material Facts",
        *_bullets(r.material_facts),
        "",
        "## Legal Issues",
        *_bullets(r.legal_issues),
        "",
        "## Case Law & Precedents",
    ]
    if r.authorities:
        for i, a in enumerate(r.authorities, start=1):
            sources = ", ".join(f"{p.provider_id.value}/{p.doc_id}" for p in a.provenance)
            meta = ", ".join(x for x in (a.court, a.date) if x)
            lines.append(
                f"{i}. {a.title} — {a.canonical_key.key} ({meta}) [relevance {a.relevance:.3f}]"
            )
            lines.append(f"   sources: {sources}")
    else:
        lines.append("- none identified")
    if r.unverified_references:
        lines.extend(["", "### Unverified References"])
        lines.extend(f"- {hint}" for hint in r.unverified_references)
    if r.provider_failures:
        lines.extend(["", "### Provider Failures"])
        lines.extend(
            f"- {f.provider_id.value}: {f.reason.value}" for f in r.provider_failures
        )
    lines.extend(
        [
            "",
            "## Recommended Actions",
            *_bullets(r.recommended_actions),
            "",
            "## Disclaimer",
            r.disclaimer,
            "",
        ]
    )
    return "\n".join(lines).encode("utf-8")


def _render_html(r: AnalysisReport) -> bytes:
    def items(values: Sequence[str]) -> str:
        if not values:
            return "<li>none identified</li>"
        return "".join(f"<li>{_html.escape(v)}</li>" for v in values)

    authority_items = []
    for a in r.authorities:
        sources = ", ".join(f"{p.provider_id.value}/{p.doc_id}" for p in a.provenance)
        meta = ", ".join(x for x in (a.court, a.date) if x)
        authority_items.append(
            f"<li>{_html.escape(a.title)} &mdash; {_html.escape(a.canonical_key.key)}"
            f" ({_html.escape(meta)}) [relevance {a.relevance:.3f}]<br>"
            f"<small>sources: {_html.escape(sources)}</small></li>"
        )
    unverified = (
        "<h3>Unverified References</h3><ul>" + items(r.unverified_references) + "</ul>"
        if r.unverified_references
        else ""
    )
    failures = (
        "<h3>Provider Failures</h3><ul>"
        + "".join(
            f"<li>{_html.escape(f.provider_id.value)}: {_html.escape(f.reason.value)}</li>"
            for f in r.provider_failures
        )
        + "</ul>"
        if r.provider_failures
        else ""
    )
    body = (
        f"<h1>Consultation Analysis Report</h1>"
        f"<p>Matter: {_html.escape(r.matter_id)}<br>Generated: {_html.escape(r.generated_at)}</p>"
        f"<h2>Material Facts</h2><ul>{items(r.material_facts)}</ul>"
        f"<h2>Legal Issues</h2><ul>{items(r.legal_issues)}</ul>"
        f"<h2>Case Law &amp; Precedents</h2><ol>"
        + ("".join(authority_items) or "<li>none identified</li>")
        + "</ol>"
        + unverified
        + failures
        + f"<h2>Recommended Actions</h2><ul>{items(r.recommended_actions)}</ul>"
        f"<h2>Disclaimer</h2><p>{_html.escape(r.disclaimer)}</p>"
    )
    doc = (
        "<!doctype html><html><head><meta charset=\"utf-8\">"
        "<title>Consultation Analysis Report</title></head><body>"
        f"{body}</body></html>"
    )
    return doc.encode("utf-8")


def render_report(r: AnalysisReport, fmt: str) -> bytes:
    """Render to json (canonical), markdown, or html; anything else is refused."""
    if fmt == "json":
        return _render_json(r)
    if fmt == "markdown":
        return _render_markdown(r)
    if fmt == "html":
        return _render_html(r)
    raise UnsupportedReportFormat(f"format {fmt!r} not supported (use {', '.join(REPORT_FORMATS)})")

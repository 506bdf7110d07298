from __future__ import annotations

from datetime import datetime, timezone

import pytest

from lices.consolidation import Authority, CitationKey, KeyKind, Provenance
from lices.errors import (
    InvalidAnalysis,
    MissingDisclaimerConfig,
    UnsupportedReportFormat,
)
from lices.federation import FailureReason, ProviderFailure, ProviderId
from lices.llm import StructuredAnalysis
from lices.report import assemble_report, render_report, report_from_dict
import json

GENERATED = datetime(2026, 1, 15, 9, 0, 30, tzinfo=timezone.utc)
DISCLAIMER = "This is not legal advice. Consult a qualified lawyer."


def _authority(n: int = 5) -> list[Authority]:
    return [
        Authority(
            authority_id=f"auth-{i}",
            canonical_key=CitationKey(KeyKind.NEUTRAL, f"scc:2015:{i}"),
            title=f"Case {i} v. Other",
            court="scc",
            jurisdiction="CA",
            date="2015-01-01",
            headnote="h",
            provenance=(Provenance(ProviderId.SCC, f"d{i}", "https://x"),),
            relevance=1.0 - i / 10,
        )
        for i in range(1, n + 1)
    ]


def _analysis(hints=()) -> StructuredAnalysis:
    return StructuredAnalysis(
        material_facts=("fact one", "fact two"),
        legal_issues=("issue one",),
        authority_hints=tuple(hints),
        recommended_actions=("do a thing",),
    )


def _report(hints=(), failures=(), authorities=None):
    return assemble_report(
        _analysis(hints),
        authorities if authorities is not None else _authority(),
        failures,
        "matter-1",
        DISCLAIMER,
        GENERATED,
    )


class TestAssemble:
    def test_valid_assembly(self):
        report = _report()
        assert len(report.authorities) == 5
        assert report.disclaimer == DISCLAIMER
        assert report.generated_at == GENERATED.isoformat()

    def test_missing_disclaimer_rejected(self):
        with pytest.raises(MissingDisclaimerConfig):
            assemble_report(_analysis(), _authority(), (), "m", "", GENERATED)
        with pytest.raises(MissingDisclaimerConfig):
            assemble_report(_analysis(), _authority(), (), "m", None, GENERATED)

    def test_unresolved_hint_is_surfaced_not_dropped(self):
        report = _report(hints=("2015 SCC 1", "9999 ZZZ 1"))
        assert report.unverified_references == ("9999 ZZZ 1",)

    def test_invalid_analysis_rejected(self):
        bad = StructuredAnalysis.__new__(StructuredAnalysis)
        object.__setattr__(bad, "material_facts", ())
        object.__setattr__(bad, "legal_issues", ())
        object.__setattr__(bad, "authority_hints", ())
        object.__setattr__(bad, "recommended_actions", ())
        with pytest.raises(InvalidAnalysis):
            assemble_report(bad, _authority(), (), "m", DISCLAIMER, GENERATED)


class TestRender:
    def test_json_round_trip_identity(self):
        report = _report(hints=("9999 ZZZ 1",), failures=(ProviderFailure(ProviderId.CANLII, FailureReason.TIMEOUT),))
        rendered = render_report(report, "json")
        parsed = report_from_dict(json.loads(rendered.decode("utf-8")))
        assert parsed == report
        assert render_report(parsed, "json") == rendered

    def test_markdown_sections_in_fixed_order_disclaimer_last(self):
        report = _report(failures=(ProviderFailure(ProviderId.CANLII, FailureReason.TIMEOUT),))
        text = render_report(report, "markdown").decode("utf-8")
        positions = [
            text.index("## Material Facts"),
            text.index("## Legal Issues"),
            text.index("## Case Law & Precedents"),
            text.index("## Recommended Actions"),
            text.index("## Disclaimer"),
        ]
        assert positions == sorted(positions)
        # disclaimer text is verbatim and final
        tail = text[text.index("## Disclaimer") :]
        assert DISCLAIMER in tail
        assert text.rstrip().endswith(DISCLAIMER)
        # failures surfaced before the disclaimer
        assert text.index("### Provider Failures") < positions[-1]

    def test_html_contains_sections_and_disclaimer(self):
        text = render_report(_report(), "html").decode("utf-8")
        for heading in ("Material Facts", "Legal Issues", "Recommended Actions", "Disclaimer"):
            assert heading in text
        assert DISCLAIMER in text
        assert text.index("Disclaimer") < text.index(DISCLAIMER)

    def test_pdf_is_unsupported(self):
        with pytest.raises(UnsupportedReportFormat):
            render_report(_report(), "pdf")

    def test_rendering_deterministic(self):
        report = _report()
        assert render_report(report, "markdown") == render_report(report, "markdown")
        assert render_report(report, "html") == render_report(report, "html")

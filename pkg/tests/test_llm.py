from __future__ import annotations

import json

import httpx
import pytest

from lices.consolidation import Authority, CitationKey, KeyKind, Provenance
from lices.domain import Jurisdiction
from lices.errors import AdapterUnavailable, MalformedResponse
from lices.federation import ProviderId
from lices.llm import (
    HttpLlmAdapter,
    LlmContext,
    QuestionBatch,
    Question,
    ScriptedStubAdapter,
    StructuredAnalysis,
    verify_citations,
)

from conftest import FIXTURES


def _ctx(history=()) -> LlmContext:
    return LlmContext(
        matter_summary="lease dispute",
        document_texts=("a lease letter",),
        qa_history=tuple(history),
        jurisdiction=Jurisdiction("CA", "ON"),
    )


def _script(steps: int = 3, per_step: int = 2) -> dict:
    return {
        "steps": [
            {
                "questions": [
                    {"id": f"q{s}-{i}", "text": f"Question number {s * per_step + i}?"}
                    for i in range(per_step)
                ]
            }
            for s in range(steps)
        ],
        "analysis": {
            "material_facts": ["f1"],
            "legal_issues": ["i1"],
            "authority_hints": [],
            "recommended_actions": [],
        },
    }


class TestScriptedStub:
    def test_empty_history_returns_first_step_verbatim(self):
        stub = ScriptedStubAdapter(_script())
        batch = stub.generate_questions(_ctx())
        assert [q.question_id for q in batch.questions] == ["q0-0", "q0-1"]
        assert not batch.done

    def test_exhausted_script_returns_done(self):
        stub = ScriptedStubAdapter(_script(steps=1, per_step=1))
        batch = stub.generate_questions(_ctx([("Question number 0?", "answered")]))
        assert batch.done
        assert batch.questions == ()

    def test_three_steps_of_two_yield_exactly_six_questions(self):
        stub = ScriptedStubAdapter(_script(steps=3, per_step=2))
        history: list[tuple[str, str]] = []
        asked = []
        while True:
            batch = stub.generate_questions(_ctx(history))
            if batch.done:
                break
            fresh = [q for q in batch.questions if q.text not in {q_ for q_, _ in history}]
            assert fresh, "stub repeated a fully-answered step"
            question = fresh[0]
            asked.append(question.question_id)
            history.append((question.text, "some answer"))
        assert len(asked) == 6

    def test_done_is_absorbing_under_history_extension(self):
        stub = ScriptedStubAdapter(_script(steps=1, per_step=1))
        history = [("Question number 0?", "a")]
        assert stub.generate_questions(_ctx(history)).done
        extended = history + [("Anything else?", "no")]
        assert stub.generate_questions(_ctx(extended)).done

    def test_stub_is_deterministic(self):
        stub = ScriptedStubAdapter.from_file(FIXTURES / "scenarios" / "clean" / "stub_script.json")
        ctx = _ctx([("When did the lease begin?", "March 2021")])
        first = stub.generate_questions(ctx)
        second = stub.generate_questions(ctx)
        assert first == second
        assert stub.analyze_matter(ctx, []) == stub.analyze_matter(ctx, [])

    def test_fixture_analysis_shape(self):
        stub = ScriptedStubAdapter.from_file(FIXTURES / "scenarios" / "clean" / "stub_script.json")
        analysis = stub.analyze_matter(_ctx(), [])
        assert len(analysis.material_facts) == 4
        assert len(analysis.legal_issues) == 2

    def test_analysis_missing_legal_issues_is_malformed(self):
        script = _script()
        script["analysis"]["legal_issues"] = []
        stub = ScriptedStubAdapter(script)
        with pytest.raises(MalformedResponse):
            stub.analyze_matter(_ctx(), [])

    def test_batch_size_gate(self):
        with pytest.raises(MalformedResponse):
            QuestionBatch(questions=tuple(Question(f"q{i}", f"t{i}?") for i in range(6)))
        with pytest.raises(MalformedResponse):
            QuestionBatch(questions=(), done=False)
        with pytest.raises(MalformedResponse):
            QuestionBatch(questions=(Question("q", "t?"),), done=True)


def _authority(key: str, kind: KeyKind = KeyKind.NEUTRAL, aid: str = "auth-1") -> Authority:
    return Authority(
        authority_id=aid,
        canonical_key=CitationKey(kind=kind, key=key),
        title="T v. U",
        court="scc",
        jurisdiction="CA",
        date="2015-01-01",
        headnote="",
        provenance=(Provenance(ProviderId.SCC, "d1", None),),
    )


class TestVerifyCitations:
    def _analysis(self, hints) -> StructuredAnalysis:
        return StructuredAnalysis(
            material_facts=(),
            legal_issues=("issue",),
            authority_hints=tuple(hints),
            recommended_actions=(),
        )

    def test_key_equality_resolves(self):
        resolved = verify_citations(self._analysis(["2015 SCC 5"]), [_authority("scc:2015:5")])
        assert resolved[0].authority_id == "auth-1"

    def test_absent_key_unresolved(self):
        resolved = verify_citations(self._analysis(["9999 ZZZ 1"]), [_authority("scc:2015:5")])
        assert resolved[0].authority_id is None

    def test_fixture_ten_hints_eight_planted(self):
        authorities = [_authority(f"scc:2015:{n}", aid=f"auth-{n}") for n in range(1, 9)]
        hints = [f"2015 SCC {n}" for n in range(1, 9)] + ["2015 ZZZQ 1", "2016 YYYQ 2"]
        resolved = verify_citations(self._analysis(hints), authorities)
        assert sum(1 for r in resolved if r.authority_id is not None) == 8
        assert sum(1 for r in resolved if r.authority_id is None) == 2


class TestSecondaryVerifier:
    class _FixVerifier:
        """Scripted verifier: strips periods out of court abbreviations."""

        def __init__(self):
            self.calls: list[str] = []

        def suggest_citation(self, hint: str) -> str | None:
            self.calls.append(hint)
            cleaned = hint.replace(".", "")
            return cleaned if cleaned != hint else None

    def _analysis(self, hints) -> StructuredAnalysis:
        return StructuredAnalysis(
            material_facts=(), legal_issues=("i",),
            authority_hints=tuple(hints), recommended_actions=(),
        )

    def test_verifier_rescues_malformed_citation(self):
        verifier = self._FixVerifier()
        resolved = verify_citations(
            self._analysis(["2015 S.C.C. 5"]), [_authority("scc:2015:5")], verifier
        )
        assert resolved[0].authority_id == "auth-1"
        assert verifier.calls == ["2015 S.C.C. 5"]

    def test_verifier_cannot_invent_resolutions(self):
        verifier = self._FixVerifier()
        resolved = verify_citations(
            self._analysis(["9999 Z.Z.Z. 1"]), [_authority("scc:2015:5")], verifier
        )
        assert resolved[0].authority_id is None

    def test_verifier_not_consulted_for_clean_hits(self):
        verifier = self._FixVerifier()
        verify_citations(self._analysis(["2015 SCC 5"]), [_authority("scc:2015:5")], verifier)
        assert verifier.calls == []

    def test_default_off_leaves_malformed_unresolved(self):
        resolved = verify_citations(self._analysis(["2015 S.C.C. 5"]), [_authority("scc:2015:5")])
        assert resolved[0].authority_id is None

    def test_http_verifier_round_trip(self):
        from lices.llm import HttpCitationVerifier

        def handler(request: httpx.Request) -> httpx.Response:
            body = json.loads(request.content)
            assert body["task"] == "verify_citation"
            return httpx.Response(200, json={"citation": body["hint"].replace(".", "")})

        verifier = HttpCitationVerifier(
            "https://llm.example/api",
            model="verifier-model",
            client=httpx.Client(transport=httpx.MockTransport(handler)),
        )
        assert verifier.suggest_citation("2015 S.C.C. 5") == "2015 SCC 5"


class TestHttpAdapter:
    def _adapter(self, handler) -> HttpLlmAdapter:
        client = httpx.Client(transport=httpx.MockTransport(handler), timeout=5.0)
        return HttpLlmAdapter("https://llm.example/api", model="test-model", client=client)

    def test_questions_round_trip(self):
        def handler(request: httpx.Request) -> httpx.Response:
            body = json.loads(request.content)
            assert body["task"] == "questions"
            assert request.headers["Authorization"].startswith("Bearer")
            return httpx.Response(
                200, json={"questions": [{"id": "q1", "text": "What happened?"}]}
            )

        batch = self._adapter(handler).generate_questions(_ctx())
        assert batch.questions[0].text == "What happened?"

    def test_done_flag(self):
        adapter = self._adapter(lambda req: httpx.Response(200, json={"done": True}))
        assert adapter.generate_questions(_ctx()).done

    def test_5xx_is_unavailable(self):
        adapter = self._adapter(lambda req: httpx.Response(503))
        with pytest.raises(AdapterUnavailable):
            adapter.generate_questions(_ctx())

    def test_missing_questions_is_malformed(self):
        adapter = self._adapter(lambda req: httpx.Response(200, json={"nope": 1}))
        with pytest.raises(MalformedResponse):
            adapter.generate_questions(_ctx())

    def test_analysis_missing_section_is_malformed(self):
        adapter = self._adapter(
            lambda req: httpx.Response(200, json={"material_facts": ["f"], "legal_issues": []})
        )
        with pytest.raises(MalformedResponse):
            adapter.analyze_matter(_ctx(), [])

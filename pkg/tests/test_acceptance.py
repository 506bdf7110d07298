"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -s` to see the per-criterion lines.
"""

from __future__ import annotations

import json
import random
from dataclasses import replace
from datetime import date

import pytest

from lices.audit import AuditEventKind, AuditLog
from lices.cli import FixtureClock, main as lices_main
from lices.config import load_config
from lices.conflicts import (
    CheckStage,
    ConflictRecord,
    ConflictSide,
    ConflictStore,
    Verdict,
    comprehensive_check,
    name_similarity,
    normalize_text,
)
from lices.consolidation import (
    Authority,
    CitationKey,
    KeyKind,
    Provenance,
    deduplicate,
    relevance_score,
)
from lices.domain import IssueCategory, Party, PartyRole, SessionStatus, parse_jurisdiction
from lices.errors import LicesError
from lices.federation import (
    Dialect,
    GenericQuery,
    ProviderDescriptor,
    ProviderId,
    QueryPlan,
    RawResult,
    build_query_plan,
    execute_plan,
    translate_query,
)
from lices.interview import Done, next_question, record_answer, start_interview
from lices.llm import ScriptedStubAdapter
from lices.pipeline import ConsultationPipeline, counter_ids
from lices.providers import SearchSimulator, SimBehavior, load_corpus

from conftest import CLOCK_START, FIXTURES, GOLDEN
from test_consolidation import oracle_group_keys

VERDICT_RANK = {Verdict.CLEAR: 0, Verdict.POTENTIAL_CONFLICT: 1, Verdict.CONFLICT: 2}


def _ok(n: int, text: str) -> None:
    print(f"PASS criterion {n}: {text}", flush=True)


# -- criterion 1: parallel fan-out timing (scaled latencies) ---------------


def test_criterion_1_parallel_fanout_timing():
    corpus = load_corpus(FIXTURES / "corpus" / "corpus.jsonl")
    latencies = {
        ProviderId.LEXISNEXIS_SIM: 0.32,
        ProviderId.WESTLAW_SIM: 0.28,
        ProviderId.CANLII: 0.11,
    }
    registry = {
        pid: SearchSimulator(pid, corpus, SimBehavior(latency=lat))
        for pid, lat in latencies.items()
    }
    query = GenericQuery(
        terms=("lease", "tenant"),
        jurisdiction=parse_jurisdiction("CA-ON"),
        issue_category=IssueCategory.CASE_LAW,
    )
    plan = QueryPlan(
        entries=tuple(
            (
                ProviderDescriptor(pid, tier=1, dialect=Dialect.SIM_BOOLEAN, timeout=5.0),
                translate_query(query, Dialect.SIM_BOOLEAN),
            )
            for pid in latencies
        )
    )
    walls = []
    for _ in range(20):
        outcome = execute_plan(plan, registry)
        assert not outcome.failures
        walls.append(outcome.wall_time)
    assert all(0.32 < w < 0.47 for w in walls), walls
    _ok(1, f"20 runs, wall time in (0.32, 0.47) s; min={min(walls):.3f} max={max(walls):.3f}")


# -- criterion 2: dedup oracle equivalence on the shipped corpus -----------


def test_criterion_2_dedup_oracle_equivalence():
    rows = [
        json.loads(line)
        for line in (FIXTURES / "corpus" / "corpus.jsonl").read_text("utf-8").splitlines()
        if line.strip()
    ]
    assert len(rows) == 500
    results = [
        RawResult(
            provider_id=ProviderId(r["provider_id"]),
            doc_id=r["doc_id"],
            title=r["title"],
            citation_string=r["citation_string"],
            court=r["court"],
            jurisdiction=r["jurisdiction"],
            date=r["date"],
            headnote=r["headnote"],
            url=r["url"],
        )
        for r in rows
    ]
    merged = deduplicate(results)
    oracle = oracle_group_keys(results)
    assert {a.canonical_key.key for a in merged} == set(oracle), "key-set mismatch vs oracle"
    ground_truth = json.loads((FIXTURES / "corpus" / "ground_truth.json").read_text("utf-8"))
    assert len(merged) == ground_truth["unique_authorities"]
    _ok(2, f"dedup key set equals O(n^2) oracle; unique={len(merged)} matches ground truth")


# -- criteria 3 and 4: conflict protocol safety and monotonicity -----------

PARTY_TOKENS = ["Zephyr", "Juniper", "Callisto", "Peregrine", "Thistle", "Bramble", "Wren", "Alder"]
DB_TOKENS = ["Umber", "Quartz", "Pemberton", "Oakhurst", "Sterling", "Whitmore", "Marlowe", "Hollis"]

SAFETY_STUB = ScriptedStubAdapter(
    {
        "steps": [
            {"questions": [{"id": "q1", "text": "Describe the events in order, please?"}]},
            {"questions": [{"id": "q2", "text": "What outcome are you hoping to achieve?"}]},
        ],
        "analysis": {
            "material_facts": ["facts recorded"],
            "legal_issues": ["issue identified"],
            "authority_hints": [],
            "recommended_actions": ["next steps listed"],
        },
    }
)


def _rand_name(rng: random.Random, pool: list[str]) -> str:
    return " ".join(rng.sample(pool, 2))


def _scenario_pipeline(tmp_path, index: int, store: ConflictStore, config, registry, routing):
    audit = AuditLog(tmp_path / f"audit-{index}.jsonl", "acceptance-salt", FixtureClock(CLOCK_START))
    return ConsultationPipeline(
        config, store, SAFETY_STUB, registry, routing, audit,
        clock=FixtureClock(CLOCK_START), ids=counter_ids(),
    )


def test_criterion_3_conflict_protocol_safety(tmp_path):
    rng = random.Random(2026)
    config = load_config(FIXTURES / "config.json")
    config.data_dir = str(tmp_path / "data")
    registry = config.build_registry()
    routing = config.routing_table()

    terminated = 0
    for index in range(200):
        planted = index % 2 == 0
        client_name = _rand_name(rng, PARTY_TOKENS)
        opposing = _rand_name(rng, PARTY_TOKENS)
        records = [
            ConflictRecord(f"r{i}", f"m{i}", _rand_name(rng, DB_TOKENS), ConflictSide.ADVERSE)
            for i in range(rng.randint(1, 8))
        ]
        plant_in_document = planted and rng.random() < 0.5
        doc_party = f"{rng.choice(PARTY_TOKENS)} {rng.choice(['Holdings', 'Freight', 'Partners'])}"
        if planted:
            target = doc_party if plant_in_document else rng.choice([client_name, opposing])
            records.append(
                ConflictRecord("planted", "mp", target.upper(), ConflictSide.ADVERSE)
            )
        store = ConflictStore(records)
        pipeline = _scenario_pipeline(tmp_path, index, store, config, registry, routing)

        profile = pipeline.register_client(client_name, "CA-ON", opposing=[opposing])
        matter = pipeline.create_matter(
            profile.client_id, "lease dispute concerning rent and eviction", [IssueCategory.CASE_LAW]
        )
        outcome = pipeline.conflict_check(matter.matter_id, CheckStage.PRELIMINARY)
        if outcome.verdict is not Verdict.CLEAR:
            assert planted and not plant_in_document
        else:
            letter = (
                f"This agreement is between {client_name} and {doc_party}.\n"
                "It concerns the lease, the rent, and the eviction notice."
            )
            pipeline.ingest_documents(matter.matter_id, [(letter.encode("utf-8"), "letter.txt")])
            while True:
                step = pipeline.interview_next(matter.matter_id)
                if isinstance(step, Done):
                    break
                pipeline.interview_answer(matter.matter_id, step.question_id, "noted")
            outcome = pipeline.conflict_check(matter.matter_id, CheckStage.COMPREHENSIVE)

        record = pipeline.matters[matter.matter_id]
        if planted:
            # terminated at or before the comprehensive check
            assert record.matter.status is SessionStatus.TERMINATED_CONFLICT
            terminated += 1
            # exact-match recall: the planted record is a similarity-1.0 hit
            # (it may also be hit by other parties at lower similarity)
            assert any(
                h.record.record_id == "planted" and h.similarity == 1.0 for h in outcome.hits
            )
            # audit records the termination
            kinds = [e.event for e in pipeline.audit.events(matter.matter_id)]
            assert AuditEventKind.CONFLICT_TERMINATED in kinds
            # connector counters stay untouched by any later call
            before = {pid: sim.call_count for pid, sim in registry.items()}
            with pytest.raises(LicesError):
                pipeline.run_research(matter.matter_id)
            after = {pid: sim.call_count for pid, sim in registry.items()}
            assert before == after
        else:
            assert record.matter.status is not SessionStatus.TERMINATED_CONFLICT
            pipeline.run_research(matter.matter_id)
            pipeline.run_analysis(matter.matter_id)
            pipeline.generate_report(matter.matter_id, "json")
            assert record.matter.status is SessionStatus.REPORT_READY
    assert terminated == 100
    _ok(3, "200 seeded scenarios: 100/100 planted conflicts terminated, recall 1.0, "
           "no connector calls after termination")


def test_criterion_4_conflict_monotonicity():
    rng = random.Random(77)
    pool = PARTY_TOKENS + DB_TOKENS
    violations = 0
    for _ in range(100):
        records = [
            ConflictRecord(f"r{i}", f"m{i}", _rand_name(rng, pool), ConflictSide.ADVERSE)
            for i in range(rng.randint(1, 6))
        ]
        store = ConflictStore(records)
        base = [Party(_rand_name(rng, pool), PartyRole.CLIENT)]
        base += [Party(_rand_name(rng, pool), PartyRole.OPPOSING) for _ in range(rng.randint(0, 2))]
        extra = [Party(_rand_name(rng, pool), PartyRole.RELATED) for _ in range(rng.randint(0, 3))]
        prelim = comprehensive_check(base, store)
        comp = comprehensive_check(base + extra, store)
        if VERDICT_RANK[comp.verdict] < VERDICT_RANK[prelim.verdict]:
            violations += 1
    assert violations == 0
    _ok(4, "100 random (party set, db) pairs: superset verdict never weaker; 0 violations")


# -- criterion 5: interview anti-repetition ---------------------------------


def _random_script(rng: random.Random) -> dict:
    topics = [
        "the timeline of events", "payments made so far", "written agreements",
        "witnesses who were present", "prior disputes", "notices received",
        "repairs requested", "communications with the other side",
    ]
    steps = []
    asked: list[str] = []
    for _ in range(rng.randint(2, 6)):
        questions = []
        for _ in range(rng.randint(1, 3)):
            if asked and rng.random() < 0.4:
                base = rng.choice(asked)
                variant = rng.choice([base, base.rstrip("?") + "?", base.upper(), base + "  "])
                questions.append(variant)  # adversarial: repeats and near-repeats
            else:
                topic = rng.choice(topics)
                question = f"Can you tell me about {topic}?"
                questions.append(question)
                asked.append(question)
        steps.append(
            {"questions": [{"id": f"q{len(steps)}-{i}", "text": t} for i, t in enumerate(questions)]}
        )
    return {
        "steps": steps,
        "analysis": {"material_facts": [], "legal_issues": ["i"], "authority_hints": [],
                     "recommended_actions": []},
    }


def test_criterion_5_interview_anti_repetition():
    from lices.domain import ClientProfile, Jurisdiction, Matter

    rng = random.Random(31)
    for session in range(100):
        stub = ScriptedStubAdapter(_random_script(rng))
        client = ClientProfile(
            client_id="c", parties=(Party("Client Name", PartyRole.CLIENT),),
            jurisdiction=Jurisdiction("CA", "ON"),
        )
        matter = Matter(
            matter_id=f"m{session}", client=client, summary="s",
            issue_categories=(IssueCategory.CASE_LAW,),
            status=SessionStatus.DOCUMENTS_COLLECTED,
        )
        state = start_interview(matter, [], max_rounds=12)
        rounds = 0
        while True:
            state, out = next_question(state, stub)
            if isinstance(out, Done):
                break
            rounds += 1
            assert rounds <= 12, "session exceeded max_rounds"
            state = record_answer(state, out.question_id, "answered")
        questions = [normalize_text(e.question) for e in state.qa_history]
        for i, a in enumerate(questions):
            for b in questions[i + 1 :]:
                assert name_similarity(a, b) < 0.9, (a, b)
    _ok(5, "100 scripted sessions incl. adversarial repeats: no near-duplicate questions, "
           "all within the round cap")


# -- criterion 6: routing table conformance ----------------------------------


def test_criterion_6_routing_conformance():
    config = load_config(FIXTURES / "config.json")
    routing = config.routing_table()
    cases = [
        ("CA-ON", IssueCategory.CASE_LAW),
        ("CA", IssueCategory.CASE_LAW),
        ("CA-BC", IssueCategory.CASE_LAW),
    ]
    for code, category in cases:
        plan = build_query_plan(
            GenericQuery(terms=("lease",), jurisdiction=parse_jurisdiction(code),
                         issue_category=category),
            routing,
        )
        assert plan.provider_ids()[0] is ProviderId.CANLII, f"{code} plan: {plan.provider_ids()}"

    ca_only = {ProviderId.CANLII, ProviderId.JUSTICE_LAWS, ProviderId.SCC}
    for code in ("US", "US-NY", "US-CA"):
        for category in IssueCategory:
            plan = build_query_plan(
                GenericQuery(terms=("tax",), jurisdiction=parse_jurisdiction(code),
                             issue_category=category),
                routing,
            )
            assert not (set(plan.provider_ids()) & ca_only)

    hashes = set()
    for _ in range(10):
        plan = build_query_plan(
            GenericQuery(terms=("lease", "rent"), jurisdiction=parse_jurisdiction("CA-ON"),
                         issue_category=IssueCategory.CASE_LAW),
            routing,
        )
        fingerprint = hash(tuple((d.provider_id, pq.text) for d, pq in plan.entries))
        hashes.add(fingerprint)
    assert len(hashes) == 1
    _ok(6, "CA case-law plans put canlii first; US plans exclude CA-only providers; "
           "plans hash-stable over 10 builds")


# -- criterion 7: relevance properties ----------------------------------------


def _random_authority(rng: random.Random) -> Authority:
    words = ["lease", "tenant", "rent", "contract", "breach", "noise", "filler", "terms"]
    return Authority(
        authority_id="a",
        canonical_key=CitationKey(KeyKind.NEUTRAL, "x:2000:1"),
        title=" ".join(rng.choices(words, k=rng.randint(1, 6))),
        court=rng.choice(["scc", "onca", "onsc", "ltb", "unknown-court", ""]),
        jurisdiction=rng.choice(["CA-ON", "CA-BC", "CA", "US-NY", "US", ""]),
        date=(f"{rng.randint(1900, 2026)}-06-01" if rng.random() > 0.05 else None),
        headnote=(" ".join(rng.choices(words, k=4)) if rng.random() > 0.1 else None),
        provenance=(Provenance(rng.choice(list(ProviderId)), "d", None),),
    )


def test_criterion_7_relevance_properties():
    now = date(2026, 1, 15)
    query = GenericQuery(
        terms=("lease", "tenant", "rent"),
        jurisdiction=parse_jurisdiction("CA-ON"),
        issue_category=IssueCategory.CASE_LAW,
    )
    rng = random.Random(123)
    for _ in range(10_000):
        score = relevance_score(_random_authority(rng), query, now=now)
        assert 0.0 <= score <= 1.0

    # pairwise monotonicity: term overlap
    for _ in range(200):
        base = _random_authority(rng)
        more = replace(base, title=base.title + " lease tenant rent")
        assert relevance_score(more, query, now=now) >= relevance_score(base, query, now=now)

    # pairwise monotonicity: jurisdiction bands
    for _ in range(200):
        base = _random_authority(rng)
        exact = replace(base, jurisdiction="CA-ON")
        same_country = replace(base, jurisdiction="CA-BC")
        foreign = replace(base, jurisdiction="US-NY")
        s_exact = relevance_score(exact, query, now=now)
        s_country = relevance_score(same_country, query, now=now)
        s_foreign = relevance_score(foreign, query, now=now)
        assert s_exact >= s_country >= s_foreign

    # hand-derived fixed points
    high = Authority(
        authority_id="h", canonical_key=CitationKey(KeyKind.NEUTRAL, "scc:2016:1"),
        title="lease dispute", court="scc", jurisdiction="CA-ON", date="2016-01-01",
        headnote="tenant rent", provenance=(Provenance(ProviderId.SCC, "d", None),),
    )
    low = Authority(
        authority_id="l", canonical_key=CitationKey(KeyKind.NEUTRAL, "x:1960:1"),
        title="unrelated", court="mystery", jurisdiction="US-NY", date="1960-01-01",
        headnote="nothing", provenance=(Provenance(ProviderId.CANLII, "d", None),),
    )
    assert relevance_score(high, query, now=now) == pytest.approx(0.98, abs=1e-9)
    assert relevance_score(low, query, now=now) == pytest.approx(0.06, abs=1e-9)
    _ok(7, "10,000 random authorities in [0,1]; monotone in overlap and jurisdiction; "
           "hand values 0.98/0.06 at 1e-9")


# -- criteria 8 and 9: report compliance and reproducibility -------------------


def _run_clean(tmp_path, label: str):
    out = tmp_path / label
    code = lices_main(
        [
            "run",
            "--config", str(FIXTURES / "config.json"),
            "--scenario", str(FIXTURES / "scenarios" / "clean"),
            "--out", str(out),
        ]
    )
    assert code == 0
    return out


def test_criterion_8_report_compliance(tmp_path):
    from lices.report import report_from_dict, render_report

    out = _run_clean(tmp_path, "compliance")
    config = load_config(FIXTURES / "config.json")
    disclaimer = config.disclaimer

    report_json = (out / "report.json").read_bytes()
    payload = json.loads(report_json.decode("utf-8"))
    # disclaimer verbatim, and the last key section in the canonical json
    assert payload["disclaimer"] == disclaimer

    markdown = (out / "report.md").read_text("utf-8")
    assert markdown.rstrip().endswith(disclaimer)
    assert markdown.index("## Disclaimer") > markdown.index("## Recommended Actions")

    # JSON round-trip identity
    report = report_from_dict(payload)
    assert render_report(report, "json") == report_json

    # golden markdown byte-exact
    golden = (GOLDEN / "report.md").read_bytes()
    assert (out / "report.md").read_bytes() == golden
    _ok(8, "disclaimer verbatim as final section; JSON round-trips; markdown matches golden "
           "byte-for-byte")


def test_criterion_9_end_to_end_reproducibility(tmp_path):
    outputs = [(_run_clean(tmp_path, f"run{i}") / "report.json").read_bytes() for i in range(3)]
    assert outputs[0] == outputs[1] == outputs[2]
    _ok(9, "three `lices run` invocations produced byte-identical report JSON")

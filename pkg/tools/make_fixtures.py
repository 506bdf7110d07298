"""Generate the shipped fixture set: corpus, queries, scenarios, configs.

Deterministic (fixed seed). The corpus gets exactly 500 entries of which 75
(15%) are planted cross-provider clones; ground-truth bookkeeping is written
alongside and cross-checked here with a brute-force O(n^2) grouping pass that
is independent of the package's dedup implementation.

Run from the repo root:  python tools/make_fixtures.py
"""

from __future__ import annotations

import json
import random
import re
import sys
from collections import defaultdict
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
FIXTURES = REPO / "fixtures"

SEED = 20260115

SURNAMES = [
    "Reed", "Alvarez", "Chen", "Dubois", "Ferreira", "Grant", "Hassan", "Ivanov",
    "Jafari", "Kowalski", "Lambert", "MacLeod", "Nguyen", "Okafor", "Price",
    "Quinn", "Rousseau", "Singh", "Tremblay", "Ueda", "Vance", "Whitfield",
    "Xu", "Young", "Zhang", "Bishop", "Cormier", "Drummond", "Ellison", "Fortin",
]
CORPS = [
    "Northwind Property Group", "Lakeshore Holdings", "Silver Birch Developments",
    "Maple Crest Logistics", "Harbourview Insurance", "Blue Heron Media",
    "Granite Peak Mining", "Cedarline Manufacturing", "Brightwater Utilities",
    "Stonebridge Financial", "Aurora Freight Systems", "Pinegate Construction",
]

CASE_TOPICS = {
    "lease": ["lease", "landlord", "tenant", "eviction", "rent", "arrears"],
    "contract": ["contract", "breach", "damages", "warranty", "performance"],
    "employment": ["employment", "dismissal", "severance", "notice", "termination"],
    "negligence": ["negligence", "duty", "care", "injury", "foreseeability"],
    "privacy": ["privacy", "data", "disclosure", "consent", "breach"],
    "tax": ["tax", "assessment", "income", "deduction", "penalty"],
    "family": ["custody", "support", "divorce", "access", "property"],
    "ip": ["patent", "infringement", "trademark", "copyright", "claim"],
    "defamation": ["defamation", "libel", "publication", "malice", "damages"],
    "insurance": ["insurance", "coverage", "policy", "denial", "claim"],
    "procedure": ["motion", "discovery", "limitation", "jurisdiction", "appeal"],
}
STATUTE_TOPICS = {
    "firearms": ["firearms", "licence", "storage", "registration"],
    "tenancy": ["tenancy", "residential", "rent", "eviction"],
    "taxation": ["tax", "income", "assessment", "deduction"],
    "privacy_act": ["privacy", "data", "personal", "information"],
    "employment_std": ["employment", "standards", "wages", "notice"],
}
STATUTE_TITLES = {
    "firearms": "Firearms Control Act",
    "tenancy": "Residential Tenancies Act",
    "taxation": "Income Assessment Act",
    "privacy_act": "Personal Data Protection Act",
    "employment_std": "Employment Standards Act",
}

CA_COURTS = {
    "CA-ON": ["onca", "onsc", "ltb"],
    "CA-BC": ["bcca", "bcsc"],
    "CA-AB": ["abca", "abqb"],
    "CA-QC": ["qcca", "qccs"],
    "CA": ["fca", "fc"],
}
US_COURTS = {"US-NY": ["nyad", "nysc"], "US-CA": ["calapp"], "US": ["ussc", "uscir"]}

FILLER = (
    "The court reviewed the record and the submissions of the parties. "
    "Costs were addressed in a separate endorsement."
)


def norm_text(raw: str) -> str:
    s = re.sub(r"[^\w\s]", "", raw.lower()).replace("_", "")
    return " ".join(s.split())


def canonical_key(citation: str, title: str, year: str) -> str | None:
    """Independent keying logic used only for generation-time bookkeeping."""
    citation = (citation or "").strip()
    m = re.match(r"^(\d{4})\s+([A-Za-z]+)\s+(\d+)$", citation)
    if m:
        return f"{m.group(2).lower()}:{m.group(1)}:{int(m.group(3))}"
    m = re.match(r"^\[(\d{4})\]\s+(\d+)\s+([A-Za-z][A-Za-z.\s]*?)\s+(\d+)$", citation)
    if m:
        rep = re.sub(r"[.\s]", "", m.group(3)).lower()
        return f"{m.group(1)}:{int(m.group(2))}:{rep}:{int(m.group(4))}"
    if title.strip():
        return f"{norm_text(title)}:{year}"
    return None


def make_corpus(rng: random.Random) -> tuple[list[dict], dict]:
    entries: list[dict] = []
    neutral_counters: dict[tuple[str, int], int] = defaultdict(int)
    used_titles: set[str] = set()
    doc_counters: dict[str, int] = defaultdict(int)

    def next_doc_id(provider: str) -> str:
        doc_counters[provider] += 1
        return f"d{doc_counters[provider]:05d}"

    def case_title() -> str:
        while True:
            if rng.random() < 0.3:
                title = f"{rng.choice(CORPS)} v. {rng.choice(SURNAMES)}"
            elif rng.random() < 0.5:
                title = f"{rng.choice(SURNAMES)} v. {rng.choice(CORPS)}"
            else:
                a, b = rng.sample(SURNAMES, 2)
                title = f"{a} v. {b}"
            if title not in used_titles:
                used_titles.add(title)
                return title

    def headnote_for(topic: str, terms: list[str]) -> str:
        picked = terms[:4]
        return (
            f"Appeal concerning {picked[0]} obligations; the court considered "
            f"{picked[1]} and {picked[2]} in light of the {picked[3] if len(picked) > 3 else picked[0]} "
            f"framework governing {topic} disputes."
        )

    def body_for(terms: list[str]) -> str:
        return " ".join(
            [f"The dispute turned on {t} issues raised at first instance." for t in terms]
        ) + " " + FILLER

    def make_case(provider: str, jurisdiction: str) -> dict:
        topic = rng.choice(list(CASE_TOPICS))
        terms = CASE_TOPICS[topic]
        court_pool = CA_COURTS.get(jurisdiction) or US_COURTS.get(jurisdiction)
        court = rng.choice(court_pool)
        year = rng.randint(1990, 2025)
        title = case_title()
        neutral_counters[(court, year)] += 1
        number = neutral_counters[(court, year)]
        citation = f"{year} {court.upper()} {number}"
        date = f"{year}-{rng.randint(1, 12):02d}-{rng.randint(1, 28):02d}"
        return {
            "provider_id": provider,
            "doc_id": next_doc_id(provider),
            "title": title,
            "citation_string": citation,
            "neutral_citation": citation,
            "court": court,
            "jurisdiction": jurisdiction,
            "date": date,
            "headnote": headnote_for(topic, terms),
            "body": body_for(terms),
            "url": f"https://example.org/{provider}/{court}/{year}/{number}",
        }

    used_reporter: set[tuple[int, int, int]] = set()

    def make_scc_case() -> dict:
        topic = rng.choice(list(CASE_TOPICS))
        terms = CASE_TOPICS[topic]
        year = rng.randint(1990, 2025)
        title = case_title()
        if rng.random() < 0.25:
            while True:
                volume = rng.randint(1, 3)
                page = rng.randint(1, 999)
                if (year, volume, page) not in used_reporter:
                    used_reporter.add((year, volume, page))
                    break
            citation = f"[{year}] {volume} S.C.R. {page}"
            neutral = None
        else:
            neutral_counters[("scc", year)] += 1
            number = neutral_counters[("scc", year)]
            citation = f"{year} SCC {number}"
            neutral = citation
        date = f"{year}-{rng.randint(1, 12):02d}-{rng.randint(1, 28):02d}"
        return {
            "provider_id": "scc",
            "doc_id": next_doc_id("scc"),
            "title": title,
            "citation_string": citation,
            "neutral_citation": neutral,
            "court": "scc",
            "jurisdiction": "CA",
            "date": date,
            "headnote": headnote_for(topic, terms),
            "body": body_for(terms),
            "url": f"https://example.org/scc/{year}",
        }

    def make_statute(provider: str, topic: str, variant: int, year: int) -> dict:
        terms = STATUTE_TOPICS[topic]
        title = f"{STATUTE_TITLES[topic]}, {year}" if variant else STATUTE_TITLES[topic]
        chapter = rng.randint(1, 60)
        return {
            "provider_id": provider,
            "doc_id": next_doc_id(provider),
            "title": title,
            "citation_string": f"SC {year}, c {chapter}",
            "neutral_citation": None,
            "court": "",
            "jurisdiction": "CA",
            "date": f"{year}-07-01",
            "headnote": f"An Act respecting {terms[0]} and {terms[1]}, including {terms[2]} requirements.",
            "body": f"Provisions govern {', '.join(terms)} and related enforcement. {FILLER}",
            "url": f"https://example.org/{provider}/statute/{year}/{chapter}",
        }

    ca_regions = ["CA-ON", "CA-BC", "CA-AB", "CA-QC", "CA"]
    us_regions = ["US-NY", "US-CA", "US"]

    def pick_jurisdiction(provider: str) -> str:
        if provider in ("lexisnexis_sim", "westlaw_sim"):
            if rng.random() < 0.3:
                return rng.choice(us_regions)
            return rng.choice(ca_regions)
        return rng.choice(ca_regions[:4]) if provider == "canlii" else "CA"

    # statute variants keep titles unique per base (distinct metadata keys)
    statute_variant = 0
    base_plan = (
        [("lexisnexis_sim", "case")] * 140
        + [("westlaw_sim", "case")] * 115
        + [("canlii", "case")] * 105
        + [("scc", "scc")] * 40
        + [("justice_laws", "statute")] * 25
    )
    statute_topics = list(STATUTE_TOPICS)
    for provider, kind in base_plan:
        if kind == "case":
            entry = make_case(provider, pick_jurisdiction(provider))
        elif kind == "scc":
            entry = make_scc_case()
        else:
            topic = statute_topics[statute_variant % len(statute_topics)]
            # sequential years keep statute titles (and metadata keys) unique
            entry = make_statute(
                provider,
                topic,
                statute_variant // len(statute_topics),
                1986 + statute_variant,
            )
            statute_variant += 1
        entries.append(entry)

    # ~5% of canlii case entries lose their citation (metadata-key fallback)
    canlii_cases = [e for e in entries if e["provider_id"] == "canlii"]
    for entry in rng.sample(canlii_cases, 5):
        entry["citation_string"] = ""
        entry["neutral_citation"] = None

    bases = list(entries)

    def jitter_citation(citation: str) -> str:
        if not citation:
            return ""
        choice = rng.random()
        if citation.startswith("["):
            return citation.replace("S.C.R.", "SCR") if "S.C.R." in citation else citation
        if choice < 0.4:
            return citation.lower()
        if choice < 0.7:
            return re.sub(r"\s+", "  ", citation)
        return citation

    def clone(base: dict, provider: str) -> dict:
        extra = " The decision has been cited frequently in later cases."
        shorter = base["headnote"].split(";")[0] + "."
        return {
            "provider_id": provider,
            "doc_id": next_doc_id(provider),
            "title": base["title"] if rng.random() < 0.7 else base["title"].upper(),
            "citation_string": jitter_citation(base["citation_string"]),
            "neutral_citation": base["neutral_citation"],
            "court": base["court"],
            "jurisdiction": base["jurisdiction"],
            "date": base["date"],
            "headnote": base["headnote"] + extra if rng.random() < 0.6 else shorter,
            "body": base["body"],
            "url": f"https://example.org/{provider}/mirror/{base['doc_id']}",
        }

    sim_triangle = ["lexisnexis_sim", "westlaw_sim", "canlii"]
    clone_specs: list[tuple[dict, str]] = []
    case_bases = [b for b in bases if b["provider_id"] in sim_triangle and b["citation_string"]]
    rng.shuffle(case_bases)
    used = set()
    for base in case_bases:
        if len(clone_specs) >= 60:
            break
        key = (base["provider_id"], base["doc_id"])
        if key in used:
            continue
        used.add(key)
        others = [p for p in sim_triangle if p != base["provider_id"]]
        if base["jurisdiction"].startswith("US"):
            others = [p for p in others if p != "canlii"]
        if not others:
            continue
        clone_specs.append((base, rng.choice(others)))
    scc_bases = rng.sample([b for b in bases if b["provider_id"] == "scc"], 10)
    for base in scc_bases:
        clone_specs.append((base, rng.choice(["lexisnexis_sim", "westlaw_sim"])))
    statute_bases = rng.sample([b for b in bases if b["provider_id"] == "justice_laws"], 5)
    for base in statute_bases:
        clone_specs.append((base, "lexisnexis_sim"))

    assert len(clone_specs) == 75, len(clone_specs)
    for base, provider in clone_specs:
        entries.append(clone(base, provider))

    rng.shuffle(entries)
    assert len(entries) == 500, len(entries)

    # bookkeeping + independent O(n^2) verification
    keys = []
    for e in entries:
        key = canonical_key(e["citation_string"], e["title"], e["date"][:4])
        assert key is not None
        keys.append(key)
    groups: list[list[int]] = []
    for i, key in enumerate(keys):
        for group in groups:
            if keys[group[0]] == key:
                group.append(i)
                break
        else:
            groups.append([i])
    unique = len(groups)
    assert unique == 425, f"expected 425 unique groups, got {unique}"
    duplicated_groups = sum(1 for g in groups if len(g) > 1)

    ground_truth = {
        "total_entries": len(entries),
        "unique_authorities": unique,
        "planted_clones": 75,
        "planted_rate": 0.15,
        "groups_with_duplicates": duplicated_groups,
    }
    return entries, ground_truth


def make_queries(rng: random.Random) -> list[dict]:
    queries = [
        {"terms": ["lease", "tenant"], "jurisdiction": "CA-ON", "issue_category": "case_law"},
        {"terms": ["lease", "eviction"], "jurisdiction": "CA-BC", "issue_category": "case_law"},
        {"terms": ["contract", "breach"], "jurisdiction": "CA-ON", "issue_category": "case_law"},
        {"terms": ["contract", "damages"], "jurisdiction": "CA-AB", "issue_category": "case_law"},
        {"terms": ["employment", "dismissal"], "jurisdiction": "CA-ON", "issue_category": "case_law"},
        {"terms": ["negligence", "duty"], "jurisdiction": "CA-BC", "issue_category": "case_law"},
        {"terms": ["privacy", "disclosure"], "jurisdiction": "CA-ON", "issue_category": "case_law"},
        {"terms": ["custody", "support"], "jurisdiction": "CA-QC", "issue_category": "case_law"},
        {"terms": ["patent", "infringement"], "jurisdiction": "CA", "issue_category": "case_law"},
        {"terms": ["defamation", "publication"], "jurisdiction": "CA-ON", "issue_category": "case_law"},
        {"terms": ["insurance", "coverage"], "jurisdiction": "CA-BC", "issue_category": "case_law"},
        {"terms": ["tax", "assessment"], "jurisdiction": "CA", "issue_category": "case_law"},
        {"terms": ["damages", "warranty"], "jurisdiction": "CA-ON", "issue_category": "mixed"},
        {"terms": ["severance", "notice"], "jurisdiction": "CA-AB", "issue_category": "mixed"},
        {"terms": ["motion", "discovery"], "jurisdiction": "CA-ON", "issue_category": "procedure"},
        {"terms": ["firearms", "licence"], "jurisdiction": "CA", "issue_category": "statute"},
        {"terms": ["residential", "tenancy"], "jurisdiction": "CA", "issue_category": "statute"},
        {"terms": ["tax", "income"], "jurisdiction": "US-NY", "issue_category": "case_law"},
        {"terms": ["contract", "performance"], "jurisdiction": "US", "issue_category": "case_law"},
        {"terms": ["negligence", "injury"], "jurisdiction": "US-CA", "issue_category": "case_law"},
    ]
    assert len(queries) == 20
    return queries


CLEAN_LETTER = """RE: Reed v. Northwind Property Group

Dear Ms. Reed,

This letter concerns the lease agreement between Taylor Reed and Northwind Property Group
for the unit at 12 King Street. The landlord alleges rent arrears under the lease and
intends to pursue eviction. The tenant disputes the arrears and says the lease term was
varied in writing. The tenant paid rent until June and the landlord has refused repairs.

We ask that you preserve all records concerning the lease, the rent ledger, and the
notice of eviction served on the tenant.

Sincerely,
Morgan Patel
"""

CLEAN_STUB = {
    "steps": [
        {
            "questions": [
                {"id": "q1", "text": "When did the lease begin?", "rationale": "establish the tenancy timeline"},
                {"id": "q2", "text": "What monthly rent was agreed and when was it last paid?"},
            ]
        },
        {
            "questions": [
                {"id": "q3", "text": "Did the landlord serve a written notice of eviction?"},
                {"id": "q4", "text": "Were any repairs requested in writing, and what happened?"},
            ]
        },
        {
            "questions": [
                {"id": "q5", "text": "Was the variation of the lease term recorded in any document?"},
                {"id": "q6", "text": "Are there other parties involved in the tenancy, such as guarantors?"},
            ]
        },
    ],
    "analysis": {
        "material_facts": [
            "A residential lease existed between the client and the opposing landlord.",
            "Rent was paid until June; the landlord alleges arrears thereafter.",
            "The landlord has served or threatened a notice of eviction.",
            "The client says the lease term was varied in writing.",
        ],
        "legal_issues": [
            "Whether the alleged arrears are owing given the written variation of the lease.",
            "Whether the eviction notice satisfies statutory form and notice requirements.",
        ],
        "authority_hints": [],
        "recommended_actions": [
            "Collect the rent ledger and all written communications about the variation.",
            "Verify the form and service of the eviction notice against the statute.",
            "Consider an application to the tenancy tribunal if the notice is defective.",
        ],
    },
}

CLEAN_ANSWERS = [
    "The lease began in March 2021.",
    "Rent was 1800 per month and it was last paid in June.",
    "Yes, a notice of eviction arrived in July.",
    "Repairs were requested twice in writing and refused.",
    "Yes, the variation was recorded in a signed letter.",
    "No, there are no guarantors or other parties.",
]

CLEAN_CONFLICT_DB = [
    {"record_id": "r-0001", "matter_ref": "m-1990-044", "party_name": "Quantum Shipping Ltd", "side": "adverse"},
    {"record_id": "r-0002", "matter_ref": "m-2001-102", "party_name": "Harold Finch", "side": "our_client"},
    {"record_id": "r-0003", "matter_ref": "m-2009-311", "party_name": "Violet Marsh", "side": "adverse"},
    {"record_id": "r-0004", "matter_ref": "m-2014-078", "party_name": "Kestrel Aviation Corp", "side": "related"},
    {"record_id": "r-0005", "matter_ref": "m-2018-240", "party_name": "Beatrice Olmstead", "side": "adverse"},
]

CONFLICT_SCENARIO_DB = CLEAN_CONFLICT_DB + [
    {"record_id": "r-0006", "matter_ref": "m-2020-155", "party_name": "ACME WIDGETS", "side": "adverse"},
]


def write_jsonl(path: Path, rows: list[dict]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        for row in rows:
            f.write(json.dumps(row, sort_keys=True) + "\n")


def make_configs() -> None:
    full = {
        "providers": {
            "lexisnexis_sim": {"corpus_path": "corpus/corpus.jsonl", "latency_ms": 8, "tier": 1},
            "westlaw_sim": {"corpus_path": "corpus/corpus.jsonl", "latency_ms": 6, "tier": 1},
            "canlii": {"corpus_path": "corpus/corpus.jsonl", "latency_ms": 4, "tier": 2},
            "justice_laws": {"corpus_path": "corpus/corpus.jsonl", "latency_ms": 4, "tier": 3},
            "scc": {"corpus_path": "corpus/corpus.jsonl", "latency_ms": 3, "tier": 4},
        },
        "conflict": {"db_path": "scenarios/clean/conflict_db.jsonl", "threshold": 0.85},
        "stub_script": "scenarios/clean/stub_script.json",
        "max_rounds": 12,
        "audit_salt": "fixture-salt",
    }
    (FIXTURES / "config.json").write_text(json.dumps(full, indent=2) + "\n", "utf-8")

    bench = {
        "providers": {
            "lexisnexis_sim": {"corpus_path": "corpus/corpus.jsonl", "latency_ms": 320, "tier": 1},
            "westlaw_sim": {"corpus_path": "corpus/corpus.jsonl", "latency_ms": 280, "tier": 1},
            "canlii": {"corpus_path": "corpus/corpus.jsonl", "latency_ms": 110, "tier": 2},
        },
    }
    (FIXTURES / "bench_config.json").write_text(json.dumps(bench, indent=2) + "\n", "utf-8")


def make_scenarios() -> None:
    clean = FIXTURES / "scenarios" / "clean"
    clean.mkdir(parents=True, exist_ok=True)
    (clean / "lease_letter.txt").write_text(CLEAN_LETTER, "utf-8")
    (clean / "stub_script.json").write_text(json.dumps(CLEAN_STUB, indent=2) + "\n", "utf-8")
    write_jsonl(clean / "conflict_db.jsonl", CLEAN_CONFLICT_DB)
    scenario = {
        "client": {
            "name": "Taylor Reed",
            "jurisdiction": "CA-ON",
            "contact": "t.reed@example.org",
            "opposing": ["Northwind Property Group"],
        },
        "summary": "Residential lease dispute: alleged rent arrears and threatened eviction.",
        "issue_categories": ["case_law"],
        "documents": ["lease_letter.txt"],
        "answers": CLEAN_ANSWERS,
        "clock_start": "2026-01-15T09:00:00+00:00",
        "clock_step_seconds": 1.0,
        "salt": "fixture-salt",
        "conflict_db": "conflict_db.jsonl",
        "stub_script": "stub_script.json",
    }
    (clean / "scenario.json").write_text(json.dumps(scenario, indent=2) + "\n", "utf-8")

    conflict = FIXTURES / "scenarios" / "conflict"
    conflict.mkdir(parents=True, exist_ok=True)
    (conflict / "lease_letter.txt").write_text(CLEAN_LETTER, "utf-8")
    (conflict / "stub_script.json").write_text(json.dumps(CLEAN_STUB, indent=2) + "\n", "utf-8")
    write_jsonl(conflict / "conflict_db.jsonl", CONFLICT_SCENARIO_DB)
    conflicted = dict(scenario)
    conflicted["client"] = {
        "name": "Acme Widgets, Inc.",
        "jurisdiction": "CA-ON",
        "contact": "legal@acme.example.org",
        "opposing": ["Northwind Property Group"],
    }
    (conflict / "scenario.json").write_text(json.dumps(conflicted, indent=2) + "\n", "utf-8")


def pick_authority_hints() -> None:
    """Wire resolvable hints into the clean stub from the clean run's research."""
    sys.path.insert(0, str(REPO / "src"))
    from lices.cli import main as lices_main

    out = FIXTURES / "scenarios" / "clean" / "out"
    code = lices_main(
        [
            "run",
            "--config",
            str(FIXTURES / "config.json"),
            "--scenario",
            str(FIXTURES / "scenarios" / "clean"),
            "--out",
            str(out),
        ]
    )
    assert code == 0, f"clean dry run exited {code}"
    report = json.loads((out / "report.json").read_text("utf-8"))
    authorities = report["authorities"]
    assert len(authorities) >= 3, f"clean run found only {len(authorities)} authorities"
    # top two neutral-keyed authorities become resolvable hints
    hints = []
    for authority in authorities:
        key = authority["canonical_key"]
        if key["kind"] == "neutral":
            court, year, number = key["key"].split(":")
            hints.append(f"{year} {court.upper()} {number}")
        if len(hints) == 2:
            break
    assert len(hints) == 2, "not enough neutral-keyed authorities in clean run"
    hints.append("9999 ZZZ 1")  # deliberately unresolvable
    stub_path = FIXTURES / "scenarios" / "clean" / "stub_script.json"
    stub = json.loads(stub_path.read_text("utf-8"))
    stub["analysis"]["authority_hints"] = hints
    stub_path.write_text(json.dumps(stub, indent=2) + "\n", "utf-8")
    conflict_stub = FIXTURES / "scenarios" / "conflict" / "stub_script.json"
    conflict_stub.write_text(json.dumps(stub, indent=2) + "\n", "utf-8")
    print(f"authority hints wired: {hints}")


def verify_bench() -> None:
    from lices.cli import main as lices_main

    out = FIXTURES / "bench_check.json"
    code = lices_main(
        [
            "bench",
            "--corpus",
            str(FIXTURES / "corpus" / "corpus.jsonl"),
            "--queries",
            str(FIXTURES / "queries.jsonl"),
            "--out",
            str(out),
        ]
    )
    assert code == 0
    report = json.loads(out.read_text("utf-8"))
    ratio = report["dedup_ratio"]
    assert 0.10 <= ratio <= 0.20, f"bench dedup ratio {ratio} outside [0.10, 0.20]"
    print(f"bench dedup ratio: {ratio} (raw {report['combined']['raw_total']}, "
          f"unique {report['combined']['unique_count']})")
    out.unlink()


def main() -> None:
    rng = random.Random(SEED)
    entries, ground_truth = make_corpus(rng)
    write_jsonl(FIXTURES / "corpus" / "corpus.jsonl", entries)
    (FIXTURES / "corpus" / "ground_truth.json").write_text(
        json.dumps(ground_truth, indent=2) + "\n", "utf-8"
    )
    print(f"corpus: {ground_truth['total_entries']} entries, "
          f"{ground_truth['unique_authorities']} unique")

    queries = make_queries(rng)
    write_jsonl(FIXTURES / "queries.jsonl", queries)
    make_configs()
    make_scenarios()
    pick_authority_hints()
    verify_bench()
    print("fixtures written to", FIXTURES)


if __name__ == "__main__":
    main()

from __future__ import annotations

import json
import random
from itertools import permutations

import pytest

from lices.conflicts import (
    CheckStage,
    ConflictRecord,
    ConflictSide,
    ConflictStore,
    Verdict,
    comprehensive_check,
    name_similarity,
    normalize_party_name,
    preliminary_check,
    salted_name_hash,
)
from lices.domain import ClientProfile, Jurisdiction, Party, PartyRole
from lices.errors import EmptyAfterNormalization, StoreUnavailable

# frozen output of the brute-force formula oracle (see oracle_similarity below)
JON_SMITH_SIMILARITY = 0.9375


def oracle_lev(a: str, b: str) -> int:
    """Full-matrix edit distance, independent of the implementation's DP."""
    rows, cols = len(a) + 1, len(b) + 1
    d = [[0] * cols for _ in range(rows)]
    for i in range(rows):
        d[i][0] = i
    for j in range(cols):
        d[0][j] = j
    for i in range(1, rows):
        for j in range(1, cols):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            d[i][j] = min(d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + cost)
    return d[-1][-1]


def oracle_ratio(a: str, b: str) -> float:
    return 1.0 - oracle_lev(a, b) / max(len(a), len(b))


def oracle_similarity(a: str, b: str) -> float:
    """Independent brute-force evaluation of the similarity formula:
    optimal pairing by permutation search instead of assignment solving."""
    if a == b:
        return 1.0
    ta, tb = sorted(set(a.split())), sorted(set(b.split()))
    if not ta or not tb:
        return 0.0
    if len(ta) > len(tb):
        ta, tb = tb, ta
    best_sum, best_shared = -1.0, 0
    for perm in permutations(range(len(tb)), len(ta)):
        total = sum(oracle_ratio(ta[i], tb[j]) for i, j in enumerate(perm))
        shared = sum(1 for i, j in enumerate(perm) if oracle_ratio(ta[i], tb[j]) >= 0.75)
        best_sum = max(best_sum, total)
        best_shared = max(best_shared, shared)
    pairing = best_sum / max(len(ta), len(tb))
    dice = 2.0 * best_shared / (len(ta) + len(tb))
    return min((dice + pairing) / 2.0, 0.99)


class TestNormalization:
    def test_corporate_suffix_stripped(self):
        assert normalize_party_name("Acme Widgets, Inc.") == "acme widgets"

    def test_honorific_and_punctuation(self):
        assert normalize_party_name("Dr. Jane  O'Neil") == "jane oneil"

    def test_suffix_only_is_an_error(self):
        with pytest.raises(EmptyAfterNormalization):
            normalize_party_name("Ltd.")

    def test_stacked_affixes(self):
        assert normalize_party_name("Mr. Mr. North Co Ltd") == "north"


class TestSimilarity:
    def test_identity_is_one(self):
        assert name_similarity("acme widgets", "acme widgets") == 1.0

    def test_disjoint_tokens_score_zero(self):
        score = name_similarity("acme widgets", "zzz qqq")
        assert score == 0.0
        assert score < 0.85

    def test_typo_name_regression_constant(self):
        assert name_similarity("john smith", "jon smith") == pytest.approx(
            JON_SMITH_SIMILARITY, abs=1e-12
        )

    def test_matches_bruteforce_oracle_on_random_names(self):
        rng = random.Random(7)
        words = ["acme", "north", "smith", "jon", "john", "widget", "group", "ab", "holdings"]
        for _ in range(200):
            a = " ".join(rng.sample(words, rng.randint(1, 4)))
            b = " ".join(rng.sample(words, rng.randint(1, 4)))
            assert name_similarity(a, b) == pytest.approx(oracle_similarity(a, b), abs=1e-12)

    def test_symmetric_and_reflexive(self):
        rng = random.Random(11)
        words = ["lake", "shore", "harold", "finch", "acme", "inc", "jon"]
        for _ in range(100):
            a = " ".join(rng.sample(words, rng.randint(1, 3)))
            b = " ".join(rng.sample(words, rng.randint(1, 3)))
            assert name_similarity(a, b) == name_similarity(b, a)
            assert name_similarity(a, a) == 1.0

    def test_permuted_tokens_capped_below_one(self):
        score = name_similarity("john smith", "smith john")
        assert score == 0.99
        assert score < 1.0


def _client(*names: str) -> ClientProfile:
    parties = [Party(names[0], PartyRole.CLIENT)]
    parties += [Party(n, PartyRole.OPPOSING) for n in names[1:]]
    return ClientProfile(
        client_id="c1", parties=tuple(parties), jurisdiction=Jurisdiction("CA", "ON")
    )


def _store(*records: tuple[str, str]) -> ConflictStore:
    return ConflictStore(
        [
            ConflictRecord(
                record_id=f"r{i}", matter_ref=f"m{i}", party_name=name, side=ConflictSide(side)
            )
            for i, (name, side) in enumerate(records)
        ]
    )


class TestChecks:
    def test_normalization_collision_is_conflict(self):
        store = _store(("ACME WIDGETS", "adverse"))
        outcome = preliminary_check(_client("Acme Widgets Inc."), store)
        assert outcome.verdict is Verdict.CONFLICT
        assert outcome.stage is CheckStage.PRELIMINARY
        assert outcome.hits[0].similarity == 1.0

    def test_empty_store_is_clear(self):
        outcome = preliminary_check(_client("Anyone At All"), ConflictStore([]))
        assert outcome.verdict is Verdict.CLEAR
        assert outcome.hits == ()

    def test_typo_match_is_potential_conflict_at_default_threshold(self):
        store = _store(("John Smith", "adverse"))
        outcome = preliminary_check(_client("Jon Smith"), store)
        assert outcome.verdict is Verdict.POTENTIAL_CONFLICT
        assert outcome.hits[0].similarity == pytest.approx(JON_SMITH_SIMILARITY, abs=1e-12)

    def test_comprehensive_superset_detects_planted_match(self):
        store = _store(("Violet Marsh", "adverse"))
        base = [Party("Taylor Reed", PartyRole.CLIENT)]
        assert comprehensive_check(base, store).verdict is Verdict.CLEAR
        expanded = base + [Party("Violet Marsh", PartyRole.RELATED)]
        outcome = comprehensive_check(expanded, store)
        assert outcome.verdict is Verdict.CONFLICT
        assert outcome.stage is CheckStage.COMPREHENSIVE

    def test_same_party_set_gives_same_verdict_both_stages(self):
        store = _store(("John Smith", "adverse"), ("Acme Widgets", "our_client"))
        client = _client("Jon Smith", "Acme Widgets Inc")
        prelim = preliminary_check(client, store)
        comp = comprehensive_check(list(client.parties), store)
        assert prelim.verdict == comp.verdict
        assert [h.record.record_id for h in prelim.hits] == [
            h.record.record_id for h in comp.hits
        ]

    def test_hit_ordering_descending_similarity_then_record_id(self):
        store = _store(("Jon Smith", "adverse"), ("John Smith", "adverse"))
        outcome = preliminary_check(_client("Jon Smith"), store)
        sims = [h.similarity for h in outcome.hits]
        assert sims == sorted(sims, reverse=True)
        assert outcome.hits[0].similarity == 1.0

    def test_thousand_record_db_exhaustive_scan_oracle(self):
        rng = random.Random(42)
        corps = ["Alpha", "Beta", "Gamma", "Delta", "Epsilon", "Zeta", "Theta", "Kappa"]
        kinds = ["Shipping", "Mining", "Media", "Freight", "Farms", "Energy"]
        records = []
        for i in range(950):
            name = f"{rng.choice(corps)} {rng.choice(kinds)} {i} Ltd"
            records.append(
                ConflictRecord(f"r{i:04d}", f"m{i}", name, ConflictSide.ADVERSE)
            )
        planted = []
        for i in range(50):
            name = f"Planted Match {i} Inc"
            planted.append(name)
            records.append(
                ConflictRecord(f"p{i:04d}", f"pm{i}", name, ConflictSide.ADVERSE)
            )
        store = ConflictStore(records)
        parties = [Party(planted[0], PartyRole.CLIENT)] + [
            Party(name, PartyRole.RELATED) for name in planted[1:]
        ]
        outcome = comprehensive_check(parties, store)

        # oracle: exhaustive pairwise scan for exact normalized equality
        expected = set()
        for party in parties:
            norm = normalize_party_name(party.raw_name)
            for record in records:
                if record.normalized_name == norm:
                    expected.add(record.record_id)
        exact_hit_ids = {h.record.record_id for h in outcome.hits if h.similarity == 1.0}
        assert len(expected) == 50
        assert exact_hit_ids == expected
        assert outcome.verdict is Verdict.CONFLICT

    def test_monotonicity_over_random_party_supersets(self):
        rank = {Verdict.CLEAR: 0, Verdict.POTENTIAL_CONFLICT: 1, Verdict.CONFLICT: 2}
        rng = random.Random(3)
        pool = [
            "Acme Widgets", "Jon Smith", "John Smith", "Lakeshore Holdings",
            "Violet Marsh", "Quantum Shipping", "Harold Finch", "Granite Peak",
        ]
        for _ in range(50):
            db_names = rng.sample(pool, rng.randint(1, 4))
            store = _store(*[(n, "adverse") for n in db_names])
            base_names = rng.sample(pool, rng.randint(1, 3))
            base = [Party(base_names[0], PartyRole.CLIENT)] + [
                Party(n, PartyRole.RELATED) for n in base_names[1:]
            ]
            extra = [Party(n, PartyRole.RELATED) for n in rng.sample(pool, rng.randint(0, 3))]
            prelim = comprehensive_check(base, store)
            comp = comprehensive_check(base + extra, store)
            assert rank[comp.verdict] >= rank[prelim.verdict]


class TestStore:
    def test_load_roundtrip(self, tmp_path):
        db = tmp_path / "db.jsonl"
        rows = [
            {"record_id": "r1", "matter_ref": "m1", "party_name": "Acme Widgets Inc", "side": "adverse"},
            {"record_id": "r2", "matter_ref": "m2", "party_name": "Harold Finch", "side": "our_client"},
        ]
        db.write_text("\n".join(json.dumps(r) for r in rows) + "\n", "utf-8")
        store = ConflictStore.load(db)
        assert len(store) == 2
        assert store.records()[0].normalized_name == "acme widgets"

    def test_missing_file_is_store_unavailable(self, tmp_path):
        with pytest.raises(StoreUnavailable):
            ConflictStore.load(tmp_path / "nope.jsonl")

    def test_malformed_line_is_store_unavailable(self, tmp_path):
        db = tmp_path / "db.jsonl"
        db.write_text('{"record_id": "r1"}\n', "utf-8")
        with pytest.raises(StoreUnavailable):
            ConflictStore.load(db)

    def test_append_persists(self, tmp_path):
        db = tmp_path / "db.jsonl"
        db.write_text("", "utf-8")
        store = ConflictStore.load(db)
        store.append(ConflictRecord("r9", "m9", "New Party", ConflictSide.ADVERSE))
        again = ConflictStore.load(db)
        assert [r.record_id for r in again.records()] == ["r9"]


def test_salted_hash_hides_raw_name():
    digest = salted_name_hash("Acme Widgets Inc", "salt-1")
    assert "acme" not in digest.lower()
    assert digest != salted_name_hash("Acme Widgets Inc", "salt-2")
    # same normalized name, same salt -> same hash
    assert digest == salted_name_hash("ACME WIDGETS", "salt-1")

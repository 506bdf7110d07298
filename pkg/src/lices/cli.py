"""Command-line harness: offline demo runs, benchmark tables, conflict lookups.

Exit codes for `run`: 0 report ready, 1 config error, 2 fixture error,
3 terminated on conflict.
"""

from __future__ import annotations

import argparse
import json
import shutil
import sys
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from pathlib import Path

from .conflicts import CheckStage, ConflictStore, Verdict, comprehensive_check
from .config import AppConfig, load_config
from .consolidation import deduplicate, relevance_score
from .domain import EntityKind, IssueCategory, Party, PartyRole, parse_jurisdiction
from .errors import FixtureError, LicesError
from .federation import GenericQuery, ProviderId, build_query_plan, execute_plan
from .interview import Done
from .pipeline import ConsultationPipeline, counter_ids
from .providers import SearchSimulator, SimBehavior, load_corpus

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_FIXTURE = 2
EXIT_CONFLICT = 3


class FixtureClock:
    """Deterministic clock: fixed start, fixed step per call."""

    def __init__(self, start: datetime, step_seconds: float = 1.0):
        self._now = start
        self._step = timedelta(seconds=step_seconds)

    def __call__(self) -> datetime:
        current = self._now
        self._now = current + self._step
        return current


@dataclass
class Scenario:
    directory: Path
    client: dict
    summary: str
    issue_categories: list[IssueCategory]
    documents: list[Path]
    answers: list[str]
    clock_start: datetime
    clock_step: float
    salt: str
    conflict_db: Path | None
    stub_script: Path | None


def _load_scenario(directory: str | Path) -> Scenario:
    directory = Path(directory)
    scenario_file = directory / "scenario.json"
    if not scenario_file.exists():
        raise FixtureError(f"scenario.json not found in {directory}")
    try:
        raw = json.loads(scenario_file.read_text("utf-8"))
    except json.JSONDecodeError as exc:
        raise FixtureError(f"scenario.json invalid: {exc}") from exc
    try:
        documents = [directory / name for name in raw.get("documents", [])]
        for doc in documents:
            if not doc.exists():
                raise FixtureError(f"scenario document missing: {doc}")
        return Scenario(
            directory=directory,
            client=raw["client"],
            summary=raw.get("summary", ""),
            issue_categories=[IssueCategory(c) for c in raw.get("issue_categories", ["mixed"])],
            documents=documents,
            answers=list(raw.get("answers", [])),
            clock_start=datetime.fromisoformat(raw.get("clock_start", "2026-01-01T09:00:00+00:00")),
            clock_step=float(raw.get("clock_step_seconds", 1.0)),
            salt=raw.get("salt", "fixture"),
            conflict_db=(directory / raw["conflict_db"]) if "conflict_db" in raw else None,
            stub_script=(directory / raw["stub_script"]) if "stub_script" in raw else None,
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise FixtureError(f"scenario.json bad value: {exc!r}") from exc


def cmd_run(args: argparse.Namespace) -> int:
    try:
        config = load_config(args.config)
    except LicesError as exc:
        print(f"config error: {exc.message}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        scenario = _load_scenario(args.scenario)
    except FixtureError as exc:
        print(f"fixture error: {exc.message}", file=sys.stderr)
        return EXIT_FIXTURE

    out_dir = Path(args.out) if args.out else scenario.directory / "out"
    if out_dir.exists():
        shutil.rmtree(out_dir)
    out_dir.mkdir(parents=True)

    if scenario.conflict_db is not None:
        config.conflict_db_path = str(scenario.conflict_db)
    if scenario.stub_script is not None:
        config.stub_script_path = str(scenario.stub_script)
    config.audit_salt = scenario.salt
    config.data_dir = str(out_dir)

    clock = FixtureClock(scenario.clock_start, scenario.clock_step)
    try:
        pipeline = ConsultationPipeline.from_config(
            config, clock=clock, ids=counter_ids(), audit_path=out_dir / "audit.jsonl"
        )
    except LicesError as exc:
        print(f"config error: {exc.message}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        profile = pipeline.register_client(
            name=scenario.client["name"],
            jurisdiction_code=scenario.client["jurisdiction"],
            contact=scenario.client.get("contact", ""),
            opposing=scenario.client.get("opposing", []),
            related=scenario.client.get("related", []),
        )
        matter = pipeline.create_matter(profile.client_id, scenario.summary, scenario.issue_categories)
    except (KeyError, ValueError) as exc:
        print(f"fixture error: {exc!r}", file=sys.stderr)
        return EXIT_FIXTURE

    matter_id = matter.matter_id
    outcome = pipeline.conflict_check(matter_id, CheckStage.PRELIMINARY)
    if outcome.verdict is not Verdict.CLEAR:
        print(f"terminated: {outcome.verdict.value} at preliminary check")
        return EXIT_CONFLICT

    files = [(path.read_bytes(), path.name) for path in scenario.documents]
    pipeline.ingest_documents(matter_id, files)

    answers = iter(scenario.answers)
    while True:
        step = pipeline.interview_next(matter_id)
        if isinstance(step, Done):
            break
        pipeline.interview_answer(matter_id, step.question_id, next(answers, ""))

    outcome = pipeline.conflict_check(matter_id, CheckStage.COMPREHENSIVE)
    if outcome.verdict is not Verdict.CLEAR:
        print(f"terminated: {outcome.verdict.value} at comprehensive check")
        return EXIT_CONFLICT

    fanout, ranked = pipeline.run_research(matter_id)
    pipeline.run_analysis(matter_id)

    report_json = pipeline.generate_report(matter_id, "json")
    report_md = pipeline.generate_report(matter_id, "markdown")
    (out_dir / "report.json").write_bytes(report_json)
    (out_dir / "report.md").write_bytes(report_md)

    status = pipeline.matters[matter_id].matter.status
    print(
        f"status={status.value} authorities={len(ranked)} "
        f"failures={len(fanout.failures)} report={out_dir / 'report.json'}"
    )
    return EXIT_OK


def _bench_registry(config: AppConfig | None, corpus_path: str) -> tuple[dict, dict]:
    """Simulators and descriptors for bench: config-driven when given, else
    derived from the providers present in the corpus."""
    corpus = load_corpus(corpus_path)
    if config is not None and config.providers:
        registry = {}
        for pid, pc in config.providers.items():
            behavior = SimBehavior(latency=pc.latency_ms / 1000.0, failure_mode=pc.failure_mode)
            registry[pid] = SearchSimulator(pid, corpus, behavior)
        descriptors = {pid: pc.descriptor() for pid, pc in config.providers.items()}
        return registry, descriptors

    from .config import DEFAULT_COUNTRIES, DEFAULT_DIALECTS
    from .consolidation import DEFAULT_PROVIDER_TIERS
    from .federation import ProviderDescriptor

    present = sorted({entry.provider_id for entry in corpus.entries}, key=lambda p: p.value)
    registry = {pid: SearchSimulator(pid, corpus, SimBehavior()) for pid in present}
    descriptors = {
        pid: ProviderDescriptor(
            provider_id=pid,
            tier=DEFAULT_PROVIDER_TIERS[pid],
            dialect=DEFAULT_DIALECTS[pid],
            countries=DEFAULT_COUNTRIES[pid],
        )
        for pid in present
    }
    return registry, descriptors


def _load_queries(path: str | Path) -> list[GenericQuery]:
    queries = []
    for number, line in enumerate(Path(path).read_text("utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
            queries.append(
                GenericQuery(
                    terms=tuple(raw["terms"]),
                    jurisdiction=parse_jurisdiction(raw["jurisdiction"]),
                    issue_category=IssueCategory(raw.get("issue_category", "mixed")),
                    max_results_per_provider=int(raw.get("max_results", 50)),
                )
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise FixtureError(f"queries line {number} invalid: {exc!r}") from exc
    if not queries:
        raise FixtureError("queries file holds no queries")
    return queries


_TABLE_HEADERS = (
    "Database",
    "Cases Found (Raw)",
    "Relevance Score (Avg.)",
    "Unique Authorities",
    "Processing Time (s)",
)


def cmd_bench(args: argparse.Namespace) -> int:
    try:
        config = load_config(args.config) if args.config else None
    except LicesError as exc:
        print(f"config error: {exc.message}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        registry, descriptors = _bench_registry(config, args.corpus)
        queries = _load_queries(args.queries)
    except LicesError as exc:
        print(f"fixture error: {exc.message}", file=sys.stderr)
        return EXIT_FIXTURE

    from .federation import RoutingTable
    from .config import DEFAULT_ROUTING_RULES

    rules = tuple(config.routing_rules) if config is not None else tuple(DEFAULT_ROUTING_RULES)
    routing = RoutingTable(descriptors=descriptors, rules=rules)
    weights = config.weights if config is not None else None
    court_classes = config.court_classes if config is not None else None

    raw_counts: dict[ProviderId, int] = {}
    latencies: dict[ProviderId, list[float]] = {}
    relevance_sums: dict[ProviderId, list[float]] = {}
    unique_only: dict[ProviderId, int] = {}
    wall_times: list[float] = []
    raw_total = 0
    unique_count = 0
    all_scores: list[float] = []
    now = datetime.now(timezone.utc).date()

    for query in queries:
        plan = build_query_plan(query, routing)
        outcome = execute_plan(plan, registry)
        wall_times.append(outcome.wall_time)
        for stat in outcome.provider_stats:
            raw_counts[stat.provider_id] = raw_counts.get(stat.provider_id, 0) + stat.result_count
            latencies.setdefault(stat.provider_id, []).append(stat.elapsed)
        raw_total += len(outcome.results)
        authorities = deduplicate(outcome.results)
        unique_count += len(authorities)
        for authority in authorities:
            score = relevance_score(authority, query, weights, court_classes, now=now)
            all_scores.append(score)
            providers = {p.provider_id for p in authority.provenance}
            for pid in providers:
                relevance_sums.setdefault(pid, []).append(score)
            if len(providers) == 1:
                pid = next(iter(providers))
                unique_only[pid] = unique_only.get(pid, 0) + 1

    mean_wall = sum(wall_times) / len(wall_times)
    dedup_ratio = 1.0 - (unique_count / raw_total) if raw_total else 0.0

    provider_rows = []
    report_providers = {}
    for pid in sorted(raw_counts, key=lambda p: p.value):
        mean_latency = sum(latencies[pid]) / len(latencies[pid])
        scores = relevance_sums.get(pid, [])
        avg_rel = sum(scores) / len(scores) if scores else 0.0
        provider_rows.append(
            (pid.value, raw_counts[pid], f"{avg_rel:.2f}", unique_only.get(pid, 0), f"{mean_latency:.3f}")
        )
        report_providers[pid.value] = {
            "raw_count": raw_counts[pid],
            "mean_latency_s": round(mean_latency, 6),
            "avg_relevance": round(avg_rel, 6),
            "unique_only": unique_only.get(pid, 0),
        }
    combined_rel = sum(all_scores) / len(all_scores) if all_scores else 0.0
    provider_rows.append(
        ("Combined", raw_total, f"{combined_rel:.2f}", unique_count, f"{mean_wall:.3f}")
    )

    widths = [
        max(len(str(row[i])) for row in [_TABLE_HEADERS, *provider_rows]) for i in range(5)
    ]
    print("  ".join(h.ljust(widths[i]) for i, h in enumerate(_TABLE_HEADERS)))
    for row in provider_rows:
        print("  ".join(str(cell).ljust(widths[i]) for i, cell in enumerate(row)))

    bench_report = {
        "providers": report_providers,
        "combined": {
            "raw_total": raw_total,
            "unique_count": unique_count,
            "mean_wall_time_s": round(mean_wall, 6),
            "avg_relevance": round(combined_rel, 6),
        },
        "dedup_ratio": round(dedup_ratio, 6),
        "queries": len(queries),
    }
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(json.dumps(bench_report, indent=2, sort_keys=True) + "\n", "utf-8")
        print(f"wrote {args.out}")
    return EXIT_OK


def cmd_conflict_check(args: argparse.Namespace) -> int:
    try:
        store = ConflictStore.load(args.db)
    except LicesError as exc:
        print(f"config error: {exc.message}", file=sys.stderr)
        return EXIT_CONFIG
    party = Party(raw_name=args.party, role=PartyRole.CLIENT, entity_kind=EntityKind.UNKNOWN)
    outcome = comprehensive_check([party], store, threshold=args.threshold)
    print(f"verdict: {outcome.verdict.value} ({len(outcome.hits)} hit(s))")
    for hit in outcome.hits:
        print(
            f"  record={hit.record.record_id} side={hit.record.side.value} "
            f"similarity={hit.similarity:.4f}"
        )
    return EXIT_OK if outcome.verdict is Verdict.CLEAR else EXIT_CONFLICT


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    try:
        config = load_config(args.config)
        pipeline = ConsultationPipeline.from_config(config)
    except LicesError as exc:
        print(f"config error: {exc.message}", file=sys.stderr)
        return EXIT_CONFIG
    uvicorn.run(create_app(pipeline), host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lices", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="drive a full scripted consultation offline")
    run.add_argument("--config", required=True, help="path to config JSON")
    run.add_argument("--scenario", required=True, help="scenario fixture directory")
    run.add_argument("--out", help="output directory (default: <scenario>/out)")
    run.set_defaults(func=cmd_run)

    bench = sub.add_parser("bench", help="run queries through plan/fan-out/dedup and report")
    bench.add_argument("--corpus", required=True, help="corpus JSONL file")
    bench.add_argument("--queries", required=True, help="queries JSONL file")
    bench.add_argument("--out", help="write the bench report JSON here")
    bench.add_argument("--config", help="optional config for latencies/routing")
    bench.set_defaults(func=cmd_bench)

    check = sub.add_parser("conflict-check", help="match one party against a conflict db")
    check.add_argument("--db", required=True, help="conflict db JSONL file")
    check.add_argument("--party", required=True, help="party name to check")
    check.add_argument("--threshold", type=float, default=0.85)
    check.set_defaults(func=cmd_conflict_check)

    serve = sub.add_parser("serve", help="start the HTTP service")
    serve.add_argument("--config", required=True)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

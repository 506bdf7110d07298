"""Configuration loading and wiring of providers, routing, and policy knobs."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .conflicts import DEFAULT_THRESHOLD
from .consolidation import DEFAULT_COURT_CLASSES, DEFAULT_PROVIDER_TIERS, RelevanceWeights
from .errors import ConfigError
from .federation import (
    DEFAULT_TIMEOUT_S,
    Dialect,
    ProviderDescriptor,
    ProviderId,
    RoutingRule,
    RoutingTable,
)
from .domain import IssueCategory
from .providers import Corpus, FailureMode, SearchSimulator, SimBehavior, load_corpus

DEFAULT_DISCLAIMER = (
    "This report is an automated preliminary analysis and is not legal advice. "
    "Consult a qualified lawyer licensed in your jurisdiction before acting on "
    "any information in this report."
)

DEFAULT_DIALECTS: dict[ProviderId, Dialect] = {
    ProviderId.LEXISNEXIS_SIM: Dialect.SIM_BOOLEAN,
    ProviderId.WESTLAW_SIM: Dialect.SIM_BOOLEAN,
    ProviderId.CANLII: Dialect.CANLII_REST,
    ProviderId.JUSTICE_LAWS: Dialect.STATUTORY_FULLTEXT,
    ProviderId.SCC: Dialect.SIM_BOOLEAN,
}

# CanLII, Justice Laws and the SCC repository carry Canadian material only.
DEFAULT_COUNTRIES: dict[ProviderId, tuple[str, ...] | None] = {
    ProviderId.LEXISNEXIS_SIM: None,
    ProviderId.WESTLAW_SIM: None,
    ProviderId.CANLII: ("CA",),
    ProviderId.JUSTICE_LAWS: ("CA",),
    ProviderId.SCC: ("CA",),
}

# Published per-database response times scaled down by 10 for fast tests;
# applied when a provider block omits latency_ms.
DEFAULT_SIM_LATENCY_MS: dict[ProviderId, float] = {
    ProviderId.LEXISNEXIS_SIM: 320.0,
    ProviderId.WESTLAW_SIM: 280.0,
    ProviderId.CANLII: 110.0,
    ProviderId.JUSTICE_LAWS: 110.0,
    ProviderId.SCC: 110.0,
}

# Shipped routing defaults: regional database first for Canadian case law,
# statutory source added for statute questions, apex-court repository for
# case-law and mixed questions.
DEFAULT_ROUTING_RULES: list[RoutingRule] = [
    RoutingRule(
        country="CA",
        category=IssueCategory.CASE_LAW,
        order=(
            ProviderId.CANLII,
            ProviderId.LEXISNEXIS_SIM,
            ProviderId.WESTLAW_SIM,
            ProviderId.SCC,
        ),
    ),
    RoutingRule(
        country="CA",
        category=IssueCategory.STATUTE,
        order=(
            ProviderId.JUSTICE_LAWS,
            ProviderId.CANLII,
            ProviderId.LEXISNEXIS_SIM,
            ProviderId.WESTLAW_SIM,
        ),
    ),
    RoutingRule(
        country="CA",
        category=IssueCategory.PROCEDURE,
        order=(ProviderId.CANLII, ProviderId.LEXISNEXIS_SIM, ProviderId.WESTLAW_SIM),
    ),
    RoutingRule(
        country="CA",
        category=IssueCategory.MIXED,
        order=(
            ProviderId.CANLII,
            ProviderId.LEXISNEXIS_SIM,
            ProviderId.WESTLAW_SIM,
            ProviderId.JUSTICE_LAWS,
            ProviderId.SCC,
        ),
    ),
    RoutingRule(
        category=IssueCategory.STATUTE,
        order=(ProviderId.LEXISNEXIS_SIM, ProviderId.WESTLAW_SIM, ProviderId.JUSTICE_LAWS),
    ),
    RoutingRule(
        category=IssueCategory.CASE_LAW,
        order=(ProviderId.LEXISNEXIS_SIM, ProviderId.WESTLAW_SIM, ProviderId.SCC),
    ),
    RoutingRule(order=(ProviderId.LEXISNEXIS_SIM, ProviderId.WESTLAW_SIM)),
]


@dataclass
class ProviderConfig:
    provider_id: ProviderId
    corpus_path: str
    latency_ms: float = 0.0
    failure_mode: FailureMode = FailureMode.NONE
    timeout_s: float = DEFAULT_TIMEOUT_S
    tier: int = 1
    dialect: Dialect = Dialect.SIM_BOOLEAN
    countries: tuple[str, ...] | None = None

    def descriptor(self) -> ProviderDescriptor:
        return ProviderDescriptor(
            provider_id=self.provider_id,
            tier=self.tier,
            dialect=self.dialect,
            timeout=self.timeout_s,
            countries=self.countries,
        )


@dataclass
class AppConfig:
    providers: dict[ProviderId, ProviderConfig] = field(default_factory=dict)
    routing_rules: list[RoutingRule] = field(default_factory=lambda: list(DEFAULT_ROUTING_RULES))
    weights: RelevanceWeights = field(default_factory=RelevanceWeights)
    court_classes: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_COURT_CLASSES))
    conflict_db_path: str = ""
    conflict_threshold: float = DEFAULT_THRESHOLD
    audit_salt: str = "lices"
    max_rounds: int = 12
    disclaimer: str = DEFAULT_DISCLAIMER
    stub_script_path: str = ""
    data_dir: str = "data"
    session_idle_minutes: float = 60.0
    max_doc_bytes: int = 10 * 1024 * 1024
    # optional second reasoning engine, consulted only for citation cleanup
    verifier_enabled: bool = False
    verifier_endpoint: str = ""
    verifier_model: str = ""

    def routing_table(self) -> RoutingTable:
        descriptors = {pid: pc.descriptor() for pid, pc in self.providers.items()}
        return RoutingTable(descriptors=descriptors, rules=tuple(self.routing_rules))

    def build_registry(self) -> dict[ProviderId, SearchSimulator]:
        """Instantiate one simulator per configured provider (corpora cached by path)."""
        corpora: dict[str, Corpus] = {}
        registry: dict[ProviderId, SearchSimulator] = {}
        for pid, pc in self.providers.items():
            if pc.corpus_path not in corpora:
                corpora[pc.corpus_path] = load_corpus(pc.corpus_path)
            behavior = SimBehavior(latency=pc.latency_ms / 1000.0, failure_mode=pc.failure_mode)
            registry[pid] = SearchSimulator(pid, corpora[pc.corpus_path], behavior)
        return registry


def _parse_rule(raw: dict) -> RoutingRule:
    when = raw.get("when", {})
    category = when.get("category")
    return RoutingRule(
        country=when.get("country"),
        category=IssueCategory(category) if category else None,
        order=tuple(ProviderId(p) for p in raw["order"]),
    )


def load_config(path: str | Path) -> AppConfig:
    """Load the JSON config file; relative paths resolve against its directory."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        raw = json.loads(path.read_text("utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    base = path.parent

    def resolve(p: str) -> str:
        return str((base / p).resolve()) if p and not Path(p).is_absolute() else p

    config = AppConfig()
    try:
        for pid_str, praw in raw.get("providers", {}).items():
            pid = ProviderId(pid_str)
            config.providers[pid] = ProviderConfig(
                provider_id=pid,
                corpus_path=resolve(praw["corpus_path"]),
                latency_ms=float(praw.get("latency_ms", DEFAULT_SIM_LATENCY_MS[pid])),
                failure_mode=FailureMode(praw.get("failure_mode", "None")),
                timeout_s=float(praw.get("timeout_s", DEFAULT_TIMEOUT_S)),
                tier=int(praw.get("tier", DEFAULT_PROVIDER_TIERS.get(pid, 1))),
                dialect=Dialect(praw.get("dialect", DEFAULT_DIALECTS[pid].value)),
                countries=(
                    tuple(praw["countries"])
                    if "countries" in praw
                    else DEFAULT_COUNTRIES.get(pid)
                ),
            )
        if "routing_rules" in raw:
            config.routing_rules = [_parse_rule(r) for r in raw["routing_rules"]]
        if "weights" in raw:
            w = raw["weights"]
            config.weights = RelevanceWeights(
                term=w.get("term", 0.5),
                jurisdiction=w.get("jurisdiction", 0.2),
                court=w.get("court", 0.2),
                recency=w.get("recency", 0.1),
            )
            config.weights.validate()
        if "court_classes" in raw:
            config.court_classes = dict(raw["court_classes"])
        conflict = raw.get("conflict", {})
        config.conflict_db_path = resolve(conflict.get("db_path", ""))
        config.conflict_threshold = float(conflict.get("threshold", DEFAULT_THRESHOLD))
        config.audit_salt = raw.get("audit_salt", config.audit_salt)
        config.max_rounds = int(raw.get("max_rounds", config.max_rounds))
        config.disclaimer = raw.get("disclaimer", config.disclaimer)
        config.stub_script_path = resolve(raw.get("stub_script", ""))
        config.data_dir = resolve(raw.get("data_dir", config.data_dir))
        config.session_idle_minutes = float(
            raw.get("session_idle_minutes", config.session_idle_minutes)
        )
        config.max_doc_bytes = int(raw.get("max_doc_bytes", config.max_doc_bytes))
        verifier = raw.get("verifier", {})
        config.verifier_enabled = bool(verifier.get("enabled", False))
        config.verifier_endpoint = verifier.get("endpoint", "")
        config.verifier_model = verifier.get("model", "")
    except (KeyError, ValueError, TypeError) as exc:
        raise ConfigError(f"bad config value: {exc!r}") from exc
    return config

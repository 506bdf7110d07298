"""Jurisdiction-aware query planning and parallel multi-provider fan-out.

Plan ORDER encodes source priority (used later as a ranking tie-break);
EXECUTION is always parallel with one deadline per provider. Partial results
are a success: late or failed providers are recorded, never fatal.
"""

from __future__ import annotations

import time
from concurrent.futures import Future, ThreadPoolExecutor
from concurrent.futures import TimeoutError as FuturesTimeoutError
from dataclasses import dataclass
from datetime import date
from enum import Enum
from typing import Callable, Mapping, Protocol
from urllib.parse import urlencode

from .domain import IssueCategory, Jurisdiction
from .errors import (
    NoEligibleProviders,
    PlanRegistryMismatch,
    SimulatedTimeout,
    SimulatedUnavailable,
    UnsupportedDialect,
)

DEFAULT_MAX_RESULTS = 50
DEFAULT_TIMEOUT_S = 5.0


class ProviderId(str, Enum):
    LEXISNEXIS_SIM = "lexisnexis_sim"
    WESTLAW_SIM = "westlaw_sim"
    CANLII = "canlii"
    JUSTICE_LAWS = "justice_laws"
    SCC = "scc"


class Dialect(str, Enum):
    SIM_BOOLEAN = "sim_boolean"
    CANLII_REST = "canlii_rest"
    STATUTORY_FULLTEXT = "statutory_fulltext"


class FailureReason(str, Enum):
    TIMEOUT = "Timeout"
    UNAVAILABLE = "Unavailable"
    BAD_QUERY = "BadQuery"


@dataclass(frozen=True)
class GenericQuery:
    """Provider-agnostic research query."""

    terms: tuple[str, ...]
    jurisdiction: Jurisdiction
    issue_category: IssueCategory
    date_range: tuple[date, date] | None = None
    max_results_per_provider: int = DEFAULT_MAX_RESULTS

    def __post_init__(self) -> None:
        if not self.terms:
            raise ValueError("query terms must be non-empty")


@dataclass(frozen=True)
class ProviderDescriptor:
    provider_id: ProviderId
    tier: int  # 1 comprehensive, 2 regional, 3 statutory, 4 specialized
    dialect: Dialect
    timeout: float = DEFAULT_TIMEOUT_S
    countries: tuple[str, ...] | None = None  # None = any jurisdiction

    def __post_init__(self) -> None:
        if self.tier not in (1, 2, 3, 4):
            raise ValueError(f"tier must be 1..4, got {self.tier}")

    def serves(self, jurisdiction: Jurisdiction) -> bool:
        return self.countries is None or jurisdiction.country in self.countries


@dataclass(frozen=True)
class ProviderQuery:
    dialect: Dialect
    text: str
    params: tuple[tuple[str, str], ...] = ()
    max_results: int = DEFAULT_MAX_RESULTS

    def param_dict(self) -> dict[str, str]:
        return dict(self.params)


@dataclass(frozen=True)
class RoutingRule:
    """Provider order for queries matching the (country, category) predicate.

    None in a predicate slot means "any". First matching rule wins.
    """

    order: tuple[ProviderId, ...]
    country: str | None = None
    category: IssueCategory | None = None

    def matches(self, q: GenericQuery) -> bool:
        if self.country is not None and q.jurisdiction.country != self.country:
            return False
        if self.category is not None and q.issue_category != self.category:
            return False
        return True


@dataclass(frozen=True)
class RoutingTable:
    descriptors: Mapping[ProviderId, ProviderDescriptor]
    rules: tuple[RoutingRule, ...]


@dataclass(frozen=True)
class QueryPlan:
    entries: tuple[tuple[ProviderDescriptor, ProviderQuery], ...]
    rationale: str = ""

    def provider_ids(self) -> tuple[ProviderId, ...]:
        return tuple(descriptor.provider_id for descriptor, _ in self.entries)


@dataclass(frozen=True)
class RawResult:
    provider_id: ProviderId
    doc_id: str
    title: str
    citation_string: str
    court: str | None = None
    jurisdiction: str | None = None
    date: str | None = None
    headnote: str | None = None
    score_provider: float | None = None
    url: str | None = None


@dataclass(frozen=True)
class ProviderFailure:
    provider_id: ProviderId
    reason: FailureReason


@dataclass(frozen=True)
class ProviderStat:
    provider_id: ProviderId
    result_count: int
    elapsed: float


@dataclass(frozen=True)
class FanoutOutcome:
    results: tuple[RawResult, ...]
    failures: tuple[ProviderFailure, ...]
    wall_time: float
    provider_stats: tuple[ProviderStat, ...] = ()


def translate_query(q: GenericQuery, dialect: Dialect) -> ProviderQuery:
    """Serialize the generic query into one provider dialect, deterministically."""
    if dialect is Dialect.SIM_BOOLEAN:
        parts = [" AND ".join(q.terms), f"jurisdiction:{q.jurisdiction.code}"]
        if q.date_range is not None:
            parts.append(f"date_from:{q.date_range[0].isoformat()}")
            parts.append(f"date_to:{q.date_range[1].isoformat()}")
        return ProviderQuery(
            dialect=dialect, text=" ".join(parts), max_results=q.max_results_per_provider
        )
    if dialect is Dialect.CANLII_REST:
        params: list[tuple[str, str]] = [
            ("fullText", " ".join(q.terms)),
            ("jurisdiction", q.jurisdiction.code),
            ("resultCount", str(q.max_results_per_provider)),
        ]
        if q.date_range is not None:
            params.append(("decisionDateAfter", q.date_range[0].isoformat()))
            params.append(("decisionDateBefore", q.date_range[1].isoformat()))
        params.sort()
        return ProviderQuery(
            dialect=dialect,
            text=urlencode(params),
            params=tuple(params),
            max_results=q.max_results_per_provider,
        )
    if dialect is Dialect.STATUTORY_FULLTEXT:
        params = [
            ("text", " ".join(q.terms)),
            ("jurisdiction", q.jurisdiction.code),
            ("limit", str(q.max_results_per_provider)),
        ]
        if q.date_range is not None:
            params.append(("inForceAfter", q.date_range[0].isoformat()))
            params.append(("inForceBefore", q.date_range[1].isoformat()))
        params.sort()
        return ProviderQuery(
            dialect=dialect,
            text=urlencode(params),
            params=tuple(params),
            max_results=q.max_results_per_provider,
        )
    raise UnsupportedDialect(f"no translation for dialect {dialect!r}")


def build_query_plan(q: GenericQuery, routing: RoutingTable) -> QueryPlan:
    """Select and order providers for a query via the routing rules table.

    The first matching rule fixes the order; providers that do not serve the
    query's country are dropped. Deterministic for a fixed table.
    """
    rule = next((r for r in routing.rules if r.matches(q)), None)
    if rule is None:
        raise NoEligibleProviders(
            f"no routing rule for {q.jurisdiction.code}/{q.issue_category.value}"
        )
    entries: list[tuple[ProviderDescriptor, ProviderQuery]] = []
    skipped: list[str] = []
    for provider_id in rule.order:
        descriptor = routing.descriptors.get(provider_id)
        if descriptor is None:
            continue
        if not descriptor.serves(q.jurisdiction):
            skipped.append(provider_id.value)
            continue
        entries.append((descriptor, translate_query(q, descriptor.dialect)))
    if not entries:
        raise NoEligibleProviders(
            f"all providers filtered out for {q.jurisdiction.code}/{q.issue_category.value}"
        )
    rationale = (
        f"rule({rule.country or '*'}/{rule.category.value if rule.category else '*'})"
        + (f" minus [{', '.join(skipped)}] outside {q.jurisdiction.country}" if skipped else "")
    )
    return QueryPlan(entries=tuple(entries), rationale=rationale)


class Connector(Protocol):
    """Search connector contract shared by simulators and live clients."""

    def search(self, pq: ProviderQuery) -> list[RawResult]: ...


class ConnectorError(Exception):
    """Raised by connectors for provider-side faults not covered by sim errors."""


def execute_plan(
    plan: QueryPlan,
    registry: Mapping[ProviderId, Connector],
    clock: Callable[[], float] = time.perf_counter,
) -> FanoutOutcome:
    """Run every planned provider concurrently, each under its own deadline.

    Results are concatenated in plan order; a provider that misses its
    deadline or errors lands in failures and the rest proceed.
    """
    missing = [d.provider_id.value for d, _ in plan.entries if d.provider_id not in registry]
    if missing:
        raise PlanRegistryMismatch(f"registry missing providers: {', '.join(missing)}")
    if not plan.entries:
        return FanoutOutcome(results=(), failures=(), wall_time=0.0)

    def timed_search(connector: Connector, pq: ProviderQuery) -> tuple[list[RawResult], float]:
        t0 = clock()
        return connector.search(pq), clock() - t0

    start = clock()
    results: list[RawResult] = []
    failures: list[ProviderFailure] = []
    stats: list[ProviderStat] = []
    pool = ThreadPoolExecutor(max_workers=len(plan.entries))
    try:
        futures: list[tuple[ProviderDescriptor, Future]] = [
            (descriptor, pool.submit(timed_search, registry[descriptor.provider_id], pq))
            for descriptor, pq in plan.entries
        ]
        for descriptor, future in futures:
            remaining = descriptor.timeout - (clock() - start)
            try:
                provider_results, elapsed = future.result(timeout=max(remaining, 0.0))
                results.extend(provider_results)
                stats.append(
                    ProviderStat(
                        provider_id=descriptor.provider_id,
                        result_count=len(provider_results),
                        elapsed=elapsed,
                    )
                )
            except (FuturesTimeoutError, TimeoutError, SimulatedTimeout):
                failures.append(ProviderFailure(descriptor.provider_id, FailureReason.TIMEOUT))
            except (SimulatedUnavailable, ConnectorError):
                failures.append(ProviderFailure(descriptor.provider_id, FailureReason.UNAVAILABLE))
            except (UnsupportedDialect, ValueError):
                failures.append(ProviderFailure(descriptor.provider_id, FailureReason.BAD_QUERY))
    finally:
        # Abandon stragglers: a hung provider must not block the join barrier.
        pool.shutdown(wait=False, cancel_futures=True)
    wall_time = clock() - start
    return FanoutOutcome(
        results=tuple(results),
        failures=tuple(failures),
        wall_time=wall_time,
        provider_stats=tuple(stats),
    )

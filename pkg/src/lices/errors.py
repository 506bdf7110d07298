"""Error hierarchy shared across the pipeline.

Every error carries a stable ``code`` used by the HTTP layer and the CLI to
map faults onto wire responses and exit codes.
"""

from __future__ import annotations


class LicesError(Exception):
    """Base class; ``code`` is a stable machine-readable identifier."""

    code = "INTERNAL"

    def __init__(self, message: str = ""):
        super().__init__(message or self.__class__.__name__)
        self.message = message or self.__class__.__name__


class ConfigError(LicesError):
    code = "CONFIG_ERROR"


class FixtureError(LicesError):
    code = "FIXTURE_ERROR"


# domain
class UnknownJurisdiction(LicesError):
    code = "UNKNOWN_JURISDICTION"


# conflict engine
class EmptyAfterNormalization(LicesError):
    code = "EMPTY_AFTER_NORMALIZATION"


class StoreUnavailable(LicesError):
    code = "STORE_UNAVAILABLE"


# document ingest
class TooLarge(LicesError):
    code = "TOO_LARGE"


class UnsupportedFormat(LicesError):
    code = "UNSUPPORTED_FORMAT"


class EmptyDocument(LicesError):
    code = "EMPTY_DOCUMENT"


# llm adapter
class AdapterUnavailable(LicesError):
    code = "ADAPTER_UNAVAILABLE"


class MalformedResponse(LicesError):
    code = "MALFORMED_RESPONSE"


# interview engine
class WrongStatus(LicesError):
    code = "WRONG_STATUS"


class NoSuchPending(LicesError):
    code = "NO_SUCH_PENDING"


# research federation
class NoEligibleProviders(LicesError):
    code = "NO_ELIGIBLE_PROVIDERS"


class NoQueryTerms(LicesError):
    code = "NO_QUERY_TERMS"


class UnsupportedDialect(LicesError):
    code = "UNSUPPORTED_DIALECT"


class PlanRegistryMismatch(LicesError):
    code = "PLAN_REGISTRY_MISMATCH"


# provider simulators
class CorpusParseError(LicesError):
    code = "CORPUS_PARSE_ERROR"

    def __init__(self, line_number: int, message: str = ""):
        super().__init__(f"line {line_number}: {message}" if message else f"line {line_number}")
        self.line_number = line_number


class DuplicateDocId(LicesError):
    code = "DUPLICATE_DOC_ID"


class SimulatedTimeout(LicesError):
    code = "SIMULATED_TIMEOUT"


class SimulatedUnavailable(LicesError):
    code = "SIMULATED_UNAVAILABLE"


# consolidation
class Unkeyable(LicesError):
    code = "UNKEYABLE"


class BadWeights(LicesError):
    code = "BAD_WEIGHTS"


# report
class MissingDisclaimerConfig(LicesError):
    code = "MISSING_DISCLAIMER_CONFIG"


class InvalidAnalysis(LicesError):
    code = "INVALID_ANALYSIS"


class UnsupportedReportFormat(LicesError):
    code = "UNSUPPORTED_FORMAT"


# orchestrator
class IllegalTransition(LicesError):
    code = "ILLEGAL_TRANSITION"


class SessionExpired(LicesError):
    code = "SESSION_EXPIRED"


class SessionTerminated(LicesError):
    code = "SESSION_TERMINATED"


class AuditUnavailable(LicesError):
    code = "AUDIT_UNAVAILABLE"


class NotFound(LicesError):
    code = "NOT_FOUND"

"""Legal consultation orchestration: intake with two-stage conflict screening,
a dynamic adapter-driven interview, federated multi-provider research with
citation-level deduplication, and compliant structured reports."""

__version__ = "0.1.0"

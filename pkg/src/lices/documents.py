"""Document intake: text extraction plus rule-based party and key-term mining."""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from importlib import resources

from .conflicts import normalize_party_name
from .domain import EntityKind, Party, PartyRole
from .errors import EmptyAfterNormalization, EmptyDocument, TooLarge, UnsupportedFormat

DEFAULT_MAX_BYTES = 10 * 1024 * 1024


def _load_stopwords() -> frozenset[str]:
    text = resources.files("lices.data").joinpath("stopwords.txt").read_text("utf-8")
    return frozenset(w.strip() for w in text.splitlines() if w.strip())


STOPWORDS = _load_stopwords()


class DocumentFormat(str, Enum):
    TXT = "txt"
    MD = "md"
    PDF_STUB = "pdf_stub"
    DOCX_STUB = "docx_stub"


_EXTENSION_FORMATS = {
    ".txt": DocumentFormat.TXT,
    ".md": DocumentFormat.MD,
    ".pdf": DocumentFormat.PDF_STUB,
    ".docx": DocumentFormat.DOCX_STUB,
}


@dataclass(frozen=True)
class Document:
    doc_id: str
    matter_id: str
    filename: str
    declared_format: DocumentFormat
    text: str
    ingested_at: datetime
    unextracted: bool = False


def ingest_document(
    data: bytes,
    filename: str,
    matter_id: str,
    *,
    doc_id: str = "",
    now: datetime | None = None,
    max_bytes: int = DEFAULT_MAX_BYTES,
) -> Document:
    """Decode an upload into a Document; binary formats are stored unextracted.

    Format is inferred from the filename extension. txt/md bytes are decoded
    as UTF-8 with lossy replacement; pdf/docx are kept as extraction-hook
    stubs with empty text.
    """
    if len(data) > max_bytes:
        raise TooLarge(f"{filename}: {len(data)} bytes exceeds limit {max_bytes}")
    dot = filename.rfind(".")
    ext = filename[dot:].lower() if dot >= 0 else ""
    fmt = _EXTENSION_FORMATS.get(ext)
    if fmt is None:
        raise UnsupportedFormat(f"unknown extension {ext!r} for {filename}")
    unextracted = fmt in (DocumentFormat.PDF_STUB, DocumentFormat.DOCX_STUB)
    text = "" if unextracted else data.decode("utf-8", errors="replace")
    if not unextracted and not text.strip():
        raise EmptyDocument(f"{filename} contains no text")
    return Document(
        doc_id=doc_id or f"doc-{filename}",
        matter_id=matter_id,
        filename=filename,
        declared_format=fmt,
        text=text,
        ingested_at=now or datetime.now(timezone.utc),
        unextracted=unextracted,
    )


# A "name run": capitalized words on one line, allowing initials, ampersands
# and connective particles common in case styles. Case-sensitive on purpose:
# lowercase prose must terminate the run.
_NAME = r"[A-Z][\w'&.-]*(?:[ \t]+(?:[A-Z][\w'&.-]*|of|the|and|&))*"

_CAPTION_RE = re.compile(rf"\b({_NAME})[ \t]+v\.?[ \t]+({_NAME})")
_BETWEEN_RE = re.compile(rf"\b[Bb]etween[ \t]+({_NAME})[ \t]+and[ \t]+({_NAME})")
_CLOSING_RE = re.compile(
    r"^\s*(sincerely|yours truly|yours sincerely|regards|best regards|respectfully)[,.]?\s*$",
    re.IGNORECASE,
)
_SIGNATURE_LINE_RE = re.compile(rf"^\s*({_NAME})\s*$")


def _clean_candidate(name: str) -> str:
    return name.strip().strip(",;:").rstrip(".")


def extract_party_candidates(doc: Document) -> list[Party]:
    """Mine party names from captions, "between X and Y" clauses and signature blocks.

    Candidates are tagged role=related / kind=unknown; the conflict engine
    decides what they mean. Duplicates collapse on normalized name.
    """
    return extract_parties_from_text(doc.text)


def extract_parties_from_text(text: str) -> list[Party]:
    names: list[str] = []
    for match in _CAPTION_RE.finditer(text):
        names.extend([match.group(1), match.group(2)])
    for match in _BETWEEN_RE.finditer(text):
        names.extend([match.group(1), match.group(2)])

    lines = text.splitlines()
    for i, line in enumerate(lines):
        if _CLOSING_RE.match(line):
            for follower in lines[i + 1 : i + 4]:
                if not follower.strip():
                    continue
                sig = _SIGNATURE_LINE_RE.match(follower)
                if sig and not any(ch.isdigit() for ch in follower):
                    names.append(sig.group(1))
                break

    candidates: list[Party] = []
    seen: set[str] = set()
    for raw in names:
        cleaned = _clean_candidate(raw)
        if not cleaned:
            continue
        try:
            key = normalize_party_name(cleaned)
        except EmptyAfterNormalization:
            continue
        if key in seen:
            continue
        seen.add(key)
        candidates.append(Party(raw_name=cleaned, role=PartyRole.RELATED, entity_kind=EntityKind.UNKNOWN))
    return candidates


_TOKEN_RE = re.compile(r"[a-z][a-z0-9']*")


def key_terms_from_text(text: str, max_terms: int) -> list[str]:
    """Top terms by frequency (ties lexicographic), stopwords removed."""
    counts: dict[str, int] = {}
    for token in _TOKEN_RE.findall(text.lower()):
        token = token.strip("'")
        if len(token) < 2 or token in STOPWORDS:
            continue
        counts[token] = counts.get(token, 0) + 1
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return [term for term, _ in ranked[:max_terms]]


def extract_key_terms(doc: Document, max_terms: int) -> list[str]:
    return key_terms_from_text(doc.text, max_terms)

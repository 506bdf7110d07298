"""Dynamic interview loop: adapter-generated questions with repeat suppression.

Question history is kept in the state so near-duplicate questions (token
similarity >= 0.9 against anything already asked) are never put to the
client; an all-duplicate batch gets one retry before the interview ends.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from .conflicts import name_similarity, normalize_text
from .documents import Document
from .domain import Jurisdiction, Matter, SessionStatus
from .errors import NoSuchPending, WrongStatus
from .llm import LlmAdapter, LlmContext, Question

DEFAULT_MAX_ROUNDS = 12
DUPLICATE_SIMILARITY = 0.9


class InterviewPhase(str, Enum):
    ACTIVE = "Active"
    COMPLETE = "Complete"


@dataclass(frozen=True)
class QaEntry:
    question_id: str
    question: str
    answer: str | None  # None while pending


@dataclass(frozen=True)
class InterviewState:
    matter_id: str
    qa_history: tuple[QaEntry, ...] = ()
    asked_normalized: frozenset[str] = frozenset()
    round: int = 0
    max_rounds: int = DEFAULT_MAX_ROUNDS
    phase: InterviewPhase = InterviewPhase.ACTIVE
    # context snapshot taken at start; feeds the adapter each round
    matter_summary: str = ""
    document_texts: tuple[str, ...] = ()
    jurisdiction: Jurisdiction = Jurisdiction(country="CA")

    @property
    def pending(self) -> QaEntry | None:
        if self.qa_history and self.qa_history[-1].answer is None:
            return self.qa_history[-1]
        return None

    def context(self) -> LlmContext:
        answered = tuple(
            (entry.question, entry.answer) for entry in self.qa_history if entry.answer is not None
        )
        return LlmContext(
            matter_summary=self.matter_summary,
            document_texts=self.document_texts,
            qa_history=answered,
            jurisdiction=self.jurisdiction,
        )


@dataclass(frozen=True)
class Done:
    """Interview finished; no further questions."""

    reason: str


def start_interview(
    matter: Matter, docs: list[Document], max_rounds: int = DEFAULT_MAX_ROUNDS
) -> InterviewState:
    if matter.status is not SessionStatus.DOCUMENTS_COLLECTED:
        raise WrongStatus(f"cannot start interview from {matter.status.value}")
    return InterviewState(
        matter_id=matter.matter_id,
        max_rounds=max_rounds,
        matter_summary=matter.summary,
        document_texts=tuple(d.text for d in docs if d.text),
        jurisdiction=matter.client.jurisdiction,
    )


def _is_duplicate(state: InterviewState, question: Question) -> bool:
    normalized = normalize_text(question.text)
    if not normalized:
        return True
    return any(
        name_similarity(normalized, asked) >= DUPLICATE_SIMILARITY
        for asked in state.asked_normalized
    )


def _pick_fresh(state: InterviewState, questions: tuple[Question, ...]) -> Question | None:
    for question in questions:
        if not _is_duplicate(state, question):
            return question
    return None


def _complete(state: InterviewState, reason: str) -> tuple[InterviewState, Done]:
    return replace(state, phase=InterviewPhase.COMPLETE), Done(reason=reason)


def next_question(
    state: InterviewState, adapter: LlmAdapter
) -> tuple[InterviewState, Question | Done]:
    """Fetch the next non-duplicate question, or Done when the interview is over.

    Termination precedence: round cap, then adapter done, then two
    consecutive all-duplicate batches.
    """
    if state.phase is InterviewPhase.COMPLETE:
        return state, Done(reason="complete")
    if state.pending is not None:
        raise NoSuchPending("a question is already pending an answer")
    if state.round >= state.max_rounds:
        return _complete(state, "round cap reached")

    batch = adapter.generate_questions(state.context())
    if batch.done:
        return _complete(state, "adapter signalled done")
    chosen = _pick_fresh(state, batch.questions)
    if chosen is None:
        retry = adapter.generate_questions(state.context())
        if retry.done:
            return _complete(state, "adapter signalled done")
        chosen = _pick_fresh(state, retry.questions)
        if chosen is None:
            return _complete(state, "only duplicate questions remain")

    new_state = replace(
        state,
        qa_history=state.qa_history + (QaEntry(chosen.question_id, chosen.text, None),),
        asked_normalized=state.asked_normalized | {normalize_text(chosen.text)},
        round=state.round + 1,
    )
    return new_state, chosen


def record_answer(state: InterviewState, question_id: str, answer: str) -> InterviewState:
    """Store the answer for the pending question (empty answers are allowed)."""
    pending = state.pending
    if pending is None or pending.question_id != question_id:
        raise NoSuchPending(f"question {question_id!r} is not pending")
    answered = state.qa_history[:-1] + (replace(pending, answer=answer),)
    new_state = replace(state, qa_history=answered)
    if new_state.round >= new_state.max_rounds:
        new_state = replace(new_state, phase=InterviewPhase.COMPLETE)
    return new_state


def _escape_line(text: str) -> str:
    # embedded newlines must not be able to forge a Q:/A: line
    return text.replace("\\", "\\\\").replace("\n", "\\n")


def transcript(state: InterviewState) -> str:
    """Deterministic Q/A serialization in ask order.

    Each pair renders to exactly two lines; newlines inside answers are
    escaped so distinct histories never serialize identically.
    """
    lines: list[str] = []
    for entry in state.qa_history:
        lines.append(f"Q: {_escape_line(entry.question)}")
        lines.append(f"A: {_escape_line(entry.answer if entry.answer is not None else '')}")
    return "".join(line + "\n" for line in lines)

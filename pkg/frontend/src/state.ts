// Session view state. Every field is derived from a server response; the UI
// never invents status, questions, or report content on its own.

import type { ConflictOutcome, QuestionStep, ResearchSummary } from './api';

export type Stage =
  | 'intake'
  | 'documents'
  | 'interview'
  | 'pipeline'
  | 'report'
  | 'terminated';

export interface QaPair {
  question: string;
  answer: string;
}

export interface UiSessionView {
  stage: Stage;
  serverStatus: string;
  matterId: string;
  conflict: ConflictOutcome | null;
  pendingQuestion: { questionId: string; text: string } | null;
  transcript: QaPair[];
  researchSummary: ResearchSummary | null;
  reportJson: string | null;
  error: string | null;
}

export function initialView(): UiSessionView {
  return {
    stage: 'intake',
    serverStatus: '',
    matterId: '',
    conflict: null,
    pendingQuestion: null,
    transcript: [],
    researchSummary: null,
    reportJson: null,
    error: null,
  };
}

export function applyConflictOutcome(view: UiSessionView, outcome: ConflictOutcome): UiSessionView {
  if (outcome.verdict !== 'Clear') {
    // blocking terminal state: only the termination notice is reachable
    return {
      ...view,
      stage: 'terminated',
      serverStatus: outcome.status,
      conflict: outcome,
      pendingQuestion: null,
    };
  }
  const stage: Stage = outcome.stage === 'preliminary' ? 'documents' : 'pipeline';
  return { ...view, stage, serverStatus: outcome.status, conflict: null };
}

export function applyQuestionStep(view: UiSessionView, step: QuestionStep): UiSessionView {
  if (step.done) {
    return { ...view, stage: 'interview', serverStatus: step.status, pendingQuestion: null };
  }
  return {
    ...view,
    stage: 'interview',
    serverStatus: step.status,
    pendingQuestion: { questionId: step.question!.question_id, text: step.question!.text },
  };
}

export function applyAnswer(view: UiSessionView, answer: string, status: string): UiSessionView {
  const pending = view.pendingQuestion;
  if (!pending) return view;
  return {
    ...view,
    serverStatus: status,
    transcript: [...view.transcript, { question: pending.text, answer }],
    pendingQuestion: null,
  };
}

export function applyResearch(view: UiSessionView, summary: ResearchSummary): UiSessionView {
  return { ...view, stage: 'pipeline', serverStatus: summary.status, researchSummary: summary };
}

export function applyReport(view: UiSessionView, rawJson: string, status: string): UiSessionView {
  return { ...view, stage: 'report', serverStatus: status, reportJson: rawJson };
}

export interface IntakeValidation {
  ok: boolean;
  fieldErrors: Record<string, string>;
}

// Client-side guard only for required fields; everything legal stays server-side.
export function validateIntake(fields: {
  name: string;
  jurisdiction: string;
  opposing: string;
}): IntakeValidation {
  const fieldErrors: Record<string, string> = {};
  if (!fields.name.trim()) fieldErrors.name = 'Client name is required';
  if (!fields.jurisdiction.trim()) fieldErrors.jurisdiction = 'Jurisdiction is required';
  if (!fields.opposing.trim()) fieldErrors.opposing = 'At least one opposing party is required';
  return { ok: Object.keys(fieldErrors).length === 0, fieldErrors };
}

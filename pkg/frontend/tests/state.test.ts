import { describe, expect, it } from 'vitest';

import {
  applyAnswer,
  applyConflictOutcome,
  applyQuestionStep,
  applyReport,
  initialView,
  validateIntake,
} from '../src/state';

describe('intake validation', () => {
  it('flags each missing required field', () => {
    const result = validateIntake({ name: '', jurisdiction: '  ', opposing: 'x' });
    expect(result.ok).toBe(false);
    expect(Object.keys(result.fieldErrors).sort()).toEqual(['jurisdiction', 'name']);
  });

  it('passes when required fields are present', () => {
    const result = validateIntake({ name: 'a', jurisdiction: 'CA-ON', opposing: 'b' });
    expect(result.ok).toBe(true);
  });
});

describe('conflict outcomes', () => {
  it('clear preliminary advances to documents', () => {
    const view = applyConflictOutcome(initialView(), {
      stage: 'preliminary',
      verdict: 'Clear',
      hit_count: 0,
      status: 'PrelimCleared',
    });
    expect(view.stage).toBe('documents');
    expect(view.conflict).toBeNull();
  });

  it('any non-clear verdict is terminal', () => {
    for (const verdict of ['Conflict', 'PotentialConflict'] as const) {
      const view = applyConflictOutcome(initialView(), {
        stage: 'preliminary',
        verdict,
        hit_count: 1,
        status: 'TerminatedConflict',
      });
      expect(view.stage).toBe('terminated');
      expect(view.conflict?.verdict).toBe(verdict);
    }
  });
});

describe('interview state', () => {
  it('stores the pending question from the server', () => {
    const view = applyQuestionStep(initialView(), {
      done: false,
      question: { question_id: 'q1', text: 'When?' },
      status: 'InterviewInProgress',
    });
    expect(view.pendingQuestion?.text).toBe('When?');
  });

  it('answer moves the pair into the transcript', () => {
    let view = applyQuestionStep(initialView(), {
      done: false,
      question: { question_id: 'q1', text: 'When?' },
      status: 'InterviewInProgress',
    });
    view = applyAnswer(view, 'March 2021', 'InterviewInProgress');
    expect(view.transcript).toEqual([{ question: 'When?', answer: 'March 2021' }]);
    expect(view.pendingQuestion).toBeNull();
  });
});

describe('report state', () => {
  it('keeps the raw server body untouched', () => {
    const raw = '{\n  "disclaimer": "text",\n  "weird":   "spacing"\n}\n';
    const view = applyReport(initialView(), raw, 'ReportReady');
    expect(view.reportJson).toBe(raw);
    expect(view.stage).toBe('report');
  });
});

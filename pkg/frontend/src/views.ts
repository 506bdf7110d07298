// Render functions: one screen per pipeline stage plus the blocking conflict
// modal. Pure DOM construction from the view state; no legal content is ever
// fabricated here, every displayed fact comes from a server response.

import type { UiSessionView } from './state';

export interface Handlers {
  onIntakeSubmit(form: {
    name: string;
    jurisdiction: string;
    contact: string;
    opposing: string;
    summary: string;
    category: string;
  }): void;
  onDocumentsContinue(files: { filename: string; text: string }[]): void;
  onAnswerSubmit(answer: string): void;
  onSpeechRequest(target: HTMLTextAreaElement): boolean; // false = unsupported
  onRunResearch(): void;
  onRunAnalysis(): void;
  onViewReport(): void;
  onDownload(format: 'json' | 'markdown' | 'html'): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text = '',
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  if (text) node.textContent = text;
  return node;
}

function button(label: string, id: string, onClick: () => void, disabled = false): HTMLButtonElement {
  const node = el('button', { id, type: 'button' }, label);
  node.disabled = disabled;
  node.addEventListener('click', onClick);
  return node;
}

export function renderIntake(
  view: UiSessionView,
  handlers: Handlers,
  fieldErrors: Record<string, string> = {},
): HTMLElement {
  const root = el('section', { class: 'screen intake' });
  root.append(el('h2', {}, 'Client intake'));

  const fields: [string, string, string][] = [
    ['name', 'Client name', 'text'],
    ['jurisdiction', 'Jurisdiction (e.g. CA-ON)', 'text'],
    ['contact', 'Contact (optional)', 'text'],
    ['opposing', 'Opposing party', 'text'],
  ];
  const inputs: Record<string, HTMLInputElement> = {};
  for (const [id, label, type] of fields) {
    const row = el('div', { class: 'field' });
    row.append(el('label', { for: `intake-${id}` }, label));
    const input = el('input', { id: `intake-${id}`, type });
    inputs[id] = input;
    row.append(input);
    if (fieldErrors[id]) {
      row.append(el('span', { class: 'field-error', 'data-field': id }, fieldErrors[id]));
    }
    root.append(row);
  }
  const summaryRow = el('div', { class: 'field' });
  summaryRow.append(el('label', { for: 'intake-summary' }, 'What happened?'));
  const summary = el('textarea', { id: 'intake-summary', rows: '4' });
  summaryRow.append(summary);
  root.append(summaryRow);

  const categoryRow = el('div', { class: 'field' });
  categoryRow.append(el('label', { for: 'intake-category' }, 'Kind of question'));
  const category = el('select', { id: 'intake-category' });
  for (const value of ['case_law', 'statute', 'procedure', 'mixed']) {
    category.append(el('option', { value }, value));
  }
  categoryRow.append(category);
  root.append(categoryRow);

  root.append(
    button('Start consultation', 'intake-submit', () =>
      handlers.onIntakeSubmit({
        name: inputs.name.value,
        jurisdiction: inputs.jurisdiction.value,
        contact: inputs.contact.value,
        opposing: inputs.opposing.value,
        summary: summary.value,
        category: category.value,
      }),
    ),
  );
  return root;
}

export function renderDocuments(view: UiSessionView, handlers: Handlers): HTMLElement {
  const root = el('section', { class: 'screen documents' });
  root.append(el('h2', {}, 'Documents'));
  root.append(
    el('p', {}, 'Add any letters, agreements, or notices as plain text, or continue without documents.'),
  );
  const nameInput = el('input', { id: 'doc-filename', type: 'text', placeholder: 'letter.txt' });
  const textInput = el('textarea', { id: 'doc-text', rows: '8' });
  const staged: { filename: string; text: string }[] = [];
  const stagedList = el('ul', { id: 'doc-staged' });
  root.append(nameInput, textInput, stagedList);
  root.append(
    button('Add document', 'doc-add', () => {
      if (!nameInput.value.trim() || !textInput.value.trim()) return;
      staged.push({ filename: nameInput.value.trim(), text: textInput.value });
      stagedList.append(el('li', {}, nameInput.value.trim()));
      nameInput.value = '';
      textInput.value = '';
    }),
  );
  root.append(
    button('Continue to interview', 'doc-continue', () => handlers.onDocumentsContinue(staged)),
  );
  return root;
}

export function renderInterview(view: UiSessionView, handlers: Handlers): HTMLElement {
  const root = el('section', { class: 'screen interview' });
  root.append(el('h2', {}, 'Interview'));

  const transcript = el('ol', { class: 'transcript', id: 'transcript' });
  for (const pair of view.transcript) {
    const item = el('li', {});
    item.append(el('p', { class: 'question' }, `Q: ${pair.question}`));
    item.append(el('p', { class: 'answer' }, `A: ${pair.answer}`));
    transcript.append(item);
  }
  root.append(transcript);

  if (view.pendingQuestion) {
    const card = el('div', { class: 'question-card' });
    card.append(el('p', { class: 'question', id: 'current-question' }, view.pendingQuestion.text));
    const answer = el('textarea', { id: 'answer-input', rows: '3' });
    card.append(answer);
    const submit = button('Submit answer', 'answer-submit', () => {
      submit.disabled = true; // no double submits; re-enabled by the next render
      handlers.onAnswerSubmit(answer.value);
    });
    const mic = button('Speak', 'answer-speak', () => {
      if (!handlers.onSpeechRequest(answer)) {
        mic.remove();
      }
    });
    card.append(submit, mic);
    root.append(card);
  } else {
    root.append(el('p', { class: 'waiting' }, 'Checking for the next question…'));
  }
  return root;
}

export function renderPipeline(view: UiSessionView, handlers: Handlers): HTMLElement {
  const root = el('section', { class: 'screen pipeline' });
  root.append(el('h2', {}, 'Analysis in progress'));
  root.append(el('p', { id: 'pipeline-status' }, `Status: ${view.serverStatus}`));

  const research = button(
    'Run research',
    'pipeline-research',
    () => handlers.onRunResearch(),
    view.serverStatus !== 'ComprehensiveCleared',
  );
  const analysis = button(
    'Run analysis',
    'pipeline-analysis',
    () => handlers.onRunAnalysis(),
    view.serverStatus !== 'Consolidating',
  );
  const report = button(
    'View report',
    'pipeline-report',
    () => handlers.onViewReport(),
    view.serverStatus !== 'Analyzed' && view.serverStatus !== 'ReportReady',
  );
  root.append(research, analysis, report);

  if (view.researchSummary) {
    const summary = view.researchSummary;
    root.append(
      el(
        'p',
        { id: 'research-summary' },
        `Found ${summary.raw_results} results, ${summary.unique_authorities} unique authorities.`,
      ),
    );
    if (summary.failures.length) {
      const failures = el('ul', { class: 'failures', id: 'research-failures' });
      for (const f of summary.failures) {
        failures.append(el('li', {}, `${f.provider_id}: ${f.reason}`));
      }
      root.append(failures);
    }
  }
  return root;
}

interface ReportShape {
  material_facts: string[];
  legal_issues: string[];
  authorities: { title: string; canonical_key: { key: string }; relevance: number }[];
  recommended_actions: string[];
  unverified_references: string[];
  provider_failures: { provider_id: string; reason: string }[];
  disclaimer: string;
}

export function renderReport(view: UiSessionView, handlers: Handlers): HTMLElement {
  const root = el('section', { class: 'screen report' });
  if (!view.reportJson) {
    root.append(el('h2', {}, 'Report'));
    root.append(el('p', { id: 'pipeline-status' }, `Status: ${view.serverStatus}`));
    return root;
  }
  const report = JSON.parse(view.reportJson) as ReportShape;

  // pinned: visible before any scrolling, on every report view
  const banner = el('aside', { class: 'disclaimer-banner', id: 'disclaimer-banner' });
  banner.append(el('strong', {}, 'Disclaimer'));
  banner.append(el('p', {}, report.disclaimer));
  root.append(banner);

  root.append(el('h2', {}, 'Consultation report'));

  const section = (title: string, items: string[], cls: string) => {
    root.append(el('h3', {}, title));
    const list = el('ul', { class: cls });
    for (const item of items.length ? items : ['none identified']) {
      list.append(el('li', {}, item));
    }
    root.append(list);
  };
  section('Material Facts', report.material_facts, 'facts');
  section('Legal Issues', report.legal_issues, 'issues');

  root.append(el('h3', {}, 'Case Law & Precedents'));
  const authorities = el('ol', { class: 'authorities' });
  for (const authority of report.authorities) {
    authorities.append(
      el(
        'li',
        {},
        `${authority.title} — ${authority.canonical_key.key} (relevance ${authority.relevance.toFixed(3)})`,
      ),
    );
  }
  root.append(authorities);
  if (report.unverified_references.length) {
    section('Unverified References', report.unverified_references, 'unverified');
  }
  if (report.provider_failures.length) {
    root.append(el('h3', {}, 'Provider Failures'));
    const failures = el('ul', { class: 'failures', id: 'report-failures' });
    for (const f of report.provider_failures) {
      failures.append(el('li', {}, `${f.provider_id}: ${f.reason}`));
    }
    root.append(failures);
  }
  section('Recommended Actions', report.recommended_actions, 'actions');
  section('Disclaimer', [report.disclaimer], 'disclaimer');

  const downloads = el('div', { class: 'downloads' });
  downloads.append(button('Download JSON', 'download-json', () => handlers.onDownload('json')));
  downloads.append(
    button('Download Markdown', 'download-markdown', () => handlers.onDownload('markdown')),
  );
  downloads.append(button('Download HTML', 'download-html', () => handlers.onDownload('html')));
  root.append(downloads);
  return root;
}

export function renderTerminated(view: UiSessionView): HTMLElement {
  const root = el('section', { class: 'screen terminated' });
  const notice = el('div', { class: 'modal-overlay', id: 'conflict-modal', role: 'dialog' });
  const inner = el('div', { class: 'modal' });
  inner.append(el('h2', {}, 'Consultation cannot proceed'));
  inner.append(
    el(
      'p',
      { id: 'conflict-notice' },
      'A conflict of interest was identified during screening. This consultation has been ' +
        'closed and no analysis will be produced. Please contact the firm directly.',
    ),
  );
  if (view.conflict) {
    inner.append(
      el('p', { class: 'conflict-detail' }, `Screening stage: ${view.conflict.stage}`),
    );
  }
  notice.append(inner);
  root.append(notice);
  return root;
}

export function render(
  view: UiSessionView,
  handlers: Handlers,
  intakeErrors: Record<string, string> = {},
): HTMLElement {
  const container = document.createElement('main');
  let screen: HTMLElement;
  switch (view.stage) {
    case 'intake':
      screen = renderIntake(view, handlers, intakeErrors);
      break;
    case 'documents':
      screen = renderDocuments(view, handlers);
      break;
    case 'interview':
      screen = renderInterview(view, handlers);
      break;
    case 'pipeline':
      screen = renderPipeline(view, handlers);
      break;
    case 'report':
      screen = renderReport(view, handlers);
      break;
    case 'terminated':
      screen = renderTerminated(view);
      break;
  }
  container.append(screen);
  if (view.stage === 'terminated') {
    // belt and braces: nothing under the modal stays actionable
    for (const node of container.querySelectorAll('button, input, textarea, select')) {
      (node as HTMLButtonElement).disabled = true;
    }
  }
  if (view.error) {
    const banner = el('div', { class: 'error-banner', id: 'error-banner' }, view.error);
    container.prepend(banner);
  }
  return container;
}

// Single-page controller: one consultation per tab, every state change
// driven by a server response.

import { ApiClient, ServerError } from './api';
import { createSpeechCapture } from './speech';
import {
  applyAnswer,
  applyConflictOutcome,
  applyQuestionStep,
  applyReport,
  applyResearch,
  initialView,
  UiSessionView,
  validateIntake,
} from './state';
import { Handlers, render } from './views';

const API_BASE = (window as { LICES_API_BASE?: string }).LICES_API_BASE ?? 'http://127.0.0.1:8000';

export function downloadText(filename: string, text: string, mime: string): void {
  // the exact server body goes into the blob: no parsing, no re-serialization
  const blob = new Blob([text], { type: mime });
  const url = URL.createObjectURL(blob);
  const anchor = document.createElement('a');
  anchor.href = url;
  anchor.download = filename;
  anchor.click();
  URL.revokeObjectURL(url);
}

export class AppController {
  private view: UiSessionView = initialView();
  private fieldErrors: Record<string, string> = {};

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
    private readonly download: typeof downloadText = downloadText,
  ) {}

  start(): void {
    this.paint();
  }

  private paint(): void {
    this.root.innerHTML = '';
    this.root.append(render(this.view, this.handlers(), this.fieldErrors));
  }

  private setView(view: UiSessionView): void {
    this.view = view;
    this.paint();
  }

  private fail(error: unknown): void {
    const message =
      error instanceof ServerError ? `${error.body.code}: ${error.body.message}` : String(error);
    this.setView({ ...this.view, error: message });
  }

  private handlers(): Handlers {
    return {
      onIntakeSubmit: (form) => void this.submitIntake(form),
      onDocumentsContinue: (files) => void this.submitDocuments(files),
      onAnswerSubmit: (answer) => void this.submitAnswer(answer),
      onSpeechRequest: (target) => {
        const capture = createSpeechCapture((text) => {
          target.value = target.value ? `${target.value} ${text}` : text;
        });
        if (!capture) return false;
        capture.start();
        return true;
      },
      onRunResearch: () => void this.runResearch(),
      onRunAnalysis: () => void this.runAnalysis(),
      onViewReport: () => void this.loadReport(),
      onDownload: (format) => void this.downloadReport(format),
    };
  }

  private async submitIntake(form: {
    name: string;
    jurisdiction: string;
    contact: string;
    opposing: string;
    summary: string;
    category: string;
  }): Promise<void> {
    const check = validateIntake(form);
    this.fieldErrors = check.fieldErrors;
    if (!check.ok) {
      this.paint(); // inline errors only; no server call is made
      return;
    }
    try {
      const intake = {
        name: form.name,
        jurisdiction: form.jurisdiction,
        contact: form.contact,
        opposing: [form.opposing],
        summary: form.summary,
        issueCategories: [form.category],
      };
      const clientId = await this.api.createClient(intake);
      await this.api.createMatter(clientId, intake);
      const outcome = await this.api.conflictCheck('preliminary');
      this.setView(applyConflictOutcome({ ...this.view, error: null }, outcome));
    } catch (error) {
      this.fail(error);
    }
  }

  private async submitDocuments(files: { filename: string; text: string }[]): Promise<void> {
    try {
      await this.api.uploadDocuments(
        files.map((f) => ({
          filename: f.filename,
          contentBase64: btoa(unescape(encodeURIComponent(f.text))),
        })),
      );
      await this.advanceInterview();
    } catch (error) {
      this.fail(error);
    }
  }

  private async advanceInterview(): Promise<void> {
    try {
      const step = await this.api.interviewNext();
      if (step.done) {
        const outcome = await this.api.conflictCheck('comprehensive');
        this.setView(applyConflictOutcome({ ...this.view, error: null }, outcome));
        return;
      }
      this.setView(applyQuestionStep({ ...this.view, error: null }, step));
    } catch (error) {
      this.fail(error);
    }
  }

  private async submitAnswer(answer: string): Promise<void> {
    const pending = this.view.pendingQuestion;
    if (!pending) return;
    try {
      const out = await this.api.interviewAnswer(pending.questionId, answer);
      this.view = applyAnswer(this.view, answer, out.status);
      await this.advanceInterview();
    } catch (error) {
      this.fail(error);
    }
  }

  private async runResearch(): Promise<void> {
    try {
      const summary = await this.api.research();
      this.setView(applyResearch({ ...this.view, error: null }, summary));
    } catch (error) {
      this.fail(error);
    }
  }

  private async runAnalysis(): Promise<void> {
    try {
      const out = await this.api.analysis();
      this.setView({ ...this.view, serverStatus: out.status, error: null });
    } catch (error) {
      this.fail(error);
    }
  }

  private async loadReport(): Promise<void> {
    try {
      const raw = await this.api.reportRaw('json');
      this.setView(applyReport({ ...this.view, error: null }, raw, 'ReportReady'));
    } catch (error) {
      this.fail(error);
    }
  }

  private async downloadReport(format: 'json' | 'markdown' | 'html'): Promise<void> {
    try {
      const raw = await this.api.reportRaw(format);
      const extension = format === 'markdown' ? 'md' : format;
      const mime =
        format === 'json' ? 'application/json' : format === 'html' ? 'text/html' : 'text/markdown';
      this.download(`report.${extension}`, raw, mime);
    } catch (error) {
      this.fail(error);
    }
  }
}

const appRoot = document.querySelector<HTMLElement>('#app');
if (appRoot) {
  new AppController(appRoot, new ApiClient(API_BASE)).start();
}

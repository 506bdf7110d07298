// Typed client over the consultation service HTTP API. The session token
// lives in memory only; it is attached as a bearer header and never persisted.

export interface ApiError {
  code: string;
  message: string;
}

export class ServerError extends Error {
  constructor(public readonly status: number, public readonly body: ApiError) {
    super(`${body.code}: ${body.message}`);
  }
}

export interface ConflictOutcome {
  stage: 'preliminary' | 'comprehensive';
  verdict: 'Clear' | 'PotentialConflict' | 'Conflict';
  hit_count: number;
  status: string;
}

export interface QuestionStep {
  done: boolean;
  reason?: string;
  question?: { question_id: string; text: string };
  status: string;
}

export interface ResearchSummary {
  raw_results: number;
  unique_authorities: number;
  failures: { provider_id: string; reason: string }[];
  wall_time: number;
  status: string;
}

export interface IntakeForm {
  name: string;
  jurisdiction: string;
  contact: string;
  opposing: string[];
  summary: string;
  issueCategories: string[];
}

export class ApiClient {
  private token = '';
  private matterId = '';

  constructor(private readonly baseUrl: string, private readonly fetchFn: typeof fetch = fetch) {}

  get currentMatterId(): string {
    return this.matterId;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.send(method, path, body);
    return (await response.json()) as T;
  }

  private async send(method: string, path: string, body?: unknown): Promise<Response> {
    const headers: Record<string, string> = {};
    if (body !== undefined) headers['Content-Type'] = 'application/json';
    if (this.token) headers['Authorization'] = `Bearer ${this.token}`;
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let payload: ApiError;
      try {
        payload = (await response.json()) as ApiError;
      } catch {
        payload = { code: 'HTTP_' + response.status, message: response.statusText };
      }
      throw new ServerError(response.status, payload);
    }
    return response;
  }

  async createClient(form: IntakeForm): Promise<string> {
    const body = {
      name: form.name,
      jurisdiction: form.jurisdiction,
      contact: form.contact,
      opposing: form.opposing,
      related: [],
    };
    const out = await this.request<{ client_id: string }>('POST', '/clients', body);
    return out.client_id;
  }

  async createMatter(clientId: string, form: IntakeForm): Promise<string> {
    const out = await this.request<{ matter_id: string; session_token: string; status: string }>(
      'POST',
      '/matters',
      { client_id: clientId, summary: form.summary, issue_categories: form.issueCategories },
    );
    this.token = out.session_token;
    this.matterId = out.matter_id;
    return out.matter_id;
  }

  conflictCheck(stage: 'preliminary' | 'comprehensive'): Promise<ConflictOutcome> {
    return this.request('POST', `/matters/${this.matterId}/conflict-check?stage=${stage}`);
  }

  uploadDocuments(files: { filename: string; contentBase64: string }[]): Promise<{ status: string }> {
    return this.request('POST', `/matters/${this.matterId}/documents`, {
      documents: files.map((f) => ({ filename: f.filename, content_base64: f.contentBase64 })),
    });
  }

  interviewNext(): Promise<QuestionStep> {
    return this.request('GET', `/matters/${this.matterId}/interview/next`);
  }

  interviewAnswer(questionId: string, answer: string): Promise<{ recorded: boolean; status: string }> {
    return this.request('POST', `/matters/${this.matterId}/interview/answer`, {
      question_id: questionId,
      answer,
    });
  }

  research(): Promise<ResearchSummary> {
    return this.request('POST', `/matters/${this.matterId}/research`);
  }

  analysis(): Promise<{ material_facts: number; legal_issues: number; status: string }> {
    return this.request('POST', `/matters/${this.matterId}/analysis`);
  }

  // Raw body, byte-for-byte: downloads must not re-serialize server output.
  async reportRaw(format: 'json' | 'markdown' | 'html'): Promise<string> {
    const response = await this.send('GET', `/matters/${this.matterId}/report?format=${format}`);
    return response.text();
  }
}

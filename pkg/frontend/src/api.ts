// Typed fetch client for the /v1 HTTP API.

import type {
  CommentResponse,
  DiffOp,
  DraftView,
  EditReportPayload,
  ThreadView,
  UsageReportPayload,
  ValidatedCommand,
} from './types.js';

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: unknown,
  ) {
    super(typeof detail === 'string' ? detail : JSON.stringify(detail));
    this.name = 'ApiError';
  }
}

export interface ClientOptions {
  baseUrl: string;
  token: string;
  fetchImpl?: typeof fetch;
}

export class ApiClient {
  private readonly baseUrl: string;
  private readonly token: string;
  private readonly fetchImpl: typeof fetch;

  constructor(options: ClientOptions) {
    this.baseUrl = options.baseUrl.replace(/\/+$/, '');
    this.token = options.token;
    this.fetchImpl = options.fetchImpl ?? fetch;
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers: {
        Authorization: `Bearer ${this.token}`,
        'Content-Type': 'application/json',
      },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json().catch(() => null);
    if (!response.ok) {
      const detail =
        payload && typeof payload === 'object' && 'detail' in payload
          ? (payload as { detail: unknown }).detail
          : payload;
      throw new ApiError(response.status, detail);
    }
    return payload as T;
  }

  health(): Promise<{ status: string; provider: string; threads: number }> {
    return this.request('GET', '/v1/health');
  }

  listThreads(): Promise<{
    threads: {
      thread_id: string;
      title: string;
      created_at: string;
      comment_count: number;
    }[];
  }> {
    return this.request('GET', '/v1/threads');
  }

  createThread(title: string, body: string): Promise<ThreadView> {
    return this.request('POST', '/v1/threads', { title, body });
  }

  viewThread(threadId: string): Promise<ThreadView> {
    return this.request('GET', `/v1/threads/${threadId}`);
  }

  postComment(
    threadId: string,
    body: string,
    anonymous = false,
  ): Promise<CommentResponse> {
    return this.request('POST', `/v1/threads/${threadId}/comments`, {
      body,
      anonymous,
    });
  }

  parseCommand(text: string): Promise<{ command: ValidatedCommand | null }> {
    return this.request('POST', '/v1/commands/parse', { text });
  }

  threadDrafts(threadId: string): Promise<{ drafts: DraftView[] }> {
    return this.request('GET', `/v1/threads/${threadId}/drafts`);
  }

  getDraft(draftId: string): Promise<DraftView> {
    return this.request('GET', `/v1/drafts/${draftId}`);
  }

  editDraft(draftId: string, text: string): Promise<DraftView> {
    return this.request('PATCH', `/v1/drafts/${draftId}`, { text });
  }

  publishDraft(
    draftId: string,
    anonymous = false,
  ): Promise<{
    published: boolean;
    comment_id: string;
    anonymous: boolean;
    draft: DraftView;
  }> {
    return this.request('POST', `/v1/drafts/${draftId}/publish`, {
      anonymous,
    });
  }

  discardDraft(draftId: string): Promise<DraftView> {
    return this.request('POST', `/v1/drafts/${draftId}/discard`);
  }

  draftDiff(draftId: string): Promise<{ ops: DiffOp[] }> {
    return this.request('GET', `/v1/drafts/${draftId}/diff`);
  }

  usageReport(): Promise<UsageReportPayload> {
    return this.request('GET', '/v1/reports/usage');
  }

  editReport(): Promise<EditReportPayload> {
    return this.request('GET', '/v1/reports/edits');
  }

  adoptionReport(): Promise<Record<string, number>> {
    return this.request('GET', '/v1/reports/adoption');
  }
}

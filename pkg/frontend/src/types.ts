// Payload shapes of the /v1 HTTP+JSON API.

export type Role = 'student' | 'instructor';

export interface AuthorView {
  display: string;
  anonymous: boolean;
  role?: Role;
  author_user_id?: string; // instructor views only
}

export interface CommentView {
  comment_id: string;
  author: AuthorView;
  body: string;
  kind: string;
  created_at: string;
  visibility?: string; // instructor views only
}

export interface ThreadView {
  thread_id: string;
  title: string;
  created_at: string;
  question: CommentView;
  comments: CommentView[];
}

export interface ValidatedCommand {
  help: boolean;
  reply: { instructions: string } | null;
  prev_refs: number[];
  related_refs: number[];
  anon: boolean;
  label: string | null;
}

export interface ContextMatch {
  item_id: number;
  score: number;
  rank: number;
}

export interface HelpPayload {
  previous: ContextMatch[];
  related: ContextMatch[];
  empty_corpus: boolean;
  rendered: string;
}

export interface CommentResponse {
  comment: CommentView;
  command?: ValidatedCommand;
  help?: HelpPayload;
  generation?: 'pending';
}

export interface DraftView {
  draft_id: string;
  thread_id: string;
  status: 'pending' | 'edited' | 'published' | 'discarded';
  generated_text: string;
  current_text: string;
  revision_count: number;
  provenance: {
    combination_label: string;
    context_ids: number[];
    model: string;
  };
  edit_metrics: { additions: number; removals: number } | null;
}

export interface DiffOp {
  op: 'equal' | 'add' | 'del';
  token: string;
}

export interface UsageReportPayload {
  total: number;
  headers: string[];
  rows: { label: string; count: number; proportion: number }[];
}

export interface EditReportPayload {
  entries: { draft_id: string; additions: number; removals: number }[];
  threshold: number;
  fraction_under_threshold: number;
}

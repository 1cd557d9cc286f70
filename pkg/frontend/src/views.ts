// Thread rendering. The server already filters by role; these helpers
// turn the view payload into display rows and assert the invariants the
// console relies on (students never see commands, drafts, or real
// identities behind aliases).

import type { CommentView, ThreadView } from './types.js';

export interface CommentRow {
  commentId: string;
  author: string;
  anonymous: boolean;
  kind: string;
  body: string;
  hiddenFromStudents: boolean;
}

const INSTRUCTOR_ONLY_KINDS = new Set(['command', 'draft']);

function toRow(comment: CommentView): CommentRow {
  return {
    commentId: comment.comment_id,
    author: comment.author.display,
    anonymous: comment.author.anonymous,
    kind: comment.kind,
    body: comment.body,
    hiddenFromStudents:
      INSTRUCTOR_ONLY_KINDS.has(comment.kind) ||
      comment.visibility === 'instructor_only',
  };
}

export function threadRows(view: ThreadView): CommentRow[] {
  return [toRow(view.question), ...view.comments.map(toRow)];
}

/** Invariants a student-facing render must satisfy. Returns the list of
 * violations (empty when clean). */
export function auditStudentView(view: ThreadView): string[] {
  const problems: string[] = [];
  for (const row of threadRows(view)) {
    if (INSTRUCTOR_ONLY_KINDS.has(row.kind)) {
      problems.push(`comment ${row.commentId} has hidden kind ${row.kind}`);
    }
    if (/(^|\s)#(reply|help|prev|related|anon)(\s|$)/i.test(row.body)) {
      problems.push(`comment ${row.commentId} leaks command text`);
    }
  }
  const json = JSON.stringify(view);
  if (json.includes('instructor_only')) {
    problems.push('view serializes instructor_only visibility');
  }
  for (const comment of [view.question, ...view.comments]) {
    if (comment.author.anonymous && comment.author.author_user_id) {
      problems.push(
        `comment ${comment.comment_id} exposes the user behind an alias`,
      );
    }
  }
  return problems;
}

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

export function renderThreadHtml(view: ThreadView): string {
  const rows = threadRows(view)
    .map((row) => {
      const classes = ['comment', `kind-${row.kind}`];
      if (row.hiddenFromStudents) classes.push('instructor-only');
      const badge = row.anonymous ? ' <em class="alias">(alias)</em>' : '';
      return (
        `<article class="${classes.join(' ')}">` +
        `<header>${escapeHtml(row.author)}${badge}</header>` +
        `<p>${escapeHtml(row.body)}</p></article>`
      );
    })
    .join('');
  return `<section class="thread"><h2>${escapeHtml(view.title)}</h2>${rows}</section>`;
}

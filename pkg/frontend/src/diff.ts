// Render the server-computed word diff between a generated draft and
// its edited text: removals struck through in red, additions in green.

import type { DiffOp } from './types.js';

const CLASS_BY_OP: Record<DiffOp['op'], string> = {
  equal: 'diff-equal',
  add: 'diff-add',
  del: 'diff-del',
};

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

export function renderDiffHtml(ops: DiffOp[]): string {
  const spans = ops.map((op) => {
    const tag = op.op === 'del' ? 'del' : op.op === 'add' ? 'ins' : 'span';
    return `<${tag} class="${CLASS_BY_OP[op.op]}">${escapeHtml(op.token)}</${tag}>`;
  });
  return spans.join(' ');
}

export interface DiffSummary {
  additions: number;
  removals: number;
  unchanged: number;
}

export function summarizeDiff(ops: DiffOp[]): DiffSummary {
  const summary: DiffSummary = { additions: 0, removals: 0, unchanged: 0 };
  for (const op of ops) {
    if (op.op === 'add') summary.additions += 1;
    else if (op.op === 'del') summary.removals += 1;
    else summary.unchanged += 1;
  }
  return summary;
}

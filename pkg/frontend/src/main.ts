// Minimal DOM wiring for the instructor console. Connects the command
// composer, thread view, draft review pane, and dashboard to the API.

import { ApiClient } from './api.js';
import {
  BuilderState,
  ComposeError,
  composeCommand,
  emptyBuilder,
  parseRefInput,
} from './composer.js';
import { renderEditSummaryHtml, renderUsageTableHtml } from './dashboard.js';
import { renderDiffHtml } from './diff.js';
import { renderThreadHtml } from './views.js';

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function readBuilder(): BuilderState {
  const state = emptyBuilder();
  state.mode = el<HTMLInputElement>('mode-help').checked ? 'help' : 'reply';
  state.instructions = el<HTMLTextAreaElement>('instructions').value;
  state.prevRefs = parseRefInput(el<HTMLInputElement>('prev-refs').value);
  state.relatedRefs = parseRefInput(el<HTMLInputElement>('related-refs').value);
  state.anon = el<HTMLInputElement>('anon').checked;
  return state;
}

export function initConsole(): void {
  const client = new ApiClient({
    baseUrl: el<HTMLInputElement>('base-url').value,
    token: el<HTMLInputElement>('api-token').value,
  });

  el<HTMLButtonElement>('compose-preview').addEventListener('click', () => {
    try {
      el('compose-output').textContent = composeCommand(readBuilder());
    } catch (err) {
      if (err instanceof ComposeError) {
        el('compose-output').textContent = `error: ${err.message}`;
      } else {
        throw err;
      }
    }
  });

  el<HTMLButtonElement>('compose-send').addEventListener('click', async () => {
    const threadId = el<HTMLInputElement>('thread-id').value;
    const result = await client.postComment(
      threadId,
      composeCommand(readBuilder()),
    );
    el('compose-output').textContent = JSON.stringify(result, null, 2);
    await refreshThread(client, threadId);
  });

  el<HTMLButtonElement>('thread-load').addEventListener('click', () =>
    refreshThread(client, el<HTMLInputElement>('thread-id').value),
  );

  el<HTMLButtonElement>('draft-diff').addEventListener('click', async () => {
    const draftId = el<HTMLInputElement>('draft-id').value;
    const { ops } = await client.draftDiff(draftId);
    el('diff-pane').innerHTML = renderDiffHtml(ops);
  });

  el<HTMLButtonElement>('dashboard-load').addEventListener('click', async () => {
    const [usage, edits] = await Promise.all([
      client.usageReport(),
      client.editReport(),
    ]);
    el('usage-pane').innerHTML = renderUsageTableHtml(usage);
    el('edits-pane').innerHTML = renderEditSummaryHtml(edits);
  });
}

async function refreshThread(client: ApiClient, threadId: string): Promise<void> {
  const view = await client.viewThread(threadId);
  el('thread-pane').innerHTML = renderThreadHtml(view);
}

if (typeof document !== 'undefined' && document.getElementById('base-url')) {
  initConsole();
}

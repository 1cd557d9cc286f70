// End-to-end checks against a live backend process.
//
// Criterion 9: any composer-built command, POSTed as text, parses to the
// exact same command as a hand-typed variant with the hashtags in a
// different order.
// Criterion 10: a student session never sees instructor commands,
// drafts, or the identity behind an anonymous alias, while the
// instructor session sees everything.

import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { ApiClient, ApiError } from '../src/api.js';
import { BuilderState, composeCommand } from '../src/composer.js';
import { summarizeDiff } from '../src/diff.js';
import { auditStudentView, threadRows } from '../src/views.js';
import type { DraftView, ValidatedCommand } from '../src/types.js';
import { startServer, TestServer, TOKENS } from './server.js';

let server: TestServer;
let instructor: ApiClient;
let student: ApiClient;
let student2: ApiClient;

beforeAll(async () => {
  server = await startServer();
  instructor = new ApiClient({ baseUrl: server.baseUrl, token: TOKENS.instructor });
  student = new ApiClient({ baseUrl: server.baseUrl, token: TOKENS.student });
  student2 = new ApiClient({ baseUrl: server.baseUrl, token: TOKENS.student2 });
});

afterAll(async () => {
  await server?.stop();
});

// Deterministic RNG so failures reproduce.
function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

const WORDS = [
  'explain', 'the', 'push', 'error', 'use', 'a', 'metaphor', 'keep',
  'it', 'short', 'and', 'friendly', 'show', 'each', 'step',
];

function randomState(rand: () => number): BuilderState {
  if (rand() < 0.15) {
    return { mode: 'help', instructions: '', prevRefs: [], relatedRefs: [], anon: false };
  }
  const pick = (n: number) => Math.floor(rand() * n);
  const refs = () => {
    if (rand() < 0.5) return [];
    const out = new Set<number>();
    const count = 1 + pick(3);
    while (out.size < count) out.add(1 + pick(500));
    return [...out];
  };
  const wordCount = pick(8);
  const instructions = Array.from({ length: wordCount }, () => WORDS[pick(WORDS.length)]).join(' ');
  return {
    mode: 'reply',
    instructions,
    prevRefs: refs(),
    relatedRefs: refs(),
    anon: rand() < 0.5,
  };
}

/** The same command typed by hand with modifier clauses in a random
 * order (instructions stay attached to #reply). */
function shuffledVariant(state: BuilderState, rand: () => number): string {
  if (state.mode === 'help') return '#help';
  const replyClause =
    '#reply' + (state.instructions.trim() ? ' ' + state.instructions.trim() : '');
  const modifiers: string[] = [];
  if (state.prevRefs.length) modifiers.push('#prev ' + state.prevRefs.join(' '));
  if (state.relatedRefs.length) modifiers.push('#related ' + state.relatedRefs.join(','));
  if (state.anon) modifiers.push('#anon');
  for (let i = modifiers.length - 1; i > 0; i--) {
    const j = Math.floor(rand() * (i + 1));
    [modifiers[i], modifiers[j]] = [modifiers[j], modifiers[i]];
  }
  // modifiers may even precede the reply clause
  const cut = Math.floor(rand() * (modifiers.length + 1));
  return [...modifiers.slice(0, cut), replyClause, ...modifiers.slice(cut)].join(' ');
}

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

async function waitForDraft(threadId: string): Promise<DraftView> {
  const deadline = Date.now() + 15_000;
  while (Date.now() < deadline) {
    const { drafts } = await instructor.threadDrafts(threadId);
    if (drafts.length > 0) return drafts[drafts.length - 1];
    await sleep(100);
  }
  throw new Error('draft generation did not finish within 15s');
}

describe('criterion 9: composed commands parse like hand-typed ones', () => {
  it('50 randomized builder states round-trip through /v1/commands/parse', async () => {
    const rand = mulberry32(0x2026);
    for (let i = 0; i < 50; i++) {
      const state = randomState(rand);
      const composed = composeCommand(state);
      const typed = shuffledVariant(state, rand);
      const a = await instructor.parseCommand(composed);
      const b = await instructor.parseCommand(typed);
      expect(a.command).not.toBeNull();
      expect(a.command).toEqual(b.command);
      const cmd = a.command as ValidatedCommand;
      if (state.mode === 'help') {
        expect(cmd.help).toBe(true);
      } else {
        expect(cmd.reply?.instructions).toBe(state.instructions.trim());
        expect(cmd.prev_refs).toEqual(state.prevRefs);
        expect(cmd.related_refs).toEqual(state.relatedRefs);
        expect(cmd.anon).toBe(state.anon);
      }
    }
    console.log('PASS criterion 9: 50 composed commands re-parse identically');
  });

  it('rejects illegal combinations with the server error code', async () => {
    const err = await instructor.parseCommand('#anon').catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).status).toBe(422);
    expect((err as ApiError).detail).toMatchObject({ code: 'orphan-modifier' });
  });

  it('students cannot use the parse endpoint', async () => {
    const err = await student.parseCommand('#help').catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).status).toBe(403);
  });
});

describe('criterion 10: role-true rendering', () => {
  it('hides commands/drafts from students and keeps aliases opaque', async () => {
    const thread = await student.createThread(
      'Why does my push fail?',
      'git push says rejected, what do I do?',
    );
    const threadId = thread.thread_id;

    await student2.postComment(threadId, 'same problem here', true);
    const helpResponse = await instructor.postComment(threadId, '#help');
    expect(helpResponse.help).toBeDefined();

    const replyResponse = await instructor.postComment(
      threadId,
      '#reply Explain the fix step by step. #anon',
    );
    expect(replyResponse.generation).toBe('pending');
    const draft = await waitForDraft(threadId);

    const edited = draft.generated_text + ' Hope that helps!';
    await instructor.editDraft(draft.draft_id, edited);
    const published = await instructor.publishDraft(draft.draft_id, true);
    expect(published.anonymous).toBe(true);
    expect(published.draft.status).toBe('published');

    // student session: no hidden material, aliases stay opaque
    const studentView = await student.viewThread(threadId);
    expect(auditStudentView(studentView)).toEqual([]);
    const studentKinds = threadRows(studentView).map((r) => r.kind);
    expect(studentKinds).not.toContain('command');
    expect(studentKinds).not.toContain('draft');
    const aliased = studentView.comments.filter((c) => c.author.anonymous);
    expect(aliased.length).toBeGreaterThanOrEqual(2); // peer comment + answer
    for (const c of aliased) {
      expect(c.author.display).toMatch(/^Anonymous /);
      expect(c.author.author_user_id).toBeUndefined();
    }
    const answer = studentView.comments.find((c) => c.body === edited);
    expect(answer).toBeDefined();
    expect(answer?.author.anonymous).toBe(true);

    // instructor session: commands and the draft are all visible
    const instructorView = await instructor.viewThread(threadId);
    const instructorKinds = threadRows(instructorView).map((r) => r.kind);
    expect(instructorKinds).toContain('command');
    expect(instructorKinds).toContain('draft');
    expect(
      instructorView.comments.some((c) => c.visibility === 'instructor_only'),
    ).toBe(true);

    // the diff pane agrees with the stored edit metrics
    const { ops } = await instructor.draftDiff(draft.draft_id);
    const summary = summarizeDiff(ops);
    expect(summary.additions).toBe(published.draft.edit_metrics?.additions);
    expect(summary.removals).toBe(published.draft.edit_metrics?.removals);

    console.log('PASS criterion 10: student and instructor views are role-true');
  });
});

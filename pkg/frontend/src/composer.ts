// Command composer: a point-and-click builder that assembles the same
// hashtag comment an instructor would type by hand. composeCommand
// mirrors the server's canonical rendering, so composed text re-parses
// to the identical command.

export interface BuilderState {
  mode: 'help' | 'reply';
  instructions: string;
  prevRefs: number[];
  relatedRefs: number[];
  anon: boolean;
}

export function emptyBuilder(): BuilderState {
  return {
    mode: 'reply',
    instructions: '',
    prevRefs: [],
    relatedRefs: [],
    anon: false,
  };
}

export class ComposeError extends Error {}

function checkRefs(refs: number[], label: string): void {
  for (const ref of refs) {
    if (!Number.isInteger(ref) || ref < 0) {
      throw new ComposeError(`${label} identifiers must be non-negative integers`);
    }
  }
}

/** Render a builder state as hashtag comment text.
 *
 * Part order matches the server's canonical form: #reply, instructions,
 * #prev ids, #related ids, #anon — or the single token #help.
 */
export function composeCommand(state: BuilderState): string {
  if (state.mode === 'help') {
    return '#help';
  }
  checkRefs(state.prevRefs, '#prev');
  checkRefs(state.relatedRefs, '#related');
  const parts = ['#reply'];
  const instructions = state.instructions.trim();
  if (instructions) {
    parts.push(instructions);
  }
  if (state.prevRefs.length > 0) {
    parts.push('#prev ' + state.prevRefs.join(','));
  }
  if (state.relatedRefs.length > 0) {
    parts.push('#related ' + state.relatedRefs.join(','));
  }
  if (state.anon) {
    parts.push('#anon');
  }
  return parts.join(' ');
}

/** Parse "2, 292 473"-style id input from a text field. */
export function parseRefInput(raw: string): number[] {
  const refs: number[] = [];
  for (const piece of raw.split(/[\s,]+/)) {
    if (!piece) continue;
    if (!/^\d+$/.test(piece)) {
      throw new ComposeError(`not a context identifier: ${piece}`);
    }
    refs.push(Number(piece));
  }
  return refs;
}

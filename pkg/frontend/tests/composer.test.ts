import { describe, expect, it } from 'vitest';

import {
  BuilderState,
  ComposeError,
  composeCommand,
  emptyBuilder,
  parseRefInput,
} from '../src/composer.js';

describe('composeCommand', () => {
  it('renders help mode as the single token', () => {
    const state = emptyBuilder();
    state.mode = 'help';
    state.instructions = 'ignored in help mode';
    expect(composeCommand(state)).toBe('#help');
  });

  it('renders a bare reply', () => {
    expect(composeCommand(emptyBuilder())).toBe('#reply');
  });

  it('renders the full combination in canonical order', () => {
    const state: BuilderState = {
      mode: 'reply',
      instructions: 'Use a metaphor.',
      prevRefs: [2, 292, 473],
      relatedRefs: [42, 44],
      anon: true,
    };
    expect(composeCommand(state)).toBe(
      '#reply Use a metaphor. #prev 2,292,473 #related 42,44 #anon',
    );
  });

  it('trims instruction whitespace', () => {
    const state = emptyBuilder();
    state.instructions = '  explain the push  ';
    expect(composeCommand(state)).toBe('#reply explain the push');
  });

  it('rejects non-integer references', () => {
    const state = emptyBuilder();
    state.prevRefs = [1.5];
    expect(() => composeCommand(state)).toThrow(ComposeError);
  });
});

describe('parseRefInput', () => {
  it('accepts commas and whitespace', () => {
    expect(parseRefInput('2, 292 473')).toEqual([2, 292, 473]);
    expect(parseRefInput('42,44')).toEqual([42, 44]);
    expect(parseRefInput('')).toEqual([]);
    expect(parseRefInput('  ,  ')).toEqual([]);
  });

  it('rejects non-numeric pieces', () => {
    expect(() => parseRefInput('2, x')).toThrow(ComposeError);
    expect(() => parseRefInput('-3')).toThrow(ComposeError);
  });
});

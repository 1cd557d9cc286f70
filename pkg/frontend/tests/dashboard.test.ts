import { describe, expect, it } from 'vitest';

import {
  editHistogram,
  renderEditSummaryHtml,
  renderUsageTableHtml,
  usageBars,
} from '../src/dashboard.js';
import type { EditReportPayload, UsageReportPayload } from '../src/types.js';

const USAGE: UsageReportPayload = {
  total: 100,
  headers: ['Prompts Combination', 'Usage Proportion'],
  rows: [
    { label: 'reply∅ anon', count: 51, proportion: 51 },
    { label: 'reply■ anon', count: 17, proportion: 17 },
    { label: 'help', count: 32, proportion: 32 },
  ],
};

const EDITS: EditReportPayload = {
  entries: [
    { draft_id: 'd-1', additions: 0, removals: 0 },
    { draft_id: 'd-2', additions: 3, removals: 4 },
    { draft_id: 'd-3', additions: 30, removals: 5 },
  ],
  threshold: 10,
  fraction_under_threshold: 2 / 3,
};

describe('usageBars', () => {
  it('scales widths against the largest row', () => {
    const bars = usageBars(USAGE);
    expect(bars[0].widthPct).toBe(100);
    expect(bars[1].widthPct).toBeCloseTo((17 / 51) * 100);
    expect(bars.map((b) => b.label)).toEqual([
      'reply∅ anon',
      'reply■ anon',
      'help',
    ]);
  });

  it('does not divide by zero on an empty report', () => {
    expect(usageBars({ total: 0, headers: [], rows: [] })).toEqual([]);
  });
});

describe('renderUsageTableHtml', () => {
  it('includes headers, labels, and proportions', () => {
    const html = renderUsageTableHtml(USAGE);
    expect(html).toContain('<th>Prompts Combination</th>');
    expect(html).toContain('<th>Usage Proportion</th>');
    expect(html).toContain('reply∅ anon');
    expect(html).toContain('51%');
    expect(html).toContain('100 commands');
  });
});

describe('editHistogram', () => {
  it('buckets total word edits per draft', () => {
    const buckets = editHistogram(EDITS);
    expect(buckets.map((b) => [b.label, b.count])).toEqual([
      ['0–9', 2],
      ['10–24', 0],
      ['25–49', 1],
      ['50–99', 0],
      ['100+', 0],
    ]);
  });
});

describe('renderEditSummaryHtml', () => {
  it('states the under-threshold share', () => {
    const html = renderEditSummaryHtml(EDITS);
    expect(html).toContain('66.7%');
    expect(html).toContain('fewer than 10 word edits');
  });
});

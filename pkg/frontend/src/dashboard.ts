// Usage and edit-effort dashboard widgets: a sorted combination-usage
// table and a horizontal bar series, all rendered from report payloads.

import type { EditReportPayload, UsageReportPayload } from './types.js';

export interface UsageBar {
  label: string;
  count: number;
  proportion: number; // percent, 0..100
  widthPct: number; // relative to the largest row, 0..100
}

export function usageBars(report: UsageReportPayload): UsageBar[] {
  const max = Math.max(1, ...report.rows.map((r) => r.count));
  return report.rows.map((row) => ({
    label: row.label,
    count: row.count,
    proportion: row.proportion,
    widthPct: (row.count / max) * 100,
  }));
}

export function renderUsageTableHtml(report: UsageReportPayload): string {
  const head = report.headers.map((h) => `<th>${h}</th>`).join('');
  const rows = usageBars(report)
    .map(
      (bar) =>
        `<tr><td>${bar.label}</td>` +
        `<td><div class="bar" style="width:${bar.widthPct.toFixed(1)}%"></div>` +
        `${bar.proportion}%</td></tr>`,
    )
    .join('');
  return (
    `<table class="usage"><thead><tr>${head}</tr></thead>` +
    `<tbody>${rows}</tbody></table>` +
    `<p class="usage-total">${report.total} commands</p>`
  );
}

export interface EditHistogramBucket {
  label: string;
  count: number;
}

/** Bucket total word edits (additions + removals) per published draft. */
export function editHistogram(
  report: EditReportPayload,
  edges: number[] = [0, 10, 25, 50, 100],
): EditHistogramBucket[] {
  const buckets: EditHistogramBucket[] = [];
  for (let i = 0; i < edges.length; i++) {
    const lo = edges[i];
    const hi = i + 1 < edges.length ? edges[i + 1] : null;
    buckets.push({
      label: hi === null ? `${lo}+` : `${lo}–${hi - 1}`,
      count: 0,
    });
  }
  for (const entry of report.entries) {
    const total = entry.additions + entry.removals;
    let idx = 0;
    for (let i = 0; i < edges.length; i++) {
      if (total >= edges[i]) idx = i;
    }
    buckets[idx].count += 1;
  }
  return buckets;
}

export function renderEditSummaryHtml(report: EditReportPayload): string {
  const pct = (report.fraction_under_threshold * 100).toFixed(1);
  const bars = editHistogram(report)
    .map((b) => `<li>${b.label} edits: ${b.count}</li>`)
    .join('');
  return (
    `<p>${pct}% of published answers needed fewer than ` +
    `${report.threshold} word edits.</p><ul class="edit-histogram">${bars}</ul>`
  );
}

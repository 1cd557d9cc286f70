"""Usage and edit measurement.

Edits are measured at word-token granularity: a longest-common-
subsequence alignment between the generated and the published text,
counting tokens inserted (additions) and deleted (removals). Command
usage is aggregated into a frequency table of combination labels.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from draftdesk import _kernels


@dataclass(frozen=True)
class EditMetrics:
    additions: int
    removals: int

    @property
    def total(self) -> int:
        return self.additions + self.removals


def tokenize(text: str) -> list[str]:
    return text.split()


def diff_edits(original: str, final: str) -> EditMetrics:
    """Word-token additions/removals between two texts via LCS."""
    a = tokenize(original)
    b = tokenize(final)
    lcs = _kernels.lcs_length(a, b)
    return EditMetrics(additions=len(b) - lcs, removals=len(a) - lcs)


def diff_ops(original: str, final: str) -> list[tuple[str, str]]:
    """Token-level alignment ops ("equal" | "del" | "add", token).

    Full-matrix DP with backtrack; used for rendering diffs, not for
    bulk metrics (diff_edits is the fast path).
    """
    a = tokenize(original)
    b = tokenize(final)
    m, n = len(a), len(b)
    dp = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(1, m + 1):
        row, prev = dp[i], dp[i - 1]
        for j in range(1, n + 1):
            if a[i - 1] == b[j - 1]:
                row[j] = prev[j - 1] + 1
            else:
                row[j] = max(row[j - 1], prev[j])
    ops: list[tuple[str, str]] = []
    i, j = m, n
    while i > 0 and j > 0:
        if a[i - 1] == b[j - 1]:
            ops.append(("equal", a[i - 1]))
            i -= 1
            j -= 1
        elif dp[i][j - 1] >= dp[i - 1][j]:
            ops.append(("add", b[j - 1]))
            j -= 1
        else:
            ops.append(("del", a[i - 1]))
            i -= 1
    while i > 0:
        ops.append(("del", a[i - 1]))
        i -= 1
    while j > 0:
        ops.append(("add", b[j - 1]))
        j -= 1
    ops.reverse()
    return ops


@dataclass(frozen=True)
class UsageRow:
    label: str
    count: int
    proportion: float  # percent of total interactions


@dataclass(frozen=True)
class UsageReport:
    rows: tuple[UsageRow, ...]
    total: int

    HEADERS = ("Prompts Combination", "Usage Proportion")

    def render_table(self) -> str:
        """Aligned plain-text table with stable column widths."""
        label_w = max([len(self.HEADERS[0])]
                      + [len(r.label) for r in self.rows])
        lines = [f"{self.HEADERS[0]:<{label_w}}  {self.HEADERS[1]}",
                 f"{'-' * label_w}  {'-' * len(self.HEADERS[1])}"]
        for r in self.rows:
            lines.append(f"{r.label:<{label_w}}  {r.proportion:>5.1f}%  "
                         f"({r.count})")
        lines.append(f"{'total':<{label_w}}  {self.total}")
        return "\n".join(lines)

    def to_records(self) -> str:
        """Machine-readable line-delimited records."""
        lines = [json.dumps({"label": r.label, "count": r.count,
                             "proportion": r.proportion},
                            ensure_ascii=False)
                 for r in self.rows]
        lines.append(json.dumps({"total": self.total}))
        return "\n".join(lines)


def usage_report(labels: Iterable[str]) -> UsageReport:
    """Frequency table of combination labels, sorted by descending
    count (ties by label) with proportions of the total."""
    counts = Counter(labels)
    total = sum(counts.values())
    rows = tuple(
        UsageRow(label=label, count=count,
                 proportion=(100.0 * count / total) if total else 0.0)
        for label, count in sorted(counts.items(),
                                   key=lambda kv: (-kv[1], kv[0]))
    )
    return UsageReport(rows=rows, total=total)


@dataclass(frozen=True)
class EditSeries:
    """Per-draft (additions, removals) pairs for published drafts,
    chart-ready, plus the fraction needing fewer than `threshold`
    total edits."""

    entries: tuple[tuple[str, int, int], ...]  # (draft_id, adds, removals)
    threshold: int = 10

    @property
    def fraction_under_threshold(self) -> float:
        if not self.entries:
            return 0.0
        small = sum(1 for _, a, r in self.entries if a + r < self.threshold)
        return small / len(self.entries)

    def to_records(self) -> str:
        lines = [json.dumps({"draft_id": d, "additions": a, "removals": r})
                 for d, a, r in self.entries]
        lines.append(json.dumps({
            "threshold": self.threshold,
            "fraction_under_threshold": self.fraction_under_threshold,
        }))
        return "\n".join(lines)


def edit_distribution(drafts: Sequence, threshold: int = 10) -> EditSeries:
    """Edit series over published drafts only (discarded drafts are
    excluded; they are counted in AdoptionStats instead)."""
    entries = []
    for d in drafts:
        if d.status.value != "published":
            continue
        metrics = d.edit_metrics or diff_edits(d.generated_text,
                                               d.current_text)
        entries.append((d.draft_id, metrics.additions, metrics.removals))
    return EditSeries(entries=tuple(entries), threshold=threshold)


@dataclass(frozen=True)
class AdoptionStats:
    questions_total: int
    questions_answered_via_tool: int
    drafts_published_unedited: int
    drafts_published_edited: int
    drafts_discarded: int

    def to_dict(self) -> dict:
        return {
            "questions_total": self.questions_total,
            "questions_answered_via_tool": self.questions_answered_via_tool,
            "drafts_published_unedited": self.drafts_published_unedited,
            "drafts_published_edited": self.drafts_published_edited,
            "drafts_discarded": self.drafts_discarded,
        }


def adoption_stats(questions_total: int, drafts: Sequence) -> AdoptionStats:
    published_unedited = published_edited = discarded = 0
    answered_threads = set()
    for d in drafts:
        status = d.status.value
        if status == "published":
            answered_threads.add(d.thread_id)
            metrics = d.edit_metrics or diff_edits(d.generated_text,
                                                   d.current_text)
            if metrics.total == 0:
                published_unedited += 1
            else:
                published_edited += 1
        elif status == "discarded":
            discarded += 1
    return AdoptionStats(
        questions_total=questions_total,
        questions_answered_via_tool=len(answered_threads),
        drafts_published_unedited=published_unedited,
        drafts_published_edited=published_edited,
        drafts_discarded=discarded,
    )

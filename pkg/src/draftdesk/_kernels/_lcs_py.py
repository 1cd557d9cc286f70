"""Pure-Python LCS kernel (fallback when the extension is not built)."""

from __future__ import annotations

from typing import Sequence


def lcs_length_ids(a: Sequence[int], b: Sequence[int]) -> int:
    # Rolling single-row DP; iterate over the shorter sequence's columns
    # to keep the row small.
    if len(b) > len(a):
        a, b = b, a
    n = len(b)
    row = [0] * (n + 1)
    for x in a:
        prev_diag = 0
        for j in range(1, n + 1):
            tmp = row[j]
            if x == b[j - 1]:
                row[j] = prev_diag + 1
            elif row[j - 1] > row[j]:
                row[j] = row[j - 1]
            prev_diag = tmp
    return row[n]

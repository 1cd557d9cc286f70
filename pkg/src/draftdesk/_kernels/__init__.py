"""Hot-loop kernels with a compiled fast path.

The word-level diff runs an O(n*m) longest-common-subsequence DP over
every published draft, which dominates analytics runtime on long
answers. A Cython extension provides the fast path; a pure-Python
implementation with identical semantics is selected at import time when
the extension is unavailable (source checkout, failed build).
"""

from __future__ import annotations

from typing import Sequence

try:
    from draftdesk._kernels._lcs_cy import lcs_length_ids as _lcs_length_ids

    BACKEND = "cython"
except ImportError:
    from draftdesk._kernels._lcs_py import lcs_length_ids as _lcs_length_ids

    BACKEND = "python"


def _intern_ids(a: Sequence[str], b: Sequence[str]) -> tuple[list[int], list[int]]:
    table: dict[str, int] = {}
    ids_a = [table.setdefault(tok, len(table)) for tok in a]
    ids_b = [table.setdefault(tok, len(table)) for tok in b]
    return ids_a, ids_b


def lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    """Length of the longest common subsequence of two token sequences."""
    if not a or not b:
        return 0
    ids_a, ids_b = _intern_ids(a, b)
    return _lcs_length_ids(ids_a, ids_b)

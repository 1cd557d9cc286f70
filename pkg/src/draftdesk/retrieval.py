"""Corpus ingestion, embedding storage, and ranked context matching.

Corpus items come in two categories: "previous" (archived forum Q&A)
and "related" (course material / handouts). Items are chunked with a
sliding token window, each chunk embedded and L2-normalized, and
queries are matched by cosine similarity with per-item max-over-chunks
aggregation. Corpora here are small (thousands of chunks), so search
is an exhaustive scan.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from draftdesk.providers import Provider

STORE_FORMAT_VERSION = 1

DEFAULT_MAX_CHUNK_TOKENS = 800
DEFAULT_CHUNK_OVERLAP = 100
HELP_LIST_SIZE = 5

CHEAT_SHEET = """\
Available prompts:
  #reply [instructions]   draft an answer (instructions optional)
  #prev <ids>             include previous forum posts as context
  #related <ids>          include course material as context
  #anon                   publish the answer anonymously
  #help                   show the most relevant context items
Combine as: #reply <instructions> #prev 1,2 #related 3 #anon"""


class Category(str, Enum):
    PREVIOUS = "previous"
    RELATED = "related"


class RetrievalError(Exception):
    pass


class CorpusValidationError(RetrievalError):
    pass


class UnknownContextError(RetrievalError):
    def __init__(self, missing: list[int]):
        self.missing = missing
        super().__init__("unknown context identifier(s): "
                         + ", ".join(str(m) for m in missing))


class CategoryMismatchError(RetrievalError):
    def __init__(self, item_id: int, expected: Category, actual: Category):
        self.item_id = item_id
        super().__init__(
            f"context {item_id} is in category '{actual.value}', "
            f"not '{expected.value}'")


@dataclass(frozen=True)
class CorpusItem:
    item_id: int
    category: Category
    title: str
    body: str
    source: str = ""
    unanswered: bool = False


@dataclass(frozen=True)
class ContextMatch:
    item_id: int
    score: float
    rank: int


@dataclass(frozen=True)
class HelpResult:
    previous: tuple[ContextMatch, ...]
    related: tuple[ContextMatch, ...]
    empty_corpus: bool = False


def chunk_tokens(text: str, max_tokens: int = DEFAULT_MAX_CHUNK_TOKENS,
                 overlap: int = DEFAULT_CHUNK_OVERLAP) -> list[str]:
    """Sliding-window chunking over whitespace tokens.

    Consecutive chunks overlap by `overlap` tokens; the window advances
    by max_tokens - overlap.
    """
    if max_tokens <= overlap:
        raise ValueError("max_tokens must exceed overlap")
    tokens = text.split()
    if not tokens:
        return []
    step = max_tokens - overlap
    chunks = []
    for start in range(0, len(tokens), step):
        window = tokens[start:start + max_tokens]
        chunks.append(" ".join(window))
        if start + max_tokens >= len(tokens):
            break
    return chunks


@dataclass
class _StoredItem:
    item: CorpusItem
    chunk_texts: list[str]
    vectors: np.ndarray  # (n_chunks, dim), rows unit-norm


class VectorStore:
    """Embedded corpus store with exhaustive cosine search.

    Many concurrent readers are safe; ingestion replaces an item's
    chunks atomically (build first, then swap).
    """

    def __init__(self, provider: Provider,
                 max_chunk_tokens: int = DEFAULT_MAX_CHUNK_TOKENS,
                 chunk_overlap: int = DEFAULT_CHUNK_OVERLAP):
        self.provider = provider
        self.max_chunk_tokens = max_chunk_tokens
        self.chunk_overlap = chunk_overlap
        self._items: dict[int, _StoredItem] = {}

    # -- ingestion ---------------------------------------------------

    def ingest(self, items: Sequence[CorpusItem]) -> int:
        """Chunk, embed, and store every item; returns chunks stored.

        A provider failure aborts the failing item and leaves earlier
        items intact. Re-ingesting an item_id replaces it.
        """
        seen: set[int] = set()
        for item in items:
            if item.item_id in seen:
                raise CorpusValidationError(
                    f"duplicate item_id {item.item_id} in batch")
            if item.item_id <= 0:
                raise CorpusValidationError(
                    f"item_id must be positive, got {item.item_id}")
            if not item.body.strip():
                raise CorpusValidationError(
                    f"item {item.item_id} has an empty body")
            seen.add(item.item_id)

        stored = 0
        for item in items:
            texts = chunk_tokens(item.body, self.max_chunk_tokens,
                                 self.chunk_overlap)
            vectors = self.provider.embed_batch(texts)
            self._items[item.item_id] = _StoredItem(
                item=item, chunk_texts=texts, vectors=vectors)
            stored += len(texts)
        return stored

    def item_count(self, category: Optional[Category] = None) -> int:
        if category is None:
            return len(self._items)
        return sum(1 for s in self._items.values()
                   if s.item.category == category)

    def chunk_count(self, category: Optional[Category] = None) -> int:
        return sum(len(s.chunk_texts) for s in self._items.values()
                   if category is None or s.item.category == category)

    # -- search ------------------------------------------------------

    def top_k(self, query: str, category: Category,
              k: int = HELP_LIST_SIZE) -> list[ContextMatch]:
        """Top-k items by cosine similarity of the query to any chunk.

        Item score = max cosine over its chunks; ties broken by
        ascending item_id. An empty category store yields [].
        """
        if k < 1:
            raise ValueError("k must be >= 1")
        candidates = [s for s in self._items.values()
                      if s.item.category == category]
        if not candidates:
            return []
        qvec = self.provider.embed_batch([query])[0]
        scored = []
        for s in candidates:
            # per-row np.dot keeps scores bit-identical across store
            # layouts (a matrix product may accumulate in a different
            # order), which makes tie handling reproducible
            score = max(float(np.dot(row, qvec)) for row in s.vectors)
            scored.append((s.item.item_id, score))
        scored.sort(key=lambda pair: (-pair[1], pair[0]))
        return [ContextMatch(item_id=i, score=sc, rank=r + 1)
                for r, (i, sc) in enumerate(scored[:k])]

    def help(self, question: str, k: int = HELP_LIST_SIZE) -> HelpResult:
        if not question.strip():
            raise ValueError("question must be non-empty")
        previous = tuple(self.top_k(question, Category.PREVIOUS, k)) \
            if self.item_count(Category.PREVIOUS) else ()
        related = tuple(self.top_k(question, Category.RELATED, k)) \
            if self.item_count(Category.RELATED) else ()
        return HelpResult(previous=previous, related=related,
                          empty_corpus=not previous and not related)

    def render_help(self, result: HelpResult) -> str:
        """Plain-text rendering: two numbered lists plus the prompt
        cheat sheet."""
        lines = []
        if result.empty_corpus:
            lines.append("Warning: the context store is empty.")
        for name, matches in (("Previous posts", result.previous),
                              ("Related material", result.related)):
            lines.append(f"{name}:")
            if not matches:
                lines.append("  (none)")
            for m in matches:
                item = self._items[m.item_id].item
                marker = "  [unanswered]" if item.unanswered else ""
                lines.append(f"  {m.rank}. [{m.item_id}] {item.title} "
                             f"(score {m.score:.3f}){marker}")
        lines.append("")
        lines.append(CHEAT_SHEET)
        return "\n".join(lines)

    def resolve(self, refs: Sequence[int],
                category: Category) -> list[CorpusItem]:
        """Full items for the given identifiers, in the given order."""
        if not refs:
            raise ValueError("refs must be non-empty")
        missing = [r for r in refs if r not in self._items]
        if missing:
            raise UnknownContextError(missing)
        out = []
        for r in refs:
            item = self._items[r].item
            if item.category != category:
                raise CategoryMismatchError(r, category, item.category)
            out.append(item)
        return out

    def get_item(self, item_id: int) -> CorpusItem:
        try:
            return self._items[item_id].item
        except KeyError:
            raise UnknownContextError([item_id]) from None

    # -- persistence -------------------------------------------------

    def save(self, path: str | Path) -> None:
        """Persist to <path>/meta.json + <path>/vectors.npz."""
        path = Path(path)
        path.mkdir(parents=True, exist_ok=True)
        meta = {
            "format_version": STORE_FORMAT_VERSION,
            "max_chunk_tokens": self.max_chunk_tokens,
            "chunk_overlap": self.chunk_overlap,
            "items": [
                {
                    "item_id": s.item.item_id,
                    "category": s.item.category.value,
                    "title": s.item.title,
                    "body": s.item.body,
                    "source": s.item.source,
                    "unanswered": s.item.unanswered,
                    "chunk_texts": s.chunk_texts,
                }
                for s in sorted(self._items.values(),
                                key=lambda s: s.item.item_id)
            ],
        }
        (path / "meta.json").write_text(json.dumps(meta, indent=1),
                                        encoding="utf-8")
        arrays = {f"item_{s.item.item_id}": s.vectors
                  for s in self._items.values()}
        np.savez(path / "vectors.npz", **arrays)

    @classmethod
    def load(cls, path: str | Path, provider: Provider) -> "VectorStore":
        path = Path(path)
        meta = json.loads((path / "meta.json").read_text(encoding="utf-8"))
        if meta.get("format_version") != STORE_FORMAT_VERSION:
            raise RetrievalError(
                f"unsupported store format {meta.get('format_version')}")
        store = cls(provider, meta["max_chunk_tokens"], meta["chunk_overlap"])
        with np.load(path / "vectors.npz") as arrays:
            for rec in meta["items"]:
                item = CorpusItem(
                    item_id=rec["item_id"],
                    category=Category(rec["category"]),
                    title=rec["title"], body=rec["body"],
                    source=rec.get("source", ""),
                    unanswered=rec.get("unanswered", False))
                store._items[item.item_id] = _StoredItem(
                    item=item, chunk_texts=list(rec["chunk_texts"]),
                    vectors=arrays[f"item_{item.item_id}"])
        return store


def load_corpus_jsonl(path: str | Path,
                      default_category: Optional[Category] = None
                      ) -> list[CorpusItem]:
    """Read line-delimited corpus records {id, category, title, body,
    source} (optional "answer" for archived posts; empty answer marks
    the item unanswered)."""
    items = []
    for lineno, line in enumerate(
            Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
            category = Category(rec["category"]) if "category" in rec \
                else default_category
            if category is None:
                raise KeyError("category")
            body = rec["body"]
            unanswered = False
            if "answer" in rec:
                unanswered = not str(rec["answer"]).strip()
                if not unanswered:
                    body = f"{body}\n\nAnswer: {rec['answer']}"
            items.append(CorpusItem(
                item_id=int(rec["id"]), category=category,
                title=rec["title"], body=body,
                source=rec.get("source", ""), unanswered=unanswered))
        except (KeyError, ValueError, TypeError) as exc:
            raise CorpusValidationError(
                f"{path}:{lineno}: bad corpus record ({exc})") from exc
    return items

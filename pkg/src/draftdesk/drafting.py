"""Prompt assembly and the draft lifecycle.

A draft is generated privately (stored as an instructor-only comment),
optionally edited through any number of revisions, and finally either
published as a public answer or discarded. The originally generated
text is immutable so edits can always be measured against it.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import datetime
from enum import Enum
from typing import Optional, Sequence

from draftdesk import analytics
from draftdesk.forum import (
    Comment, CommentKind, ForumStore, Role, Thread, UserRef,
)
from draftdesk.providers import Provider, ProviderError
from draftdesk.retrieval import Category, CorpusItem

DEFAULT_SYSTEM_PREAMBLE = (
    "You are a course teaching assistant answering questions on the course "
    "discussion forum. Be concise and accurate. Do not reveal assignment "
    "solutions unless the instructor's instructions say otherwise."
)
DEFAULT_TOKEN_BUDGET = 6000
TRUNCATION_MARKER = "[... context truncated to fit the prompt budget]"

BOT_USER_ID = "__draft_bot__"


class DraftStatus(str, Enum):
    PENDING = "pending"
    EDITED = "edited"
    PUBLISHED = "published"
    DISCARDED = "discarded"


class DraftStateError(Exception):
    """Operation not allowed in the draft's current lifecycle state."""


class DraftGenerationError(Exception):
    """Provider failed; no draft was created. Safe to retry."""


@dataclass(frozen=True)
class PromptPackage:
    system_preamble: str
    context_blocks: tuple[tuple[str, int, str], ...]  # (category, id, text)
    question: str
    instructions: str
    truncation_notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class Provenance:
    combination_label: str
    context_ids: tuple[int, ...]
    model: str


@dataclass(frozen=True)
class PublishRecord:
    comment_id: str
    anonymous: bool
    published_at: datetime


@dataclass
class Draft:
    draft_id: str
    thread_id: str
    generated_text: str
    current_text: str
    status: DraftStatus
    provenance: Provenance
    created_at: datetime
    revisions: list[tuple[datetime, str]] = field(default_factory=list)
    publish_record: Optional[PublishRecord] = None
    edit_metrics: Optional[analytics.EditMetrics] = None


def assemble_prompt(question: str, instructions: str,
                    contexts: Sequence[CorpusItem],
                    system_preamble: str = DEFAULT_SYSTEM_PREAMBLE,
                    token_budget: int = DEFAULT_TOKEN_BUDGET) -> PromptPackage:
    """Deterministic prompt package.

    Block order: previous contexts (in given order), then related
    contexts, then question, then instructions. Contexts are truncated
    tail-first, with an explicit marker, when the whitespace-token
    budget would be exceeded.
    """
    if not question.strip():
        raise ValueError("question must be non-empty")
    ordered = ([c for c in contexts if c.category == Category.PREVIOUS]
               + [c for c in contexts if c.category == Category.RELATED])
    fixed_cost = (len(system_preamble.split()) + len(question.split())
                  + len(instructions.split()))
    remaining = max(0, token_budget - fixed_cost)
    blocks: list[tuple[str, int, str]] = []
    notes: list[str] = []
    for item in ordered:
        tokens = item.body.split()
        if remaining <= 0:
            notes.append(f"context {item.item_id} dropped (budget exhausted)")
            continue
        if len(tokens) > remaining:
            text = " ".join(tokens[:remaining]) + "\n" + TRUNCATION_MARKER
            notes.append(f"context {item.item_id} truncated to "
                         f"{remaining} tokens")
            remaining = 0
        else:
            text = item.body
            remaining -= len(tokens)
        blocks.append((item.category.value, item.item_id, text))
    return PromptPackage(
        system_preamble=system_preamble,
        context_blocks=tuple(blocks),
        question=question,
        instructions=instructions,
        truncation_notes=tuple(notes),
    )


class DraftingService:
    """Owns drafts and their lifecycle; writes draft and answer
    comments into the forum. One in-flight generation per thread."""

    def __init__(self, forum: ForumStore, provider: Provider):
        self.forum = forum
        self.provider = provider
        self._drafts: dict[str, Draft] = {}
        self._seq = 0
        self._bot = forum.register_user(BOT_USER_ID, Role.INSTRUCTOR)

    def get(self, draft_id: str) -> Draft:
        try:
            return self._drafts[draft_id]
        except KeyError:
            raise DraftStateError(f"unknown draft {draft_id}") from None

    def drafts_for_thread(self, thread_id: str) -> list[Draft]:
        return [d for d in self._drafts.values() if d.thread_id == thread_id]

    def all_drafts(self) -> list[Draft]:
        return list(self._drafts.values())

    def generate_draft(self, thread: Thread, package: PromptPackage,
                       provenance: Provenance) -> Draft:
        """Call the provider and record the result as a pending draft.

        On provider failure nothing is created and the thread is
        unchanged; the error carries a retry hint.
        """
        try:
            text = self.provider.chat_complete(package)
        except ProviderError as exc:
            raise DraftGenerationError(
                f"draft generation failed ({exc}); re-issue the #reply "
                "command to retry") from exc
        self._seq += 1
        draft_id = f"draft-{self._seq:06d}"
        comment = self.forum.add_special_comment(
            thread.thread_id, self._bot, text, CommentKind.DRAFT)
        draft = Draft(
            draft_id=draft_id,
            thread_id=thread.thread_id,
            generated_text=text,
            current_text=text,
            status=DraftStatus.PENDING,
            provenance=provenance,
            created_at=comment.created_at,
        )
        self._drafts[draft_id] = draft
        return draft

    def edit_draft(self, draft: Draft, new_text: str,
                   now: Optional[datetime] = None) -> Draft:
        if draft.status not in (DraftStatus.PENDING, DraftStatus.EDITED):
            raise DraftStateError(
                f"cannot edit a {draft.status.value} draft")
        if new_text == draft.generated_text and not draft.revisions:
            # no-op edit back to the original before any revision
            return draft
        draft.revisions.append((now or draft.created_at, new_text))
        draft.current_text = new_text
        draft.status = DraftStatus.EDITED
        return draft

    def publish(self, draft: Draft, publisher: UserRef,
                anonymous: bool) -> PublishRecord:
        """Publish the current text as a public answer comment.

        Anonymous answers are posted under the bot persona's per-thread
        alias; otherwise under the publishing instructor's identity.
        Edit metrics against the generated text are computed and stored.
        """
        if draft.status not in (DraftStatus.PENDING, DraftStatus.EDITED):
            raise DraftStateError(
                f"cannot publish a {draft.status.value} draft")
        author = self._bot if anonymous else publisher
        comment = self.forum.add_special_comment(
            draft.thread_id, author, draft.current_text,
            CommentKind.PUBLISHED_ANSWER, anonymous=anonymous)
        record = PublishRecord(comment_id=comment.comment_id,
                               anonymous=anonymous,
                               published_at=comment.created_at)
        draft.status = DraftStatus.PUBLISHED
        draft.publish_record = record
        draft.edit_metrics = analytics.diff_edits(draft.generated_text,
                                                  draft.current_text)
        return record

    def discard(self, draft: Draft) -> Draft:
        if draft.status not in (DraftStatus.PENDING, DraftStatus.EDITED):
            raise DraftStateError(
                f"cannot discard a {draft.status.value} draft")
        draft.status = DraftStatus.DISCARDED
        return draft

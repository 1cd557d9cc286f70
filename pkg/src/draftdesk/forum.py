"""Forum data model: threads, comments, roles, visibility, aliases.

Commands and drafts live inside threads as instructor-only comments, so
the instructor view mirrors the real moderation workflow while student
views never see them.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import Optional

from draftdesk import commands
from draftdesk.wordlist import DEFAULT_ALIAS_NOUNS


class Role(str, Enum):
    STUDENT = "student"
    INSTRUCTOR = "instructor"


class Visibility(str, Enum):
    PUBLIC = "public"
    INSTRUCTOR_ONLY = "instructor_only"


class CommentKind(str, Enum):
    STUDENT_MESSAGE = "student_message"
    INSTRUCTOR_MESSAGE = "instructor_message"
    COMMAND = "command"
    DRAFT = "draft"
    PUBLISHED_ANSWER = "published_answer"

    @property
    def hidden(self) -> bool:
        return self in (CommentKind.COMMAND, CommentKind.DRAFT)


class ForumError(Exception):
    pass


class NotFoundError(ForumError):
    pass


class ValidationError(ForumError):
    pass


class AliasCapacityError(ForumError):
    """The alias word list for a thread is exhausted."""


@dataclass(frozen=True)
class UserRef:
    user_id: str
    role: Role


@dataclass(frozen=True)
class AnonymousAlias:
    label: str
    thread_id: str
    user_id: str


@dataclass
class Comment:
    comment_id: str
    author: UserRef
    body: str
    kind: CommentKind
    visibility: Visibility
    created_at: datetime
    seq: int
    alias: Optional[AnonymousAlias] = None

    def to_dict(self) -> dict:
        return {
            "comment_id": self.comment_id,
            "author_user_id": self.author.user_id,
            "author_role": self.author.role.value,
            "body": self.body,
            "kind": self.kind.value,
            "visibility": self.visibility.value,
            "created_at": self.created_at.isoformat(),
            "seq": self.seq,
            "alias_label": self.alias.label if self.alias else None,
        }

    @classmethod
    def from_dict(cls, d: dict, thread_id: str) -> "Comment":
        alias = None
        if d.get("alias_label"):
            alias = AnonymousAlias(
                label=d["alias_label"], thread_id=thread_id,
                user_id=d["author_user_id"])
        return cls(
            comment_id=d["comment_id"],
            author=UserRef(d["author_user_id"], Role(d["author_role"])),
            body=d["body"],
            kind=CommentKind(d["kind"]),
            visibility=Visibility(d["visibility"]),
            created_at=datetime.fromisoformat(d["created_at"]),
            seq=d["seq"],
            alias=alias,
        )


@dataclass
class Thread:
    thread_id: str
    title: str
    question: Comment
    created_at: datetime
    comments: list[Comment] = field(default_factory=list)
    # per-thread alias state: user_id -> label, in assignment order
    alias_labels: dict[str, str] = field(default_factory=dict)
    _next_seq: int = 1

    def ordered_comments(self) -> list[Comment]:
        # strict order: creation time, ties by insertion sequence
        return sorted(self.comments, key=lambda c: (c.created_at, c.seq))

    def to_dict(self) -> dict:
        return {
            "thread_id": self.thread_id,
            "title": self.title,
            "created_at": self.created_at.isoformat(),
            "question": self.question.to_dict(),
            "comments": [c.to_dict() for c in self.ordered_comments()],
            "alias_labels": dict(self.alias_labels),
            "next_seq": self._next_seq,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Thread":
        t = cls(
            thread_id=d["thread_id"],
            title=d["title"],
            question=Comment.from_dict(d["question"], d["thread_id"]),
            created_at=datetime.fromisoformat(d["created_at"]),
            comments=[Comment.from_dict(c, d["thread_id"])
                      for c in d["comments"]],
            alias_labels=dict(d.get("alias_labels", {})),
        )
        t._next_seq = d.get("next_seq", len(t.comments) + 1)
        return t


def _utcnow() -> datetime:
    return datetime.now(timezone.utc)


class ForumStore:
    """In-memory forum state; persistence is layered on top by the
    service's event log. Single writer per thread."""

    def __init__(self, alias_nouns: Optional[list[str]] = None,
                 clock=_utcnow):
        self._threads: dict[str, Thread] = {}
        self._users: dict[str, UserRef] = {}
        self._alias_nouns = list(alias_nouns or DEFAULT_ALIAS_NOUNS)
        self._clock = clock
        self._counter = 0

    # -- users -------------------------------------------------------

    def register_user(self, user_id: str, role: Role) -> UserRef:
        existing = self._users.get(user_id)
        if existing is not None:
            if existing.role != role:
                raise ValidationError(f"user {user_id} already registered "
                                      f"with role {existing.role.value}")
            return existing
        user = UserRef(user_id=user_id, role=role)
        self._users[user_id] = user
        return user

    def get_user(self, user_id: str) -> UserRef:
        try:
            return self._users[user_id]
        except KeyError:
            raise NotFoundError(f"unknown user {user_id}") from None

    # -- threads -----------------------------------------------------

    def _new_id(self, prefix: str) -> str:
        self._counter += 1
        return f"{prefix}-{self._counter:06d}"

    def create_thread(self, author: UserRef, title: str, body: str,
                      thread_id: Optional[str] = None) -> Thread:
        if not title.strip():
            raise ValidationError("thread title must be non-empty")
        if not body.strip():
            raise ValidationError("thread body must be non-empty")
        tid = thread_id or self._new_id("thread")
        kind = (CommentKind.INSTRUCTOR_MESSAGE
                if author.role == Role.INSTRUCTOR
                else CommentKind.STUDENT_MESSAGE)
        question = Comment(
            comment_id=self._new_id("comment"), author=author, body=body,
            kind=kind, visibility=Visibility.PUBLIC,
            created_at=self._clock(), seq=0)
        thread = Thread(thread_id=tid, title=title, question=question,
                        created_at=question.created_at)
        self._threads[tid] = thread
        return thread

    def get_thread(self, thread_id: str) -> Thread:
        try:
            return self._threads[thread_id]
        except KeyError:
            raise NotFoundError(f"unknown thread {thread_id}") from None

    def list_threads(self) -> list[Thread]:
        return sorted(self._threads.values(),
                      key=lambda t: (t.created_at, t.thread_id))

    def restore_thread(self, thread: Thread) -> None:
        self._threads[thread.thread_id] = thread

    # -- comments ----------------------------------------------------

    def add_comment(self, thread_id: str, author: UserRef, body: str,
                    anonymous: bool = False) -> Comment:
        """Append a regular comment. Instructor comments containing a
        known hashtag become hidden command comments; student text is
        stored verbatim and never interpreted."""
        thread = self.get_thread(thread_id)
        kind = (CommentKind.INSTRUCTOR_MESSAGE
                if author.role == Role.INSTRUCTOR
                else CommentKind.STUDENT_MESSAGE)
        visibility = Visibility.PUBLIC
        if author.role == Role.INSTRUCTOR and commands.scan(body) is not None:
            kind = CommentKind.COMMAND
            visibility = Visibility.INSTRUCTOR_ONLY
        return self._append(thread, author, body, kind, visibility, anonymous)

    def add_special_comment(self, thread_id: str, author: UserRef, body: str,
                            kind: CommentKind,
                            anonymous: bool = False) -> Comment:
        """Append a draft or published-answer comment on behalf of the
        drafting pipeline."""
        thread = self.get_thread(thread_id)
        visibility = (Visibility.INSTRUCTOR_ONLY if kind.hidden
                      else Visibility.PUBLIC)
        return self._append(thread, author, body, kind, visibility, anonymous)

    def _append(self, thread: Thread, author: UserRef, body: str,
                kind: CommentKind, visibility: Visibility,
                anonymous: bool) -> Comment:
        alias = self.assign_alias(thread.thread_id, author) if anonymous \
            else None
        comment = Comment(
            comment_id=self._new_id("comment"), author=author, body=body,
            kind=kind, visibility=visibility, created_at=self._clock(),
            seq=thread._next_seq, alias=alias)
        thread._next_seq += 1
        thread.comments.append(comment)
        return comment

    # -- aliases -----------------------------------------------------

    def assign_alias(self, thread_id: str, user: UserRef) -> AnonymousAlias:
        """Persistent per-(thread, user) pseudonym. The word list is
        shuffled pseudo-randomly per thread (seeded by thread_id) and
        labels are handed out in that order."""
        thread = self.get_thread(thread_id)
        label = thread.alias_labels.get(user.user_id)
        if label is None:
            order = self._alias_order(thread_id)
            idx = len(thread.alias_labels)
            if idx >= len(order):
                raise AliasCapacityError(
                    f"alias word list exhausted for thread {thread_id}")
            label = f"Anonymous {order[idx]}"
            thread.alias_labels[user.user_id] = label
        return AnonymousAlias(label=label, thread_id=thread_id,
                              user_id=user.user_id)

    def _alias_order(self, thread_id: str) -> list[str]:
        seed = int.from_bytes(
            hashlib.sha256(thread_id.encode("utf-8")).digest()[:8], "big")
        order = list(self._alias_nouns)
        random.Random(seed).shuffle(order)
        return order

    # -- views -------------------------------------------------------

    def render_view(self, thread_id: str, viewer: UserRef) -> dict:
        """Role-filtered serialization of a thread.

        Students never receive instructor-only comments, commands, or
        drafts, and aliased comments expose only the alias label.
        Instructors see everything, including true authors of aliased
        comments.
        """
        thread = self.get_thread(thread_id)
        instructor = viewer.role == Role.INSTRUCTOR
        comments = []
        for c in thread.ordered_comments():
            if not instructor:
                if c.visibility == Visibility.INSTRUCTOR_ONLY or c.kind.hidden:
                    continue
            comments.append(self._render_comment(c, instructor))
        return {
            "thread_id": thread.thread_id,
            "title": thread.title,
            "created_at": thread.created_at.isoformat(),
            "question": self._render_comment(thread.question, instructor),
            "comments": comments,
        }

    @staticmethod
    def _render_comment(c: Comment, instructor: bool) -> dict:
        if c.alias is not None:
            author = {"display": c.alias.label, "anonymous": True}
            if instructor:
                author["author_user_id"] = c.author.user_id
        else:
            author = {"display": c.author.user_id, "anonymous": False,
                      "role": c.author.role.value}
        kind = c.kind
        if not instructor and kind == CommentKind.PUBLISHED_ANSWER:
            # students see published answers as ordinary messages, with
            # no marker that a draft was generated or edited
            kind = (CommentKind.STUDENT_MESSAGE if c.alias is not None
                    else CommentKind.INSTRUCTOR_MESSAGE)
        out = {
            "comment_id": c.comment_id,
            "author": author,
            "body": c.body,
            "kind": kind.value,
            "created_at": c.created_at.isoformat(),
        }
        if instructor:
            out["visibility"] = c.visibility.value
        return out

"""Hashtag command language used by instructors in forum comments.

Recognized hashtags: #reply, #help, #prev, #related, #anon. They are
whole whitespace-delimited tokens, case-insensitive, and may appear
anywhere in the comment. #reply optionally carries free-text
instructions (everything up to the next hashtag); #prev and #related
take lists of numeric context identifiers separated by whitespace
and/or commas.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

HASHTAGS = ("#reply", "#help", "#prev", "#related", "#anon")

_TOKEN_RE = re.compile(r"\S+")
_ID_TOKEN_RE = re.compile(r"^\d+(,\d+)*,?$")

# Fill markers used in combination labels: reply with instructions vs bare.
FILLED = "■"  # ■
EMPTY = "∅"   # ∅


class CommandValidationError(ValueError):
    """A scanned command fails the combination rules."""

    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(message)


@dataclass(frozen=True)
class ReplyClause:
    instructions: str = ""


@dataclass(frozen=True)
class CommandInvocation:
    """Raw parse result of one comment; not yet checked for legality."""

    help: bool = False
    reply: Optional[ReplyClause] = None
    prev_present: bool = False
    related_present: bool = False
    prev_refs: tuple[int, ...] = ()
    related_refs: tuple[int, ...] = ()
    anon: bool = False
    raw_text: str = field(default="", compare=False)
    # lowercase hashtags in order of appearance, with repeats
    seen_tags: tuple[str, ...] = field(default=(), compare=False)


@dataclass(frozen=True)
class ValidatedCommand:
    help: bool = False
    reply: Optional[ReplyClause] = None
    prev_refs: tuple[int, ...] = ()
    related_refs: tuple[int, ...] = ()
    anon: bool = False


def scan(comment_text: str) -> Optional[CommandInvocation]:
    """Parse one comment; returns None when no known hashtag appears.

    Malformed combinations (e.g. #anon without #reply) still scan; they
    are rejected by validate().
    """
    tokens = [(m.group(0), m.start(), m.end())
              for m in _TOKEN_RE.finditer(comment_text)]
    tag_at = {i: tok.lower() for i, (tok, _, _) in enumerate(tokens)
              if tok.lower() in HASHTAGS}
    if not tag_at:
        return None

    help_flag = False
    reply: Optional[ReplyClause] = None
    anon = False
    prev_present = related_present = False
    prev_refs: tuple[int, ...] = ()
    related_refs: tuple[int, ...] = ()
    seen: list[str] = []

    for i, tag in sorted(tag_at.items()):
        seen.append(tag)
        if tag == "#help":
            help_flag = True
        elif tag == "#anon":
            anon = True
        elif tag == "#reply":
            if reply is not None:
                continue  # duplicate; validate() rejects via seen_tags
            next_tag_idx = next((j for j in sorted(tag_at) if j > i), None)
            end = tokens[next_tag_idx][1] if next_tag_idx is not None \
                else len(comment_text)
            instructions = comment_text[tokens[i][2]:end].strip()
            reply = ReplyClause(instructions=instructions)
        else:  # #prev / #related
            refs: list[int] = []
            for tok, _, _ in tokens[i + 1:]:
                if not _ID_TOKEN_RE.match(tok):
                    break
                refs.extend(int(p) for p in tok.split(",") if p)
            if tag == "#prev":
                if prev_present:
                    continue
                prev_present = True
                prev_refs = tuple(refs)
            else:
                if related_present:
                    continue
                related_present = True
                related_refs = tuple(refs)

    return CommandInvocation(
        help=help_flag,
        reply=reply,
        prev_present=prev_present,
        related_present=related_present,
        prev_refs=prev_refs,
        related_refs=related_refs,
        anon=anon,
        raw_text=comment_text,
        seen_tags=tuple(seen),
    )


def validate(inv: CommandInvocation) -> ValidatedCommand:
    """Check a scanned invocation against the legal combinations.

    Legal: #help alone, or #reply with any subset of #anon/#prev/#related.
    """
    for tag in HASHTAGS:
        if inv.seen_tags.count(tag) > 1:
            raise CommandValidationError(
                "duplicate-prompt", f"duplicate prompt {tag} in one comment")
    if inv.help:
        if inv.reply is not None or inv.anon or inv.prev_present \
                or inv.related_present:
            raise CommandValidationError(
                "help-exclusive", "#help cannot be combined with other prompts")
        return ValidatedCommand(help=True)
    if inv.reply is None:
        extras = [t for t in dict.fromkeys(inv.seen_tags) if t != "#reply"]
        raise CommandValidationError(
            "orphan-modifier",
            f"{' '.join(extras)} requires #reply")
    if inv.prev_present and not inv.prev_refs:
        raise CommandValidationError(
            "missing-context-ids", "#prev given without context identifiers")
    if inv.related_present and not inv.related_refs:
        raise CommandValidationError(
            "missing-context-ids", "#related given without context identifiers")
    return ValidatedCommand(
        reply=inv.reply,
        prev_refs=inv.prev_refs,
        related_refs=inv.related_refs,
        anon=inv.anon,
    )


def classify(cmd: ValidatedCommand) -> str:
    """Canonical combination label, e.g. "reply∅ anon related" or "help".

    Stable under hashtag reordering in the source comment; canonical
    part order is reply, anon, related, prev, help.
    """
    if cmd.help:
        return "help"
    assert cmd.reply is not None
    parts = ["reply" + (FILLED if cmd.reply.instructions else EMPTY)]
    if cmd.anon:
        parts.append("anon")
    if cmd.related_refs:
        parts.append("related")
    if cmd.prev_refs:
        parts.append("prev")
    return " ".join(parts)


def canonical_text(cmd: ValidatedCommand) -> str:
    """Render a command back to comment text that re-scans to the same
    invocation (round-trip)."""
    if cmd.help:
        return "#help"
    assert cmd.reply is not None
    parts = ["#reply"]
    if cmd.reply.instructions:
        parts.append(cmd.reply.instructions)
    if cmd.prev_refs:
        parts.append("#prev " + ",".join(str(r) for r in cmd.prev_refs))
    if cmd.related_refs:
        parts.append("#related " + ",".join(str(r) for r in cmd.related_refs))
    if cmd.anon:
        parts.append("#anon")
    return " ".join(parts)

"""Deterministic re-execution of usage transcripts.

A transcript is a line-delimited file of event records
{type, actor, thread, payload, time}. Replaying it with the mock
provider rebuilds the whole moderation history and emits the usage
report, adoption stats, and edit series; two replays of the same
transcript produce byte-identical output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Optional

from draftdesk.analytics import AdoptionStats, EditSeries, UsageReport
from draftdesk.engine import AssistantEngine
from draftdesk.forum import ForumStore, Role
from draftdesk.providers import MockProvider
from draftdesk.retrieval import VectorStore

EVENT_TYPES = ("register_user", "post_question", "comment", "edit_draft",
               "publish", "discard")

_EPOCH = datetime(2024, 1, 1, tzinfo=timezone.utc)


class TranscriptError(Exception):
    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"transcript line {lineno}: {message}")


@dataclass
class ReplayResult:
    usage: UsageReport
    adoption: AdoptionStats
    edits: EditSeries

    def render(self) -> str:
        parts = [
            self.usage.render_table(),
            "",
            "Adoption:",
            json.dumps(self.adoption.to_dict(), indent=1, sort_keys=True),
            "",
            "Edit series:",
            self.edits.to_records(),
        ]
        return "\n".join(parts)


class _LogicalClock:
    """Monotonic clock driven by transcript timestamps; events without
    a time advance by one second from the previous one."""

    def __init__(self):
        self.now = _EPOCH

    def set(self, iso: Optional[str]):
        if iso:
            self.now = datetime.fromisoformat(iso)
        else:
            self.now = self.now + timedelta(seconds=1)

    def __call__(self) -> datetime:
        return self.now


def replay_file(path: str | Path, *, seed: int = 0,
                store: Optional[VectorStore] = None) -> ReplayResult:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return replay_lines(lines, seed=seed, store=store)


def replay_lines(lines, *, seed: int = 0,
                 store: Optional[VectorStore] = None) -> ReplayResult:
    clock = _LogicalClock()
    provider = MockProvider(seed=seed)
    forum = ForumStore(clock=clock)
    engine = AssistantEngine(forum, store or VectorStore(provider), provider)
    # thread name in the transcript -> latest active draft
    active_draft: dict[str, str] = {}

    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            event = json.loads(line)
        except json.JSONDecodeError as exc:
            raise TranscriptError(lineno, f"invalid JSON ({exc})") from exc
        try:
            etype = event["type"]
            if etype not in EVENT_TYPES:
                raise TranscriptError(lineno, f"unknown event type {etype!r}")
            clock.set(event.get("time"))
            payload = event.get("payload", {})
            if etype == "register_user":
                forum.register_user(event["actor"], Role(payload["role"]))
                continue
            actor = forum.get_user(event["actor"]) if "actor" in event \
                else None
            if etype == "post_question":
                forum.create_thread(actor, payload["title"], payload["body"],
                                    thread_id=event["thread"])
            elif etype == "comment":
                outcome = engine.handle_comment(
                    event["thread"], actor, payload["body"],
                    anonymous=bool(payload.get("anonymous", False)))
                if outcome.draft is not None:
                    active_draft[event["thread"]] = outcome.draft.draft_id
            elif etype == "edit_draft":
                draft = engine.drafting.get(active_draft[event["thread"]])
                text = payload.get("text")
                if text is None:
                    # relative edit: append to the current text
                    text = draft.current_text + " " + payload["append"]
                engine.drafting.edit_draft(draft, text, now=clock())
            elif etype == "publish":
                draft = engine.drafting.get(active_draft[event["thread"]])
                engine.drafting.publish(
                    draft, actor, bool(payload.get("anonymous", False)))
            elif etype == "discard":
                draft = engine.drafting.get(active_draft[event["thread"]])
                engine.drafting.discard(draft)
        except TranscriptError:
            raise
        except KeyError as exc:
            raise TranscriptError(lineno, f"missing field {exc}") from exc
        except Exception as exc:
            raise TranscriptError(lineno, str(exc)) from exc

    return ReplayResult(
        usage=engine.usage_report(),
        adoption=engine.adoption(),
        edits=engine.edit_series(),
    )

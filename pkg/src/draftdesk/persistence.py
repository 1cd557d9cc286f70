"""File-backed persistence: append-only event log plus snapshot.

Every mutation appends one line-delimited JSON event; a snapshot
materializes the full state and truncates the log. On startup the
snapshot is loaded and the remaining log lines are applied on top, so
the service can always be rebuilt from disk and audited event by
event.
"""

from __future__ import annotations

import json
import re
from datetime import datetime
from pathlib import Path
from typing import Optional

from draftdesk.analytics import EditMetrics
from draftdesk.drafting import (
    Draft, DraftingService, DraftStatus, Provenance, PublishRecord,
)
from draftdesk.forum import ForumStore, Role, Thread

_ID_NUM_RE = re.compile(r"-(\d+)$")


class EventLog:
    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.log_path = self.data_dir / "events.jsonl"
        self.snapshot_path = self.data_dir / "snapshot.json"

    def append(self, event: dict) -> None:
        with self.log_path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(event, ensure_ascii=False) + "\n")

    def events(self) -> list[dict]:
        if not self.log_path.exists():
            return []
        return [json.loads(line)
                for line in self.log_path.read_text(encoding="utf-8")
                .splitlines() if line.strip()]

    # -- snapshot ----------------------------------------------------

    def write_snapshot(self, forum: ForumStore,
                       drafting: DraftingService,
                       command_labels: list[str]) -> None:
        state = {
            "users": [{"user_id": u.user_id, "role": u.role.value}
                      for u in forum._users.values()],
            "threads": [t.to_dict() for t in forum.list_threads()],
            "drafts": [_draft_to_dict(d) for d in drafting.all_drafts()],
            "command_labels": list(command_labels),
            "id_counter": forum._counter,
            "draft_counter": drafting._seq,
        }
        tmp = self.snapshot_path.with_suffix(".tmp")
        tmp.write_text(json.dumps(state, ensure_ascii=False, indent=1),
                       encoding="utf-8")
        tmp.replace(self.snapshot_path)
        self.log_path.unlink(missing_ok=True)

    def load(self, forum: ForumStore, drafting: DraftingService,
             command_labels: list[str]) -> None:
        """Restore state from snapshot + trailing log events."""
        if self.snapshot_path.exists():
            state = json.loads(
                self.snapshot_path.read_text(encoding="utf-8"))
            for u in state["users"]:
                forum.register_user(u["user_id"], Role(u["role"]))
            for t in state["threads"]:
                forum.restore_thread(Thread.from_dict(t))
            for d in state["drafts"]:
                draft = _draft_from_dict(d)
                drafting._drafts[draft.draft_id] = draft
            command_labels.extend(state.get("command_labels", []))
            forum._counter = state.get("id_counter", 0)
            drafting._seq = state.get("draft_counter", 0)
        for event in self.events():
            _apply_event(event, forum, drafting, command_labels)


def _apply_event(event: dict, forum: ForumStore,
                 drafting: DraftingService,
                 command_labels: list[str]) -> None:
    etype = event["type"]
    if etype == "user_registered":
        forum.register_user(event["user_id"], Role(event["role"]))
    elif etype == "thread_created":
        forum.restore_thread(Thread.from_dict(event["thread"]))
        _bump_counters(forum, event["thread"]["thread_id"])
        _bump_counters(forum, event["thread"]["question"]["comment_id"])
    elif etype == "comment_added":
        thread = forum.get_thread(event["thread_id"])
        from draftdesk.forum import Comment
        comment = Comment.from_dict(event["comment"], event["thread_id"])
        thread.comments.append(comment)
        thread._next_seq = max(thread._next_seq, comment.seq + 1)
        if comment.alias is not None:
            thread.alias_labels.setdefault(comment.author.user_id,
                                           comment.alias.label)
        _bump_counters(forum, comment.comment_id)
    elif etype == "draft_saved":
        draft = _draft_from_dict(event["draft"])
        drafting._drafts[draft.draft_id] = draft
        m = _ID_NUM_RE.search(draft.draft_id)
        if m:
            drafting._seq = max(drafting._seq, int(m.group(1)))
    elif etype == "command_recorded":
        command_labels.append(event["label"])


def _bump_counters(forum: ForumStore, opaque_id: str) -> None:
    m = _ID_NUM_RE.search(opaque_id)
    if m:
        forum._counter = max(forum._counter, int(m.group(1)))


def _draft_to_dict(d: Draft) -> dict:
    return {
        "draft_id": d.draft_id,
        "thread_id": d.thread_id,
        "generated_text": d.generated_text,
        "current_text": d.current_text,
        "status": d.status.value,
        "created_at": d.created_at.isoformat(),
        "revisions": [[ts.isoformat(), text] for ts, text in d.revisions],
        "provenance": {
            "combination_label": d.provenance.combination_label,
            "context_ids": list(d.provenance.context_ids),
            "model": d.provenance.model,
        },
        "publish_record": {
            "comment_id": d.publish_record.comment_id,
            "anonymous": d.publish_record.anonymous,
            "published_at": d.publish_record.published_at.isoformat(),
        } if d.publish_record else None,
        "edit_metrics": {
            "additions": d.edit_metrics.additions,
            "removals": d.edit_metrics.removals,
        } if d.edit_metrics else None,
    }


def _draft_from_dict(d: dict) -> Draft:
    publish_record: Optional[PublishRecord] = None
    if d.get("publish_record"):
        pr = d["publish_record"]
        publish_record = PublishRecord(
            comment_id=pr["comment_id"], anonymous=pr["anonymous"],
            published_at=datetime.fromisoformat(pr["published_at"]))
    metrics = None
    if d.get("edit_metrics"):
        metrics = EditMetrics(additions=d["edit_metrics"]["additions"],
                              removals=d["edit_metrics"]["removals"])
    prov = d["provenance"]
    return Draft(
        draft_id=d["draft_id"],
        thread_id=d["thread_id"],
        generated_text=d["generated_text"],
        current_text=d["current_text"],
        status=DraftStatus(d["status"]),
        provenance=Provenance(
            combination_label=prov["combination_label"],
            context_ids=tuple(prov["context_ids"]),
            model=prov["model"]),
        created_at=datetime.fromisoformat(d["created_at"]),
        revisions=[(datetime.fromisoformat(ts), text)
                   for ts, text in d.get("revisions", [])],
        publish_record=publish_record,
        edit_metrics=metrics,
    )

"""HTTP+JSON API (versioned under /v1) for the forum assistant.

Serves the CLI and the web console: threads and role-filtered views,
comment posting with instructor command execution, draft lifecycle,
corpus ingestion, and analytics reports. Auth is a bearer token mapped
to a configured user; every mutating endpoint requires one.
"""

from __future__ import annotations

import logging
import threading
from typing import Optional

from fastapi import BackgroundTasks, Depends, FastAPI, Header, HTTPException
from pydantic import BaseModel, Field

from draftdesk import commands
from draftdesk.config import AppConfig
from draftdesk.drafting import DraftGenerationError, DraftStateError
from draftdesk.engine import AssistantEngine
from draftdesk.forum import (
    AliasCapacityError, ForumStore, NotFoundError, Role, UserRef,
    ValidationError,
)
from draftdesk.analytics import diff_ops
from draftdesk.persistence import EventLog
from draftdesk.retrieval import (
    Category, CorpusItem, CorpusValidationError, RetrievalError, VectorStore,
)

logger = logging.getLogger(__name__)


class AppState:
    def __init__(self, config: AppConfig):
        self.config = config
        self.provider = config.build_provider()
        self.forum = ForumStore(alias_nouns=config.alias_nouns)
        store = None
        if config.store_path:
            try:
                store = VectorStore.load(config.store_path, self.provider)
            except FileNotFoundError:
                store = None
        self.store = store or VectorStore(self.provider)
        self.engine = AssistantEngine(
            self.forum, self.store, self.provider,
            system_preamble=config.system_preamble,
            token_budget=config.token_budget)
        self.sessions = {token: entry for token, entry in
                         config.tokens.items()}
        self.event_log: Optional[EventLog] = None
        if config.data_dir:
            self.event_log = EventLog(config.data_dir)
            self.event_log.load(self.forum, self.engine.drafting,
                                self.engine.command_labels)
        # per-thread single-writer contract
        self._thread_locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def thread_lock(self, thread_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._thread_locks.setdefault(thread_id,
                                                 threading.Lock())

    def log_event(self, event: dict) -> None:
        if self.event_log is not None:
            self.event_log.append(event)

    def log_draft(self, draft) -> None:
        from draftdesk.persistence import _draft_to_dict
        self.log_event({"type": "draft_saved",
                        "draft": _draft_to_dict(draft)})

    def snapshot(self) -> None:
        if self.event_log is not None:
            self.event_log.write_snapshot(self.forum, self.engine.drafting,
                                          self.engine.command_labels)


# -- request bodies --------------------------------------------------

class ThreadCreate(BaseModel):
    title: str
    body: str


class CommentCreate(BaseModel):
    body: str
    anonymous: bool = False


class DraftEdit(BaseModel):
    text: str


class PublishBody(BaseModel):
    anonymous: bool = False


class ParseBody(BaseModel):
    text: str


class IngestItem(BaseModel):
    id: int
    category: str
    title: str
    body: str
    source: str = ""
    unanswered: bool = False


class IngestBody(BaseModel):
    items: list[IngestItem] = Field(default_factory=list)


def create_app(state: AppState) -> FastAPI:
    app = FastAPI(title="draftdesk", version="1")
    app.state.app_state = state

    def current_user(authorization: str = Header(default="")) -> UserRef:
        if not authorization.startswith("Bearer "):
            raise HTTPException(401, "missing bearer token")
        token = authorization.removeprefix("Bearer ").strip()
        entry = state.sessions.get(token)
        if entry is None:
            raise HTTPException(401, "invalid token")
        user = state.forum.register_user(entry["user_id"],
                                         Role(entry["role"]))
        return user

    def require_instructor(user: UserRef = Depends(current_user)) -> UserRef:
        if user.role != Role.INSTRUCTOR:
            raise HTTPException(403, "instructor role required")
        return user

    @app.get("/v1/health")
    def health():
        return {"status": "ok", "provider": state.provider.model,
                "threads": len(state.forum.list_threads())}

    # -- threads -----------------------------------------------------

    @app.get("/v1/threads")
    def list_threads(user: UserRef = Depends(current_user)):
        return {"threads": [
            {"thread_id": t.thread_id, "title": t.title,
             "created_at": t.created_at.isoformat(),
             "comment_count": len([
                 c for c in t.comments
                 if user.role == Role.INSTRUCTOR
                 or c.visibility.value == "public"])}
            for t in state.forum.list_threads()]}

    @app.post("/v1/threads", status_code=201)
    def create_thread(body: ThreadCreate,
                      user: UserRef = Depends(current_user)):
        try:
            thread = state.forum.create_thread(user, body.title, body.body)
        except ValidationError as exc:
            raise HTTPException(422, str(exc)) from exc
        state.log_event({"type": "user_registered",
                         "user_id": user.user_id, "role": user.role.value})
        state.log_event({"type": "thread_created",
                         "thread": thread.to_dict()})
        return state.forum.render_view(thread.thread_id, user)

    @app.get("/v1/threads/{thread_id}")
    def view_thread(thread_id: str, user: UserRef = Depends(current_user)):
        try:
            return state.forum.render_view(thread_id, user)
        except NotFoundError as exc:
            raise HTTPException(404, str(exc)) from exc

    # -- comments / commands -----------------------------------------

    def _log_new_comments(thread_id: str, before: int) -> None:
        thread = state.forum.get_thread(thread_id)
        for comment in thread.comments[before:]:
            state.log_event({"type": "comment_added",
                             "thread_id": thread_id,
                             "comment": comment.to_dict()})

    def _generate_in_background(thread_id: str, user: UserRef, cmd) -> None:
        with state.thread_lock(thread_id):
            before = len(state.forum.get_thread(thread_id).comments)
            try:
                draft = state.engine.run_reply(thread_id, cmd)
            except (RetrievalError, DraftGenerationError) as exc:
                logger.error("generation for %s failed: %s", thread_id, exc)
                return
            _log_new_comments(thread_id, before)
            state.log_draft(draft)

    @app.post("/v1/threads/{thread_id}/comments", status_code=201)
    def add_comment(thread_id: str, body: CommentCreate,
                    background: BackgroundTasks,
                    user: UserRef = Depends(current_user)):
        with state.thread_lock(thread_id):
            thread_before = state.forum.get_thread(thread_id) \
                if thread_id in state.forum._threads else None
            if thread_before is None:
                raise HTTPException(404, f"unknown thread {thread_id}")
            before = len(thread_before.comments)
            try:
                outcome = state.engine.handle_comment(
                    thread_id, user, body.body,
                    anonymous=body.anonymous, execute=False)
            except commands.CommandValidationError as exc:
                raise HTTPException(
                    422, {"code": exc.code, "message": str(exc)}) from exc
            except AliasCapacityError as exc:
                raise HTTPException(409, str(exc)) from exc
            _log_new_comments(thread_id, before)
            if outcome.label is not None:
                state.log_event({"type": "command_recorded",
                                 "label": outcome.label})

        payload = {
            "comment": state.forum._render_comment(
                outcome.comment, user.role == Role.INSTRUCTOR),
        }
        if outcome.command is not None:
            payload["command"] = _command_json(outcome.command,
                                               outcome.label)
            if outcome.command.help:
                # #help is synchronous
                try:
                    result = state.engine.execute_command(
                        thread_id, user, outcome.command)
                except RetrievalError as exc:
                    raise HTTPException(502, str(exc)) from exc
                payload["help"] = _help_json(result)
            else:
                # #reply generation is asynchronous; the draft comment
                # appears in the instructor view when ready
                try:
                    if outcome.command.prev_refs:
                        state.store.resolve(outcome.command.prev_refs,
                                            Category.PREVIOUS)
                    if outcome.command.related_refs:
                        state.store.resolve(outcome.command.related_refs,
                                            Category.RELATED)
                except RetrievalError as exc:
                    raise HTTPException(422, str(exc)) from exc
                background.add_task(_generate_in_background, thread_id,
                                    user, outcome.command)
                payload["generation"] = "pending"
        return payload

    @app.post("/v1/commands/parse")
    def parse_command(body: ParseBody,
                      user: UserRef = Depends(require_instructor)):
        inv = commands.scan(body.text)
        if inv is None:
            return {"command": None}
        try:
            cmd = commands.validate(inv)
        except commands.CommandValidationError as exc:
            raise HTTPException(
                422, {"code": exc.code, "message": str(exc)}) from exc
        return {"command": _command_json(cmd, commands.classify(cmd))}

    # -- drafts ------------------------------------------------------

    def _get_draft(draft_id: str):
        try:
            return state.engine.drafting.get(draft_id)
        except DraftStateError as exc:
            raise HTTPException(404, str(exc)) from exc

    @app.get("/v1/threads/{thread_id}/drafts")
    def thread_drafts(thread_id: str,
                      user: UserRef = Depends(require_instructor)):
        state.forum.get_thread(thread_id)  # 404 via handler below
        return {"drafts": [_draft_json(d) for d in sorted(
            state.engine.drafting.drafts_for_thread(thread_id),
            key=lambda d: d.draft_id)]}

    @app.get("/v1/drafts/{draft_id}")
    def get_draft(draft_id: str,
                  user: UserRef = Depends(require_instructor)):
        return _draft_json(_get_draft(draft_id))

    @app.get("/v1/drafts/{draft_id}/diff")
    def draft_diff(draft_id: str,
                   user: UserRef = Depends(require_instructor)):
        draft = _get_draft(draft_id)
        ops = diff_ops(draft.generated_text, draft.current_text)
        return {"ops": [{"op": op, "token": tok} for op, tok in ops]}

    @app.patch("/v1/drafts/{draft_id}")
    def edit_draft(draft_id: str, body: DraftEdit,
                   user: UserRef = Depends(require_instructor)):
        draft = _get_draft(draft_id)
        with state.thread_lock(draft.thread_id):
            try:
                state.engine.drafting.edit_draft(draft, body.text)
            except DraftStateError as exc:
                raise HTTPException(409, str(exc)) from exc
            state.log_draft(draft)
        return _draft_json(draft)

    @app.post("/v1/drafts/{draft_id}/publish")
    def publish_draft(draft_id: str, body: PublishBody,
                      user: UserRef = Depends(require_instructor)):
        draft = _get_draft(draft_id)
        with state.thread_lock(draft.thread_id):
            before = len(state.forum.get_thread(draft.thread_id).comments)
            try:
                record = state.engine.drafting.publish(
                    draft, user, body.anonymous)
            except DraftStateError as exc:
                raise HTTPException(409, str(exc)) from exc
            _log_new_comments(draft.thread_id, before)
            state.log_draft(draft)
        return {"published": True, "comment_id": record.comment_id,
                "anonymous": record.anonymous,
                "draft": _draft_json(draft)}

    @app.post("/v1/drafts/{draft_id}/discard")
    def discard_draft(draft_id: str,
                      user: UserRef = Depends(require_instructor)):
        draft = _get_draft(draft_id)
        with state.thread_lock(draft.thread_id):
            try:
                state.engine.drafting.discard(draft)
            except DraftStateError as exc:
                raise HTTPException(409, str(exc)) from exc
            state.log_draft(draft)
        return _draft_json(draft)

    # -- corpus / analytics ------------------------------------------

    @app.post("/v1/corpus/ingest")
    def ingest(body: IngestBody,
               user: UserRef = Depends(require_instructor)):
        items = [CorpusItem(item_id=i.id, category=Category(i.category),
                            title=i.title, body=i.body, source=i.source,
                            unanswered=i.unanswered)
                 for i in body.items]
        try:
            chunks = state.store.ingest(items)
        except CorpusValidationError as exc:
            raise HTTPException(422, str(exc)) from exc
        return {"items": len(items), "chunks": chunks}

    @app.get("/v1/reports/usage")
    def usage(user: UserRef = Depends(require_instructor)):
        report = state.engine.usage_report()
        return {"total": report.total,
                "headers": list(report.HEADERS),
                "rows": [{"label": r.label, "count": r.count,
                          "proportion": r.proportion}
                         for r in report.rows]}

    @app.get("/v1/reports/edits")
    def edits(user: UserRef = Depends(require_instructor)):
        series = state.engine.edit_series()
        return {"entries": [
            {"draft_id": d, "additions": a, "removals": r}
            for d, a, r in series.entries],
            "threshold": series.threshold,
            "fraction_under_threshold": series.fraction_under_threshold}

    @app.get("/v1/reports/adoption")
    def adoption(user: UserRef = Depends(require_instructor)):
        return state.engine.adoption().to_dict()

    @app.exception_handler(NotFoundError)
    def not_found(_, exc):
        from fastapi.responses import JSONResponse
        return JSONResponse(status_code=404, content={"detail": str(exc)})

    return app


def _command_json(cmd: commands.ValidatedCommand,
                  label: Optional[str]) -> dict:
    return {
        "help": cmd.help,
        "reply": ({"instructions": cmd.reply.instructions}
                  if cmd.reply else None),
        "prev_refs": list(cmd.prev_refs),
        "related_refs": list(cmd.related_refs),
        "anon": cmd.anon,
        "label": label,
    }


def _help_json(outcome) -> dict:
    result = outcome.help_result
    return {
        "previous": [{"item_id": m.item_id, "score": m.score,
                      "rank": m.rank} for m in result.previous],
        "related": [{"item_id": m.item_id, "score": m.score,
                     "rank": m.rank} for m in result.related],
        "empty_corpus": result.empty_corpus,
        "rendered": outcome.help_text,
    }


def _draft_json(d) -> dict:
    return {
        "draft_id": d.draft_id,
        "thread_id": d.thread_id,
        "status": d.status.value,
        "generated_text": d.generated_text,
        "current_text": d.current_text,
        "revision_count": len(d.revisions),
        "provenance": {
            "combination_label": d.provenance.combination_label,
            "context_ids": list(d.provenance.context_ids),
            "model": d.provenance.model,
        },
        "edit_metrics": ({"additions": d.edit_metrics.additions,
                          "removals": d.edit_metrics.removals}
                         if d.edit_metrics else None),
    }

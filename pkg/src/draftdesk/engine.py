"""Glue between the forum, the parser, retrieval, and drafting.

One engine instance owns the moderation loop for a course: it detects
instructor commands in new comments, runs #help lookups, resolves
contexts, generates drafts, and records every executed command for the
usage report.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from draftdesk import commands
from draftdesk.analytics import (
    AdoptionStats, EditSeries, UsageReport, adoption_stats,
    edit_distribution, usage_report,
)
from draftdesk.drafting import (
    Draft, DraftingService, Provenance, assemble_prompt,
)
from draftdesk.forum import (
    Comment, CommentKind, ForumStore, Role, UserRef,
)
from draftdesk.providers import Provider
from draftdesk.retrieval import Category, HelpResult, VectorStore


@dataclass
class CommentOutcome:
    comment: Comment
    command: Optional[commands.ValidatedCommand] = None
    label: Optional[str] = None
    help_result: Optional[HelpResult] = None
    help_text: Optional[str] = None
    draft: Optional[Draft] = None


class AssistantEngine:
    def __init__(self, forum: ForumStore, store: VectorStore,
                 provider: Provider,
                 system_preamble: Optional[str] = None,
                 token_budget: Optional[int] = None):
        self.forum = forum
        self.store = store
        self.provider = provider
        self.drafting = DraftingService(forum, provider)
        self.command_labels: list[str] = []
        self._prompt_kwargs = {}
        if system_preamble is not None:
            self._prompt_kwargs["system_preamble"] = system_preamble
        if token_budget is not None:
            self._prompt_kwargs["token_budget"] = token_budget

    def handle_comment(self, thread_id: str, author: UserRef, body: str,
                       anonymous: bool = False,
                       execute: bool = True) -> CommentOutcome:
        """Append a comment; if it is an instructor command, validate
        it and (optionally) execute the #help or #reply pipeline.

        With execute=False the command is validated and counted but the
        generation/search side effects are deferred to the caller (the
        HTTP service runs #reply generation in the background).
        """
        inv = commands.scan(body) if author.role == Role.INSTRUCTOR else None
        cmd = commands.validate(inv) if inv is not None else None
        comment = self.forum.add_comment(thread_id, author, body,
                                         anonymous=anonymous)
        if cmd is None:
            return CommentOutcome(comment=comment)
        label = commands.classify(cmd)
        self.command_labels.append(label)
        outcome = CommentOutcome(comment=comment, command=cmd, label=label)
        if execute:
            self.execute_command(thread_id, author, cmd, outcome)
        return outcome

    def execute_command(self, thread_id: str, author: UserRef,
                        cmd: commands.ValidatedCommand,
                        outcome: Optional[CommentOutcome] = None
                        ) -> CommentOutcome:
        outcome = outcome or CommentOutcome(
            comment=self.forum.get_thread(thread_id).question)
        if cmd.help:
            thread = self.forum.get_thread(thread_id)
            result = self.store.help(thread.question.body)
            outcome.help_result = result
            outcome.help_text = self.store.render_help(result)
        else:
            outcome.draft = self.run_reply(thread_id, cmd)
        return outcome

    def run_reply(self, thread_id: str,
                  cmd: commands.ValidatedCommand) -> Draft:
        assert cmd.reply is not None
        thread = self.forum.get_thread(thread_id)
        contexts = []
        if cmd.prev_refs:
            contexts.extend(self.store.resolve(cmd.prev_refs,
                                               Category.PREVIOUS))
        if cmd.related_refs:
            contexts.extend(self.store.resolve(cmd.related_refs,
                                               Category.RELATED))
        package = assemble_prompt(thread.question.body,
                                  cmd.reply.instructions, contexts,
                                  **self._prompt_kwargs)
        provenance = Provenance(
            combination_label=commands.classify(cmd),
            context_ids=cmd.prev_refs + cmd.related_refs,
            model=self.provider.model,
        )
        return self.drafting.generate_draft(thread, package, provenance)

    # -- reporting ---------------------------------------------------

    def usage_report(self) -> UsageReport:
        return usage_report(self.command_labels)

    def edit_series(self, threshold: int = 10) -> EditSeries:
        return edit_distribution(self.drafting.all_drafts(),
                                 threshold=threshold)

    def adoption(self) -> AdoptionStats:
        student_questions = sum(
            1 for t in self.forum.list_threads()
            if t.question.author.role == Role.STUDENT)
        return adoption_stats(student_questions,
                              self.drafting.all_drafts())

"""Shared synthetic transcript fixture: a course run at the scale of
253 student questions with 95 of them answered through the tool."""

import json
from dataclasses import dataclass

from draftdesk.providers import MockProvider
from draftdesk.retrieval import Category, CorpusItem, VectorStore

N_QUESTIONS = 253
N_TOOL_ANSWERED = 95

# (combination label, comment text, publish anonymously) with counts
# summing to N_TOOL_ANSWERED
REPLY_PLAN = [
    ("reply∅ anon", "#reply #anon", True, 51),
    ("reply■ anon", "#reply Keep it concise and friendly. #anon", True, 17),
    ("reply∅ anon related", "#reply #related 11,12 #anon", True, 8),
    ("reply■", "#reply Use a metaphor.", False, 6),
    ("reply∅", "#reply", False, 6),
    ("reply∅ prev", "#reply #prev 1 2", False, 2),
    ("reply∅ anon prev", "#reply #prev 3 #anon", True, 2),
    ("reply∅ anon related prev", "#reply #related 13 #prev 4 #anon",
     True, 2),
    ("reply■ anon related", "#reply Walk through the steps. #related 14 "
     "#anon", True, 1),
]
N_HELP = 49
N_SMALL_EDIT = 60          # published with < 10 edits (incl. unedited)
N_DISCARDED_RETRIES = 7    # extra discarded drafts before the final one


@dataclass
class TranscriptFixture:
    lines: list
    label_counts: dict
    n_published: int
    n_small_edit: int
    n_discarded: int

    @property
    def fraction_under_10(self):
        return self.n_small_edit / self.n_published


def fixture_corpus_items():
    items = []
    for i in range(1, 11):
        items.append(CorpusItem(
            item_id=i, category=Category.PREVIOUS,
            title=f"archived post {i}",
            body=f"archived question {i} about topic{i} with its answer"))
    for i in range(11, 21):
        items.append(CorpusItem(
            item_id=i, category=Category.RELATED,
            title=f"handout {i}",
            body=f"course handout {i} covering topic{i} in detail"))
    return items


def fixture_store(seed=0):
    store = VectorStore(MockProvider(seed=seed))
    store.ingest(fixture_corpus_items())
    return store


def build_transcript():
    lines = []

    def emit(type_, **kw):
        lines.append(json.dumps({"type": type_, **kw}, ensure_ascii=False))

    emit("register_user", actor="i1", payload={"role": "instructor"})
    for i in range(1, 6):
        emit("register_user", actor=f"s{i}", payload={"role": "student"})

    reply_sequence = []
    for label, text, anon, count in REPLY_PLAN:
        reply_sequence.extend([(label, text, anon)] * count)
    assert len(reply_sequence) == N_TOOL_ANSWERED

    label_counts = {"help": N_HELP}
    for label, _, _, count in REPLY_PLAN:
        label_counts[label] = label_counts.get(label, 0) + count
    label_counts["reply∅"] = (label_counts.get("reply∅", 0)
                              + N_DISCARDED_RETRIES)

    for qn in range(1, N_QUESTIONS + 1):
        student = f"s{(qn % 5) + 1}"
        thread = f"q{qn:03d}"
        emit("post_question", actor=student, thread=thread,
             payload={"title": f"Question {qn}",
                      "body": f"How does topic{qn % 23} work in "
                              f"assignment {qn % 4}?"})
        if qn > N_TOOL_ANSWERED:
            continue
        idx = qn - 1
        label, text, anon = reply_sequence[idx]
        if idx < N_HELP:
            emit("comment", actor="i1", thread=thread,
                 payload={"body": "#help"})
        if idx < N_DISCARDED_RETRIES:
            # failed bare attempt, discarded and re-tried
            emit("comment", actor="i1", thread=thread,
                 payload={"body": "#reply"})
            emit("discard", actor="i1", thread=thread)
        emit("comment", actor="i1", thread=thread, payload={"body": text})
        if idx < N_SMALL_EDIT:
            if idx % 2 == 0:
                # light touch: append one word (1 addition)
                emit("edit_draft", actor="i1", thread=thread,
                     payload={"text": None, "append": "Cheers!"})
        else:
            # heavy rewrite: large removal count
            emit("edit_draft", actor="i1", thread=thread,
                 payload={"text": f"Short direct answer for {thread}."})
        emit("publish", actor="i1", thread=thread,
             payload={"anonymous": anon})

    return TranscriptFixture(
        lines=lines,
        label_counts=label_counts,
        n_published=N_TOOL_ANSWERED,
        n_small_edit=N_SMALL_EDIT,
        n_discarded=N_DISCARDED_RETRIES,
    )

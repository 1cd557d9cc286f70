import json

import pytest

from draftdesk.replay import TranscriptError, replay_lines
from tests.fixtures import build_transcript, fixture_store


def test_empty_transcript():
    result = replay_lines([])
    assert result.usage.total == 0
    assert result.edits.entries == ()
    assert result.adoption.questions_total == 0


def test_malformed_line_names_line_number():
    with pytest.raises(TranscriptError) as exc:
        replay_lines(['{"type": "register_user", "actor": "a", '
                      '"payload": {"role": "student"}}', "not json"])
    assert exc.value.lineno == 2


def test_unknown_event_type():
    with pytest.raises(TranscriptError) as exc:
        replay_lines([json.dumps({"type": "mystery"})])
    assert exc.value.lineno == 1


def test_fixture_replay_known_counts():
    fx = build_transcript()
    result = replay_lines(fx.lines, store=fixture_store())
    assert result.usage.total == sum(fx.label_counts.values())
    assert {r.label: r.count for r in result.usage.rows} == fx.label_counts
    assert len(result.edits.entries) == fx.n_published
    assert result.edits.fraction_under_threshold == pytest.approx(
        fx.fraction_under_10)
    assert result.edits.fraction_under_threshold > 0.5
    stats = result.adoption
    assert stats.questions_total == 253
    assert stats.questions_answered_via_tool == 95
    assert (stats.drafts_published_unedited + stats.drafts_published_edited
            + stats.drafts_discarded) == fx.n_published + fx.n_discarded
    assert stats.drafts_discarded == fx.n_discarded


def test_replay_twice_byte_identical():
    fx = build_transcript()
    r1 = replay_lines(fx.lines, store=fixture_store())
    r2 = replay_lines(fx.lines, store=fixture_store())
    assert r1.render() == r2.render()
    assert r1.usage.render_table() == r2.usage.render_table()
    assert r1.edits.to_records() == r2.edits.to_records()


def test_usage_table_columns_in_render():
    fx = build_transcript()
    table = replay_lines(fx.lines, store=fixture_store()).usage \
        .render_table()
    assert "Prompts Combination" in table
    assert "Usage Proportion" in table

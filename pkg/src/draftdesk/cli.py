"""Operator command line: serve the API, ingest corpora, replay
transcripts, and print reports."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from draftdesk.config import AppConfig, ConfigError, load_config
from draftdesk.replay import TranscriptError, replay_file
from draftdesk.retrieval import (
    Category, CorpusItem, CorpusValidationError, VectorStore,
    load_corpus_jsonl,
)


@click.group()
def main():
    """Instructor-in-the-loop forum assistant."""


def _load_config_opt(config_path: str | None) -> AppConfig:
    if config_path is None:
        return AppConfig()
    return load_config(config_path)


@main.command()
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="JSON config file")
@click.option("--addr", default="127.0.0.1:8080", show_default=True,
              help="host:port to bind")
@click.option("--seed", default=None, type=int,
              help="override the mock provider seed")
def serve(config_path, addr, seed):
    """Run the HTTP API service."""
    import uvicorn

    from draftdesk.service import AppState, create_app

    try:
        config = _load_config_opt(config_path)
        if seed is not None:
            config.mock_seed = seed
        host, _, port = addr.partition(":")
        if not port:
            raise ConfigError(f"--addr must be host:port, got {addr!r}")
        state = AppState(config)
    except ConfigError as exc:
        raise click.ClickException(str(exc)) from exc
    app = create_app(state)
    try:
        uvicorn.run(app, host=host, port=int(port), log_level="warning")
    finally:
        state.snapshot()


@main.command()
@click.option("--previous", "previous_file", type=click.Path(exists=True),
              default=None, help="line-delimited archive Q&A records")
@click.option("--related", "related_dir", type=click.Path(exists=True),
              default=None, help="directory of course material files")
@click.option("--manifest", "manifest_file", type=click.Path(),
              default=None, help="sidecar manifest assigning ids to "
              "course material files")
@click.option("--store", "store_path", type=click.Path(), required=True,
              help="vector store directory to write")
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--seed", default=None, type=int)
def ingest(previous_file, related_dir, manifest_file, store_path,
           config_path, seed):
    """Embed corpus files into the vector store."""
    try:
        config = _load_config_opt(config_path)
    except ConfigError as exc:
        raise click.ClickException(str(exc)) from exc
    if seed is not None:
        config.mock_seed = seed
    if related_dir is not None and manifest_file is None:
        raise click.UsageError("--related requires --manifest")

    items: list[CorpusItem] = []
    if previous_file:
        try:
            items.extend(load_corpus_jsonl(previous_file,
                                           Category.PREVIOUS))
        except CorpusValidationError as exc:
            raise click.ClickException(str(exc)) from exc
    if related_dir:
        try:
            manifest = json.loads(
                Path(manifest_file).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise click.ClickException(
                f"cannot read manifest {manifest_file}: {exc}") from exc
        for filename, meta in sorted(manifest.items()):
            path = Path(related_dir) / filename
            if not path.exists():
                raise click.ClickException(
                    f"manifest names missing file {filename}")
            items.append(CorpusItem(
                item_id=int(meta["id"]),
                category=Category.RELATED,
                title=meta.get("title", filename),
                body=path.read_text(encoding="utf-8"),
                source=meta.get("source", filename)))

    provider = config.build_provider()
    try:
        store = VectorStore.load(store_path, provider)
        click.echo(f"updating existing store at {store_path}")
    except FileNotFoundError:
        store = VectorStore(provider)
    try:
        store.ingest(items)
    except CorpusValidationError as exc:
        raise click.ClickException(str(exc)) from exc
    store.save(store_path)
    for category in Category:
        click.echo(f"{category.value}: {store.item_count(category)} items, "
                   f"{store.chunk_count(category)} chunks")


@main.command()
@click.option("--transcript", type=click.Path(exists=True), required=True)
@click.option("--store", "store_path", type=click.Path(), default=None)
@click.option("--seed", default=0, type=int, show_default=True)
def replay(transcript, store_path, seed):
    """Re-execute a usage transcript with the mock provider and print
    all reports."""
    store = None
    if store_path:
        from draftdesk.providers import MockProvider
        store = VectorStore.load(store_path, MockProvider(seed=seed))
    try:
        result = replay_file(transcript, seed=seed, store=store)
    except TranscriptError as exc:
        raise click.ClickException(str(exc)) from exc
    click.echo(result.render())


@main.command()
@click.option("--usage", "usage_flag", is_flag=True)
@click.option("--edits", "edits_flag", is_flag=True)
@click.option("--from", "log_file", type=click.Path(exists=True),
              required=True, help="transcript log to report on")
@click.option("--store", "store_path", type=click.Path(), default=None)
@click.option("--seed", default=0, type=int, show_default=True)
def report(usage_flag, edits_flag, log_file, store_path, seed):
    """Print one report (usage table or edit distribution) from a
    transcript log."""
    if usage_flag == edits_flag:
        raise click.UsageError("pass exactly one of --usage or --edits")
    which = "usage" if usage_flag else "edits"
    store = None
    if store_path:
        from draftdesk.providers import MockProvider
        store = VectorStore.load(store_path, MockProvider(seed=seed))
    try:
        result = replay_file(log_file, seed=seed, store=store)
    except TranscriptError as exc:
        raise click.ClickException(str(exc)) from exc
    if which == "usage":
        click.echo(result.usage.render_table())
    else:
        series = result.edits
        total_adds = sum(a for _, a, _ in series.entries)
        total_removals = sum(r for _, _, r in series.entries)
        click.echo(f"published drafts: {len(series.entries)}")
        click.echo(f"total additions: {total_adds}")
        click.echo(f"total removals: {total_removals}")
        click.echo(f"fraction under {series.threshold} edits: "
                   f"{series.fraction_under_threshold:.3f}")
        click.echo(series.to_records())


if __name__ == "__main__":
    sys.exit(main())

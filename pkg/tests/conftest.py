import pytest

from draftdesk.forum import ForumStore, Role
from draftdesk.providers import MockProvider
from draftdesk.retrieval import Category, CorpusItem, VectorStore


@pytest.fixture
def provider():
    return MockProvider(seed=7)


@pytest.fixture
def forum():
    return ForumStore()


@pytest.fixture
def student(forum):
    return forum.register_user("s1", Role.STUDENT)


@pytest.fixture
def instructor(forum):
    return forum.register_user("i1", Role.INSTRUCTOR)


def make_corpus(n_previous, n_related, words_per_item=40, seed=0):
    """Synthetic corpus with deterministic pseudo-text bodies."""
    import random

    rng = random.Random(seed)
    vocab = [f"word{k}" for k in range(60)]
    items = []
    next_id = 1
    for category, count in ((Category.PREVIOUS, n_previous),
                            (Category.RELATED, n_related)):
        for _ in range(count):
            body = " ".join(rng.choice(vocab)
                            for _ in range(words_per_item))
            items.append(CorpusItem(
                item_id=next_id, category=category,
                title=f"{category.value} item {next_id}", body=body))
            next_id += 1
    return items


@pytest.fixture
def small_store(provider):
    store = VectorStore(provider)
    store.ingest(make_corpus(7, 3))
    return store

import numpy as np
import pytest

from draftdesk.drafting import PromptPackage
from draftdesk.providers import (
    AuthError, GatewayValidationError, HttpProvider, MockProvider,
    ProviderConfig, ProviderError, ProviderTimeout, call_with_retries,
)


def make_package(question="Q?", instructions="", blocks=()):
    return PromptPackage(system_preamble="persona",
                         context_blocks=tuple(blocks),
                         question=question, instructions=instructions)


class TestMockEmbedding:
    def test_pure_function(self, provider):
        v1 = provider.embed_batch(["hello world"])
        v2 = provider.embed_batch(["hello world"])
        assert np.array_equal(v1, v2)

    def test_unit_norm(self, provider):
        vecs = provider.embed_batch(["a b c", "longer text with tokens"])
        assert np.allclose(np.linalg.norm(vecs, axis=1), 1.0, atol=1e-6)

    def test_distinct_texts_cosine_below_one_golden(self):
        # frozen from the hashed-token feature definition at seed=0, D=256
        provider = MockProvider(seed=0, dim=256)
        a, b = provider.embed_batch(["abc", "xyz"])
        cosine = float(a @ b)
        assert cosine < 1.0
        assert cosine == pytest.approx(0.0, abs=1e-9)

    def test_empty_string_rejected(self, provider):
        with pytest.raises(GatewayValidationError):
            provider.embed_batch(["ok", "   "])

    def test_empty_batch_rejected(self, provider):
        with pytest.raises(GatewayValidationError):
            provider.embed_batch([])

    def test_seed_changes_vectors(self):
        a = MockProvider(seed=1).embed_batch(["same text"])[0]
        b = MockProvider(seed=2).embed_batch(["same text"])[0]
        assert not np.array_equal(a, b)


class TestMockChat:
    def test_deterministic_template(self, provider):
        pkg = make_package(blocks=[("previous", 2, "ctx")])
        assert provider.chat_complete(pkg) == provider.chat_complete(pkg)

    def test_output_embeds_context_ids_and_digests(self, provider):
        pkg = make_package(blocks=[("previous", 2, "c1"),
                                   ("related", 44, "c2")],
                           instructions="be brief")
        out = provider.chat_complete(pkg)
        assert "ctx=2,44" in out
        assert "instr=" in out and "q=" in out


class TestRetryPolicy:
    def test_two_timeouts_then_success(self):
        calls = []

        def fn():
            calls.append(1)
            if len(calls) <= 2:
                raise ProviderTimeout("slow")
            return "ok"

        delays = []
        slept = []
        result = call_with_retries(fn, max_retries=3, backoff_base_ms=100,
                                   sleep=slept.append, attempt_log=delays)
        assert result == "ok"
        assert len(calls) == 3
        # geometric schedule: base, 2*base
        assert delays == [0.1, 0.2]
        assert slept == delays

    def test_exhausted_retries(self):
        def fn():
            raise ProviderTimeout("slow")

        delays = []
        with pytest.raises(ProviderError):
            call_with_retries(fn, max_retries=2, backoff_base_ms=50,
                              sleep=lambda s: None, attempt_log=delays)
        assert delays == [0.05, 0.1]

    def test_auth_failure_single_attempt(self):
        calls = []

        def fn():
            calls.append(1)
            raise AuthError("bad key")

        with pytest.raises(AuthError):
            call_with_retries(fn, max_retries=5, backoff_base_ms=50,
                              sleep=lambda s: None)
        assert len(calls) == 1


class TestHttpProvider:
    def _provider(self, transport):
        config = ProviderConfig(endpoint="http://fake", model="m",
                                max_retries=2, backoff_base_ms=10)
        return HttpProvider(config, transport=transport,
                            sleep=lambda s: None)

    def test_embed_parses_response(self):
        def transport(path, payload):
            assert path == "/embeddings"
            return {"data": [{"embedding": [3.0, 4.0]}
                             for _ in payload["input"]]}

        vecs = self._provider(transport).embed_batch(["a", "b"])
        assert vecs.shape == (2, 2)
        assert np.allclose(np.linalg.norm(vecs, axis=1), 1.0)

    def test_chat_retries_on_timeout(self):
        calls = []

        def transport(path, payload):
            calls.append(path)
            if len(calls) <= 2:
                raise ProviderTimeout("t")
            return {"choices": [{"message": {"content": "answer"}}]}

        provider = self._provider(transport)
        assert provider.chat_complete(make_package()) == "answer"
        assert len(calls) == 3
        assert provider.attempt_delays == [0.01, 0.02]

    def test_auth_error_not_retried(self):
        calls = []

        def transport(path, payload):
            calls.append(1)
            raise AuthError("401")

        provider = self._provider(transport)
        with pytest.raises(AuthError):
            provider.chat_complete(make_package())
        assert len(calls) == 1

    def test_messages_include_contexts_and_instructions(self):
        seen = {}

        def transport(path, payload):
            seen.update(payload)
            return {"choices": [{"message": {"content": "x"}}]}

        pkg = make_package(blocks=[("related", 42, "handout text")],
                           instructions="use a metaphor")
        self._provider(transport).chat_complete(pkg)
        contents = [m["content"] for m in seen["messages"]]
        assert any("handout text" in c for c in contents)
        assert any("use a metaphor" in c for c in contents)

    def test_credential_not_in_repr(self, monkeypatch):
        monkeypatch.setenv("DRAFTDESK_API_KEY", "sekret-value")
        config = ProviderConfig()
        assert "sekret-value" not in repr(config)
        assert config.credential() == "sekret-value"

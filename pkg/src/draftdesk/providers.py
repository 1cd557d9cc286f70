"""Chat-completion and embedding provider gateway.

Two implementations of the same interface: a deterministic mock (pure
functions of its seed; the whole test suite runs offline) and an HTTP
client speaking the common chat-completion/embedding JSON shape.
Transient failures retry with exponential backoff; auth failures never
retry.
"""

from __future__ import annotations

import hashlib
import logging
import os
import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Protocol, Sequence, TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from draftdesk.drafting import PromptPackage

logger = logging.getLogger(__name__)


class ProviderError(Exception):
    """Provider call failed after exhausting retries."""


class ProviderTimeout(ProviderError):
    """Single-attempt timeout; retryable."""


class AuthError(ProviderError):
    """Credential rejected; never retried."""


class GatewayValidationError(ValueError):
    pass


@dataclass
class ProviderConfig:
    endpoint: str = ""
    model: str = "mock"
    credential_env: str = "DRAFTDESK_API_KEY"
    timeout_s: float = 30.0
    max_retries: int = 2
    backoff_base_ms: int = 250

    def credential(self) -> str:
        # value intentionally never stored on the object or logged
        return os.environ.get(self.credential_env, "")


class Provider(Protocol):
    model: str

    def embed_batch(self, texts: Sequence[str]) -> np.ndarray: ...

    def chat_complete(self, package: "PromptPackage") -> str: ...


def normalize(vec: np.ndarray) -> np.ndarray:
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        raise GatewayValidationError("zero embedding vector")
    return vec / norm


def _digest(text: str) -> str:
    return hashlib.sha1(text.encode("utf-8")).hexdigest()[:10]


class MockProvider:
    """Deterministic offline provider.

    embed: hashed-token feature vector, L2-normalized. chat: template
    echoing digests of the question and instructions plus context ids.
    """

    def __init__(self, seed: int = 0, dim: int = 256):
        self.seed = seed
        self.dim = dim
        self.model = f"mock-{seed}"

    def _embed_one(self, text: str) -> np.ndarray:
        tokens = text.split()
        if not tokens:
            raise GatewayValidationError("cannot embed empty text")
        vec = np.zeros(self.dim, dtype=np.float64)
        for tok in tokens:
            h = hashlib.blake2b(f"{self.seed}:{tok}".encode("utf-8"),
                                digest_size=8).digest()
            idx = int.from_bytes(h[:4], "big") % self.dim
            sign = 1.0 if h[4] % 2 == 0 else -1.0
            vec[idx] += sign
        if not np.any(vec):
            # sign cancellation; fall back to a deterministic basis bump
            vec[int.from_bytes(hashlib.blake2b(
                text.encode("utf-8"), digest_size=4).digest(), "big")
                % self.dim] = 1.0
        return normalize(vec)

    def embed_batch(self, texts: Sequence[str]) -> np.ndarray:
        if len(texts) == 0:
            raise GatewayValidationError("empty embedding batch")
        return np.stack([self._embed_one(t) for t in texts])

    def chat_complete(self, package: "PromptPackage") -> str:
        ctx_ids = ",".join(str(i) for _, i, _ in package.context_blocks) or "-"
        lines = [
            f"[draft model={self.model} q={_digest(package.question)} "
            f"ctx={ctx_ids} instr={_digest(package.instructions)}]",
            "Here is a suggested answer to the question.",
        ]
        for category, item_id, _ in package.context_blocks:
            lines.append(f"Drawing on {category} context item {item_id}, "
                         "the relevant background applies here.")
        if package.instructions:
            lines.append("Following the instructor's guidance: "
                         f"{package.instructions}")
        lines.append("In summary, work through the steps above and ask a "
                     "follow-up if anything is unclear.")
        return "\n".join(lines)


def call_with_retries(fn: Callable[[], "object"], *,
                      max_retries: int,
                      backoff_base_ms: int,
                      sleep: Callable[[float], None] = time.sleep,
                      attempt_log: Optional[list[float]] = None):
    """Run fn with exponential backoff on retryable errors.

    Total attempts <= 1 + max_retries; delay before retry n (1-based) is
    backoff_base_ms * 2**(n-1) milliseconds. AuthError aborts at once.
    """
    attempt = 0
    while True:
        attempt += 1
        try:
            return fn()
        except AuthError:
            raise
        except ProviderError as exc:
            if attempt > max_retries:
                raise ProviderError(
                    f"provider failed after {attempt} attempts: {exc}"
                ) from exc
            delay_s = backoff_base_ms * (2 ** (attempt - 1)) / 1000.0
            if attempt_log is not None:
                attempt_log.append(delay_s)
            logger.warning("provider attempt %d failed (%s); retrying in %.3fs",
                           attempt, exc, delay_s)
            sleep(delay_s)


class HttpProvider:
    """Client for chat-completion/embedding HTTP endpoints.

    Request/response mapping (documented contract):
      POST {endpoint}/embeddings   {"model", "input": [texts]}
          -> {"data": [{"embedding": [...]}, ...]}
      POST {endpoint}/chat/completions
          {"model", "messages": [{"role", "content"}, ...]}
          -> {"choices": [{"message": {"content": ...}}]}
    Bearer credential is read from the configured environment variable.
    """

    def __init__(self, config: ProviderConfig,
                 transport: Optional[Callable[..., dict]] = None,
                 sleep: Callable[[float], None] = time.sleep):
        self.config = config
        self.model = config.model
        self._transport = transport or self._http_post
        self._sleep = sleep
        self.attempt_delays: list[float] = []

    def _http_post(self, path: str, payload: dict) -> dict:
        import httpx

        url = self.config.endpoint.rstrip("/") + path
        headers = {"Authorization": f"Bearer {self.config.credential()}"}
        try:
            resp = httpx.post(url, json=payload, headers=headers,
                              timeout=self.config.timeout_s)
        except httpx.TimeoutException as exc:
            raise ProviderTimeout(f"timeout calling {path}") from exc
        except httpx.HTTPError as exc:
            raise ProviderError(f"transport error calling {path}: {exc}") \
                from exc
        if resp.status_code in (401, 403):
            raise AuthError(f"auth rejected ({resp.status_code})")
        if resp.status_code >= 500:
            raise ProviderError(f"server error {resp.status_code}")
        if resp.status_code != 200:
            raise ProviderError(f"unexpected status {resp.status_code}")
        return resp.json()

    def _call(self, path: str, payload: dict) -> dict:
        return call_with_retries(
            lambda: self._transport(path, payload),
            max_retries=self.config.max_retries,
            backoff_base_ms=self.config.backoff_base_ms,
            sleep=self._sleep,
            attempt_log=self.attempt_delays,
        )

    def embed_batch(self, texts: Sequence[str]) -> np.ndarray:
        if len(texts) == 0 or any(not t.strip() for t in texts):
            raise GatewayValidationError(
                "embedding batch must be non-empty with non-empty texts")
        data = self._call("/embeddings",
                          {"model": self.config.model, "input": list(texts)})
        vecs = np.asarray([row["embedding"] for row in data["data"]],
                          dtype=np.float64)
        return np.stack([normalize(v) for v in vecs])

    def chat_complete(self, package: "PromptPackage") -> str:
        messages = [{"role": "system", "content": package.system_preamble}]
        for category, item_id, text in package.context_blocks:
            messages.append({
                "role": "system",
                "content": f"Context ({category} item {item_id}):\n{text}",
            })
        messages.append({"role": "user", "content": package.question})
        if package.instructions:
            messages.append({"role": "system",
                             "content": "Instructor instructions: "
                                        + package.instructions})
        data = self._call("/chat/completions",
                          {"model": self.config.model, "messages": messages})
        content = data["choices"][0]["message"]["content"]
        if not content:
            raise ProviderError("empty completion")
        return content

"""Service configuration: JSON file loaded via the CLI --config flag."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from draftdesk.drafting import DEFAULT_SYSTEM_PREAMBLE, DEFAULT_TOKEN_BUDGET
from draftdesk.providers import (
    HttpProvider, MockProvider, Provider, ProviderConfig,
)


class ConfigError(Exception):
    pass


@dataclass
class AppConfig:
    provider_kind: str = "mock"           # "mock" | "http"
    provider: ProviderConfig = field(default_factory=ProviderConfig)
    mock_seed: int = 0
    mock_dim: int = 256
    store_path: Optional[str] = None      # vector store directory
    data_dir: Optional[str] = None        # event log + snapshot
    system_preamble: str = DEFAULT_SYSTEM_PREAMBLE
    token_budget: int = DEFAULT_TOKEN_BUDGET
    alias_nouns: Optional[list[str]] = None
    # bearer token -> {"user_id", "role"}
    tokens: dict[str, dict] = field(default_factory=dict)

    def build_provider(self) -> Provider:
        if self.provider_kind == "mock":
            return MockProvider(seed=self.mock_seed, dim=self.mock_dim)
        if self.provider_kind == "http":
            if not self.provider.endpoint:
                raise ConfigError("http provider requires an endpoint")
            return HttpProvider(self.provider)
        raise ConfigError(f"unknown provider kind {self.provider_kind!r}")


def load_config(path: str | Path) -> AppConfig:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid config JSON in {path}: {exc}") from exc

    provider_raw = raw.get("provider", {})
    config = AppConfig(
        provider_kind=provider_raw.get("kind", "mock"),
        provider=ProviderConfig(
            endpoint=provider_raw.get("endpoint", ""),
            model=provider_raw.get("model", "mock"),
            credential_env=provider_raw.get("credential_env",
                                            "DRAFTDESK_API_KEY"),
            timeout_s=provider_raw.get("timeout_s", 30.0),
            max_retries=provider_raw.get("max_retries", 2),
            backoff_base_ms=provider_raw.get("backoff_base_ms", 250),
        ),
        mock_seed=provider_raw.get("seed", 0),
        mock_dim=provider_raw.get("dim", 256),
        store_path=raw.get("store_path"),
        data_dir=raw.get("data_dir"),
        system_preamble=raw.get("system_preamble", DEFAULT_SYSTEM_PREAMBLE),
        token_budget=raw.get("token_budget", DEFAULT_TOKEN_BUDGET),
        alias_nouns=raw.get("alias_nouns"),
        tokens=raw.get("tokens", {}),
    )
    for token, entry in config.tokens.items():
        if "user_id" not in entry or "role" not in entry:
            raise ConfigError(f"token entry for {token!r} needs user_id "
                              "and role")
    return config

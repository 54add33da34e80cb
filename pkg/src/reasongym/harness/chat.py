"""Minimal client for OpenAI-style ``/chat/completions`` endpoints."""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from typing import Any, Callable

import httpx

from .client import TransportFailure

DEFAULT_TIMEOUT = 120.0
DEFAULT_ATTEMPTS = 3


@dataclass(frozen=True)
class ModelEndpoint:
    base_url: str
    model: str
    api_key_env: str | None = None
    timeout: float = DEFAULT_TIMEOUT

    def headers(self) -> dict[str, str]:
        key = os.environ.get(self.api_key_env) if self.api_key_env else None
        return {"Authorization": f"Bearer {key}"} if key else {}


@dataclass
class ChatReply:
    text: str
    usage: dict[str, Any] = field(default_factory=dict)


def chat_complete(
    endpoint: ModelEndpoint,
    messages: list[dict[str, str]],
    http: httpx.Client | None = None,
    attempts: int = DEFAULT_ATTEMPTS,
    backoff: float = 1.0,
    sleep: Callable[[float], None] = time.sleep,
) -> ChatReply:
    """One chat completion.  Sampling parameters are left at the provider defaults.

    Non-2xx replies, timeouts and connection errors are retried with
    exponential backoff; after ``attempts`` failures TransportFailure is raised.
    """
    owned = http is None
    if owned:
        http = httpx.Client(timeout=endpoint.timeout)
    url = endpoint.base_url.rstrip("/") + "/chat/completions"
    body = {"model": endpoint.model, "messages": messages}
    last = ""
    try:
        for attempt in range(attempts):
            try:
                resp = http.post(url, json=body, headers=endpoint.headers(), timeout=endpoint.timeout)
                if resp.status_code // 100 == 2:
                    data = resp.json()
                    text = data["choices"][0]["message"]["content"] or ""
                    return ChatReply(text, dict(data.get("usage") or {}))
                last = f"HTTP {resp.status_code}: {resp.text[:200]}"
            except httpx.HTTPError as exc:
                last = f"{type(exc).__name__}: {exc}"
            except (ValueError, KeyError, IndexError, TypeError) as exc:
                last = f"malformed reply: {exc}"
            if attempt < attempts - 1:
                sleep(backoff * 2**attempt)
    finally:
        if owned:
            http.close()
    raise TransportFailure(f"chat completion failed after {attempts} attempts ({last})")

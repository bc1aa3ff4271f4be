"""Client for pluggable generative inference providers.

A provider is any HTTP service exposing POST {base_url}/v1/generate with the
request body

    {"task": "summarize" | "saq" | "boolq" | "distractors",
     "text": str, "answer": str | null, "polarity": "yes" | "no" | null,
     "n": int}

and the response body ``{"candidates": [{"text": str, "score": float}]}``
where scores lie in [0, 1]. Generation code never talks HTTP directly; it
calls ``generate`` on anything satisfying GenerativeProvider, which lets
tests substitute in-process stubs.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Protocol, runtime_checkable

import httpx

from .errors import ProviderProtocolError, ProviderUnavailable

TASKS = ("summarize", "saq", "boolq", "distractors")


@dataclass(frozen=True)
class Candidate:
    text: str
    score: float


@runtime_checkable
class GenerativeProvider(Protocol):
    name: str

    def generate(
        self,
        task: str,
        text: str,
        *,
        answer: str | None = None,
        polarity: str | None = None,
        n: int = 1,
    ) -> list[Candidate]:
        ...


def parse_candidates(data: object) -> list[Candidate]:
    """Validate a decoded response body and return candidates best first.

    A response that is not an object, lacks "candidates", contains an empty
    or non-string text, or a score outside [0, 1] is a protocol error. The
    contract says candidates arrive sorted by score; we re-sort defensively
    rather than reject, keeping arrival order among equal scores.
    """
    if not isinstance(data, dict) or not isinstance(data.get("candidates"), list):
        raise ProviderProtocolError("response must be an object with a candidates list")
    out: list[Candidate] = []
    for i, item in enumerate(data["candidates"]):
        if not isinstance(item, dict):
            raise ProviderProtocolError(f"candidates[{i}] is not an object")
        text = item.get("text")
        score = item.get("score")
        if not isinstance(text, str) or not text.strip():
            raise ProviderProtocolError(f"candidates[{i}].text must be a non-empty string")
        if isinstance(score, bool) or not isinstance(score, (int, float)):
            raise ProviderProtocolError(f"candidates[{i}].score must be a number")
        if not 0.0 <= float(score) <= 1.0:
            raise ProviderProtocolError(f"candidates[{i}].score must lie in [0, 1]")
        out.append(Candidate(text=text, score=float(score)))
    out.sort(key=lambda c: -c.score)
    return out


class HttpProvider:
    """GenerativeProvider talking to a real inference endpoint.

    In-flight requests are limited by a semaphore so a burst of generation
    calls cannot stampede the provider.
    """

    def __init__(
        self,
        base_url: str,
        *,
        name: str | None = None,
        timeout_s: float = 10.0,
        max_concurrency: int = 4,
    ):
        self.base_url = base_url.rstrip("/")
        self.name = name or self.base_url
        self._client = httpx.Client(timeout=timeout_s)
        self._slots = threading.BoundedSemaphore(max_concurrency)

    def generate(
        self,
        task: str,
        text: str,
        *,
        answer: str | None = None,
        polarity: str | None = None,
        n: int = 1,
    ) -> list[Candidate]:
        if task not in TASKS:
            raise ProviderProtocolError(f"unknown task {task!r}")
        payload = {
            "task": task,
            "text": text,
            "answer": answer,
            "polarity": polarity,
            "n": n,
        }
        try:
            with self._slots:
                response = self._client.post(f"{self.base_url}/v1/generate", json=payload)
        except httpx.HTTPError as exc:
            raise ProviderUnavailable(f"provider request failed: {exc}") from None
        if response.status_code >= 500:
            raise ProviderUnavailable(f"provider returned {response.status_code}")
        if response.status_code != 200:
            raise ProviderProtocolError(f"provider returned {response.status_code}")
        try:
            data = response.json()
        except ValueError:
            raise ProviderProtocolError("provider response is not JSON") from None
        return parse_candidates(data)

    def close(self) -> None:
        self._client.close()

"""Runtime configuration.

All tunables live here with their defaults. A JSON file can override any
field; the file is found via the --config CLI flag or the LECTUREQG_CONFIG
environment variable.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import InvalidParameter

ENV_VAR = "LECTUREQG_CONFIG"


@dataclass
class ApiConfig:
    listen_host: str = "127.0.0.1"
    listen_port: int = 8000
    store_root: str = "./lectureqg-store"
    provider_base_url: str | None = None
    provider_name: str = "provider"
    provider_timeout_s: float = 10.0
    provider_max_concurrency: int = 4
    max_segment_duration_s: float = 300.0
    summary_ratio: float = 0.2
    summary_max_words: int = 100
    keyword_limit: int = 20
    top_n: int = 3
    n_distractors: int = 3
    blq_per_polarity: int = 3

    def __post_init__(self) -> None:
        positive = (
            "provider_timeout_s",
            "provider_max_concurrency",
            "max_segment_duration_s",
            "summary_ratio",
            "summary_max_words",
            "top_n",
            "n_distractors",
            "blq_per_polarity",
        )
        for name in positive:
            if getattr(self, name) <= 0:
                raise InvalidParameter(f"{name} must be positive")


def load_config(path: str | Path | None = None, **overrides) -> ApiConfig:
    """Build a config from defaults, an optional JSON file, and overrides.

    Explicit ``path`` wins over the environment variable. Unknown keys in the
    file are rejected so typos fail loudly.
    """
    source = path or os.environ.get(ENV_VAR)
    values: dict = {}
    if source:
        try:
            values = json.loads(Path(source).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidParameter(f"cannot read config {source}: {exc}") from None
        if not isinstance(values, dict):
            raise InvalidParameter("config file must hold a JSON object")
        known = {f.name for f in fields(ApiConfig)}
        unknown = set(values) - known
        if unknown:
            raise InvalidParameter(f"unknown config keys: {', '.join(sorted(unknown))}")
    values.update({k: v for k, v in overrides.items() if v is not None})
    return ApiConfig(**values)

"""Run-time settings shared by the library and the command line."""
from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

from .graphs import DEFAULT_MEMORY_BUDGET

DEFAULT_TIME_BUDGET = 300.0


def cache_dir() -> Path:
    """Directory for computed witnesses; ``JSCHEME_CACHE`` overrides the default.

    Not created here; writers create it on first use.
    """
    env = os.environ.get("JSCHEME_CACHE")
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "jscheme"


@dataclass(frozen=True)
class Config:
    memory_budget_bytes: int = DEFAULT_MEMORY_BUDGET
    default_time_budget: float = DEFAULT_TIME_BUDGET
    output_format: str = "text"
    extended: bool = False
    cache: Path | None = None

    def __post_init__(self) -> None:
        if self.memory_budget_bytes <= 0:
            raise ValueError("memory budget must be positive")
        if self.default_time_budget <= 0:
            raise ValueError("time budget must be positive")
        if self.output_format not in ("text", "json", "csv"):
            raise ValueError(f"unknown output format {self.output_format!r}")

    @property
    def cache_path(self) -> Path:
        return self.cache if self.cache is not None else cache_dir()

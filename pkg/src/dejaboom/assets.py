"""Loaders for the data files bundled with the package."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources


@lru_cache(maxsize=None)
def load_json(name: str) -> dict:
    text = resources.files("dejaboom").joinpath(f"data/{name}").read_text(encoding="utf-8")
    return json.loads(text)


@lru_cache(maxsize=None)
def load_text(name: str) -> str:
    return resources.files("dejaboom").joinpath(f"data/{name}").read_text(encoding="utf-8")


def load_script(name: str) -> list[str]:
    """Command scripts: one command per line, blank lines and # comments skipped."""
    lines = []
    for line in load_text(f"scripts/{name}").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            lines.append(line)
    return lines

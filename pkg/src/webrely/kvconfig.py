"""Shared 'key = value' config format: one pair per line, # comments."""

from __future__ import annotations

from pathlib import Path

__all__ = ["parse_kv", "take"]


def parse_kv(path: str | Path) -> dict[str, str]:
    pairs: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key in pairs:
            raise ValueError(f"{path}:{lineno}: duplicate key {key!r}")
        pairs[key] = value.strip()
    return pairs


def take(pairs: dict[str, str], key: str, convert, default):
    """Pop and convert one key; pairs shrinks so callers can reject leftovers."""
    if key not in pairs:
        return default
    raw = pairs.pop(key)
    try:
        return convert(raw)
    except (TypeError, ValueError):
        raise ValueError(f"config key {key!r}: cannot parse {raw!r}") from None

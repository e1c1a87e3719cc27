"""Content-addressed result cache for poset computations.

Enabled only when the OCS_CACHE environment variable names a directory.
Keys are SHA-256 hashes of the canonical poset serialization plus an
operation tag, so a hit can only ever return the value the same
computation would produce.
"""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

from .posets import Poset, canonical_poset_bytes

__all__ = ["cache_dir", "poset_key", "fetch", "store", "cached"]


def cache_dir() -> Path | None:
    loc = os.environ.get("OCS_CACHE")
    if not loc:
        return None
    path = Path(loc)
    path.mkdir(parents=True, exist_ok=True)
    return path


def poset_key(p: Poset, op: str) -> str:
    h = hashlib.sha256()
    h.update(op.encode())
    h.update(b"\x00")
    h.update(canonical_poset_bytes(p))
    return h.hexdigest()


def fetch(key: str):
    """Returns (hit, value)."""
    base = cache_dir()
    if base is None:
        return False, None
    path = base / f"{key}.json"
    if not path.is_file():
        return False, None
    with open(path, encoding="utf-8") as fh:
        return True, json.load(fh)["value"]


def store(key: str, value) -> None:
    base = cache_dir()
    if base is None:
        return
    path = base / f"{key}.json"
    tmp = path.with_suffix(".tmp")
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump({"key": key, "value": value}, fh, sort_keys=True)
    tmp.replace(path)


def cached(p: Poset, op: str, compute):
    """Run compute() with content-hash caching; values must round-trip
    through JSON unchanged."""
    key = poset_key(p, op)
    hit, value = fetch(key)
    if hit:
        return value
    value = compute()
    store(key, value)
    return value

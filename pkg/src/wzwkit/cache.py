"""On-disk cache of modular-data documents.

One canonical JSON file per (series, rank, level), written atomically; a
stored document is byte-identical on re-store.  Corruption is not fatal: the
caller recomputes and overwrites, with a warning on standard error.
"""

from __future__ import annotations

import json
import os
import sys
import tempfile
from pathlib import Path

from .affine import ModularData, modular_data_from_doc, modular_data_to_doc
from .config import Config, DEFAULT_CONFIG


def default_cache_dir() -> Path:
    env = os.environ.get("WZWKIT_CACHE_DIR")
    if env:
        return Path(env)
    xdg = os.environ.get("XDG_CACHE_HOME")
    base = Path(xdg) if xdg else Path.home() / ".cache"
    return base / "wzwkit"


def cache_key(series: str, rank: int, level: int) -> str:
    return f"{series}-{rank}-{level}.json"


def canonical_json(doc: dict) -> str:
    """The one serialization used for cache files and payload hashing."""
    return json.dumps(doc, separators=(",", ":"), ensure_ascii=True)


def cache_lookup(cache_dir: Path, series: str, rank: int, level: int,
                 config: Config = DEFAULT_CONFIG) -> ModularData | None:
    """Return the cached modular data, or None on miss or corruption."""
    path = cache_dir / cache_key(series, rank, level)
    if not path.is_file():
        return None
    try:
        doc = json.loads(path.read_text())
        md = modular_data_from_doc(doc, config)
        if canonical_json(modular_data_to_doc(md)) != canonical_json(doc):
            raise ValueError("stored document is not canonical")
        return md
    except Exception as exc:  # corrupted cache: recompute and overwrite
        print(f"wzwkit: cache file {path} is corrupted ({exc}); recomputing",
              file=sys.stderr)
        return None


def cache_store(cache_dir: Path, md: ModularData) -> Path:
    """Write the document atomically (write-to-temp plus rename)."""
    cache_dir.mkdir(parents=True, exist_ok=True)
    t = md.level_data.lie_type
    path = cache_dir / cache_key(t.series, t.rank, md.level_data.level)
    payload = canonical_json(modular_data_to_doc(md))
    fd, tmp = tempfile.mkstemp(dir=cache_dir, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)
    return path

"""Content-addressed cache of per-unit stage-1 results."""
from __future__ import annotations

import hashlib
import json
import logging
import os
from pathlib import Path
from typing import Optional

from .. import __version__

log = logging.getLogger(__name__)

CACHE_ENV = "ANALYZER_CACHE_DIR"


def unit_key(unit: str, sources: dict, config: dict) -> str:
    """Hash of the unit's text, the texts of everything it imports, and the config.

    `sources` maps unit name to (file name, text) for the unit and its
    transitive imports.
    """
    h = hashlib.sha256()
    h.update(f"stagedscan {__version__}\0{unit}\0".encode())
    h.update(json.dumps(config, sort_keys=True).encode())
    for name in sorted(sources):
        file, text = sources[name]
        h.update(f"\0{name}\0{file}\0".encode())
        h.update(text.encode("utf-8"))
    return h.hexdigest()


class BuildCache:
    def __init__(self, root):
        self.root = Path(root)

    @classmethod
    def for_output(cls, out_dir) -> "BuildCache":
        return cls(os.environ.get(CACHE_ENV) or Path(out_dir) / ".cache")

    def _path(self, key: str) -> Path:
        return self.root / key[:2] / f"{key}.json"

    def get(self, key: str) -> Optional[dict]:
        p = self._path(key)
        try:
            return json.loads(p.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError):
            return None

    def put(self, key: str, entry: dict) -> None:
        p = self._path(key)
        p.parent.mkdir(parents=True, exist_ok=True)
        tmp = p.with_suffix(f".tmp{os.getpid()}")
        tmp.write_text(json.dumps(entry, sort_keys=True), encoding="utf-8")
        os.replace(tmp, p)

    def clear(self) -> None:
        if not self.root.exists():
            return
        for p in sorted(self.root.rglob("*.json")):
            p.unlink()

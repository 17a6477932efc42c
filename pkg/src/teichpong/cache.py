"""Optional file-backed memo for derived constants.

Disabled by default so library imports stay side-effect free; the CLI
enables it on a local JSON file unless --no-cache is given.  Values must be
JSON-serializable and are keyed by the full derivation parameters, so a hit
is bit-for-bit the same as recomputation.
"""

from __future__ import annotations

import json
import os

_path: str | None = None
_store: dict = {}
_dirty = False

DEFAULT_FILENAME = ".teichpong-constants.json"


def enable(path: str = DEFAULT_FILENAME):
    global _path, _store, _dirty
    _path = path
    _dirty = False
    _store = {}
    if os.path.exists(path):
        try:
            with open(path, "r", encoding="utf-8") as fh:
                _store = json.load(fh)
        except (OSError, ValueError):
            _store = {}


def disable():
    global _path, _store, _dirty
    _path = None
    _store = {}
    _dirty = False


def memo(key: str, compute):
    global _dirty
    if _path is None:
        return compute()
    if key not in _store:
        _store[key] = compute()
        _dirty = True
    return _store[key]


def flush():
    global _dirty
    if _path is not None and _dirty:
        with open(_path, "w", encoding="utf-8") as fh:
            json.dump(_store, fh, indent=1, sort_keys=True)
            fh.write("\n")
        _dirty = False

"""Canonical JSON serialization and content hashing.

Every golden comparison and staleness check in the toolchain goes through
these two functions, so the byte form must stay stable: sorted object keys,
compact separators, UTF-8, no NaN.
"""

from __future__ import annotations

import hashlib
import json

HASH_ALGORITHM = "sha256"


def canonical_bytes(obj) -> bytes:
    return json.dumps(
        obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"), allow_nan=False
    ).encode("utf-8")


def content_hash(obj) -> str:
    return hashlib.sha256(canonical_bytes(obj)).hexdigest()

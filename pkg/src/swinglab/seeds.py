"""Deterministic seed derivation.

Per-fold and per-swing seeds are derived from a master seed plus a string
identity (never a list position), so results are independent of input order
and each unit of work is individually replayable.
"""

from __future__ import annotations

import hashlib


def derive_seed(master_seed: int, *parts: str) -> int:
    """Derive a 63-bit child seed from a master seed and string identifiers."""
    key = "|".join([str(int(master_seed)), *parts])
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") >> 1

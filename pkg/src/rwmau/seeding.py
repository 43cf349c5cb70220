"""Stable derivation of independent substream seeds from mixed labels."""

from __future__ import annotations

import hashlib

import numpy as np

__all__ = ["derive_seed"]


def _material(part) -> int:
    if isinstance(part, (int, np.integer)):
        return int(part) & (2 ** 64 - 1)
    digest = hashlib.sha256(str(part).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def derive_seed(*parts) -> int:
    """64-bit seed that is a pure function of the given ints/strings."""
    entropy = [_material(p) for p in parts]
    return int(np.random.SeedSequence(entropy).generate_state(1, np.uint64)[0])

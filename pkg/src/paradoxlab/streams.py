"""Seed-derived random streams, stable across platforms and thread counts.

Every randomized path derives one independent stream per unit of work from
(seed, unit index), so results never depend on scheduling.
"""

from __future__ import annotations

import hashlib
import random

from .words import Presentation, Word, word_key


def derive_rng(seed: int, *unit) -> random.Random:
    """An independent Mersenne Twister keyed by (seed, unit labels)."""
    key = ":".join([str(int(seed))] + [str(u) for u in unit])
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def seeded_bits(seed: int, vertices, p: Presentation) -> dict[Word, int]:
    """One coordinate bit per vertex, assigned in canonical vertex order."""
    rng = derive_rng(seed, "bits")
    out = {}
    for w in sorted(vertices, key=lambda v: word_key(v, p)):
        out[w] = rng.getrandbits(1)
    return out

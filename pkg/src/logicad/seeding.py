"""Stable seed derivation so every pipeline stage can be rerun independently."""

import hashlib

import numpy as np


def derive_seed(master_seed: int, *parts: str) -> int:
    """Derive a 64-bit seed from a master seed and string qualifiers.

    Uses SHA-256 so the mapping is stable across processes and Python
    versions (unlike the builtin ``hash``).
    """
    payload = "|".join([str(int(master_seed)), *parts]).encode("utf-8")
    digest = hashlib.sha256(payload).digest()
    return int.from_bytes(digest[:8], "little")


def derive_rng(master_seed: int, *parts: str) -> np.random.Generator:
    return np.random.default_rng(derive_seed(master_seed, *parts))

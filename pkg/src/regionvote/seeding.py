"""Named random streams derived from one master seed.

Every randomized entry point in the package draws from a stream named
after its role ("flag.layout", "breakdown.trials", ...). Streams with
different names are statistically independent, and the same master seed
always reproduces the same draws in every stream, regardless of the
order in which streams are consumed.
"""

from __future__ import annotations

import hashlib

import numpy as np


def _spawn_key(stream: str) -> tuple[int, ...]:
    digest = hashlib.sha256(stream.encode("utf-8")).digest()
    # Four 8-byte words; SeedSequence accepts arbitrary-length spawn keys.
    return tuple(int.from_bytes(digest[i : i + 8], "little") for i in range(0, 32, 8))


def stream_rng(master_seed: int, stream: str) -> np.random.Generator:
    """Generator for the named stream under the given master seed."""
    seq = np.random.SeedSequence(entropy=master_seed, spawn_key=_spawn_key(stream))
    return np.random.default_rng(seq)


def stream_seed(master_seed: int, stream: str) -> int:
    """A derived 63-bit integer seed for APIs that take a plain seed."""
    seq = np.random.SeedSequence(entropy=master_seed, spawn_key=_spawn_key(stream))
    return int(seq.generate_state(1, np.uint64)[0] >> np.uint64(1))

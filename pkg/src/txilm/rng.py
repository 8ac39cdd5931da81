"""Deterministic byte streams: SHA-256 in counter mode.

Every randomized component of the package (simulation trials, synthetic
payloads, attacker search streams) derives its bytes from
SHA-256(prefix || counter) so results are bit-identical across platforms
and across any degree of parallelism.
"""

from __future__ import annotations

from hashlib import sha256

SEED_BYTES = 32


def counter_blocks(prefix: bytes, count: int, start: int = 0) -> bytes:
    """Concatenation of SHA-256(prefix || j) for j = start .. start+count-1.

    Counters are 8-byte big-endian. One call yields count * 32 bytes.
    """
    sha = sha256
    return b"".join(
        [sha(prefix + j.to_bytes(8, "big")).digest() for j in range(start, start + count)]
    )


def expand(prefix: bytes, size: int) -> bytes:
    """First `size` bytes of the counter stream for `prefix`."""
    if size <= 0:
        raise ValueError("size must be positive")
    nblocks = (size + 31) // 32
    return counter_blocks(prefix, nblocks)[:size]


def parse_seed(text: str) -> bytes:
    """Parse a hex seed; must decode to exactly 32 bytes."""
    seed = bytes.fromhex(text)
    if len(seed) != SEED_BYTES:
        raise ValueError(f"seed must be {SEED_BYTES} bytes ({SEED_BYTES * 2} hex chars)")
    return seed

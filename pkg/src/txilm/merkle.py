"""Merkle roots over an ordered txid list.

Two trees of identical shape: a SHA-256 tree whose 32-byte root is the
final verification target, and a CRC-32 tree whose 4-byte root serves as
a cheap pre-check before recomputing the SHA tree. Leaves of the SHA tree
are the raw txids (already SHA-256 digests); leaves of the CRC tree are
the CRC-32 of each txid, stored big-endian. Levels with an odd node count
duplicate the last node. A single-element list is its own root.
"""

from __future__ import annotations

import zlib
from hashlib import sha256
from typing import Sequence

from .types import Txid


def _reduce(level: list[bytes], combine) -> bytes:
    while len(level) > 1:
        if len(level) % 2:
            level.append(level[-1])
        level = [combine(level[i], level[i + 1]) for i in range(0, len(level), 2)]
    return level[0]


def sha_merkle_root(txids: Sequence[Txid]) -> bytes:
    """32-byte SHA-256 Merkle root; internal nodes hash left || right."""
    if not txids:
        raise ValueError("cannot compute a merkle root of an empty list")
    return _reduce([bytes(t) for t in txids], lambda a, b: sha256(a + b).digest())


def _crc4(data: bytes) -> bytes:
    return zlib.crc32(data).to_bytes(4, "big")


def crc_merkle_root(txids: Sequence[Txid]) -> bytes:
    """4-byte CRC-32 Merkle root mirroring the SHA tree's shape."""
    if not txids:
        raise ValueError("cannot compute a merkle root of an empty list")
    return _reduce([_crc4(bytes(t)) for t in txids], lambda a, b: _crc4(a + b))

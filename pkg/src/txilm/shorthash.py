"""Salted k-bit short hash over txids: the compression primitive.

The short hash is the low k bits of the xz-style 64-bit CRC (polynomial
0x42F0E1EBA9EA3693, init all-ones, input/output bit-reflected, final XOR
all-ones) of the 36-byte message salt || txid. A single 64-bit code path
serves every width in [20, 64] via truncation, so values at different
widths form a truncation chain.

Not a cryptographic hash: collision resistance comes from the per-block
salt plus Merkle verification downstream, not from the CRC.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .types import MAX_HASH_BITS, ShortHash, Txid, _check_bits, _check_salt

# Normal (MSB-first) form of the polynomial; check("123456789") = 0x995DC9BBDF1939FA.
CRC64_POLY = 0x42F0E1EBA9EA3693
# Bit-reversed polynomial, used by the reflected (LSB-first) update.
_POLY_REFLECTED = 0xC96C5795D7870F42
_ONES = 0xFFFFFFFFFFFFFFFF

ZERO_SALT = b"\x00\x00\x00\x00"


def _build_table() -> tuple[int, ...]:
    table = []
    for i in range(256):
        state = i
        for _ in range(8):
            state = (state >> 1) ^ (_POLY_REFLECTED if state & 1 else 0)
        table.append(state)
    return tuple(table)


_TABLE = _build_table()


def crc64(data: bytes) -> int:
    """CRC-64 of data."""
    return _raw_update(data, _ONES) ^ _ONES


def _raw_update(data: bytes, state: int) -> int:
    table = _TABLE
    for b in data:
        state = (state >> 8) ^ table[(state ^ b) & 0xFF]
    return state


# 16-bit-indexed table for the vectorized path: feeding byte pair (lo, hi)
# into state s equals (s >> 16) ^ _TABLE16[(s ^ (lo | hi << 8)) & 0xFFFF].
def _build_table16() -> np.ndarray:
    t1 = np.array(_TABLE, dtype=np.uint64)
    x = np.arange(65536, dtype=np.uint64)
    lo = t1[(x & np.uint64(0xFF)).astype(np.intp)]
    idx = ((lo & np.uint64(0xFF)) ^ (x >> np.uint64(8))).astype(np.intp)
    return (lo >> np.uint64(8)) ^ t1[idx]


_TABLE16 = _build_table16()
_PAIR_DTYPE = np.dtype("<u2")


def crc64_batch(txids: np.ndarray, salt: bytes) -> np.ndarray:
    """CRC-64 of salt || row for each 32-byte row of a (N, 32) uint8 array."""
    if txids.ndim != 2 or txids.shape[1] != 32 or txids.dtype != np.uint8:
        raise ValueError("expected a (N, 32) uint8 array of txids")
    _check_salt(salt)
    pairs = np.ascontiguousarray(txids).view(_PAIR_DTYPE)  # (N, 16) little-endian byte pairs
    state = np.full(txids.shape[0], _raw_update(salt, _ONES), dtype=np.uint64)
    sixteen = np.uint64(16)
    mask16 = np.uint64(0xFFFF)
    for p in range(16):
        idx = ((state ^ pairs[:, p]) & mask16).astype(np.intp)
        state = (state >> sixteen) ^ _TABLE16[idx]
    return state ^ np.uint64(_ONES)


@dataclass(frozen=True, slots=True)
class SaltedHashParams:
    """Per-block hashing parameters: 4-byte salt and output width k."""

    salt: bytes
    bits: int

    def __post_init__(self) -> None:
        _check_salt(self.salt)
        _check_bits(self.bits)


def shorthash_value(salt: bytes, txid: Txid, bits: int) -> int:
    """Integer value of the salted short hash (low `bits` bits of the CRC)."""
    mask = _ONES if bits >= 64 else (1 << bits) - 1
    return crc64(salt + txid) & mask


def shorthash(params: SaltedHashParams, txid: Txid) -> ShortHash:
    """Salted short hash of a txid."""
    return ShortHash(params.bits, shorthash_value(params.salt, txid, params.bits))


def unsalted_shorthash(txid: Txid, bits: int) -> ShortHash:
    """Short hash with an all-zero salt (baseline mode without salting)."""
    _check_bits(bits)
    return shorthash(SaltedHashParams(ZERO_SALT, bits), txid)


def shorthash_values(salt: bytes, txids: list[Txid], bits: int) -> list[int]:
    """Batch salted short-hash values, in the order given."""
    _check_bits(bits)
    if not txids:
        return []
    arr = np.frombuffer(b"".join(txids), dtype=np.uint8).reshape(len(txids), 32)
    full = crc64_batch(arr, salt)
    if bits >= MAX_HASH_BITS:
        return full.tolist()
    return (full & np.uint64((1 << bits) - 1)).tolist()

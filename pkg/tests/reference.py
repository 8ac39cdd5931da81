"""Independent reference implementations used as test oracles.

Everything here is written from the mathematical definition, in a
different style from the library code (bit-at-a-time CRCs from the
non-reflected formulation, exact rational arithmetic, naive per-trial
simulation), so agreement is meaningful.
"""

from __future__ import annotations

from fractions import Fraction
from hashlib import sha256


def _reflect(value: int, width: int) -> int:
    out = 0
    for _ in range(width):
        out = (out << 1) | (value & 1)
        value >>= 1
    return out


def crc_reference(data: bytes, width: int, poly: int, init: int, xorout: int) -> int:
    """Reflected CRC computed MSB-first with explicit bit reversal of each byte."""
    mask = (1 << width) - 1
    top = 1 << (width - 1)
    crc = _reflect(init, width)
    for byte in data:
        crc ^= _reflect(byte, 8) << (width - 8)
        for _ in range(8):
            crc = ((crc << 1) ^ poly) & mask if crc & top else (crc << 1) & mask
    return _reflect(crc, width) ^ xorout


def crc64_reference(data: bytes) -> int:
    return crc_reference(data, 64, 0x42F0E1EBA9EA3693, 2**64 - 1, 2**64 - 1)


def crc32_reference(data: bytes) -> int:
    return crc_reference(data, 32, 0x04C11DB7, 2**32 - 1, 2**32 - 1)


def shorthash_reference(salt: bytes, txid: bytes, bits: int) -> int:
    return crc64_reference(salt + txid) % (1 << bits)


def p_collision_exact(k: int, exponent: int) -> float:
    """1 - (1 - 2^-k)^exponent via exact rationals (integer exponents only)."""
    return float(1 - Fraction(2**k - 1, 2**k) ** exponent)


def sha_merkle_reference(txids: list[bytes]) -> bytes:
    """Recursive formulation of the duplicate-last-node tree."""
    if len(txids) == 1:
        return txids[0]
    level = list(txids)
    if len(level) % 2:
        level.append(level[-1])
    pairs = [sha256(level[i] + level[i + 1]).digest() for i in range(0, len(level), 2)]
    return sha_merkle_reference(pairs)


def trial_txids_reference(seed: bytes, trial: int, count: int) -> list[bytes]:
    pre = seed + trial.to_bytes(8, "big")
    return [sha256(pre + j.to_bytes(8, "big")).digest() for j in range(count)]


def simulate_reference(seed: bytes, m: int, n: int, k: int, trials: int, sorted_mode: bool) -> int:
    """Naive per-trial collision count straight from the definitions."""
    hits = 0
    for trial in range(trials):
        ids = trial_txids_reference(seed, trial, m + n)
        hashes = [shorthash_reference(b"\x00" * 4, t, k) for t in ids]
        mem = list(zip(ids[:m], hashes[:m]))
        blk = list(zip(ids[m:], hashes[m:]))
        if sorted_mode:
            if _sorted_collision(mem, blk):
                hits += 1
        else:
            if _unsorted_collision(mem, blk):
                hits += 1
    return hits


def _unsorted_collision(mem, blk) -> bool:
    mem_hashes = {h for _, h in mem}
    seen = set()
    for _, h in blk:
        if h in mem_hashes or h in seen:
            return True
        seen.add(h)
    return False


def _sorted_collision(mem, blk) -> bool:
    everything = sorted(mem + blk)
    block_ids = {t for t, _ in blk}
    positions = [i for i, (t, _) in enumerate(everything) if t in block_ids]
    for rank, pos in enumerate(positions):
        lo = positions[rank - 1] if rank > 0 else -1
        hi = positions[rank + 1] if rank + 1 < len(positions) else len(everything)
        h = everything[pos][1]
        for other in range(lo + 1, hi):
            if other != pos and everything[other][1] == h:
                return True
    return False

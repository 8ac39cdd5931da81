"""Encode blocks into short-hash form and reconstruct them against a mempool.

Decoding walks the three per-position cases (not found / single match /
multiple matches), then resolves ambiguity by iterating candidate
combinations depth-first. Each complete combination is screened with the
4-byte CRC Merkle root before the SHA-256 Merkle root is recomputed; the
first combination whose SHA root matches the header wins. Receivers with
missing transactions fetch them and retry; an exhausted or over-budget
search falls back to the full txid list.
"""

from __future__ import annotations

import logging
import struct
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from .mempool import Mempool
from .merkle import crc_merkle_root, sha_merkle_root
from .shorthash import SaltedHashParams, shorthash
from .types import (
    BlockHeader,
    CompactBlock,
    FullBlock,
    Ordering,
    ShortHash,
    Transaction,
    Txid,
)

logger = logging.getLogger(__name__)

COMPACT_MAGIC = b"TXLM"
TXID_LIST_MAGIC = b"TXID"
WIRE_VERSION = 1
_FLAG_SORTED = 0x01


class WireFormatError(ValueError):
    """Malformed serialized block data."""


@dataclass(frozen=True, slots=True)
class DecodeLimits:
    """Bounds on the combination search."""

    max_combinations: int = 1 << 20
    max_candidates_per_position: int = 64

    def __post_init__(self) -> None:
        if self.max_combinations < 1 or self.max_candidates_per_position < 1:
            raise ValueError("decode limits must be at least 1")


@dataclass(slots=True)
class DecodeStats:
    """Work counters for one decode attempt."""

    ambiguous_positions: int = 0
    combinations_examined: int = 0
    crc_prechecks: int = 0
    sha_recomputations: int = 0
    missing_roundtrips: int = 0


class FallbackReason(Enum):
    NO_COMBINATION_MATCHED = "no-combination-matched"
    SEARCH_BUDGET_EXCEEDED = "search-budget-exceeded"


@dataclass(frozen=True, slots=True)
class Resolved:
    """Block reconstructed and verified against the header SHA root."""

    block: FullBlock
    stats: DecodeStats


@dataclass(frozen=True, slots=True)
class MissingTx:
    """Positions whose short hash matched nothing in the pool."""

    positions: tuple[int, ...]
    candidates: dict[int, tuple[Txid, ...]] = field(default_factory=dict)
    stats: DecodeStats = field(default_factory=DecodeStats)


@dataclass(frozen=True, slots=True)
class FallbackRequired:
    """Combination search failed; the full txid list is needed."""

    reason: FallbackReason
    stats: DecodeStats


DecodeOutcome = Resolved | MissingTx | FallbackRequired


def encode(
    txs: Sequence[Transaction],
    salt: bytes,
    bits: int,
    mode: Ordering = Ordering.AS_PRODUCED,
) -> CompactBlock:
    """Build the compact form of a block: header roots plus one short hash per tx."""
    if not txs:
        raise ValueError("cannot encode an empty block")
    ordered = list(txs)
    if mode is Ordering.SORTED_BY_TXID:
        ordered.sort(key=lambda tx: tx.txid)
    txids = [tx.txid for tx in ordered]
    if len(set(txids)) != len(txids):
        raise ValueError("block txids must be pairwise distinct")
    header = BlockHeader(
        salt=salt,
        hash_bits=bits,
        ordering_mode=mode,
        crc_merkle_root=crc_merkle_root(txids),
        sha_merkle_root=sha_merkle_root(txids),
        tx_count=len(txids),
    )
    params = SaltedHashParams(salt, bits)
    return CompactBlock(header, tuple(shorthash(params, t) for t in txids))


def _candidate_lists(
    compact: CompactBlock, pool: Mempool
) -> tuple[list[list[Txid]], list[int]]:
    header = compact.header
    cands = [pool.candidates_for(header.salt, header.hash_bits, h) for h in compact.hashes]
    missing = [i for i, c in enumerate(cands) if not c]
    return cands, missing


def decode(compact: CompactBlock, pool: Mempool, limits: DecodeLimits | None = None) -> DecodeOutcome:
    """Reconstruct a block from its short hashes against the pool.

    Pure with respect to the pool: lookups only, no mutation.
    """
    limits = limits or DecodeLimits()
    header = compact.header
    for h in compact.hashes:
        if h.bits != header.hash_bits:
            raise ValueError("hash width mismatch inside compact block")
    stats = DecodeStats()
    cands, missing = _candidate_lists(compact, pool)
    stats.ambiguous_positions = sum(1 for c in cands if len(c) > 1)
    if missing:
        found = {i: tuple(c) for i, c in enumerate(cands) if c}
        return MissingTx(tuple(missing), found, stats)
    if any(len(c) > limits.max_candidates_per_position for c in cands):
        return FallbackRequired(FallbackReason.SEARCH_BUDGET_EXCEEDED, stats)
    return _search(compact, pool, cands, limits, stats)


def _search(
    compact: CompactBlock,
    pool: Mempool,
    cands: list[list[Txid]],
    limits: DecodeLimits,
    stats: DecodeStats,
) -> DecodeOutcome:
    header = compact.header
    sorted_mode = header.ordering_mode is Ordering.SORTED_BY_TXID
    n = len(cands)
    choice = [-1] * n
    chosen: list[Txid] = []
    used: set[Txid] = set()
    pos = 0
    while True:
        row = cands[pos]
        nxt = None
        for j in range(choice[pos] + 1, len(row)):
            t = row[j]
            if t in used:
                continue
            if sorted_mode and chosen and t <= chosen[-1]:
                continue
            nxt = j
            break
        if nxt is None:
            choice[pos] = -1
            if pos == 0:
                return FallbackRequired(FallbackReason.NO_COMBINATION_MATCHED, stats)
            pos -= 1
            used.discard(chosen.pop())
            continue
        choice[pos] = nxt
        t = row[nxt]
        if pos < n - 1:
            chosen.append(t)
            used.add(t)
            pos += 1
            continue
        # complete combination
        if stats.combinations_examined >= limits.max_combinations:
            return FallbackRequired(FallbackReason.SEARCH_BUDGET_EXCEEDED, stats)
        stats.combinations_examined += 1
        stats.crc_prechecks += 1
        full = chosen + [t]
        if crc_merkle_root(full) == header.crc_merkle_root:
            stats.sha_recomputations += 1
            if sha_merkle_root(full) == header.sha_merkle_root:
                txs = tuple(pool.get(x) for x in full)
                return Resolved(FullBlock(header, txs), stats)
        # stay at the last position and try its next candidate


def supply_missing(
    compact: CompactBlock,
    pool: Mempool,
    supplied: Sequence[Transaction],
    limits: DecodeLimits | None = None,
) -> DecodeOutcome:
    """Insert fetched transactions into a scratch view of the pool and re-decode.

    Supplied transactions whose short hash matches no previously missing
    position are logged as extraneous and otherwise ignored. The real pool
    is never mutated.
    """
    limits = limits or DecodeLimits()
    header = compact.header
    _, missing = _candidate_lists(compact, pool)
    wanted = {compact.hashes[i].value for i in missing}
    params = SaltedHashParams(header.salt, header.hash_bits)
    scratch = pool.copy()
    for tx in supplied:
        if shorthash(params, tx.txid).value not in wanted:
            logger.warning("extraneous supplied tx %s matches no missing position", tx.txid.hex())
            continue
        scratch.insert(tx)
    outcome = decode(compact, scratch, limits)
    outcome.stats.missing_roundtrips += 1
    return outcome


def fallback_decode(
    compact: CompactBlock, txids: Sequence[Txid], pool: Mempool
) -> DecodeOutcome:
    """Resolve a block from its complete txid list (the compact-block fallback).

    No combination search: positions resolve by exact lookup. The header
    SHA root is still verified before the outcome counts as resolved; a
    list that fails verification reports the no-combination fallback.
    """
    if not txids:
        raise ValueError("txid list must be non-empty")
    header = compact.header
    if len(txids) != header.tx_count:
        raise ValueError(
            f"txid list length {len(txids)} does not match header tx_count {header.tx_count}"
        )
    stats = DecodeStats()
    missing = tuple(i for i, t in enumerate(txids) if t not in pool)
    if missing:
        return MissingTx(missing, {}, stats)
    stats.combinations_examined = 1
    stats.crc_prechecks = 1
    if crc_merkle_root(txids) == header.crc_merkle_root:
        stats.sha_recomputations = 1
        if sha_merkle_root(txids) == header.sha_merkle_root:
            txs = tuple(pool.get(t) for t in txids)
            return Resolved(FullBlock(header, txs), stats)
    return FallbackRequired(FallbackReason.NO_COMBINATION_MATCHED, stats)


# --- wire formats ---------------------------------------------------------
#
# Compact block (little-endian multi-byte integers unless noted):
#   magic "TXLM" | version u8 | flags u8 (bit0 = sorted mode) | hash_bits u8
#   | salt 4B | tx_count u32 | crc_merkle_root 4B (big-endian, as computed)
#   | sha_merkle_root 32B | hash values packed MSB-first, k bits each,
#   zero-padded to a byte boundary.
#
# Txid-list fallback: magic "TXID" | version u8 | tx_count u32 | txids 32B each.

_COMPACT_FIXED = struct.Struct("<4sBBB4sI4s32s")


def pack_hashes(hashes: Sequence[ShortHash], bits: int) -> bytes:
    acc = 0
    nbits = 0
    out = bytearray()
    for h in hashes:
        acc = (acc << bits) | h.value
        nbits += bits
        while nbits >= 8:
            nbits -= 8
            out.append((acc >> nbits) & 0xFF)
    if nbits:
        out.append((acc << (8 - nbits)) & 0xFF)
    return bytes(out)


def unpack_hashes(payload: bytes, bits: int, count: int) -> tuple[ShortHash, ...]:
    need = (count * bits + 7) // 8
    if len(payload) != need:
        raise WireFormatError(f"hash payload is {len(payload)} bytes, expected {need}")
    pad = need * 8 - count * bits
    total = int.from_bytes(payload, "big") >> pad
    mask = (1 << bits) - 1
    return tuple(
        ShortHash(bits, (total >> ((count - 1 - i) * bits)) & mask) for i in range(count)
    )


def serialize_compact(compact: CompactBlock) -> bytes:
    header = compact.header
    flags = _FLAG_SORTED if header.ordering_mode is Ordering.SORTED_BY_TXID else 0
    fixed = _COMPACT_FIXED.pack(
        COMPACT_MAGIC,
        WIRE_VERSION,
        flags,
        header.hash_bits,
        header.salt,
        header.tx_count,
        header.crc_merkle_root,
        header.sha_merkle_root,
    )
    return fixed + pack_hashes(compact.hashes, header.hash_bits)


def parse_compact(data: bytes) -> CompactBlock:
    if len(data) < _COMPACT_FIXED.size:
        raise WireFormatError("truncated compact block")
    magic, version, flags, bits, salt, count, crc_root, sha_root = _COMPACT_FIXED.unpack_from(data)
    if magic != COMPACT_MAGIC:
        raise WireFormatError(f"bad magic {magic!r}")
    if version != WIRE_VERSION:
        raise WireFormatError(f"unsupported version {version}")
    mode = Ordering.SORTED_BY_TXID if flags & _FLAG_SORTED else Ordering.AS_PRODUCED
    try:
        header = BlockHeader(salt, bits, mode, crc_root, sha_root, count)
        hashes = unpack_hashes(data[_COMPACT_FIXED.size :], bits, count)
        return CompactBlock(header, hashes)
    except WireFormatError:
        raise
    except ValueError as exc:
        raise WireFormatError(str(exc)) from exc


_TXID_FIXED = struct.Struct("<4sBI")


def serialize_txid_list(txids: Sequence[Txid]) -> bytes:
    return _TXID_FIXED.pack(TXID_LIST_MAGIC, WIRE_VERSION, len(txids)) + b"".join(txids)


def parse_txid_list(data: bytes) -> list[Txid]:
    if len(data) < _TXID_FIXED.size:
        raise WireFormatError("truncated txid list")
    magic, version, count = _TXID_FIXED.unpack_from(data)
    if magic != TXID_LIST_MAGIC:
        raise WireFormatError(f"bad magic {magic!r}")
    if version != WIRE_VERSION:
        raise WireFormatError(f"unsupported version {version}")
    body = data[_TXID_FIXED.size :]
    if len(body) != 32 * count:
        raise WireFormatError(f"txid payload is {len(body)} bytes, expected {32 * count}")
    return [Txid(body[i * 32 : (i + 1) * 32]) for i in range(count)]

"""Two-peer block exchange with bandwidth accounting.

A sender builds a block of synthetic transactions, ships its short-hash
form, and the receiver reconstructs it from a pool holding a configurable
fraction of the block. Missing transactions cost a fetch round trip; a
failed combination search costs the full txid list. The report compares
the total against shipping full transactions and against 32-byte txids.
"""

from __future__ import annotations

from dataclasses import dataclass

from .codec import (
    DecodeLimits,
    DecodeOutcome,
    DecodeStats,
    FallbackRequired,
    MissingTx,
    Resolved,
    decode,
    encode,
    fallback_decode,
    serialize_compact,
    serialize_txid_list,
    supply_missing,
)
from .mempool import Mempool
from .rng import SEED_BYTES, expand
from .types import Ordering, Transaction

MESSAGE_OVERHEAD_BYTES = 16


@dataclass(frozen=True, slots=True)
class ExchangeConfig:
    """One sender/receiver exchange setup."""

    n: int
    tx_size_bytes: int = 320
    mempool_overlap: float = 1.0
    extra_pool_size: int = 0
    hash_bits: int = 32
    mode: Ordering = Ordering.SORTED_BY_TXID
    seed: bytes = b"\x42" * SEED_BYTES

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("block must carry at least one transaction")
        if self.tx_size_bytes < 1:
            raise ValueError("tx size must be positive")
        if not 0.0 <= self.mempool_overlap <= 1.0:
            raise ValueError("mempool overlap must be in [0, 1]")
        if self.extra_pool_size < 0:
            raise ValueError("extra pool size must be non-negative")
        if len(self.seed) != SEED_BYTES:
            raise ValueError(f"seed must be {SEED_BYTES} bytes")


@dataclass(frozen=True, slots=True)
class BandwidthReport:
    """Byte accounting for one exchange; bytes_txilm = wire + missing + fallback."""

    bytes_full_block: int
    bytes_txid_compact: int
    bytes_txilm: int
    wire_bytes: int
    missing_roundtrip_bytes: int
    fallback_bytes: int
    per_tx_hash_bytes: float
    ratio_vs_full: float
    ratio_vs_txid_compact: float
    outcome: str
    stats: DecodeStats

    def lines(self) -> list[str]:
        return [
            f"outcome                {self.outcome}",
            f"bytes_full_block       {self.bytes_full_block}",
            f"bytes_txid_compact     {self.bytes_txid_compact}",
            f"bytes_txilm            {self.bytes_txilm}",
            f"  wire                 {self.wire_bytes}",
            f"  missing_roundtrips   {self.missing_roundtrip_bytes}",
            f"  fallback             {self.fallback_bytes}",
            f"per_tx_hash_bytes      {self.per_tx_hash_bytes!r}",
            f"ratio_vs_full          {self.ratio_vs_full:.2f}",
            f"ratio_vs_txid_compact  {self.ratio_vs_txid_compact:.2f}",
            (
                "stats                  "
                f"ambiguous={self.stats.ambiguous_positions} "
                f"combinations={self.stats.combinations_examined} "
                f"crc_prechecks={self.stats.crc_prechecks} "
                f"sha_recomputations={self.stats.sha_recomputations} "
                f"missing_roundtrips={self.stats.missing_roundtrips}"
            ),
        ]


def synthetic_txs(seed: bytes, label: bytes, count: int, size: int) -> list[Transaction]:
    return [
        Transaction(expand(seed + label + i.to_bytes(8, "big"), size)) for i in range(count)
    ]


def _outcome_name(outcome: DecodeOutcome) -> str:
    if isinstance(outcome, Resolved):
        return "resolved"
    if isinstance(outcome, MissingTx):
        return f"missing-tx({len(outcome.positions)} positions)"
    return f"fallback-required({outcome.reason.value})"


def run_exchange(config: ExchangeConfig, limits: DecodeLimits | None = None) -> BandwidthReport:
    """Build, ship, and reconstruct one block; account every byte moved."""
    limits = limits or DecodeLimits()
    block_txs = synthetic_txs(config.seed, b"block", config.n, config.tx_size_bytes)
    extra_txs = synthetic_txs(config.seed, b"extra", config.extra_pool_size, config.tx_size_bytes)
    salt = expand(config.seed + b"salt", 4)

    overlap_count = int(config.mempool_overlap * config.n)
    pool = Mempool(block_txs[:overlap_count])
    for tx in extra_txs:
        pool.insert(tx)

    compact = encode(block_txs, salt, config.hash_bits, config.mode)
    wire = serialize_compact(compact)

    missing_bytes = 0
    fallback_bytes = 0
    outcome = decode(compact, pool, limits)
    if isinstance(outcome, MissingTx):
        # the sender answers one batched fetch with the true transactions
        supplied = [tx for tx in block_txs if tx.txid not in pool]
        missing_bytes = sum(32 + len(tx.payload) for tx in supplied) + MESSAGE_OVERHEAD_BYTES
        outcome = supply_missing(compact, pool, supplied, limits)
    if isinstance(outcome, FallbackRequired):
        block_ids = [tx.txid for tx in block_txs]
        if config.mode is Ordering.SORTED_BY_TXID:
            block_ids.sort()
        fallback_bytes = len(serialize_txid_list(block_ids))
        roundtrips = outcome.stats.missing_roundtrips
        outcome = fallback_decode(compact, block_ids, pool)
        if isinstance(outcome, MissingTx):
            # the txid list exposed transactions the pool never had
            supplied = [tx for tx in block_txs if tx.txid not in pool]
            missing_bytes += sum(32 + len(tx.payload) for tx in supplied) + MESSAGE_OVERHEAD_BYTES
            scratch = pool.copy()
            for tx in supplied:
                scratch.insert(tx)
            roundtrips += 1
            outcome = fallback_decode(compact, block_ids, scratch)
        outcome.stats.missing_roundtrips += roundtrips

    bytes_txilm = len(wire) + missing_bytes + fallback_bytes
    bytes_full = config.n * config.tx_size_bytes
    bytes_txid_compact = len(serialize_txid_list([tx.txid for tx in block_txs]))
    return BandwidthReport(
        bytes_full_block=bytes_full,
        bytes_txid_compact=bytes_txid_compact,
        bytes_txilm=bytes_txilm,
        wire_bytes=len(wire),
        missing_roundtrip_bytes=missing_bytes,
        fallback_bytes=fallback_bytes,
        per_tx_hash_bytes=config.hash_bits / 8,
        ratio_vs_full=bytes_full / bytes_txilm,
        ratio_vs_txid_compact=bytes_txid_compact / bytes_txilm,
        outcome=_outcome_name(outcome),
        stats=outcome.stats,
    )

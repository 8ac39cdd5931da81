"""Lossy block compression with salted short txid hashes.

Blocks ship k-bit salted hashes of their txids instead of transactions;
receivers rebuild the block from their mempool, resolving hash collisions
with a CRC-prechecked Merkle-root search. Includes analytic and Monte
Carlo collision models, a bandwidth-accounting exchange simulator, and an
attack/defense harness.
"""

from .codec import (
    DecodeLimits,
    DecodeOutcome,
    DecodeStats,
    FallbackReason,
    FallbackRequired,
    MissingTx,
    Resolved,
    decode,
    encode,
    fallback_decode,
    parse_compact,
    parse_txid_list,
    serialize_compact,
    serialize_txid_list,
    supply_missing,
)
from .collision import (
    CollisionParams,
    SimConfig,
    SweepRow,
    p_sc_sorted,
    p_sc_unsorted,
    simulate,
    sweep,
)
from .mempool import Mempool
from .merkle import crc_merkle_root, sha_merkle_root
from .shorthash import SaltedHashParams, shorthash, unsalted_shorthash
from .types import (
    BlockHeader,
    CompactBlock,
    FullBlock,
    Ordering,
    ShortHash,
    Transaction,
    Txid,
    txid_of,
)

__all__ = [
    "BlockHeader",
    "CollisionParams",
    "CompactBlock",
    "DecodeLimits",
    "DecodeOutcome",
    "DecodeStats",
    "FallbackReason",
    "FallbackRequired",
    "FullBlock",
    "Mempool",
    "MissingTx",
    "Ordering",
    "Resolved",
    "SaltedHashParams",
    "ShortHash",
    "SimConfig",
    "SweepRow",
    "Transaction",
    "Txid",
    "crc_merkle_root",
    "decode",
    "encode",
    "fallback_decode",
    "p_sc_sorted",
    "p_sc_unsorted",
    "parse_compact",
    "parse_txid_list",
    "serialize_compact",
    "serialize_txid_list",
    "sha_merkle_root",
    "shorthash",
    "simulate",
    "supply_missing",
    "sweep",
    "txid_of",
    "unsalted_shorthash",
]

"""Domain types shared across the protocol: txids, transactions, blocks."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from hashlib import sha256

# Protocol deployments use widths in [20, 64]; the machinery accepts widths
# down to 8 bits so attack experiments can run at tractable search sizes.
MIN_HASH_BITS = 8
MAX_HASH_BITS = 64
SALT_BYTES = 4
MAX_PAYLOAD_BYTES = 100_000


class Txid(bytes):
    """32-byte transaction identifier; ordering is lexicographic on the raw bytes."""

    __slots__ = ()

    def __new__(cls, raw: bytes) -> "Txid":
        if len(raw) != 32:
            raise ValueError(f"txid must be exactly 32 bytes, got {len(raw)}")
        return super().__new__(cls, raw)

    @classmethod
    def from_hex(cls, text: str) -> "Txid":
        return cls(bytes.fromhex(text))

    def hex_id(self) -> str:
        return self.hex()

    def __repr__(self) -> str:
        return f"Txid({self.hex()})"


def txid_of(payload: bytes) -> Txid:
    """SHA-256 digest of a transaction payload (its identifier)."""
    if len(payload) == 0:
        raise ValueError("payload must be non-empty")
    if len(payload) > MAX_PAYLOAD_BYTES:
        raise ValueError(f"payload exceeds {MAX_PAYLOAD_BYTES} bytes")
    return Txid(sha256(payload).digest())


@dataclass(frozen=True, slots=True)
class Transaction:
    """Opaque payload plus its derived txid."""

    payload: bytes
    txid: Txid = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "txid", txid_of(self.payload))


@dataclass(frozen=True, slots=True)
class ShortHash:
    """A k-bit short hash value; values with different widths never compare equal."""

    bits: int
    value: int

    def __post_init__(self) -> None:
        if not MIN_HASH_BITS <= self.bits <= MAX_HASH_BITS:
            raise ValueError(f"hash width must be in [{MIN_HASH_BITS}, {MAX_HASH_BITS}], got {self.bits}")
        if not 0 <= self.value < (1 << self.bits):
            raise ValueError(f"value {self.value:#x} does not fit in {self.bits} bits")


class Ordering(Enum):
    """How the hash list of a block is ordered."""

    AS_PRODUCED = "as-produced"
    SORTED_BY_TXID = "sorted-by-txid"


def _check_salt(salt: bytes) -> None:
    if len(salt) != SALT_BYTES:
        raise ValueError(f"salt must be exactly {SALT_BYTES} bytes, got {len(salt)}")


def _check_bits(bits: int) -> None:
    if not MIN_HASH_BITS <= bits <= MAX_HASH_BITS:
        raise ValueError(f"hash width must be in [{MIN_HASH_BITS}, {MAX_HASH_BITS}], got {bits}")


@dataclass(frozen=True, slots=True)
class BlockHeader:
    """Per-block metadata carried alongside the hash list."""

    salt: bytes
    hash_bits: int
    ordering_mode: Ordering
    crc_merkle_root: bytes
    sha_merkle_root: bytes
    tx_count: int

    def __post_init__(self) -> None:
        _check_salt(self.salt)
        _check_bits(self.hash_bits)
        if len(self.crc_merkle_root) != 4:
            raise ValueError("crc merkle root must be 4 bytes")
        if len(self.sha_merkle_root) != 32:
            raise ValueError("sha merkle root must be 32 bytes")
        if self.tx_count < 1:
            raise ValueError("block must carry at least one transaction")


@dataclass(frozen=True, slots=True)
class CompactBlock:
    """Header plus the ordered list of short hashes standing in for transactions."""

    header: BlockHeader
    hashes: tuple[ShortHash, ...]

    def __post_init__(self) -> None:
        if len(self.hashes) != self.header.tx_count:
            raise ValueError(
                f"hash count {len(self.hashes)} does not match header tx_count {self.header.tx_count}"
            )
        for h in self.hashes:
            if h.bits != self.header.hash_bits:
                raise ValueError(f"hash width {h.bits} differs from header width {self.header.hash_bits}")


@dataclass(frozen=True, slots=True)
class FullBlock:
    """Header plus the complete ordered transaction list.

    Header roots are checked against the txid list where blocks are built
    (encoder and decoder); construction here enforces the structural rules only.
    """

    header: BlockHeader
    txs: tuple[Transaction, ...]

    def __post_init__(self) -> None:
        if len(self.txs) != self.header.tx_count:
            raise ValueError(
                f"tx count {len(self.txs)} does not match header tx_count {self.header.tx_count}"
            )
        ids = [tx.txid for tx in self.txs]
        if len(set(ids)) != len(ids):
            raise ValueError("block txids must be pairwise distinct")
        if self.header.ordering_mode is Ordering.SORTED_BY_TXID:
            if any(a >= b for a, b in zip(ids, ids[1:])):
                raise ValueError("sorted-mode block txids must be strictly increasing")

    @property
    def txids(self) -> tuple[Txid, ...]:
        return tuple(tx.txid for tx in self.txs)

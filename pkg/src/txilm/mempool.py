"""Indexed store of unconfirmed transactions, keyed and ordered by txid."""

from __future__ import annotations

import bisect
from typing import Iterable, Iterator

from .shorthash import shorthash_values
from .types import ShortHash, Transaction, Txid


class Mempool:
    """Transaction store supporting short-hash candidate lookup and range queries.

    Iteration yields transactions in strictly increasing txid order.

    Thread contract: many concurrent readers OR a single writer. The only
    mutable state besides the entries is a lazy short-hash index keyed by
    (salt, width); salts change once per incoming block, so the index is
    rebuilt at most once per block. The build is idempotent, so two racing
    readers may both build it without harm.
    """

    def __init__(self, txs: Iterable[Transaction] = ()) -> None:
        self._by_txid: dict[Txid, Transaction] = {}
        self._order: list[Txid] = []
        self._version = 0
        self._index: dict[int, list[Txid]] = {}
        self._index_key: tuple[bytes, int, int] | None = None
        for tx in txs:
            self.insert(tx)

    def __len__(self) -> int:
        return len(self._order)

    def __contains__(self, txid: Txid) -> bool:
        return txid in self._by_txid

    def __iter__(self) -> Iterator[Transaction]:
        for txid in self._order:
            yield self._by_txid[txid]

    def get(self, txid: Txid) -> Transaction | None:
        return self._by_txid.get(txid)

    def txids(self) -> list[Txid]:
        """All txids in increasing order."""
        return list(self._order)

    def insert(self, tx: Transaction) -> bool:
        """Add a transaction; returns False (no-op) if the txid is already present."""
        if tx.txid in self._by_txid:
            return False
        self._by_txid[tx.txid] = tx
        bisect.insort(self._order, tx.txid)
        self._version += 1
        return True

    def copy(self) -> "Mempool":
        """Scratch view sharing nothing mutable with the original."""
        clone = Mempool()
        clone._by_txid = dict(self._by_txid)
        clone._order = list(self._order)
        clone._version = self._version
        return clone

    def _hash_index(self, salt: bytes, bits: int) -> dict[int, list[Txid]]:
        key = (salt, bits, self._version)
        if self._index_key != key:
            index: dict[int, list[Txid]] = {}
            for txid, value in zip(self._order, shorthash_values(salt, self._order, bits)):
                index.setdefault(value, []).append(txid)
            self._index = index
            self._index_key = key
        return self._index

    def candidates_for(self, salt: bytes, bits: int, h: ShortHash) -> list[Txid]:
        """Every txid whose salted short hash equals h, in increasing txid order.

        An empty list is the not-found case.
        """
        if h.bits != bits:
            raise ValueError(f"hash width {h.bits} does not match requested width {bits}")
        return list(self._hash_index(salt, bits).get(h.value, ()))

    def candidates_in_range(
        self,
        salt: bytes,
        bits: int,
        h: ShortHash,
        lower: Txid | None = None,
        upper: Txid | None = None,
    ) -> list[Txid]:
        """candidates_for restricted to txids strictly inside (lower, upper)."""
        if lower is not None and upper is not None and lower >= upper:
            raise ValueError("lower bound must be strictly below upper bound")
        matches = self.candidates_for(salt, bits, h)
        lo = 0 if lower is None else bisect.bisect_right(matches, lower)
        hi = len(matches) if upper is None else bisect.bisect_left(matches, upper)
        return matches[lo:hi]

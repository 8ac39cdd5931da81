#!/usr/bin/env python3
"""Measure the per-combination cost of the CRC pre-check vs SHA verification.

The decoder screens every candidate combination with the 4-byte CRC tree
and only recomputes the SHA-256 tree on a CRC match. This reports the
measured cost ratio on this machine for documentation; the protocol-level
guarantee tested in the suite is the work bound (SHA recomputations per
combination examined), which is hardware-independent.

    python scripts/precheck_microbench.py [n_txs] [repeats]
"""

from __future__ import annotations

import sys
import time

from txilm.merkle import crc_merkle_root, sha_merkle_root
from txilm.types import Transaction


def measure(n: int, repeats: int) -> tuple[float, float]:
    txids = [Transaction(b"bench" + i.to_bytes(4, "big")).txid for i in range(n)]
    t0 = time.perf_counter()
    for _ in range(repeats):
        crc_merkle_root(txids)
    t_crc = (time.perf_counter() - t0) / repeats
    t0 = time.perf_counter()
    for _ in range(repeats):
        sha_merkle_root(txids)
    t_sha = (time.perf_counter() - t0) / repeats
    return t_crc, t_sha


def main() -> None:
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 200
    repeats = int(sys.argv[2]) if len(sys.argv) > 2 else 200
    t_crc, t_sha = measure(n, repeats)
    print(f"n={n} txids, {repeats} repeats")
    print(f"crc merkle root: {t_crc * 1e6:9.1f} us/combination")
    print(f"sha merkle root: {t_sha * 1e6:9.1f} us/combination")
    print(f"sha/crc cost ratio: {t_sha / t_crc:.1f}x")


if __name__ == "__main__":
    main()

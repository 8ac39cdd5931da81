#!/usr/bin/env python3
"""Regenerate the pinned golden-vector fixtures from the reference oracles.

The vectors are produced by the independent bit-at-a-time CRC oracles and
a hand-rolled Merkle expansion, NOT by the library, so the files stay an
external check on the implementation. Run from the repo root:

    python scripts/make_golden_vectors.py
"""

from __future__ import annotations

import sys
from hashlib import sha256
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

from reference import crc32_reference, crc64_reference  # noqa: E402

VECTOR_DIR = ROOT / "tests" / "vectors"


def det_txid(tag: int) -> bytes:
    return sha256(b"golden-txid-" + tag.to_bytes(4, "big")).digest()


def write_shorthash_vectors() -> None:
    rows = []
    cases = [
        (b"\x00" * 4, b"\x00" * 32),
        (b"\x00" * 4, det_txid(0)),
        (b"\xff\xff\xff\xff", det_txid(0)),
        (b"\x01\x02\x03\x04", det_txid(1)),
        (b"\xde\xad\xbe\xef", det_txid(2)),
        (b"\x00\x00\x00\x01", b"\xff" * 32),
    ]
    for salt, txid in cases:
        for k in (20, 24, 32, 40, 48, 64):
            value = crc64_reference(salt + txid) % (1 << k)
            rows.append(f"{salt.hex()}\t{txid.hex()}\t{k}\t{value:x}")
    path = VECTOR_DIR / "shorthash_vectors.tsv"
    path.write_text("salt_hex\ttxid_hex\tk\tvalue_hex\n" + "\n".join(rows) + "\n")
    print(f"wrote {path} ({len(rows)} vectors)")


def merkle_roots(txids: list[bytes]) -> tuple[bytes, bytes]:
    sha_level = list(txids)
    while len(sha_level) > 1:
        if len(sha_level) % 2:
            sha_level.append(sha_level[-1])
        sha_level = [
            sha256(sha_level[i] + sha_level[i + 1]).digest()
            for i in range(0, len(sha_level), 2)
        ]
    crc_level = [crc32_reference(t).to_bytes(4, "big") for t in txids]
    while len(crc_level) > 1:
        if len(crc_level) % 2:
            crc_level.append(crc_level[-1])
        crc_level = [
            crc32_reference(crc_level[i] + crc_level[i + 1]).to_bytes(4, "big")
            for i in range(0, len(crc_level), 2)
        ]
    return sha_level[0], crc_level[0]


def write_merkle_vectors() -> None:
    rows = []
    for count in (1, 2, 3, 4, 5, 7, 8):
        txids = [det_txid(100 + i) for i in range(count)]
        sha_root, crc_root = merkle_roots(txids)
        joined = ",".join(t.hex() for t in txids)
        rows.append(f"{joined}\t{sha_root.hex()}\t{crc_root.hex()}")
    path = VECTOR_DIR / "merkle_vectors.tsv"
    path.write_text("txid_list_hex\tsha_root_hex\tcrc_root_hex\n" + "\n".join(rows) + "\n")
    print(f"wrote {path} ({len(rows)} vectors)")


def main() -> None:
    VECTOR_DIR.mkdir(parents=True, exist_ok=True)
    write_shorthash_vectors()
    write_merkle_vectors()


if __name__ == "__main__":
    main()

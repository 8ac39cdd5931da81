"""Fixture file formats.

"txset": newline-delimited lowercase hex, one transaction payload per line.
"txidset": newline-delimited 64-hex-char txids, for runs that only need
identifiers.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Sequence

from .types import Transaction, Txid


def _lines(path: str | Path) -> list[str]:
    text = Path(path).read_text(encoding="utf-8")
    return [line.strip() for line in text.splitlines() if line.strip()]


def load_txset(path: str | Path) -> list[Transaction]:
    txs = []
    for lineno, line in enumerate(_lines(path), start=1):
        try:
            txs.append(Transaction(bytes.fromhex(line)))
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: {exc}") from exc
    return txs


def save_txset(path: str | Path, txs: Iterable[Transaction]) -> None:
    Path(path).write_text("".join(tx.payload.hex() + "\n" for tx in txs), encoding="utf-8")


def load_txidset(path: str | Path) -> list[Txid]:
    ids = []
    for lineno, line in enumerate(_lines(path), start=1):
        if len(line) != 64:
            raise ValueError(f"{path}:{lineno}: txid must be 64 hex chars")
        ids.append(Txid.from_hex(line))
    return ids


def save_txidset(path: str | Path, txids: Sequence[Txid]) -> None:
    Path(path).write_text("".join(t.hex() + "\n" for t in txids), encoding="utf-8")

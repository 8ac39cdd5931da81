"""Collision-flooding attacker and the detection / fallback defense policy.

An attacker who knows a block's salt can brute-force transactions whose
short hash collides with the block's entries, inflating the receiver's
combination search. Crafted transactions never survive final Merkle
verification; the damage is work amplification, which the defense policy
detects by comparing per-block ambiguity counts against the model's
expectation and, when forks co-occur, switching the next block to a full
txid list.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from hashlib import sha256
from pathlib import Path
from typing import Sequence

import numpy as np

from .codec import DecodeStats
from .mempool import Mempool
from .rng import SEED_BYTES
from .shorthash import ZERO_SALT, crc64_batch
from .types import CompactBlock, ShortHash, Transaction, _check_salt

_TRY_BATCH = 1 << 15


@dataclass(frozen=True, slots=True)
class AttackBudget:
    """Bounds on the brute-force search for one target."""

    max_tries_per_target: int = 1 << 24
    rng_seed: bytes = b"\xa7" * SEED_BYTES

    def __post_init__(self) -> None:
        if self.max_tries_per_target < 1:
            raise ValueError("budget must allow at least one try")
        if len(self.rng_seed) != SEED_BYTES:
            raise ValueError(f"rng seed must be {SEED_BYTES} bytes")


@dataclass(frozen=True, slots=True)
class DetectionPolicy:
    """Threshold rule for flagging an ambiguity-count anomaly."""

    expected_ambiguity: float
    multiplier: float = 10.0
    min_absolute: int = 3
    forks_observed: bool = False

    def __post_init__(self) -> None:
        if self.multiplier < 1.0:
            raise ValueError("multiplier must be at least 1")


class EncodingMode(Enum):
    SHORT_HASH = "short-hash"
    FULL_TXID_LIST = "full-txid-list"


@dataclass(frozen=True, slots=True)
class FloodResult:
    """Pool view with crafted colliders added, and what was crafted where."""

    pool: Mempool
    by_position: dict[int, tuple[Transaction, ...]] = field(default_factory=dict)
    complete: bool = True


def _collider_payloads(
    salt: bytes,
    bits: int,
    quotas: dict[int, int],
    seed: bytes,
    max_tries: int,
) -> tuple[dict[int, list[Transaction]], int]:
    """Deterministic brute force: payload for try c is seed || c (8-byte BE).

    Scans the candidate stream once, bucketing hits across all requested
    target values, until every quota is met or the budget runs out.
    Returns the found transactions per target value and the tries used.
    """
    found: dict[int, list[Transaction]] = {v: [] for v in quotas}
    remaining = {v: q for v, q in quotas.items() if q > 0}
    mask = np.uint64(0xFFFFFFFFFFFFFFFF if bits >= 64 else (1 << bits) - 1)
    tries = 0
    sha = sha256
    while remaining and tries < max_tries:
        batch = min(_TRY_BATCH, max_tries - tries)
        payloads = [seed + c.to_bytes(8, "big") for c in range(tries, tries + batch)]
        digests = b"".join([sha(p).digest() for p in payloads])
        arr = np.frombuffer(digests, dtype=np.uint8).reshape(batch, 32)
        values = crc64_batch(arr, salt) & mask
        wanted = np.fromiter(remaining, dtype=np.uint64, count=len(remaining))
        for i in np.nonzero(np.isin(values, wanted))[0]:
            v = int(values[i])
            if remaining.get(v, 0) > 0:
                found[v].append(Transaction(payloads[i]))
                remaining[v] -= 1
                if remaining[v] == 0:
                    del remaining[v]
        tries += batch
    return found, tries


def craft_collision(
    target: ShortHash,
    salt: bytes | None,
    budget: AttackBudget | None = None,
) -> Transaction | None:
    """Brute-force a transaction whose short hash equals `target`.

    With `salt=None` the block salt is unknown, so the search runs against
    an all-zero salt, the attacker's best pre-announcement guess; such a
    collider only matches the real target with probability 2^-k once a
    fresh salt is drawn. Returns None when the budget is exhausted.
    """
    budget = budget or AttackBudget()
    craft_salt = ZERO_SALT if salt is None else salt
    _check_salt(craft_salt)
    found, _ = _collider_payloads(
        craft_salt, target.bits, {target.value: 1}, budget.rng_seed, budget.max_tries_per_target
    )
    hits = found[target.value]
    return hits[0] if hits else None


def flood(
    pool: Mempool,
    compact: CompactBlock,
    colliders_per_target: int,
    targets: Sequence[int],
    budget: AttackBudget | None = None,
    salt_known: bool = True,
) -> FloodResult:
    """Augment a pool view with crafted colliders for the chosen block positions.

    Positions index into the compact block's hash list. With salt_known
    the attacker crafts against the announced block salt (the
    post-announcement window); otherwise against a zero salt. The input
    pool is not mutated. A partial flood (budget exhausted at some target)
    is reported through by_position and complete=False.
    """
    budget = budget or AttackBudget()
    header = compact.header
    for pos in targets:
        if not 0 <= pos < header.tx_count:
            raise ValueError(f"target position {pos} out of range")
    craft_salt = header.salt if salt_known else ZERO_SALT
    quotas: dict[int, int] = {}
    for pos in targets:
        v = compact.hashes[pos].value
        quotas[v] = quotas.get(v, 0) + colliders_per_target
    total_budget = budget.max_tries_per_target * max(1, len(quotas))
    found, _ = _collider_payloads(craft_salt, header.hash_bits, quotas, budget.rng_seed, total_budget)
    remaining = {v: list(txs) for v, txs in found.items()}
    by_position: dict[int, tuple[Transaction, ...]] = {}
    complete = True
    view = pool.copy()
    for pos in targets:
        v = compact.hashes[pos].value
        take = remaining[v][:colliders_per_target]
        remaining[v] = remaining[v][colliders_per_target:]
        by_position[pos] = tuple(take)
        if len(take) < colliders_per_target:
            complete = False
        for tx in take:
            view.insert(tx)
    return FloodResult(view, by_position, complete)


def detect(stats: DecodeStats, policy: DetectionPolicy) -> bool:
    """True when the ambiguity count is anomalous AND forks are being observed."""
    threshold = max(policy.min_absolute, policy.multiplier * policy.expected_ambiguity)
    return policy.forks_observed and stats.ambiguous_positions >= threshold


def next_block_mode(history: Sequence[bool]) -> EncodingMode:
    """Fallback rule with single-block memory: suspicion flips only the next block."""
    if history and history[-1]:
        return EncodingMode.FULL_TXID_LIST
    return EncodingMode.SHORT_HASH


@dataclass(frozen=True, slots=True)
class AttackScenario:
    """Parsed attack scenario (key = value per line, '#' comments)."""

    k: int
    salt_known: bool
    targets: tuple[int, ...]
    colliders_per_target: int
    budget: AttackBudget
    seed: bytes
    n: int
    forks_observed: bool


def load_scenario(path: str | Path) -> AttackScenario:
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key = value")
        key, _, value = line.partition("=")
        entries[key.strip()] = value.strip()

    def need(key: str) -> str:
        if key not in entries:
            raise ValueError(f"{path}: missing required key '{key}'")
        return entries[key]

    salt_mode = need("salt_mode")
    if salt_mode not in ("known", "unknown"):
        raise ValueError(f"{path}: salt_mode must be 'known' or 'unknown'")
    targets = tuple(int(t) for t in need("targets").split(","))
    seed = bytes.fromhex(need("seed"))
    if len(seed) != SEED_BYTES:
        raise ValueError(f"{path}: seed must be {SEED_BYTES} bytes of hex")
    n_default = max(targets) + 1 if targets else 1
    return AttackScenario(
        k=int(need("k")),
        salt_known=(salt_mode == "known"),
        targets=targets,
        colliders_per_target=int(need("colliders_per_target")),
        budget=AttackBudget(max_tries_per_target=int(need("budget")), rng_seed=seed),
        seed=seed,
        n=int(entries.get("n", n_default)),
        forks_observed=entries.get("forks_observed", "false").lower() in ("true", "1", "yes"),
    )

"""Collision-probability models and the Monte Carlo harness that checks them.

A "single collision" means a block hash matching the short hash of a
*different* transaction, either elsewhere in the block or in the mempool.
Two closed-form models are provided:

  unsorted   P = 1 - (1 - 2^-k)^(m*n + n^2/2)
  sorted     P = 1 - (1 - 2^-k)^m

where the sorted variant reflects txid-ordered blocks, which narrow each
hash's candidate range to the interval between neighbouring block txids.

The simulator draws m + n disjoint random txids per trial (the worst case
where the pool holds none of the block's transactions), computes unsalted
short hashes, and counts trials containing at least one collision. Trial
streams are SHA-256 counter mode, so identical configurations reproduce
identical counts on any platform and under any batching.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from hashlib import sha256
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .rng import SEED_BYTES
from .shorthash import ZERO_SALT, crc64_batch

DEFAULT_SEED = bytes.fromhex(
    "0000000000000000000000000000000000000000000000000000000000000001"
)

_U64 = np.uint64


@dataclass(frozen=True, slots=True)
class CollisionParams:
    """Hash width k, mempool size m, block size n."""

    k: int
    m: int
    n: int

    def __post_init__(self) -> None:
        if not 1 <= self.k <= 64:
            raise ValueError("k must be in [1, 64]")
        if self.m < 0 or self.n < 0:
            raise ValueError("m and n must be non-negative")


@dataclass(frozen=True, slots=True)
class SimConfig:
    """One simulation cell: parameters, trial count, seed, ordering mode."""

    params: CollisionParams
    trials: int
    seed: bytes = DEFAULT_SEED
    sorted: bool = False

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if len(self.seed) != SEED_BYTES:
            raise ValueError(f"seed must be {SEED_BYTES} bytes")


@dataclass(frozen=True, slots=True)
class SweepRow:
    """Analytic and empirical collision probability for one (k, n) cell."""

    k: int
    p_analytic: float
    p_empirical: float
    trials: int
    collisions: int


def p_sc_unsorted(params: CollisionParams) -> float:
    """Single-collision probability for blocks in production order."""
    exponent = params.m * params.n + params.n * params.n / 2.0
    return -math.expm1(exponent * math.log1p(-(0.5**params.k)))


def p_sc_sorted(params: CollisionParams) -> float:
    """Single-collision probability for txid-sorted blocks (independent of n)."""
    return -math.expm1(params.m * math.log1p(-(0.5**params.k)))


# --- deterministic trial streams ------------------------------------------


def trial_txids(seed: bytes, trial: int, count: int) -> bytes:
    """The trial's txids as one blob: 32-byte block j is SHA-256(seed || trial || j).

    Counters are 8-byte big-endian. The first m txids of a trial form the
    mempool, the remaining n the block.
    """
    sha = sha256
    pre = seed + trial.to_bytes(8, "big")
    return b"".join([sha(pre + j.to_bytes(8, "big")).digest() for j in range(count)])


def _bitrev64(x: np.ndarray) -> np.ndarray:
    m1 = _U64(0x5555555555555555)
    m2 = _U64(0x3333333333333333)
    m4 = _U64(0x0F0F0F0F0F0F0F0F)
    x = ((x >> _U64(1)) & m1) | ((x & m1) << _U64(1))
    x = ((x >> _U64(2)) & m2) | ((x & m2) << _U64(2))
    x = ((x >> _U64(4)) & m4) | ((x & m4) << _U64(4))
    return x.byteswap()


def _chunk_trials(total: int, width: int) -> Iterable[tuple[int, int]]:
    # keep per-chunk txid storage around 48 MB
    step = max(1, min(total, 1_500_000 // max(width, 1)))
    lo = 0
    while lo < total:
        hi = min(total, lo + step)
        yield lo, hi
        lo = hi


def _gen_chunk(seed: bytes, lo: int, hi: int, width: int) -> bytes:
    sha = sha256
    ctrs = [j.to_bytes(8, "big") for j in range(width)]
    parts = []
    for i in range(lo, hi):
        pre = seed + i.to_bytes(8, "big")
        parts.append(b"".join([sha(pre + c).digest() for c in ctrs]))
    return b"".join(parts)


def _bitlen_u64(x: np.ndarray) -> np.ndarray:
    """Exact bit length per element (float64 is exact on the 32-bit halves)."""
    hi = (x >> _U64(32)).astype(np.float64)
    lo = (x & _U64(0xFFFFFFFF)).astype(np.float64)
    out = np.zeros(x.shape, dtype=np.int64)
    hi_mask = hi > 0
    lo_mask = ~hi_mask & (lo > 0)
    out[hi_mask] = 32 + np.floor(np.log2(hi[hi_mask])).astype(np.int64) + 1
    out[lo_mask] = np.floor(np.log2(lo[lo_mask])).astype(np.int64) + 1
    return out


def _shared_low_bits(xor: np.ndarray) -> np.ndarray:
    """Number of matching low-order bits between two values, from their XOR."""
    lsb = xor & (~xor + _U64(1))
    return np.where(xor == 0, 64, _bitlen_u64(lsb) - 1)


def _rowmax_unsorted(crc: np.ndarray, n: int) -> np.ndarray:
    """Per trial: widest k at which some block hash collides (0 if none).

    A collision at width k is an equal low-k-bit pair involving a block
    element. Sorting by the bit-reversed hash makes every equal-low-k
    group contiguous for all k at once, so only adjacent pairs need
    checking, and a pair's match width is its shared-prefix length.
    """
    width = crc.shape[1]
    rev = _bitrev64(crc)
    order = np.argsort(rev, axis=1, kind="stable")
    revs = np.take_along_axis(rev, order, axis=1)
    lab_sorted = order >= width - n
    xor_adj = revs[:, 1:] ^ revs[:, :-1]
    lab_adj = lab_sorted[:, 1:] | lab_sorted[:, :-1]
    shared = 64 - _bitlen_u64(xor_adj)
    return np.where(lab_adj, shared, 0).max(axis=1, initial=0)


def _rowmax_sorted(txids: np.ndarray, crc: np.ndarray, n: int) -> np.ndarray:
    """Per trial: widest k at which a narrowed-range collision exists.

    With everything in txid order, a block hash's candidate window is the
    open interval between its neighbouring block txids, so collisions are
    exactly mempool entries matching the nearest block hash on either
    side; the match width is the number of shared low bits.
    """
    rows, width = crc.shape
    keys = np.ascontiguousarray(txids).view("S32").reshape(rows, width)
    order = np.argsort(keys, axis=1, kind="stable")
    hs = np.take_along_axis(crc, order, axis=1)
    labs = order >= width - n
    pos = np.arange(width)
    prev_idx = np.maximum.accumulate(np.where(labs, pos, -1), axis=1)
    next_idx = np.minimum.accumulate(np.where(labs, pos, width)[:, ::-1], axis=1)[:, ::-1]
    prev_h = np.take_along_axis(hs, np.clip(prev_idx, 0, None), axis=1)
    next_h = np.take_along_axis(hs, np.clip(next_idx, None, width - 1), axis=1)
    shared_prev = _shared_low_bits(hs ^ prev_h)
    shared_next = _shared_low_bits(hs ^ next_h)
    mempool = ~labs
    eff_prev = np.where(mempool & (prev_idx >= 0), shared_prev, 0)
    eff_next = np.where(mempool & (next_idx < width), shared_next, 0)
    return np.maximum(eff_prev, eff_next).max(axis=1, initial=0)


def collision_counts_multi(
    m: int,
    n_list: Sequence[int],
    trials: int,
    seed: bytes,
    ks: Sequence[int],
    modes: Sequence[bool] = (False,),
    progress: bool = False,
) -> dict[tuple[bool, int], dict[int, int]]:
    """Collision trial counts T_k for every (mode, n, k) cell.

    One pass over the trial streams serves every width (truncation chain),
    both ordering modes, and every n: a trial's stream for a smaller block
    is a prefix of its stream for a larger one, so the widest stream is
    generated once and sliced.
    """
    n_sorted = sorted(set(n_list))
    width = m + n_sorted[-1]
    counts: dict[tuple[bool, int], dict[int, int]] = {
        (mode, n): {k: 0 for k in ks} for mode in modes for n in n_sorted
    }
    for lo, hi in _chunk_trials(trials, width):
        blob = _gen_chunk(seed, lo, hi, width)
        arr = np.frombuffer(blob, dtype=np.uint8).reshape((hi - lo) * width, 32)
        crc_full = crc64_batch(arr, ZERO_SALT).reshape(hi - lo, width)
        arr3 = arr.reshape(hi - lo, width, 32)
        for n in n_sorted:
            crc = crc_full[:, : m + n]
            if False in modes:
                rowmax = _rowmax_unsorted(crc, n)
                dest = counts[(False, n)]
                for k in ks:
                    dest[k] += int((rowmax >= k).sum())
            if True in modes:
                rowmax = _rowmax_sorted(arr3[:, : m + n], crc, n)
                dest = counts[(True, n)]
                for k in ks:
                    dest[k] += int((rowmax >= k).sum())
        if progress:
            print(f"  trials {hi}/{trials}", file=sys.stderr, flush=True)
    return counts


def collision_counts(
    m: int,
    n: int,
    trials: int,
    seed: bytes,
    ks: Sequence[int],
    modes: Sequence[bool] = (False,),
    progress: bool = False,
) -> dict[bool, dict[int, int]]:
    """Collision trial counts T_k for every requested k and ordering mode."""
    multi = collision_counts_multi(m, [n], trials, seed, ks, modes, progress)
    return {mode: multi[(mode, n)] for mode in modes}


def simulate(config: SimConfig) -> SweepRow:
    """Run one simulation cell and pair it with its analytic prediction."""
    p = config.params
    counts = collision_counts(p.m, p.n, config.trials, config.seed, [p.k], (config.sorted,))
    t_k = counts[config.sorted][p.k]
    analytic = p_sc_sorted(p) if config.sorted else p_sc_unsorted(p)
    return SweepRow(p.k, analytic, t_k / config.trials, config.trials, t_k)


def sweep(
    k_range: Sequence[int],
    m: int,
    n_list: Sequence[int],
    trials: int,
    seed: bytes = DEFAULT_SEED,
    sorted_mode: bool = False,
    progress: bool = False,
) -> dict[int, list[SweepRow]]:
    """One SweepRow per (k, n), grouped by n; rows are k-ascending."""
    ks = list(k_range)
    if not ks or not n_list:
        raise ValueError("k range and n list must be non-empty")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if progress:
        print(
            f"sweep m={m}, n={list(n_list)}, {trials} trials, "
            f"{'sorted' if sorted_mode else 'unsorted'}",
            file=sys.stderr,
            flush=True,
        )
    counts = collision_counts_multi(m, n_list, trials, seed, ks, (sorted_mode,), progress=progress)
    out: dict[int, list[SweepRow]] = {}
    for n in n_list:
        rows = []
        for k in ks:
            params = CollisionParams(k, m, n)
            analytic = p_sc_sorted(params) if sorted_mode else p_sc_unsorted(params)
            t_k = counts[(sorted_mode, n)][k]
            rows.append(SweepRow(k, analytic, t_k / trials, trials, t_k))
        out[n] = rows
    return out


def sweep_both_modes(
    k_range: Sequence[int],
    m: int,
    n_list: Sequence[int],
    trials: int,
    seed: bytes = DEFAULT_SEED,
    progress: bool = False,
) -> tuple[dict[int, list[SweepRow]], dict[int, list[SweepRow]]]:
    """(unsorted, sorted) sweeps sharing one pass over the trial streams.

    Identical to running sweep() twice with the same arguments; provided
    because generation dominates the cost of a grid.
    """
    ks = list(k_range)
    if progress:
        print(f"sweep m={m}, n={list(n_list)}, {trials} trials, both modes", file=sys.stderr, flush=True)
    counts = collision_counts_multi(m, n_list, trials, seed, ks, (False, True), progress=progress)
    unsorted_out: dict[int, list[SweepRow]] = {}
    sorted_out: dict[int, list[SweepRow]] = {}
    for sorted_mode, dest in ((False, unsorted_out), (True, sorted_out)):
        for n in n_list:
            rows = []
            for k in ks:
                params = CollisionParams(k, m, n)
                analytic = p_sc_sorted(params) if sorted_mode else p_sc_unsorted(params)
                t_k = counts[(sorted_mode, n)][k]
                rows.append(SweepRow(k, analytic, t_k / trials, trials, t_k))
            dest[n] = rows
    return unsorted_out, sorted_out


def write_sweep_tsv(out_dir: str | Path, results: dict[int, list[SweepRow]], sorted_mode: bool) -> list[Path]:
    """One plot-ready TSV per n value; returns the paths written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    prefix = "sorted_n=" if sorted_mode else "n="
    for n, rows in results.items():
        path = out / f"{prefix}{n}.tsv"
        lines = ["k\tp_analytic\tp_empirical"]
        lines += [f"{r.k}\t{r.p_analytic!r}\t{r.p_empirical!r}" for r in rows]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        paths.append(path)
    return paths

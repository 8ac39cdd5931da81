"""Command-line harness: collision sweeps, codec runs, exchanges, attacks.

Exit codes: 0 success / block resolved, 2 usage error, 3 missing
transactions, 4 fallback required, 5 scenario refused.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import adversary, collision, exchange
from .codec import (
    DecodeLimits,
    MissingTx,
    Resolved,
    WireFormatError,
    decode,
    encode,
    parse_compact,
    serialize_compact,
)
from .fixtures import load_txset
from .mempool import Mempool
from .rng import parse_seed
from .types import Ordering

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_MISSING = 3
EXIT_FALLBACK = 4
EXIT_REFUSED = 5

SEED_ENV = "TXILM_SEED"


def _default_seed() -> bytes:
    env = os.environ.get(SEED_ENV)
    if env:
        return parse_seed(env)
    return collision.DEFAULT_SEED


def _parse_k_range(text: str) -> list[int]:
    lo, _, hi = text.partition(":")
    try:
        if hi:
            lo_i, hi_i = int(lo), int(hi)
        else:
            lo_i = hi_i = int(lo)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad k range {text!r}, expected LO:HI") from None
    if lo_i > hi_i:
        raise argparse.ArgumentTypeError(f"bad k range {text!r}: lower bound above upper")
    return list(range(lo_i, hi_i + 1))


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from None


def _parse_mode(text: str) -> Ordering:
    if text == "sorted":
        return Ordering.SORTED_BY_TXID
    if text == "as-produced":
        return Ordering.AS_PRODUCED
    raise argparse.ArgumentTypeError(f"mode must be 'as-produced' or 'sorted', got {text!r}")


def cmd_collisions(args: argparse.Namespace) -> int:
    results = collision.sweep(
        args.k,
        args.m,
        args.n,
        args.trials,
        seed=args.seed,
        sorted_mode=args.sorted,
        progress=not args.quiet,
    )
    paths = collision.write_sweep_tsv(args.out_dir, results, args.sorted)
    mode = "sorted" if args.sorted else "unsorted"
    print(f"{mode} sweep, m={args.m}, trials={args.trials}")
    print("n\tk\tp_analytic\tp_empirical\tcollisions")
    for n, rows in results.items():
        for r in rows:
            print(f"{n}\t{r.k}\t{r.p_analytic:.6g}\t{r.p_empirical:.6g}\t{r.collisions}")
    for path in paths:
        print(f"wrote {path}")
    return EXIT_OK


def cmd_exchange(args: argparse.Namespace) -> int:
    config = exchange.ExchangeConfig(
        n=args.n,
        tx_size_bytes=args.tx_size,
        mempool_overlap=args.overlap,
        extra_pool_size=args.extra_pool,
        hash_bits=args.k,
        mode=args.mode,
        seed=args.seed,
    )
    report = exchange.run_exchange(config)
    for line in report.lines():
        print(line)
    return EXIT_OK


def cmd_encode(args: argparse.Namespace) -> int:
    txs = load_txset(args.txset)
    compact = encode(txs, args.salt, args.k, args.mode)
    data = serialize_compact(compact)
    Path(args.out).write_bytes(data)
    print(f"wrote {args.out}: {len(data)} bytes, {compact.header.tx_count} txs, k={args.k}")
    return EXIT_OK


def cmd_decode(args: argparse.Namespace) -> int:
    compact = parse_compact(Path(args.wire).read_bytes())
    pool = Mempool(load_txset(args.pool))
    limits = DecodeLimits(args.max_combinations, args.max_candidates)
    outcome = decode(compact, pool, limits)
    stats = outcome.stats
    print(
        f"stats: ambiguous={stats.ambiguous_positions} "
        f"combinations={stats.combinations_examined} crc_prechecks={stats.crc_prechecks} "
        f"sha_recomputations={stats.sha_recomputations}"
    )
    if isinstance(outcome, Resolved):
        print(f"resolved: {len(outcome.block.txs)} txs")
        for tx in outcome.block.txs:
            print(tx.txid.hex())
        return EXIT_OK
    if isinstance(outcome, MissingTx):
        print(f"missing-tx: positions {','.join(map(str, outcome.positions))}")
        return EXIT_MISSING
    print(f"fallback-required: {outcome.reason.value}")
    return EXIT_FALLBACK


def cmd_attack(args: argparse.Namespace) -> int:
    scenario = adversary.load_scenario(args.scenario)
    if scenario.salt_known and scenario.k > 32:
        print(f"refused: known-salt scenario at k={scenario.k} (> 32) is not tractable here", file=sys.stderr)
        return EXIT_REFUSED

    block_txs = exchange.synthetic_txs(scenario.seed, b"attack-block", scenario.n, 64)
    salt = b"\x5a\x5a\x5a\x5a"
    compact = encode(block_txs, salt, scenario.k, Ordering.AS_PRODUCED)
    pool = Mempool(block_txs)
    result = adversary.flood(
        pool,
        compact,
        scenario.colliders_per_target,
        scenario.targets,
        scenario.budget,
        salt_known=scenario.salt_known,
    )
    outcome = decode(compact, result.pool, DecodeLimits())
    stats = outcome.stats
    params = collision.CollisionParams(scenario.k, len(result.pool), scenario.n)
    expected = collision.p_sc_unsorted(params) * scenario.n
    policy = adversary.DetectionPolicy(
        expected_ambiguity=expected, forks_observed=scenario.forks_observed
    )
    suspected = adversary.detect(stats, policy)
    next_mode = adversary.next_block_mode([suspected])

    crafted = sum(len(v) for v in result.by_position.values())
    print(f"scenario: k={scenario.k} salt={'known' if scenario.salt_known else 'unknown'}")
    print(f"colliders crafted: {crafted} over {len(scenario.targets)} positions (complete={result.complete})")
    print(f"decode outcome: {type(outcome).__name__}")
    print(
        f"stats: ambiguous={stats.ambiguous_positions} combinations={stats.combinations_examined} "
        f"crc_prechecks={stats.crc_prechecks} sha_recomputations={stats.sha_recomputations}"
    )
    print(f"expected ambiguity: {expected:.6g}")
    print(f"forks observed: {scenario.forks_observed}")
    print(f"attack suspected: {suspected}")
    print(f"next block mode: {next_mode.value}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="txilm",
        description="Short-hash block compression: protocol codec and simulation harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("collisions", help="analytic vs Monte Carlo collision sweep")
    p.add_argument("--k", type=_parse_k_range, default=list(range(20, 36)), metavar="LO:HI")
    p.add_argument("--m", type=int, default=1000, help="mempool size")
    p.add_argument("--n", type=_parse_int_list, default=[100, 300, 500], metavar="N1,N2,...")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=parse_seed, default=None, metavar="HEX64")
    p.add_argument("--sorted", action="store_true", help="txid-sorted blocks")
    p.add_argument("--out-dir", default=".", help="directory for per-n TSV files")
    p.add_argument("--quiet", action="store_true", help="suppress progress on stderr")
    p.set_defaults(func=cmd_collisions)

    p = sub.add_parser("exchange", help="two-peer exchange with bandwidth accounting")
    p.add_argument("--n", type=int, required=True, help="block transaction count")
    p.add_argument("--tx-size", type=int, default=320)
    p.add_argument("--overlap", type=float, default=1.0, help="fraction of block txs already pooled")
    p.add_argument("--extra-pool", type=int, default=0, help="unrelated pool transactions")
    p.add_argument("--k", type=int, default=32)
    p.add_argument("--mode", type=_parse_mode, choices=[Ordering.AS_PRODUCED, Ordering.SORTED_BY_TXID],
                   default=Ordering.SORTED_BY_TXID, metavar="{as-produced,sorted}")
    p.add_argument("--seed", type=parse_seed, default=None, metavar="HEX64")
    p.set_defaults(func=cmd_exchange)

    p = sub.add_parser("encode", help="encode a txset fixture into a compact block file")
    p.add_argument("txset")
    p.add_argument("--salt", type=bytes.fromhex, required=True, metavar="HEX8")
    p.add_argument("--k", type=int, default=32)
    p.add_argument("--mode", type=_parse_mode, default=Ordering.AS_PRODUCED, metavar="{as-produced,sorted}")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_encode)

    default_limits = DecodeLimits()
    p = sub.add_parser("decode", help="decode a compact block file against a txset pool")
    p.add_argument("wire")
    p.add_argument("pool", help="txset fixture acting as the mempool")
    p.add_argument("--max-combinations", type=int, default=default_limits.max_combinations)
    p.add_argument("--max-candidates", type=int, default=default_limits.max_candidates_per_position)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("attack", help="run a collision-flood scenario file")
    p.add_argument("scenario")
    p.set_defaults(func=cmd_attack)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "seed", None) is None and hasattr(args, "seed"):
        args.seed = _default_seed()
    if getattr(args, "trials", 1) < 1:
        parser.error("--trials must be at least 1")
    try:
        return args.func(args)
    except (ValueError, WireFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""Reproduce the collision-probability figures at full scale.

Writes plot-ready TSVs (one per block size) for both ordering modes into
results/: the unsorted grid over k = 20..35 and the sorted grid, which is
meaningful up to about k = 25 where its collision rate has converged to
zero. Runs the shared-stream engine, so both grids cost a single pass
(a few minutes of CPU).

    python scripts/run_figure_sweeps.py [out_dir] [trials]
"""

from __future__ import annotations

import sys
from pathlib import Path

from txilm.collision import DEFAULT_SEED, sweep_both_modes, write_sweep_tsv


def main() -> None:
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("results")
    trials = int(sys.argv[2]) if len(sys.argv) > 2 else 100_000
    unsorted_rows, sorted_rows = sweep_both_modes(
        range(20, 36), 1000, [100, 300, 500], trials, seed=DEFAULT_SEED, progress=True
    )
    paths = write_sweep_tsv(out_dir, unsorted_rows, sorted_mode=False)
    paths += write_sweep_tsv(out_dir, sorted_rows, sorted_mode=True)
    for path in paths:
        print(f"wrote {path}")
    print("\nunsorted grid (empirical):")
    print("k\t" + "\t".join(f"n={n}" for n in unsorted_rows))
    for idx, row in enumerate(unsorted_rows[100]):
        cells = "\t".join(f"{unsorted_rows[n][idx].p_empirical:.3e}" for n in unsorted_rows)
        print(f"{row.k}\t{cells}")


if __name__ == "__main__":
    main()

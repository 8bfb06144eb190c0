"""Time the decomposition search with the compiled kernel against the numpy fallback.

Run: python benchmarks/bench_search.py [--window 2] [--repeat 3]

Both paths must return identical rows; the script exits non-zero otherwise.
Setting SURGERYGON_DISABLE_NUMBA=1 before running skips the compiled path.
"""

from __future__ import annotations

import argparse
import sys
import time

from surgerygon._accel import NUMBA_AVAILABLE
from surgerygon.instantonindex import regenerate


def _best_of(repeat: int, **kwargs):
    best, results = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        results, _ = regenerate(**kwargs)
        best = min(best, time.perf_counter() - t0)
    return best, results


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--window", type=int, default=2)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    t_np, rows_np = _best_of(args.repeat, window=args.window, accelerate=False)
    print(f"numpy   window={args.window}: {t_np:8.3f} s  ({sum(r.ok for r in rows_np)}/{len(rows_np)} rows match)")
    if not NUMBA_AVAILABLE:
        print("numba   unavailable or disabled; nothing to compare")
        return 0

    t0 = time.perf_counter()
    regenerate(window=1, tables=[1], accelerate=True)  # trigger compilation
    print(f"numba   compile + first call: {time.perf_counter() - t0:8.3f} s")
    t_nb, rows_nb = _best_of(args.repeat, window=args.window, accelerate=True)
    print(f"numba   window={args.window}: {t_nb:8.3f} s  ({sum(r.ok for r in rows_nb)}/{len(rows_nb)} rows match)")
    print(f"speedup {t_np / t_nb:8.2f}x")

    same = [a.found for a in rows_np] == [b.found for b in rows_nb]
    print(f"identical results: {same}")
    return 0 if same else 1


if __name__ == "__main__":
    sys.exit(main())

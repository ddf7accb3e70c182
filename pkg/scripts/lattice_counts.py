"""Count finite distributive lattices by size with both enumeration routes."""
from __future__ import annotations

import argparse
import time
from collections import Counter

from whb.enumerator import MAX_LATTICE, TABLE_ROUTE_MAX, enumerate_bdls


def _counts(max_size: int, route: str) -> tuple[list[int], float]:
    t0 = time.perf_counter()
    c = Counter(L.n for L in enumerate_bdls(max_size, route))
    return [c[n] for n in range(1, max_size + 1)], time.perf_counter() - t0


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-size", type=int, default=MAX_LATTICE)
    args = ap.parse_args()
    down, t_down = _counts(args.max_size, "downsets")
    k = min(args.max_size, TABLE_ROUTE_MAX)
    tab, t_tab = _counts(k, "tables")
    print(f"{'n':>3} {'downsets':>9} {'tables':>7}")
    for n in range(1, args.max_size + 1):
        print(f"{n:>3} {down[n - 1]:>9} {tab[n - 1] if n <= k else '-':>7}")
    print(f"downsets route {t_down:.2f} s, table route (<= {k}) {t_tab:.2f} s")


if __name__ == "__main__":
    main()

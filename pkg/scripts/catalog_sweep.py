"""Build a catalog and tabulate algebra counts by size and by variety label."""
from __future__ import annotations

import argparse
import json
import time

import numpy as np

from whb.algebra import VARIETIES, batch_in_variety, ordered_labels
from whb.catalog import DEFAULT_CONFIGS, CatalogConfig, build_catalog


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--variety", default="WHB", choices=sorted(DEFAULT_CONFIGS))
    ap.add_argument("--max-size", type=int, default=8)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()

    base = DEFAULT_CONFIGS[args.variety]
    cfg = CatalogConfig(args.variety, args.max_size, base.frame_points, base.table_size, base.hb_size)
    t0 = time.perf_counter()
    cat = build_catalog(cfg)
    built = time.perf_counter() - t0

    labels = ordered_labels(VARIETIES)
    table: dict[int, dict[str, int]] = {}
    for b in cat.batches():
        row = table.setdefault(b.lattice.n, {lab: 0 for lab in ["total"] + labels})
        row["total"] += b.size
        for lab in labels:
            row[lab] += int(np.count_nonzero(batch_in_variety(b, lab)))

    if args.json:
        print(json.dumps({"config": cfg.__dict__, "seconds": round(built, 2), "by_size": table}, indent=2))
        return
    print(f"{args.variety} catalog up to {args.max_size} elements: {len(cat)} algebras ({built:.1f} s)")
    shown = [lab for lab in labels if any(r[lab] for r in table.values())]
    print("size " + " ".join(f"{lab:>10}" for lab in ["total"] + shown))
    for n, row in sorted(table.items()):
        print(f"{n:>4} " + " ".join(f"{row[lab]:>10}" for lab in ["total"] + shown))


if __name__ == "__main__":
    main()

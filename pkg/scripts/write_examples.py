"""Write the named example algebras and frames used in the README to data/."""
from __future__ import annotations

import argparse
from pathlib import Path

from whb.io import algebra_to_doc, write_json
from whb.named import NAMED


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data"))
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, make in NAMED.items():
        write_json(out / f"{name}.alg", algebra_to_doc(make()))
    # bounded but not a lattice: a and b have two minimal upper bounds c and d
    write_json(
        out / "nonlattice.alg",
        {
            "elements": ["0", "a", "b", "c", "d", "1"],
            "leq": [["0", "a"], ["0", "b"], ["a", "c"], ["a", "d"], ["b", "c"], ["b", "d"], ["c", "1"], ["d", "1"]],
        },
    )
    # two-point chain x < y with R = order and S = its converse
    write_json(
        out / "chain2-whb.frame",
        {"points": ["x", "y"], "leq": [[0, 1]], "R": [[0, 0], [0, 1], [1, 1]], "S": [[0, 0], [1, 0], [1, 1]]},
    )
    write_json(out / "chain2-bad-S.frame", {"points": ["x", "y"], "leq": [[0, 1]], "R": [[0, 0], [0, 1], [1, 1]], "S": [[0, 1]]})
    print(f"wrote examples to {out}")


if __name__ == "__main__":
    main()

"""Catalogs of small algebras that feed the property suites.

A catalog merges several independent sources, keeps one canonical copy per
isomorphism class and remembers where each algebra came from:

* ``frames``: complex algebras of all frames of the kind on few points,
* ``tables``: direct arrow-table search on small lattices,
* ``hb``: the Heyting-Brouwer structure on every lattice up to the size bound.

Finite algebras are isomorphic to the complex algebras of their canonical
frames, so the frame source is complete for lattices with at most
``frame_points`` join-irreducibles.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

import numpy as np

from .algebra import AlgebraBatch, ArrowAlgebra
from .enumerator import canonical_batch, enumerate_algebra_batch, enumerate_bdls, enumerate_frames, lattice_code
from .errors import SizeBound
from .frames import complex_batch
from .lattice import FiniteBDL
from .named import heyting_brouwer

SOURCES = ("frames", "tables", "hb")


@dataclass(frozen=True)
class CatalogConfig:
    variety: str = "WHB"
    max_size: int = 8
    frame_points: int = 3
    table_size: int = 5
    hb_size: int = 8


DEFAULT_CONFIGS = {
    "WHB": CatalogConfig("WHB", 8, 3, 5, 8),
    # DWH tables pair freely, so the table source stops at 4 elements; the
    # frame source already covers every lattice with <= 3 join-irreducibles
    "DWH": CatalogConfig("DWH", 8, 3, 4, 8),
}


@dataclass(frozen=True)
class CatalogGroup:
    """All catalog algebras on one canonical lattice."""

    batch: AlgebraBatch
    sources: tuple[frozenset, ...]

    @property
    def lattice(self) -> FiniteBDL:
        return self.batch.lattice


@dataclass(frozen=True)
class Catalog:
    config: CatalogConfig
    groups: tuple[CatalogGroup, ...]
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __len__(self) -> int:
        return sum(g.batch.size for g in self.groups)

    def batches(self, max_size: int | None = None) -> list[AlgebraBatch]:
        return [g.batch for g in self.groups if max_size is None or g.lattice.n <= max_size]

    def entries(self, max_size: int | None = None) -> Iterator[tuple[ArrowAlgebra, frozenset]]:
        for g in self.groups:
            if max_size is not None and g.lattice.n > max_size:
                continue
            for i in range(g.batch.size):
                yield g.batch.algebra(i, f"{self.config.variety}-{g.lattice.n}-{i}"), g.sources[i]

    def algebras(self, max_size: int | None = None) -> list[ArrowAlgebra]:
        key = ("algebras", max_size)
        if key not in self._cache:
            self._cache[key] = [a for a, _ in self.entries(max_size)]
        return self._cache[key]

    def counts(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for g in self.groups:
            out[g.lattice.n] = out.get(g.lattice.n, 0) + g.batch.size
        return dict(sorted(out.items()))


def _frame_batches(points: int, kind: str) -> Iterator[AlgebraBatch]:
    """Canonical complex algebras of frames, one batch per underlying order."""
    by_order: dict[bytes, list] = {}
    for f in enumerate_frames(points, kind):
        by_order.setdefault(f.leq.tobytes(), []).append(f)
    for fs in by_order.values():
        Rs = np.stack([f.rel("R") for f in fs])
        Ss = np.stack([f.rel("S") for f in fs])
        b = complex_batch(fs[0].leq, Rs, Ss)
        yield canonical_batch(b.lattice, b.imp, b.dif)


def build_catalog(config: CatalogConfig) -> Catalog:
    if config.max_size > 8:
        raise SizeBound("catalogs are limited to 8 elements")
    # lattice code -> (lattice, {table key: (imp, dif, sources)})
    merged: dict[bytes, tuple[FiniteBDL, dict]] = {}

    def add(batch: AlgebraBatch, source: str) -> None:
        L = batch.lattice
        if L.n > config.max_size or batch.size == 0:
            return
        _, slot = merged.setdefault(lattice_code(L), (L, {}))
        for i in range(batch.size):
            k = batch.imp[i].astype(np.int8).tobytes() + batch.dif[i].astype(np.int8).tobytes()
            if k in slot:
                slot[k][2].add(source)
            else:
                slot[k] = (batch.imp[i], batch.dif[i], {source})

    frame_kind = config.variety if config.variety in ("WHB", "DWH", "WH", "WD") else None
    if frame_kind is not None and config.frame_points > 0:
        for b in _frame_batches(config.frame_points, frame_kind):
            add(b, "frames")
    for L in enumerate_bdls(config.table_size):
        add(enumerate_algebra_batch(L, config.variety), "tables")
    for L in enumerate_bdls(config.hb_size):
        hb = heyting_brouwer(L)
        add(canonical_batch(L, hb.imp[None], hb.dif[None]), "hb")

    groups = []
    for code in sorted(merged, key=lambda c: (merged[c][0].n, c)):
        L, slot = merged[code]
        keys = sorted(slot)
        imp = np.stack([slot[k][0] for k in keys])
        dif = np.stack([slot[k][1] for k in keys])
        groups.append(CatalogGroup(AlgebraBatch(L, imp, dif), tuple(frozenset(slot[k][2]) for k in keys)))
    return Catalog(config, tuple(groups))


@lru_cache(maxsize=None)
def catalog(variety: str = "WHB") -> Catalog:
    """The default catalog of a variety (WHB or DWH)."""
    if variety not in DEFAULT_CONFIGS:
        raise KeyError(f"no default catalog for {variety!r}")
    return build_catalog(DEFAULT_CONFIGS[variety])

"""Prime-filter spectrum of an arrow algebra: canonical relations, closures, Stone map.

Points of the canonical frame are the prime filters of the lattice in
ascending bitset order; point subsets are bitsets over point indices.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraBatch, ArrowAlgebra
from .frames import Frame, box_imp, diamond_dif, make_frame
from .lattice import bits, is_filter, mask_of, prime_filters


def _membership(alg: ArrowAlgebra, filters: list[int]) -> np.ndarray:
    return np.array([[(F >> e) & 1 for e in range(alg.n)] for F in filters], dtype=bool).reshape(len(filters), alg.n)


def points(alg: ArrowAlgebra) -> list[int]:
    cache = alg._cache
    if "points" not in cache:
        cache["points"] = prime_filters(alg.lattice)
    return cache["points"]


def relation_R(alg: ArrowAlgebra) -> np.ndarray:
    """``(P, Q)`` iff for all ``a, b``: ``a -> b`` in ``P`` and ``a`` in ``Q`` imply ``b`` in ``Q``."""
    cache = alg._cache
    if "R" in cache:
        return cache["R"]
    pts = points(alg)
    mem = _membership(alg, pts)
    m, n = len(pts), alg.n
    # premise[P, a, b] = (a -> b) in P ; escape[Q, a, b] = a in Q and b not in Q
    premise = mem[:, alg.imp].reshape(m, n * n).astype(np.int64)
    escape = (mem[:, :, None] & ~mem[:, None, :]).reshape(m, n * n).astype(np.int64)
    R = (premise @ escape.T) == 0
    R.setflags(write=False)
    cache["R"] = R
    return R


def relation_S(alg: ArrowAlgebra) -> np.ndarray:
    """``(P, Q)`` iff for all ``a, b``: ``a`` in ``Q`` and ``b`` not in ``Q`` imply ``a <- b`` in ``P``."""
    cache = alg._cache
    if "S" in cache:
        return cache["S"]
    pts = points(alg)
    mem = _membership(alg, pts)
    m, n = len(pts), alg.n
    missing = (~mem[:, alg.dif]).reshape(m, n * n).astype(np.int64)
    escape = (mem[:, :, None] & ~mem[:, None, :]).reshape(m, n * n).astype(np.int64)
    S = (missing @ escape.T) == 0
    S.setflags(write=False)
    cache["S"] = S
    return S


def batch_relations(batch: AlgebraBatch) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Inclusion order on the prime filters and stacked ``R_A``, ``S_A`` for a batch.

    Same quantifier elimination as ``relation_R`` and ``relation_S``, run on
    all tables of the batch at once.
    """
    L = batch.lattice
    pts = prime_filters(L)
    m, n, B = len(pts), L.n, batch.size
    mem = np.array([[(P >> i) & 1 for i in range(n)] for P in pts], dtype=bool).reshape(m, n)
    leq = np.array([[(P & ~Q) == 0 for Q in pts] for P in pts], dtype=bool).reshape(m, m)
    escape = (mem[:, :, None] & ~mem[:, None, :]).reshape(m, n * n).astype(np.float32)
    premise = mem[:, batch.imp].transpose(1, 0, 2, 3).reshape(B, m, n * n).astype(np.float32)
    R = (premise @ escape.T) == 0
    missing = (~mem[:, batch.dif]).transpose(1, 0, 2, 3).reshape(B, m, n * n).astype(np.float32)
    S = (missing @ escape.T) == 0
    return leq, R, S


def meet_closure(alg: ArrowAlgebra, X: int) -> int:
    """Meets of all finite subsets of ``X`` (the empty meet is 1)."""
    L = alg.lattice
    out = 1 << L.top
    frontier = [L.top]
    gens = bits(X)
    while frontier:
        new = []
        for c in frontier:
            for g in gens:
                d = int(L.meet[c, g])
                if not (out >> d) & 1:
                    out |= 1 << d
                    new.append(d)
        frontier = new
    return out


def closure_D(alg: ArrowAlgebra, F: int, X: int) -> int:
    """``{b : (meet of some finite Y within X) -> b is in F}``."""
    meets = bits(meet_closure(alg, X))
    return mask_of(b for b in range(alg.n) if any((F >> int(alg.imp[m, b])) & 1 for m in meets))


def closure_F(alg: ArrowAlgebra, P: int, X: int) -> int:
    """``{a : (meet of some finite Y within X) <- a is not in P}``, the empty meet being 1.

    Taking joins with the empty join 0 instead would give the whole carrier for
    every ``X``, since ``0 <- a <= a <- a = 0``.
    """
    meets = bits(meet_closure(alg, X))
    return mask_of(a for a in range(alg.n) if any(not (P >> int(alg.dif[m, a])) & 1 for m in meets))


def _point_index(alg: ArrowAlgebra, P: int) -> int:
    pts = points(alg)
    try:
        return pts.index(P)
    except ValueError:
        raise ValueError("not a prime filter of this algebra") from None


def witness_R(alg: ArrowAlgebra, P: int, a: int, b: int) -> int | None:
    """Least prime ``Q`` with ``P R Q``, ``a`` in ``Q``, ``b`` not in ``Q``; ``None`` if there is none."""
    row = relation_R(alg)[_point_index(alg, P)]
    for j, Q in enumerate(points(alg)):
        if row[j] and (Q >> a) & 1 and not (Q >> b) & 1:
            return Q
    return None


def witness_S(alg: ArrowAlgebra, P: int, a: int, b: int) -> int | None:
    """Least prime ``Q`` with ``P S Q``, ``a`` in ``Q``, ``b`` not in ``Q``; ``None`` if there is none."""
    row = relation_S(alg)[_point_index(alg, P)]
    for j, Q in enumerate(points(alg)):
        if row[j] and (Q >> a) & 1 and not (Q >> b) & 1:
            return Q
    return None


def stone_map(alg: ArrowAlgebra) -> list[int]:
    """``sigma(a)`` as a bitset over point indices, for each element ``a``."""
    pts = points(alg)
    return [mask_of(j for j, P in enumerate(pts) if (P >> a) & 1) for a in range(alg.n)]


def filter_name(alg: ArrowAlgebra, F: int) -> str:
    return "{" + ",".join(alg.names[i] for i in bits(F)) + "}"


@dataclass(frozen=True, eq=False)
class CanonicalFrame:
    filters: tuple[int, ...]
    frame: Frame

    @property
    def leq(self):
        return self.frame.leq

    @property
    def R(self):
        return self.frame.R

    @property
    def S(self):
        return self.frame.S


def canonical_frame(alg: ArrowAlgebra) -> CanonicalFrame:
    cache = alg._cache
    if "frame" in cache:
        return cache["frame"]
    pts = points(alg)
    leq = np.array([[(P & ~Q) == 0 for Q in pts] for P in pts], dtype=bool).reshape(len(pts), len(pts))
    labels = [filter_name(alg, P) for P in pts]
    cf = CanonicalFrame(tuple(pts), make_frame(leq, relation_R(alg), relation_S(alg), labels))
    cache["frame"] = cf
    return cf


@dataclass(frozen=True)
class StoneReport:
    injective: bool
    violations: tuple[tuple, ...]  # (op, a, b) where sigma fails to commute

    @property
    def ok(self) -> bool:
        return self.injective and not self.violations


def stone_report(alg: ArrowAlgebra, ops=("and", "or", "to", "from")) -> StoneReport:
    """Check that ``sigma`` is injective and commutes with the chosen operations.

    Arrows are compared with ``=>_R`` and ``<=_S`` on the canonical frame.
    """
    sigma = stone_map(alg)
    f = canonical_frame(alg).frame
    L = alg.lattice
    full = (1 << f.m) - 1
    out: list[tuple] = []
    if sigma[L.bottom] != 0:
        out.append(("0",))
    if sigma[L.top] != full:
        out.append(("1",))
    for a in range(alg.n):
        for b in range(alg.n):
            sa, sb = sigma[a], sigma[b]
            if "and" in ops and sigma[L.meet[a, b]] != sa & sb:
                out.append(("and", a, b))
            if "or" in ops and sigma[L.join[a, b]] != sa | sb:
                out.append(("or", a, b))
            if "to" in ops and sigma[alg.imp[a, b]] != box_imp(f, sa, sb):
                out.append(("to", a, b))
            if "from" in ops and sigma[alg.dif[a, b]] != diamond_dif(f, sa, sb):
                out.append(("from", a, b))
    return StoneReport(len(set(sigma)) == alg.n, tuple(out))


def is_filter_mask(alg: ArrowAlgebra, X: int) -> bool:
    return is_filter(alg.lattice, X)

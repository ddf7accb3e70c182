"""Congruences of arrow algebras and their dual doubly closed point sets.

A congruence is stored as a label vector: ``labels[i]`` is the least element
index in the block of ``i``.  Two oracles produce the full congruence set:
partition enumeration (``n <= 6``) and closure of principal congruences under
joins (``n <= 10``).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .algebra import ArrowAlgebra, is_subuniverse, subalgebra
from .errors import SizeBound
from .lattice import bits, mask_of
from .spectrum import canonical_frame, points, stone_map

OPS = ("and", "or", "to", "from")
PARTITION_LIMIT = 6
CLOSURE_LIMIT = 10


def _canon(lab: Sequence[int]) -> tuple[int, ...]:
    """Relabel so each element points at the least index of its block."""
    first: dict[int, int] = {}
    out = []
    for i, b in enumerate(lab):
        out.append(first.setdefault(b, i))
    return tuple(out)


@dataclass(frozen=True)
class Congruence:
    labels: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.labels)

    @staticmethod
    def identity(n: int) -> "Congruence":
        return Congruence(tuple(range(n)))

    @staticmethod
    def total(n: int) -> "Congruence":
        return Congruence((0,) * n)

    @staticmethod
    def from_blocks(n: int, blocks: Iterable[Iterable[int]]) -> "Congruence":
        lab = list(range(n))
        for blk in blocks:
            blk = sorted(blk)
            for i in blk:
                lab[i] = blk[0]
        return Congruence(_canon(lab))

    def related(self, a: int, b: int) -> bool:
        return self.labels[a] == self.labels[b]

    def blocks(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for i, r in enumerate(self.labels):
            out.setdefault(r, []).append(i)
        return list(out.values())

    def num_blocks(self) -> int:
        return len(set(self.labels))

    def matrix(self) -> np.ndarray:
        lab = np.asarray(self.labels)
        return lab[:, None] == lab[None, :]

    def __le__(self, other: "Congruence") -> bool:  # type: ignore[override]
        # refinement: every pair of self is a pair of other
        return all(other.labels[i] == other.labels[r] for i, r in enumerate(self.labels))

    def meet(self, other: "Congruence") -> "Congruence":
        return Congruence(_canon(list(zip(self.labels, other.labels))))

    def join(self, other: "Congruence") -> "Congruence":
        lab = list(self.labels)
        for i, r in enumerate(other.labels):
            lab = _merge(lab, i, r)
        return Congruence(_canon(lab))

    def describe(self, names: Sequence[str]) -> str:
        return " | ".join(",".join(names[i] for i in blk) for blk in self.blocks())


def _merge(lab: list[int], a: int, b: int) -> list[int]:
    ra, rb = lab[a], lab[b]
    if ra == rb:
        return lab
    lo, hi = min(ra, rb), max(ra, rb)
    return [lo if v == hi else v for v in lab]


def is_compatible(alg: ArrowAlgebra, lab: Sequence[int], ops=OPS) -> bool:
    """Block of ``op(x, y)`` depends only on the blocks of ``x`` and ``y``."""
    lab = np.asarray(lab)
    for op in ops:
        M = lab[alg.table(op)]
        if not np.array_equal(M, M[np.ix_(lab, lab)]):
            return False
    return True


def set_partitions(n: int):
    """Restricted growth strings of length ``n``, in lexicographic order."""
    if n == 0:
        yield ()
        return
    a = [0] * n

    def rec(i: int, mx: int):
        if i == n:
            yield tuple(a)
            return
        for v in range(mx + 2):
            a[i] = v
            yield from rec(i + 1, max(mx, v))

    yield from rec(1, 0)


def congruences_by_partitions(alg: ArrowAlgebra, ops=OPS) -> list[Congruence]:
    if alg.n > PARTITION_LIMIT + 2:
        raise SizeBound(f"partition enumeration is limited to {PARTITION_LIMIT + 2} elements")
    out = []
    for rgs in set_partitions(alg.n):
        lab = _canon(list(rgs))
        if is_compatible(alg, lab, ops):
            out.append(Congruence(lab))
    return sort_congruences(out)


def generate(alg: ArrowAlgebra, pairs: Iterable[tuple[int, int]], ops=OPS, start: Congruence | None = None) -> Congruence:
    """Least congruence containing ``pairs`` (and ``start``), by closing under the operations."""
    lab = list(start.labels) if start is not None else list(range(alg.n))
    for a, b in pairs:
        lab = _merge(lab, a, b)
    tables = [np.asarray(alg.table(op)) for op in ops]
    while True:
        arr = np.asarray(lab)
        changed = False
        for T in tables:
            # op(x, y) must be congruent to op(rep x, rep y)
            A = arr[T]
            B = arr[T[arr]] if T.ndim == 1 else arr[T[np.ix_(arr, arr)]]
            for u, v in zip(A[A != B], B[A != B]):
                if lab[u] != lab[v]:
                    lab = _merge(lab, int(u), int(v))
                    changed = True
            arr = np.asarray(lab)
        if not changed:
            return Congruence(_canon(lab))


def congruences_by_closure(alg: ArrowAlgebra, ops=OPS) -> list[Congruence]:
    """Join closure of the principal congruences together with the identity."""
    if alg.n > CLOSURE_LIMIT:
        raise SizeBound(f"congruence generation is limited to {CLOSURE_LIMIT} elements")
    principal = {generate(alg, [(a, b)], ops) for a, b in combinations(range(alg.n), 2)}
    found = {Congruence.identity(alg.n)} | principal
    frontier = set(found)
    while frontier:
        new = set()
        for t in frontier:
            for p in principal:
                j = generate(alg, [], ops, t.join(p))
                if j not in found:
                    new.add(j)
        found |= new
        frontier = new
    return sort_congruences(found)


def sort_congruences(cs: Iterable[Congruence]) -> list[Congruence]:
    return sorted(set(cs), key=lambda c: (-c.num_blocks(), c.labels))


def all_congruences(alg: ArrowAlgebra, ops=OPS) -> list[Congruence]:
    """The congruence set, by partitions when ``n <= 6`` and by closure up to ``n = 10``."""
    key = ("con", ops)
    if key in alg._cache:
        return alg._cache[key]
    if alg.n <= PARTITION_LIMIT:
        out = congruences_by_partitions(alg, ops)
    elif alg.n <= CLOSURE_LIMIT:
        out = congruences_by_closure(alg, ops)
    else:
        raise SizeBound(f"congruence oracle is limited to {CLOSURE_LIMIT} elements")
    alg._cache[key] = out
    return out


all_congruences_oracle = all_congruences


def principal_congruence(alg: ArrowAlgebra, a: int, b: int) -> Congruence:
    """Intersection of all congruences containing ``(a, b)``, checked against direct generation."""
    cs = [c for c in all_congruences(alg) if c.related(a, b)]
    inter = reduce(Congruence.meet, cs)
    gen = generate(alg, [(a, b)])
    if gen != inter:
        raise RuntimeError(f"principal congruence routes disagree at ({a}, {b})")
    return inter


# -- lattice properties ------------------------------------------------------


def compose(t1: Congruence, t2: Congruence) -> np.ndarray:
    m1 = t1.matrix().astype(np.int64)
    m2 = t2.matrix().astype(np.int64)
    return (m1 @ m2) > 0


def distributivity_violation(cs: Sequence[Congruence]) -> tuple | None:
    for a in cs:
        for b in cs:
            for c in cs:
                if a.meet(b.join(c)) != a.meet(b).join(a.meet(c)):
                    return (a, b, c)
    return None


def permutability_violation(cs: Sequence[Congruence]) -> tuple | None:
    for a, b in combinations(cs, 2):
        if not np.array_equal(compose(a, b), compose(b, a)):
            return (a, b)
    return None


def check_lattice_ops(cs: Sequence[Congruence], alg: ArrowAlgebra) -> bool:
    """Meets and joins of congruences are congruences in the list."""
    s = set(cs)
    return all(a.meet(b) in s and a.join(b) in s for a in cs for b in cs)


# -- doubly closed sets ---------------------------------------------------------


def is_doubly_closed(R: np.ndarray, S: np.ndarray, Y: int) -> bool:
    for x in bits(Y):
        if mask_of(np.flatnonzero(R[x])) & ~Y or mask_of(np.flatnonzero(S[x])) & ~Y:
            return False
    return True


def doubly_closed_sets(frame) -> list[int]:
    """All point sets closed under ``R`` and ``S``, ascending bitset order."""
    f = getattr(frame, "frame", frame)
    R, S = f.rel("R"), f.rel("S")
    return [Y for Y in range(1 << f.m) if is_doubly_closed(R, S, Y)]


def theta_of_closed(alg: ArrowAlgebra, Y: int) -> Congruence:
    """``a ~ b`` iff ``sigma(a)`` and ``sigma(b)`` agree on ``Y``."""
    sigma = stone_map(alg)
    return Congruence(_canon([s & Y for s in sigma]))


def closed_of_theta(alg: ArrowAlgebra, theta: Congruence) -> int:
    """Points ``P`` such that membership in ``P`` is constant on every block."""
    out = 0
    for j, P in enumerate(points(alg)):
        if all(((P >> i) & 1) == ((P >> r) & 1) for i, r in enumerate(theta.labels)):
            out |= 1 << j
    return out


@dataclass(frozen=True)
class DualityReport:
    congruences: int
    closed_sets: int
    round_trip_theta: bool  # Theta(Theta^-1(c)) = c for every congruence
    round_trip_closed: bool  # Theta^-1(Theta(Y)) = Y for every closed set
    order_reversing: bool
    theta_compatible: bool  # Theta(Y) is a congruence for every closed Y

    @property
    def ok(self) -> bool:
        return (
            self.congruences == self.closed_sets
            and self.round_trip_theta
            and self.round_trip_closed
            and self.order_reversing
            and self.theta_compatible
        )


def congruence_duality(alg: ArrowAlgebra) -> DualityReport:
    cs = all_congruences(alg)
    ys = doubly_closed_sets(canonical_frame(alg))
    cset = set(cs)
    thetas = {Y: theta_of_closed(alg, Y) for Y in ys}
    rt_theta = all(closed_of_theta(alg, c) in thetas and thetas[closed_of_theta(alg, c)] == c for c in cs)
    rt_closed = all(closed_of_theta(alg, thetas[Y]) == Y for Y in ys)
    compat = all(is_compatible(alg, t.labels) and t in cset for t in thetas.values())
    rev = all(((Y1 & ~Y2) == 0) == (thetas[Y2] <= thetas[Y1]) for Y1 in ys for Y2 in ys)
    return DualityReport(len(cs), len(ys), rt_theta, rt_closed, rev, compat)


# -- congruence extension ----------------------------------------------------


@dataclass(frozen=True)
class CEPReport:
    subalgebra: tuple[int, ...]
    total: int
    missing: tuple[Congruence, ...]  # congruences of the subalgebra with no extension

    @property
    def ok(self) -> bool:
        return not self.missing


def cep_spot_check(B: ArrowAlgebra, A_mask: int) -> CEPReport:
    """Whether every congruence of the subalgebra on ``A_mask`` is a restriction of one of ``B``."""
    if B.n > CLOSURE_LIMIT:
        raise SizeBound(f"extension check is limited to {CLOSURE_LIMIT} elements")
    if not is_subuniverse(B, A_mask):
        raise ValueError("subset is not a subuniverse")
    A, idx = subalgebra(B, A_mask)
    restricted = {Congruence(_canon([t.labels[i] for i in idx])) for t in all_congruences(B)}
    cs = all_congruences(A)
    return CEPReport(tuple(idx), len(cs), tuple(d for d in cs if d not in restricted))

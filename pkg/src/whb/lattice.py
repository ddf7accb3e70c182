"""Finite bounded distributive lattices.

Elements are dense indices ``0..n-1``; subsets of elements (filters, ideals,
upsets) are Python ints used as bitsets, bit ``i`` standing for element ``i``.
Ordering of subsets is plain numeric ordering of the bitset.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np


class LatticeError(ValueError):
    """Base class for rejected lattice candidates; ``witness`` names the offending tuple."""

    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(message)
        self.witness = witness


class NotAPoset(LatticeError):
    pass


class NotALattice(LatticeError):
    pass


class NotDistributive(LatticeError):
    pass


class Unbounded(LatticeError):
    pass


def bits(mask: int) -> list[int]:
    """Indices of the set bits of ``mask`` in increasing order."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << int(i)
    return m


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def reflexive_transitive_closure(rel: np.ndarray) -> np.ndarray:
    n = rel.shape[0]
    c = rel.copy() | np.eye(n, dtype=bool)
    for k in range(n):
        c |= c[:, k : k + 1] & c[k : k + 1, :]
    return c


@dataclass(frozen=True, eq=False)
class FiniteBDL:
    """A finite bounded distributive lattice.

    Build instances through :func:`validate_bdl` (or the helper constructors
    below) rather than directly; the constructor trusts its arguments.
    """

    names: tuple[str, ...]
    leq: np.ndarray
    meet: np.ndarray
    join: np.ndarray
    bottom: int
    top: int
    _up: tuple[int, ...] = field(repr=False, default=())

    @property
    def n(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown element {name!r}") from None

    def up(self, a: int) -> int:
        """The principal filter ``[a)`` as a bitset."""
        return self._up[a]

    def down(self, a: int) -> int:
        return mask_of(np.flatnonzero(self.leq[:, a]))

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def meet_all(self, elems: Iterable[int]) -> int:
        m = self.top
        for e in elems:
            m = int(self.meet[m, e])
        return m

    def join_all(self, elems: Iterable[int]) -> int:
        j = self.bottom
        for e in elems:
            j = int(self.join[j, e])
        return j

    def join_irreducibles(self) -> list[int]:
        """Elements ``p != 0`` with ``p = x v y`` only if ``p = x`` or ``p = y``."""
        out = []
        for p in range(self.n):
            if p == self.bottom:
                continue
            below = [x for x in range(self.n) if self.leq[x, p] and x != p]
            # p is join-irreducible iff it has exactly one lower cover
            if len(below) and self.join_all(below) != p:
                out.append(p)
        return out

    def complement(self) -> np.ndarray | None:
        """Complement table if the lattice is Boolean, else ``None``."""
        comp = np.full(self.n, -1, dtype=np.int64)
        for a in range(self.n):
            for b in range(self.n):
                if self.meet[a, b] == self.bottom and self.join[a, b] == self.top:
                    comp[a] = b
                    break
            if comp[a] < 0:
                return None
        return _readonly(comp)

    def is_boolean(self) -> bool:
        return self.complement() is not None

    def key(self) -> tuple:
        """Labelled identity (not an isomorphism invariant)."""
        return (self.names, self.leq.tobytes())

    def __repr__(self) -> str:
        return f"FiniteBDL(n={self.n}, names={list(self.names)})"


def _derive_bound(leq: np.ndarray, i: int, j: int, lower: bool) -> int | None:
    if lower:
        cand = leq[:, i] & leq[:, j]
        idx = np.flatnonzero(cand)
        # greatest lower bound: a candidate above all candidates
        best = [c for c in idx if leq[idx, c].all()]
    else:
        cand = leq[i, :] & leq[j, :]
        idx = np.flatnonzero(cand)
        best = [c for c in idx if leq[c, idx].all()]
    return int(best[0]) if best else None


def validate_bdl(names: Sequence[str] | None, leq) -> FiniteBDL:
    """Validate a candidate (element list, order matrix) and derive meet/join tables.

    Raises NotAPoset, Unbounded, NotALattice or NotDistributive naming the
    first violating tuple in index order.
    """
    leq = np.array(leq, dtype=bool)
    if leq.ndim != 2 or leq.shape[0] != leq.shape[1]:
        raise ValueError("order matrix must be square")
    n = leq.shape[0]
    if n < 1:
        raise ValueError("a lattice needs at least one element")
    if names is None:
        names = [str(i) for i in range(n)]
    names = tuple(str(x) for x in names)
    if len(names) != n:
        raise ValueError("element list and matrix disagree in size")
    if len(set(names)) != n:
        raise ValueError("duplicate element names")

    for i in range(n):
        if not leq[i, i]:
            raise NotAPoset(f"not reflexive at {names[i]}", (names[i],))
    for i, j in combinations(range(n), 2):
        if leq[i, j] and leq[j, i]:
            raise NotAPoset(f"not antisymmetric at ({names[i]}, {names[j]})", (names[i], names[j]))
    viol = leq[:, :, None] & leq[None, :, :] & ~leq[:, None, :]
    if viol.any():
        i, j, k = (int(v) for v in np.argwhere(viol)[0])
        raise NotAPoset(
            f"not transitive: {names[i]} <= {names[j]} <= {names[k]}", (names[i], names[j], names[k])
        )

    bottoms = [i for i in range(n) if leq[i, :].all()]
    tops = [i for i in range(n) if leq[:, i].all()]
    if not bottoms:
        raise Unbounded("no least element", ("bottom",))
    if not tops:
        raise Unbounded("no greatest element", ("top",))

    meet = np.zeros((n, n), dtype=np.int64)
    join = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i, n):
            m = _derive_bound(leq, i, j, lower=True)
            if m is None:
                raise NotALattice(f"no meet for ({names[i]}, {names[j]})", (names[i], names[j]))
            jn = _derive_bound(leq, i, j, lower=False)
            if jn is None:
                raise NotALattice(f"no join for ({names[i]}, {names[j]})", (names[i], names[j]))
            meet[i, j] = meet[j, i] = m
            join[i, j] = join[j, i] = jn

    x = np.arange(n)[:, None, None]
    y = np.arange(n)[None, :, None]
    z = np.arange(n)[None, None, :]
    lhs = meet[x, join[y, z]]
    rhs = join[meet[x, y], meet[x, z]]
    bad = lhs != rhs
    if bad.any():
        i, j, k = (int(v) for v in np.argwhere(bad)[0])
        raise NotDistributive(
            f"{names[i]} ^ ({names[j]} v {names[k]}) != ({names[i]} ^ {names[j]}) v ({names[i]} ^ {names[k]})",
            (names[i], names[j], names[k]),
        )

    up = tuple(mask_of(np.flatnonzero(leq[a, :])) for a in range(n))
    return FiniteBDL(
        names=names,
        leq=_readonly(leq),
        meet=_readonly(meet),
        join=_readonly(join),
        bottom=bottoms[0],
        top=tops[0],
        _up=up,
    )


def bdl_from_pairs(names: Sequence[str], pairs: Iterable[tuple[str, str]]) -> FiniteBDL:
    """Lattice from covering (or any) pairs ``a <= b``; the reflexive-transitive closure is taken."""
    names = list(names)
    idx = {nm: i for i, nm in enumerate(names)}
    rel = np.zeros((len(names), len(names)), dtype=bool)
    for a, b in pairs:
        if a not in idx or b not in idx:
            raise ValueError(f"pair ({a}, {b}) mentions an unknown element")
        rel[idx[a], idx[b]] = True
    return validate_bdl(names, reflexive_transitive_closure(rel))


def chain(n: int, names: Sequence[str] | None = None) -> FiniteBDL:
    if names is None:
        names = ["0", "a", "1"] if n == 3 else [str(i) for i in range(n)]
    leq = np.triu(np.ones((n, n), dtype=bool))
    return validate_bdl(names, leq)


def diamond() -> FiniteBDL:
    """The four-element Boolean lattice ``0 < a, b < 1`` with ``a``, ``b`` incomparable."""
    return bdl_from_pairs(["0", "a", "b", "1"], [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")])


def pentagon_matrix() -> tuple[list[str], np.ndarray]:
    names = ["0", "a", "b", "c", "1"]
    idx = {x: i for i, x in enumerate(names)}
    rel = np.zeros((5, 5), dtype=bool)
    for a, b in [("0", "a"), ("a", "b"), ("0", "c"), ("b", "1"), ("c", "1")]:
        rel[idx[a], idx[b]] = True
    return names, reflexive_transitive_closure(rel)


def lattice_of_sets(masks: Sequence[int], names: Sequence[str] | None = None) -> FiniteBDL:
    """Lattice of a family of sets closed under union and intersection, ordered by inclusion.

    The family must contain its least and greatest members; elements keep the
    order of ``masks``.
    """
    masks = list(masks)
    n = len(masks)
    pos = {m: i for i, m in enumerate(masks)}
    leq = np.array([[(a & ~b) == 0 for b in masks] for a in masks], dtype=bool)
    meet = np.array([[pos[a & b] for b in masks] for a in masks], dtype=np.int64)
    join = np.array([[pos[a | b] for b in masks] for a in masks], dtype=np.int64)
    if names is None:
        names = [str(i) for i in range(n)]
    lo = min(range(n), key=lambda i: bin(masks[i]).count("1"))
    hi = max(range(n), key=lambda i: bin(masks[i]).count("1"))
    up = tuple(mask_of(np.flatnonzero(leq[a, :])) for a in range(n))
    return FiniteBDL(tuple(names), _readonly(leq), _readonly(meet), _readonly(join), lo, hi, up)


def boolean_lattice(k: int, atom_names: Sequence[str] | None = None) -> FiniteBDL:
    """Powerset of ``k`` atoms, elements ordered by bitset value."""
    if atom_names is None:
        atom_names = [f"p{i}" for i in range(k)]
    masks = list(range(1 << k))
    names = ["{" + ",".join(atom_names[i] for i in bits(m)) + "}" for m in masks]
    return lattice_of_sets(masks, names)


# -- filters ---------------------------------------------------------------


def is_filter(L: FiniteBDL, mask: int) -> bool:
    if not (mask >> L.top) & 1:
        return False
    members = bits(mask)
    for a in members:
        if L.up(a) & ~mask:
            return False
    for a, b in combinations(members, 2):
        if not (mask >> int(L.meet[a, b])) & 1:
            return False
    return True


def is_prime_filter(L: FiniteBDL, mask: int) -> bool:
    if not is_filter(L, mask) or (mask >> L.bottom) & 1:
        return False
    for a in range(L.n):
        for b in range(a, L.n):
            if (mask >> int(L.join[a, b])) & 1 and not ((mask >> a) & 1 or (mask >> b) & 1):
                return False
    return True


def all_filters(L: FiniteBDL) -> list[int]:
    """All filters, as bitsets in ascending order; in a finite lattice these are the ``[a)``."""
    return sorted({L.up(a) for a in range(L.n)})


def prime_filters(L: FiniteBDL) -> list[int]:
    """Prime filters in ascending bitset order.

    Computed by testing primality of every principal filter and cross-checked
    against the join-irreducible description ``P = [p)``.
    """
    direct = sorted(m for m in all_filters(L) if is_prime_filter(L, m))
    via_ji = sorted(L.up(p) for p in L.join_irreducibles())
    if direct != via_ji:
        raise RuntimeError("prime filters disagree with join-irreducible generators")
    return direct


def generator(L: FiniteBDL, filt: int) -> int:
    """The least element of a (principal) filter."""
    return L.meet_all(bits(filt))

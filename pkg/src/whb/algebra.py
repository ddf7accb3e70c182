"""Lattices with a strict implication (->) and a weak difference (<-).

Axioms are stored as term pairs under stable ids; inequalities ``s <= t``
are kept as ``s & t = s``.  :func:`classify` evaluates every family once and
derives variety labels from their defining family lists.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .lattice import FiniteBDL, _readonly, bits, mask_of
from .terms import (
    ONE,
    ZERO,
    EquationReport,
    Term,
    UninterpretedSymbol,
    batch_holds,
    check_equation,
    leq,
    var,
)


class NotAHomomorphism(ValueError):
    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True, eq=False)
class ArrowAlgebra:
    lattice: FiniteBDL
    imp: np.ndarray  # x -> y, row = x
    dif: np.ndarray  # x <- y, row = x
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.lattice.n

    @property
    def names(self) -> tuple[str, ...]:
        return self.lattice.names

    @property
    def to(self) -> np.ndarray:
        return self.imp

    @cached_property
    def _neg(self) -> np.ndarray | None:
        return self.lattice.complement()

    def table(self, symbol: str):
        L = self.lattice
        if symbol == "and":
            return L.meet
        if symbol == "or":
            return L.join
        if symbol == "to":
            return self.imp
        if symbol == "from":
            return self.dif
        if symbol == "0":
            return L.bottom
        if symbol == "1":
            return L.top
        if symbol == "not" and self._neg is not None:
            return self._neg
        raise UninterpretedSymbol(symbol)

    def key(self) -> tuple:
        return (self.lattice.key(), self.imp.tobytes(), self.dif.tobytes())

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"ArrowAlgebra{label}(n={self.n})"


def make_algebra(L: FiniteBDL, imp, dif, name: str = "") -> ArrowAlgebra:
    """Wrap integer tables, checking they are total ``n x n`` tables over the carrier."""
    out = []
    for label, t in (("->", imp), ("<-", dif)):
        a = np.array(t, dtype=np.int64)
        if a.shape != (L.n, L.n):
            raise ValueError(f"{label} table has shape {a.shape}, expected {(L.n, L.n)}")
        if a.size and (a.min() < 0 or a.max() >= L.n):
            raise ValueError(f"{label} table mentions an index outside 0..{L.n - 1}")
        out.append(_readonly(a))
    return ArrowAlgebra(L, out[0], out[1], name)


def algebra_from_names(L: FiniteBDL, imp_rows: Sequence[Sequence[str]], dif_rows: Sequence[Sequence[str]], name: str = "") -> ArrowAlgebra:
    tables = []
    for label, rows in (("->", imp_rows), ("<-", dif_rows)):
        if len(rows) != L.n or any(len(r) != L.n for r in rows):
            raise ValueError(f"{label} table must be {L.n} x {L.n}")
        tables.append([[L.index(str(x)) for x in row] for row in rows])
    return make_algebra(L, tables[0], tables[1], name)


# -- axioms ----------------------------------------------------------------

x, y, z = var("x"), var("y"), var("z")

AXIOMS: dict[str, tuple[Term, Term]] = {
    "wh1": (x >> x, ONE),
    "wh2": (x >> (y & z), (x >> y) & (x >> z)),
    "wh3": ((x | y) >> z, (x >> z) & (y >> z)),
    "wh4": leq((x >> y) & (y >> z), x >> z),
    "wd1": (x << x, ZERO),
    "wd2": ((x | y) << z, (x << z) | (y << z)),
    "wd3": (x << (y & z), (x << y) | (x << z)),
    "wd4": leq(x << z, (x << y) | (y << z)),
    "r": leq(x & (x >> y), y),
    "t": leq(x >> y, z >> (x >> y)),
    "b": leq(x, ONE >> x),
    "rstar": leq(x, y | (x << y)),
    "tstar": leq((x << y) << z, x << y),
    "bstar": leq(x << ZERO, x),
    "e1": leq(x & ((x >> y) << ZERO), y),
    "e2": leq(x, y | (ONE >> (x << y))),
}

FAMILIES: dict[str, tuple[str, ...]] = {
    "WH": ("wh1", "wh2", "wh3", "wh4"),
    "WD": ("wd1", "wd2", "wd3", "wd4"),
    "R": ("r",),
    "T": ("t",),
    "B": ("b",),
    "Rstar": ("rstar",),
    "Tstar": ("tstar",),
    "Bstar": ("bstar",),
    "E1": ("e1",),
    "E2": ("e2",),
}

# label -> defining families; TBA-reduct adds the Boolean-carrier condition below
VARIETIES: dict[str, tuple[str, ...]] = {
    "WH": ("WH",),
    "WD": ("WD",),
    "DWH": ("WH", "WD"),
    "WHB": ("WH", "WD", "E1", "E2"),
    "RWH": ("WH", "R"),
    "TWH": ("WH", "T"),
    "SRL": ("WH", "R", "T"),
    "Basic": ("WH", "B"),
    "Heyting": ("WH", "B", "R"),
    "RWD": ("WD", "Rstar"),
    "TWD": ("WD", "Tstar"),
    "SRL*": ("WD", "Rstar", "Tstar"),
    "Basic*": ("WD", "Bstar"),
    "coHeyting": ("WD", "Bstar", "Rstar"),
    "HB": ("WH", "B", "R", "WD", "Bstar", "Rstar"),
    "BWHB": ("WH", "WD", "E1", "E2", "B", "Bstar"),
    "TBA-reduct": ("WH", "WD", "E1", "E2"),
}

# (smaller, larger): every member of the first variety lies in the second
INCLUSIONS: tuple[tuple[str, str], ...] = (
    ("Heyting", "SRL"),
    ("Heyting", "Basic"),
    ("Basic", "TWH"),
    ("SRL", "TWH"),
    ("SRL", "RWH"),
    ("RWH", "WH"),
    ("TWH", "WH"),
    ("coHeyting", "SRL*"),
    ("coHeyting", "Basic*"),
    ("Basic*", "TWD"),
    ("SRL*", "TWD"),
    ("SRL*", "RWD"),
    ("RWD", "WD"),
    ("TWD", "WD"),
    ("DWH", "WH"),
    ("DWH", "WD"),
    ("WHB", "DWH"),
    ("HB", "Heyting"),
    ("HB", "coHeyting"),
    ("HB", "WHB"),
    ("BWHB", "WHB"),
    ("BWHB", "Basic"),
    ("BWHB", "Basic*"),
    ("TBA-reduct", "WHB"),
)


def check_axiom(alg, axiom_id: str) -> EquationReport:
    lhs, rhs = AXIOMS[axiom_id]
    return check_equation(lhs, rhs, alg, axiom_id)


def check_axiom_family(alg, family: str) -> list[EquationReport]:
    if family not in FAMILIES:
        raise KeyError(f"unknown family {family!r}; expected one of {sorted(FAMILIES)}")
    return [check_axiom(alg, a) for a in FAMILIES[family]]


def family_holds(alg, family: str) -> bool:
    cache = getattr(alg, "_cache", None)
    if cache is not None and ("family", family) in cache:
        return cache[("family", family)]
    ok = all(r.holds for r in check_axiom_family(alg, family))
    if cache is not None:
        cache[("family", family)] = ok
    return ok


def tense_operators(alg: ArrowAlgebra) -> tuple[np.ndarray, np.ndarray] | None:
    """``G(x) = 1 -> x`` and ``H(x) = ~(~x <- 0)``; ``None`` unless the lattice is Boolean."""
    neg = alg.lattice.complement()
    if neg is None:
        return None
    L = alg.lattice
    Gt = np.array([alg.imp[L.top, a] for a in range(alg.n)], dtype=np.int64)
    Ht = np.array([neg[alg.dif[neg[a], L.bottom]] for a in range(alg.n)], dtype=np.int64)
    return Gt, Ht


def tba_reduct_violation(alg: ArrowAlgebra) -> str | None:
    """Why a Boolean-carrier algebra is not the reduct of a tense algebra, or ``None``.

    The candidate tense operators are ``G(x) = 1 -> x`` and ``H(x) = ~(~x <- 0)``;
    they must be normal meet-preserving operators forming the adjoint pairs
    ``P -| G`` and ``F -| H``, and must give back both arrows.
    """
    ops = tense_operators(alg)
    if ops is None:
        return "lattice is not Boolean"
    Gt, Ht = ops
    L = alg.lattice
    neg = L.complement()
    Pt = neg[Ht[neg]]
    Ft = neg[Gt[neg]]
    n = alg.n
    if Gt[L.top] != L.top or Ht[L.top] != L.top:
        return "G(1) or H(1) differs from 1"
    for a in range(n):
        for b in range(n):
            if Gt[L.meet[a, b]] != L.meet[Gt[a], Gt[b]]:
                return f"G does not preserve meets at ({L.names[a]}, {L.names[b]})"
            if Ht[L.meet[a, b]] != L.meet[Ht[a], Ht[b]]:
                return f"H does not preserve meets at ({L.names[a]}, {L.names[b]})"
            if bool(L.leq[Pt[a], b]) != bool(L.leq[a, Gt[b]]):
                return f"P -| G fails at ({L.names[a]}, {L.names[b]})"
            if bool(L.leq[Ft[a], b]) != bool(L.leq[a, Ht[b]]):
                return f"F -| H fails at ({L.names[a]}, {L.names[b]})"
            if alg.imp[a, b] != Gt[L.join[neg[a], b]]:
                return f"x -> y differs from G(~x | y) at ({L.names[a]}, {L.names[b]})"
            if alg.dif[a, b] != Pt[L.meet[a, neg[b]]]:
                return f"x <- y differs from P(x & ~y) at ({L.names[a]}, {L.names[b]})"
    return None


def classify(alg: ArrowAlgebra) -> frozenset[str]:
    holds = {fam: family_holds(alg, fam) for fam in FAMILIES}
    labels = {lab for lab, fams in VARIETIES.items() if all(holds[f] for f in fams)}
    if "TBA-reduct" in labels and tba_reduct_violation(alg) is not None:
        labels.discard("TBA-reduct")
    for small, big in INCLUSIONS:
        if small in labels and big not in labels:
            raise RuntimeError(f"classification inconsistent: {small} without {big} on {alg!r}")
    return frozenset(labels)


def ordered_labels(labels: Iterable[str]) -> list[str]:
    order = list(VARIETIES)
    return sorted(labels, key=order.index)


@dataclass(frozen=True, eq=False)
class AlgebraBatch:
    """Many arrow algebras on one lattice, tables stacked along a leading axis."""

    lattice: FiniteBDL
    imp: np.ndarray  # (size, n, n)
    dif: np.ndarray

    @property
    def n(self) -> int:
        return self.lattice.n

    @property
    def size(self) -> int:
        return len(self.imp)

    def __len__(self) -> int:
        return self.size

    def table(self, symbol: str):
        if symbol == "to":
            return self.imp, True
        if symbol == "from":
            return self.dif, True
        return _lattice_table(self.lattice, symbol), False

    def algebra(self, i: int, name: str = "") -> ArrowAlgebra:
        return make_algebra(self.lattice, self.imp[i], self.dif[i], name)

    def algebras(self) -> list[ArrowAlgebra]:
        return [self.algebra(i) for i in range(self.size)]

    def select(self, mask: np.ndarray) -> "AlgebraBatch":
        return AlgebraBatch(self.lattice, self.imp[mask], self.dif[mask])


def _lattice_table(L: FiniteBDL, symbol: str):
    if symbol == "and":
        return L.meet
    if symbol == "or":
        return L.join
    if symbol == "0":
        return L.bottom
    if symbol == "1":
        return L.top
    if symbol == "not":
        neg = L.complement()
        if neg is not None:
            return neg
    raise UninterpretedSymbol(symbol)


def batch_axiom_holds(batch: AlgebraBatch, axiom_id: str) -> np.ndarray:
    lhs, rhs = AXIOMS[axiom_id]
    return batch_holds(lhs, rhs, batch)


def batch_family_holds(batch: AlgebraBatch, family: str) -> np.ndarray:
    out = np.ones(batch.size, dtype=bool)
    for a in FAMILIES[family]:
        out &= batch_axiom_holds(batch, a)
    return out


def batch_in_variety(batch: AlgebraBatch, label: str) -> np.ndarray:
    """Membership of every batch entry in a variety (TBA-reduct is decided one by one)."""
    out = np.ones(batch.size, dtype=bool)
    for fam in VARIETIES[label]:
        out &= batch_family_holds(batch, fam)
    if label == "TBA-reduct":
        for i in np.flatnonzero(out):
            out[i] = tba_reduct_violation(batch.algebra(int(i))) is None
    return out


# -- homomorphisms and subalgebras -------------------------------------------


def hom_violations(A: ArrowAlgebra, B: ArrowAlgebra, h: Sequence[int], ops=("and", "or", "to", "from")) -> list[tuple]:
    """Every ``(op, a, b)`` at which ``h`` fails to commute, plus constant failures."""
    h = np.asarray(h, dtype=np.int64)
    out: list[tuple] = []
    if h[A.lattice.bottom] != B.lattice.bottom:
        out.append(("0",))
    if h[A.lattice.top] != B.lattice.top:
        out.append(("1",))
    for op in ops:
        ta, tb = A.table(op), B.table(op)
        bad = h[ta] != tb[h[:, None], h[None, :]]
        for a, b in zip(*np.nonzero(bad)):
            out.append((op, int(a), int(b)))
    return out


def is_homomorphism(A: ArrowAlgebra, B: ArrowAlgebra, h: Sequence[int]) -> bool:
    return len(h) == A.n and not hom_violations(A, B, h)


def is_subuniverse(A: ArrowAlgebra, mask: int) -> bool:
    members = np.array(bits(mask), dtype=np.int64)
    if not (mask >> A.lattice.bottom) & 1 or not (mask >> A.lattice.top) & 1:
        return False
    inside = np.zeros(A.n, dtype=bool)
    inside[members] = True
    for op in ("and", "or", "to", "from"):
        t = A.table(op)[np.ix_(members, members)]
        if not inside[t].all():
            return False
    return True


def subuniverses(A: ArrowAlgebra) -> list[int]:
    """All subuniverses as bitsets, ascending; brute force over subsets containing 0 and 1."""
    L = A.lattice
    fixed = (1 << L.bottom) | (1 << L.top)
    free = [i for i in range(A.n) if not (fixed >> i) & 1]
    out = []
    for sub in range(1 << len(free)):
        m = fixed | mask_of(free[j] for j in range(len(free)) if (sub >> j) & 1)
        if is_subuniverse(A, m):
            out.append(m)
    return sorted(out)


def subalgebra(A: ArrowAlgebra, mask: int) -> tuple[ArrowAlgebra, list[int]]:
    """The subalgebra on ``mask`` and its inclusion map (new index -> old index)."""
    if not is_subuniverse(A, mask):
        raise ValueError("subset is not closed under the operations")
    from .lattice import validate_bdl

    idx = bits(mask)
    L = A.lattice
    sub = validate_bdl([L.names[i] for i in idx], L.leq[np.ix_(idx, idx)])
    pos = {old: new for new, old in enumerate(idx)}
    imp = [[pos[int(A.imp[a, b])] for b in idx] for a in idx]
    dif = [[pos[int(A.dif[a, b])] for b in idx] for a in idx]
    return make_algebra(sub, imp, dif, A.name), idx

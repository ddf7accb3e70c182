"""Finite frames ``(X, <=, R, S)``, their conditions, and complex algebras of upsets.

Subsets of points are bitsets.  A missing relation is treated as empty, so a
pure WH-frame gets ``<-`` constantly 0 and a pure WD-frame gets ``->``
constantly 1 in its complex algebra.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

import numpy as np

from .algebra import AlgebraBatch, ArrowAlgebra, make_algebra
from .lattice import _readonly, bits, lattice_of_sets, mask_of, reflexive_transitive_closure

KINDS = ("WH", "WD", "DWH", "WHB")


class FrameConditionViolated(ValueError):
    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(message)
        self.witness = witness


class NotAMorphism(ValueError):
    def __init__(self, message: str, violations=()):
        super().__init__(message)
        self.violations = list(violations)


@dataclass(frozen=True, eq=False)
class Frame:
    leq: np.ndarray
    R: np.ndarray | None = None
    S: np.ndarray | None = None
    labels: tuple[str, ...] = ()
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def m(self) -> int:
        return self.leq.shape[0]

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else str(i)

    def rel(self, which: str) -> np.ndarray:
        r = self.R if which == "R" else self.S
        if r is None:
            return np.zeros((self.m, self.m), dtype=bool)
        return r

    def succ(self, which: str) -> list[int]:
        """Successor sets ``R(x)`` (or ``S(x)``) as bitsets."""
        key = ("succ", which)
        if key not in self._cache:
            r = self.rel(which)
            self._cache[key] = [mask_of(np.flatnonzero(r[i])) for i in range(self.m)]
        return self._cache[key]

    def up(self) -> list[int]:
        if "up" not in self._cache:
            self._cache["up"] = [mask_of(np.flatnonzero(self.leq[i])) for i in range(self.m)]
        return self._cache["up"]

    def is_upset(self, U: int) -> bool:
        return all(not (self.up()[i] & ~U) for i in bits(U))

    def upsets(self) -> list[int]:
        """All upsets of the poset, ascending bitset order."""
        if "upsets" not in self._cache:
            self._cache["upsets"] = [U for U in range(1 << self.m) if self.is_upset(U)]
        return self._cache["upsets"]

    def key(self) -> tuple:
        return tuple(None if a is None else a.tobytes() for a in (self.leq, self.R, self.S)) + (self.m,)


def make_frame(leq, R=None, S=None, labels: Sequence[str] = ()) -> Frame:
    leq = np.array(leq, dtype=bool)
    m = leq.shape[0]
    if leq.shape != (m, m):
        raise ValueError("order matrix must be square")
    rels = []
    for name, r in (("R", R), ("S", S)):
        if r is None:
            rels.append(None)
            continue
        r = np.array(r, dtype=bool).reshape(m, m) if m else np.zeros((0, 0), dtype=bool)
        rels.append(_readonly(r))
    if labels and len(labels) != m:
        raise ValueError("one label per point")
    return Frame(_readonly(leq), rels[0], rels[1], tuple(labels))


def frame_from_pairs(m: int, leq_pairs=(), R_pairs=None, S_pairs=None, labels=()) -> Frame:
    rel = np.zeros((m, m), dtype=bool)
    for i, j in leq_pairs:
        rel[i, j] = True
    out = []
    for pairs in (R_pairs, S_pairs):
        if pairs is None:
            out.append(None)
            continue
        r = np.zeros((m, m), dtype=bool)
        for i, j in pairs:
            r[i, j] = True
        out.append(r)
    return make_frame(reflexive_transitive_closure(rel), out[0], out[1], labels)


# -- conditions -------------------------------------------------------------


@dataclass(frozen=True)
class ConditionResult:
    name: str
    holds: bool
    witness: tuple | None = None


@dataclass(frozen=True)
class FrameReport:
    kind: str
    results: tuple[ConditionResult, ...]

    @property
    def ok(self) -> bool:
        return all(r.holds for r in self.results)

    def failures(self) -> list[ConditionResult]:
        return [r for r in self.results if not r.holds]


def _first(mask: np.ndarray) -> tuple | None:
    idx = np.argwhere(mask)
    return tuple(int(v) for v in idx[0]) if len(idx) else None


def poset_violation(leq: np.ndarray) -> tuple | None:
    m = leq.shape[0]
    w = _first(~np.diag(leq)[:, None] & np.eye(m, dtype=bool))
    if w:
        return ("reflexive", w[0])
    w = _first(leq & leq.T & ~np.eye(m, dtype=bool))
    if w:
        return ("antisymmetric",) + w
    w = _first(leq[:, :, None] & leq[None, :, :] & ~leq[:, None, :])
    if w:
        return ("transitive",) + w
    return None


def wh_violation(f: Frame) -> tuple | None:
    """First ``(x, y, z)`` with ``x <= y``, ``y R z`` but not ``x R z``."""
    R = f.rel("R")
    return _first(f.leq[:, :, None] & R[None, :, :] & ~R[:, None, :])


def wd_violation(f: Frame) -> tuple | None:
    """First ``(x, y, z)`` with ``y <= x``, ``y S z`` but not ``x S z``."""
    S = f.rel("S")
    return _first(f.leq.T[:, :, None] & S[None, :, :] & ~S[:, None, :])


def converse_violation(f: Frame) -> tuple | None:
    """First ``(x, y)`` where ``x S y`` and ``y R x`` disagree."""
    return _first(f.rel("S") != f.rel("R").T)


def check_frame(f: Frame, kind: str) -> FrameReport:
    if kind not in KINDS:
        raise ValueError(f"unknown frame kind {kind!r}")
    res = []
    pv = poset_violation(f.leq)
    res.append(ConditionResult("partial order", pv is None, pv))
    if kind in ("WH", "DWH", "WHB"):
        w = wh_violation(f)
        res.append(ConditionResult("<= ; R in R", w is None, w))
    if kind in ("WD", "DWH", "WHB"):
        w = wd_violation(f)
        res.append(ConditionResult(">= ; S in S", w is None, w))
    if kind == "WHB":
        w = converse_violation(f)
        res.append(ConditionResult("S = R^-1", w is None, w))
    return FrameReport(kind, tuple(res))


# relational counterparts of the axioms; each returns the first violation or None
def relational_violation(f: Frame, condition: str) -> tuple | None:
    """Relational conditions matching axioms r, t, b, rstar, tstar, bstar, e1, e2."""
    R, S, leq = f.rel("R"), f.rel("S"), f.leq
    if condition in ("r", "rstar"):
        r = R if condition == "r" else S
        bad = np.flatnonzero(~np.diag(r))
        return (int(bad[0]),) if len(bad) else None
    if condition in ("t", "tstar"):
        r = R if condition == "t" else S
        return _first(r[:, :, None] & r[None, :, :] & ~r[:, None, :])
    if condition == "b":
        return _first(R & ~leq)
    if condition == "bstar":
        return _first(S & ~leq.T)
    if condition == "e1":
        return _first(S & ~R.T)
    if condition == "e2":
        return _first(R & ~S.T)
    raise KeyError(condition)


def batch_relational_holds(leq: np.ndarray, R: np.ndarray, S: np.ndarray, condition: str) -> np.ndarray:
    """``relational_violation(...) is None`` for stacks ``R``, ``S`` of shape ``(B, m, m)``."""
    if condition in ("r", "rstar"):
        r = R if condition == "r" else S
        return np.diagonal(r, axis1=1, axis2=2).all(axis=1)
    if condition in ("t", "tstar"):
        r = R if condition == "t" else S
        two = (r.astype(np.float32) @ r.astype(np.float32)) > 0
        return ~(two & ~r).any(axis=(1, 2))
    if condition == "b":
        return ~(R & ~leq[None]).any(axis=(1, 2))
    if condition == "bstar":
        return ~(S & ~leq.T[None]).any(axis=(1, 2))
    if condition == "e1":
        return ~(S & ~R.transpose(0, 2, 1)).any(axis=(1, 2))
    if condition == "e2":
        return ~(R & ~S.transpose(0, 2, 1)).any(axis=(1, 2))
    raise KeyError(condition)


RELATIONAL_NAMES = {
    "r": "R reflexive",
    "t": "R transitive",
    "b": "R within <=",
    "rstar": "S reflexive",
    "tstar": "S transitive",
    "bstar": "S within >=",
    "e1": "S within R^-1",
    "e2": "R within S^-1",
}


# -- complex algebra -----------------------------------------------------------


def box_imp(f: Frame, U: int, V: int) -> int:
    """``U =>_R V = {x : R(x) & U <= V}``."""
    bad = U & ~V
    return mask_of(i for i, s in enumerate(f.succ("R")) if not (s & bad))


def diamond_dif(f: Frame, U: int, V: int) -> int:
    """``U <=_S V = {x : S(x) & (U \\ V) != 0}``."""
    diff = U & ~V
    return mask_of(i for i, s in enumerate(f.succ("S")) if s & diff)


def set_name(f: Frame, U: int) -> str:
    return "{" + ",".join(f.label(i) for i in bits(U)) + "}"


def complex_algebra(f: Frame, kind: str | None = None) -> ArrowAlgebra:
    """Algebra of all upsets (ascending bitset order) with ``=>_R`` and ``<=_S``."""
    if kind is not None:
        rep = check_frame(f, kind)
        if not rep.ok:
            bad = rep.failures()[0]
            raise FrameConditionViolated(f"frame fails {bad.name} at {bad.witness}", bad.witness or ())
    pv = poset_violation(f.leq)
    if pv is not None:
        raise FrameConditionViolated(f"order is not a partial order ({pv[0]})", pv[1:])
    ups = f.upsets()
    pos = {U: i for i, U in enumerate(ups)}
    k = len(ups)
    imp = np.zeros((k, k), dtype=np.int64)
    dif = np.zeros((k, k), dtype=np.int64)
    for (i, U), (j, V) in product(enumerate(ups), repeat=2):
        for table, val, op in ((imp, box_imp(f, U, V), "=>_R"), (dif, diamond_dif(f, U, V), "<=_S")):
            if val not in pos:
                raise FrameConditionViolated(
                    f"{set_name(f, U)} {op} {set_name(f, V)} is not an upset", (U, V)
                )
            table[i, j] = pos[val]
    L = lattice_of_sets(ups, [set_name(f, U) for U in ups])
    return make_algebra(L, imp, dif, "complex")


def complex_batch(leq, Rs: np.ndarray | None, Ss: np.ndarray | None, labels: Sequence[str] = ()) -> AlgebraBatch:
    """Complex algebras of many frames sharing one order, tables stacked.

    ``Rs`` and ``Ss`` are ``(B, m, m)`` boolean stacks; ``None`` stands for
    empty relations.  The frame conditions are not checked here, but a result
    that is not an upset raises FrameConditionViolated.
    """
    base = make_frame(leq, labels=labels)
    m = base.m
    ups = np.array(base.upsets(), dtype=np.int64)
    k = len(ups)
    pos = np.full(1 << m, -1, dtype=np.int64)
    pos[ups] = np.arange(k)
    B = len(Rs) if Rs is not None else (len(Ss) if Ss is not None else 1)
    weights = np.int64(1) << np.arange(m, dtype=np.int64)

    def rows(rel):
        if rel is None:
            return np.zeros((B, m), dtype=np.int64)
        return (np.asarray(rel, dtype=np.int64) * weights[None, None, :]).sum(axis=2)

    bad = ups[:, None] & ~ups[None, :]  # U minus V
    hit = (rows(Rs)[:, None, None, :] & bad[None, :, :, None]) != 0  # (B, U, V, x)
    imp_sets = ((~hit) * weights).sum(axis=3)
    hit = (rows(Ss)[:, None, None, :] & bad[None, :, :, None]) != 0
    dif_sets = (hit * weights).sum(axis=3)
    imp, dif = pos[imp_sets], pos[dif_sets]
    for table, op in ((imp, "=>_R"), (dif, "<=_S")):
        if (table < 0).any():
            b, i, j = (int(v) for v in np.argwhere(table < 0)[0])
            raise FrameConditionViolated(
                f"frame {b}: {set_name(base, int(ups[i]))} {op} {set_name(base, int(ups[j]))} is not an upset",
                (b, int(ups[i]), int(ups[j])),
            )
    L = lattice_of_sets([int(U) for U in ups], [set_name(base, int(U)) for U in ups])
    return AlgebraBatch(L, imp, dif)


# -- morphisms ---------------------------------------------------------------


@dataclass(frozen=True)
class SpaceMorphism:
    source: Frame
    target: Frame
    map: tuple[int, ...]


@dataclass(frozen=True)
class MorphismReport:
    violations: tuple[tuple, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def check_morphism(mor: SpaceMorphism) -> MorphismReport:
    """Monotonicity plus forth and back conditions for R and S; every violation is listed.

    ``("back-R", x, z)`` means ``f(x) R z`` but no ``R``-successor of ``x`` maps to ``z``.
    """
    A, B, f = mor.source, mor.target, np.asarray(mor.map, dtype=np.int64)
    out: list[tuple] = []
    if len(f) != A.m or (len(f) and (f.min() < 0 or f.max() >= B.m)):
        return MorphismReport((("not a total map into the target",),))
    for x, y in zip(*np.nonzero(A.leq & ~B.leq[f[:, None], f[None, :]])):
        out.append(("monotone", int(x), int(y)))
    for which in ("R", "S"):
        ra, rb = A.rel(which), B.rel(which)
        for x, y in zip(*np.nonzero(ra & ~rb[f[:, None], f[None, :]])):
            out.append((f"forth-{which}", int(x), int(y)))
        for x in range(A.m):
            image = {int(f[y]) for y in np.flatnonzero(ra[x])}
            for z in np.flatnonzero(rb[f[x]]):
                if int(z) not in image:
                    out.append((f"back-{which}", x, int(z)))
    return MorphismReport(tuple(out))


def preimage(f: Sequence[int], U: int) -> int:
    return mask_of(i for i, fi in enumerate(f) if (U >> fi) & 1)

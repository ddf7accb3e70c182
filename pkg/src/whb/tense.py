"""Tense algebras on powersets and the free tense extension of a WHB-algebra.

A :class:`TenseAlgebra` has ``m`` atoms; its elements are the ``2**m``
bitmasks and element ``U`` has index ``U``.  ``G`` and ``H`` are stored as
tables so that deliberately broken operators can be built for negative tests;
``P = ~H~`` and ``F = ~G~``.  The arrow symbols are interpreted through
``x -> y = G(~x | y)`` and ``x <- y = P(x & ~y)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Sequence

import numpy as np

from .algebra import ArrowAlgebra, NotAHomomorphism, classify, hom_violations, make_algebra
from .congruence import Congruence, _canon, all_congruences, closed_of_theta, generate
from .errors import NotWHB, SizeBound
from .frames import Frame
from .lattice import _readonly, bits, boolean_lattice, mask_of
from .spectrum import canonical_frame, points, stone_map
from .terms import ONE, ZERO, G, H, Term, UninterpretedSymbol, check_equation, var

TENSE_OPS = ("and", "or", "not", "G", "H")
UNIVERSAL_BOUND = 16


@dataclass(frozen=True, eq=False)
class TenseAlgebra:
    m: int
    G: tuple[int, ...]
    H: tuple[int, ...]
    labels: tuple[str, ...] = ()
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return 1 << self.m

    @property
    def full(self) -> int:
        return self.n - 1

    @cached_property
    def _arrays(self) -> dict[str, np.ndarray]:
        idx = np.arange(self.n, dtype=np.int64)
        full = self.full
        g = np.asarray(self.G, dtype=np.int64)
        h = np.asarray(self.H, dtype=np.int64)
        neg = full ^ idx
        meet = idx[:, None] & idx[None, :]
        join = idx[:, None] | idx[None, :]
        P = full ^ h[neg]
        F = full ^ g[neg]
        out = {
            "and": meet,
            "or": join,
            "not": neg,
            "G": g,
            "H": h,
            "P": P,
            "F": F,
            "to": g[(full ^ idx)[:, None] | idx[None, :]],
            "from": P[idx[:, None] & (full ^ idx)[None, :]],
        }
        for a in out.values():
            a.setflags(write=False)
        return out

    def table(self, symbol: str):
        if symbol == "0":
            return 0
        if symbol == "1":
            return self.full
        try:
            return self._arrays[symbol]
        except KeyError:
            raise UninterpretedSymbol(symbol) from None

    def op(self, symbol: str, U: int) -> int:
        return int(self._arrays[symbol][U])

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else str(i)

    def set_name(self, U: int) -> str:
        return "{" + ",".join(self.label(i) for i in bits(U)) + "}"


def tense_from_relations(R: np.ndarray, S: np.ndarray, labels: Sequence[str] = ()) -> TenseAlgebra:
    """``G(U) = {x : R(x) <= U}``, ``P(U) = {x : S(x) meets U}``, ``H = ~P~``."""
    m = R.shape[0]
    full = (1 << m) - 1
    rs = [mask_of(np.flatnonzero(R[i])) for i in range(m)]
    ss = [mask_of(np.flatnonzero(S[i])) for i in range(m)]
    Gt, Ht = [], []
    for U in range(1 << m):
        Gt.append(mask_of(i for i in range(m) if not (rs[i] & ~U)))
        comp = full ^ U
        Ht.append(full ^ mask_of(i for i in range(m) if ss[i] & comp))
    return TenseAlgebra(m, tuple(Gt), tuple(Ht), tuple(labels))


def tense_extension(alg: ArrowAlgebra) -> TenseAlgebra:
    """``T(A)``: all subsets of the prime filters with the operators of the canonical frame."""
    if "tense" in alg._cache:
        return alg._cache["tense"]
    if "WHB" not in classify(alg):
        raise NotWHB("the tense extension needs a WHB-algebra")
    cf = canonical_frame(alg)
    t = tense_from_relations(cf.R, cf.S, cf.frame.labels)
    alg._cache["tense"] = t
    return t


# -- checks ----------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    name: str
    holds: bool
    witness: tuple | None = None


def _first_bad(mask: np.ndarray) -> tuple | None:
    idx = np.argwhere(mask)
    return tuple(int(v) for v in idx[0]) if len(idx) else None


def _subset(a, b):
    """Elementwise ``a <= b`` for bitmask arrays."""
    return (a & ~b) == 0


def check_tense_axioms(t: TenseAlgebra) -> list[Check]:
    A = t._arrays
    Gt, Ht, Pt, Ft = A["G"], A["H"], A["P"], A["F"]
    U = np.arange(t.n, dtype=np.int64)
    meet = A["and"]
    out = []

    def add(name, ok_mask):
        w = _first_bad(~ok_mask)
        out.append(Check(name, w is None, w))

    add("G(1) = 1", np.array([Gt[t.full] == t.full]))
    add("H(1) = 1", np.array([Ht[t.full] == t.full]))
    add("G(U & V) = G(U) & G(V)", Gt[meet] == (Gt[:, None] & Gt[None, :]))
    add("H(U & V) = H(U) & H(V)", Ht[meet] == (Ht[:, None] & Ht[None, :]))
    add("FH(U) <= U", _subset(Ft[Ht], U))
    add("U <= HF(U)", _subset(U, Ht[Ft]))
    add("PG(U) <= U", _subset(Pt[Gt], U))
    add("U <= GP(U)", _subset(U, Gt[Pt]))
    add("F(U) <= V iff U <= H(V)", _subset(Ft[:, None], U[None, :]) == _subset(U[:, None], Ht[None, :]))
    add("P(U) <= V iff U <= G(V)", _subset(Pt[:, None], U[None, :]) == _subset(U[:, None], Gt[None, :]))
    return out


def s4_check(t: TenseAlgebra) -> list[Check]:
    A = t._arrays
    Gt, Ht = A["G"], A["H"]
    U = np.arange(t.n, dtype=np.int64)
    out = []
    for name, ok in (
        ("G(U) <= U", _subset(Gt, U)),
        ("G(U) <= GG(U)", _subset(Gt, Gt[Gt])),
        ("H(U) <= U", _subset(Ht, U)),
        ("H(U) <= HH(U)", _subset(Ht, Ht[Ht])),
    ):
        w = _first_bad(~ok)
        out.append(Check(name, w is None, w))
    return out


def d_table(t: TenseAlgebra) -> np.ndarray:
    """``d(U) = U & G(U) & H(U)``."""
    A = t._arrays
    U = np.arange(t.n, dtype=np.int64)
    return U & A["G"] & A["H"]


def d_cyclicity(t: TenseAlgebra, n_max: int) -> int | None:
    """Least ``n <= n_max`` with ``d^(n+1) = d^n`` on every subset, else ``None``."""
    d = d_table(t)
    cur = np.arange(t.n, dtype=np.int64)
    for n in range(n_max + 1):
        nxt = d[cur]
        if np.array_equal(nxt, cur):
            return n
        cur = nxt
    return None


def d_power(term: Term, n: int) -> Term:
    out = term
    for _ in range(n):
        out = out & G(out) & H(out)
    return out


def pi_equation(n: int) -> tuple[Term, Term]:
    """``d^n(x) <= d^(n+1)(x)`` written in the arrow language (``d`` only ever shrinks)."""
    from .terms import leq, translate_term

    x = var("x")
    lhs, rhs = leq(d_power(x, n), d_power(x, n + 1))
    return translate_term(lhs, "Lt->L'"), translate_term(rhs, "Lt->L'")


# -- the M functor and the unit ------------------------------------------------


def m_reduct(t: TenseAlgebra) -> ArrowAlgebra:
    """Powerset Boolean algebra with ``x -> y = G(~x | y)`` and ``x <- y = P(x & ~y)``."""
    if "m" in t._cache:
        return t._cache["m"]
    L = boolean_lattice(t.m, [t.label(i) for i in range(t.m)])
    out = make_algebra(L, t.table("to"), t.table("from"), "M")
    t._cache["m"] = out
    return out


def unit(alg: ArrowAlgebra) -> list[int]:
    """``sigma_A`` as a map into ``M(T(A))`` (element index = point bitmask)."""
    return stone_map(alg)


@dataclass(frozen=True)
class UnitReport:
    injective: bool
    hom_violations: tuple
    frame_isomorphic: bool  # canonical frame of M(T(A)) matches (X(A), =, R_A, S_A)

    @property
    def ok(self) -> bool:
        return self.injective and not self.hom_violations and self.frame_isomorphic


def unit_report(alg: ArrowAlgebra) -> UnitReport:
    t = tense_extension(alg)
    M = m_reduct(t)
    sigma = unit(alg)
    bad = hom_violations(alg, M, sigma)
    # prime filters of a powerset algebra are the principal ultrafilters [{i})
    cfm = canonical_frame(M)
    order = [cfm.filters.index(M.lattice.up(1 << i)) for i in range(t.m)]
    cf = canonical_frame(alg)
    ix = np.ix_(order, order)
    iso = (
        len(order) == len(cfm.filters)
        and np.array_equal(cfm.leq[ix], np.eye(t.m, dtype=bool))
        and np.array_equal(cfm.R[ix], cf.R)
        and np.array_equal(cfm.S[ix], cf.S)
    )
    return UnitReport(len(set(sigma)) == alg.n, tuple(bad), bool(iso))


def recovered_operators(t: TenseAlgebra) -> tuple[bool, bool]:
    """Whether ``G(x) = 1 -> x`` and ``H(x) = ~(~x <- 0)`` hold in ``M(t)``."""
    M = m_reduct(t)
    full = t.full
    g_ok = all(int(M.imp[full, U]) == t.G[U] for U in range(t.n))
    h_ok = all(full ^ int(M.dif[full ^ U, 0]) == t.H[U] for U in range(t.n))
    return g_ok, h_ok


# -- congruences and tense filters ---------------------------------------------


def theta_Y(t: TenseAlgebra, Y: int) -> Congruence:
    """Boolean congruence ``U ~ V`` iff ``U & Y = V & Y``."""
    return Congruence(tuple(U & Y for U in range(t.n)))


def tba_congruence_sets(t: TenseAlgebra) -> list[int]:
    """Atom sets ``Y`` whose Boolean congruence is compatible with ``G`` and ``H``.

    Compatibility is tested by flipping one atom outside ``Y`` at a time, which
    generates every pair of the congruence.
    """
    idx = np.arange(t.n, dtype=np.int64)
    Gt, Ht = t._arrays["G"], t._arrays["H"]
    out = []
    for Y in range(t.n):
        ok = True
        for i in range(t.m):
            if (Y >> i) & 1:
                continue
            flip = idx ^ (1 << i)
            if np.any((Gt[flip] & Y) != (Gt & Y)) or np.any((Ht[flip] & Y) != (Ht & Y)):
                ok = False
                break
        if ok:
            out.append(Y)
    return out


def tba_congruences(t: TenseAlgebra) -> list[Congruence]:
    return [theta_Y(t, Y) for Y in tba_congruence_sets(t)]


def tense_filters(t: TenseAlgebra) -> list[int]:
    """Generators ``c`` of the tense filters ``[c)``: every member ``U`` has ``c <= G(U), H(U)``."""
    out = []
    for c in range(t.n):
        ok = True
        for U in range(t.n):
            if c & ~U:
                continue
            if c & ~t.G[U] or c & ~t.H[U]:
                ok = False
                break
        if ok:
            out.append(c)
    return out


def phi(alg: ArrowAlgebra, theta: Congruence) -> Congruence:
    """Transfer ``Con(A) -> Con(T(A))`` through the dual closed set of ``theta``."""
    return theta_Y(tense_extension(alg), closed_of_theta(alg, theta))


@dataclass(frozen=True)
class TransferReport:
    con_A: int
    con_T: int
    tense_filters: int
    phi_bijective: bool
    principal_failures: tuple[tuple[int, int], ...]

    @property
    def ok(self) -> bool:
        return (
            self.con_A == self.con_T == self.tense_filters
            and self.phi_bijective
            and not self.principal_failures
        )


def congruence_transfer(alg: ArrowAlgebra, principal: bool = True) -> TransferReport:
    """Compare ``Con(A)``, ``Con(T(A))`` and tense filters; check principal transfer on all pairs.

    ``Cg(sigma a, sigma b)`` in ``T(A)`` is generated directly by closing under
    the Boolean and tense operations, independently of the closed-set route.
    """
    t = tense_extension(alg)
    cs = all_congruences(alg)
    ct = tba_congruences(t)
    tf = tense_filters(t)
    images = {phi(alg, c) for c in cs}
    bij = images == set(ct) and len(images) == len(cs)
    fails = []
    if principal:
        from .congruence import principal_congruence

        sigma = stone_map(alg)
        for a in range(alg.n):
            for b in range(a + 1, alg.n):
                lhs = phi(alg, principal_congruence(alg, a, b))
                rhs = generate(t, [(sigma[a], sigma[b])], TENSE_OPS)
                if lhs != rhs:
                    fails.append((a, b))
    return TransferReport(len(cs), len(ct), len(tf), bij, tuple(fails))


# -- universal property -------------------------------------------------------


def tense_hom_violation(T1: TenseAlgebra, T2: TenseAlgebra, psi: Sequence[int], ops=TENSE_OPS) -> tuple | None:
    psi = np.asarray(psi, dtype=np.int64)
    if psi[0] != 0 or psi[T1.full] != T2.full:
        return ("constants",)
    for op in ops:
        a, b = T1.table(op), T2.table(op)
        if a.ndim == 1:
            bad = psi[a] != b[psi]
        else:
            bad = psi[a] != b[psi[:, None], psi[None, :]]
        w = _first_bad(bad)
        if w is not None:
            return (op,) + w
    return None


def _atom_map_hom(t_src: TenseAlgebra, t_dst: TenseAlgebra, f: Sequence[int]) -> np.ndarray:
    """Boolean homomorphism ``U -> {i : f(i) in U}`` induced by an atom map of ``t_dst`` into ``t_src``."""
    out = np.zeros(t_src.n, dtype=np.int64)
    for U in range(t_src.n):
        out[U] = mask_of(i for i in range(t_dst.m) if (U >> f[i]) & 1)
    return out


@dataclass(frozen=True)
class UniversalReport:
    psi: tuple[int, ...]
    psi_is_tense_hom: bool
    factorizes: bool  # h = psi . sigma
    scanned: bool
    count_full: int | None = None  # tense homs through which h factors
    count_factor_only: int | None = None  # Boolean homs with h = psi . sigma
    count_tense_only: int | None = None  # tense homs ignoring the factorization
    count_boolean: int | None = None  # all Boolean homs

    @property
    def ok(self) -> bool:
        return self.psi_is_tense_hom and self.factorizes and (not self.scanned or self.count_full == 1)


def check_universal_property(alg: ArrowAlgebra, B: TenseAlgebra, h: Sequence[int], scan: bool = True) -> UniversalReport:
    """Build ``psi : T(A) -> B`` with ``h = psi . sigma``; optionally count all candidates.

    ``psi(U)`` collects the atoms ``i`` of ``B`` whose prime filter
    ``{a : i in h(a)}`` of ``A`` lies in ``U``.  The scan runs over every map
    from atoms of ``B`` to prime filters of ``A`` (each yields a Boolean
    homomorphism) and needs ``|B| <= 16``.
    """
    M = m_reduct(B)
    bad = hom_violations(alg, M, h)
    if len(h) != alg.n or bad:
        raise NotAHomomorphism(f"not a homomorphism into M(B): {bad[:1]}", tuple(bad))
    t = tense_extension(alg)
    pts = points(alg)
    pos = {P: j for j, P in enumerate(pts)}
    f = []
    for i in range(B.m):
        P = mask_of(a for a in range(alg.n) if (h[a] >> i) & 1)
        f.append(pos[P])
    psi = _atom_map_hom(t, B, f)
    sigma = stone_map(alg)
    factor = all(int(psi[sigma[a]]) == int(h[a]) for a in range(alg.n))
    tense_ok = tense_hom_violation(t, B, psi) is None
    if not scan:
        return UniversalReport(tuple(int(v) for v in psi), tense_ok, factor, False)
    if B.n > UNIVERSAL_BOUND:
        raise SizeBound(f"uniqueness scan is limited to tense algebras with {UNIVERSAL_BOUND} elements")
    counts = [0, 0, 0, 0]
    for g in product(range(t.m), repeat=B.m):
        cand = _atom_map_hom(t, B, g)
        fac = all(int(cand[sigma[a]]) == int(h[a]) for a in range(alg.n))
        th = tense_hom_violation(t, B, cand) is None
        counts[0] += fac and th
        counts[1] += fac
        counts[2] += th
        counts[3] += 1
    return UniversalReport(tuple(int(v) for v in psi), tense_ok, factor, True, *counts)

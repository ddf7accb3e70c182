"""Exhaustive generation of small lattices, arrow algebras and frames up to isomorphism.

Canonical forms: points are first split into classes by colour refinement on
the order (an isomorphism invariant), then every permutation inside the
classes is tried and the lexicographically least order matrix wins.  The
permutations reaching the minimum are exactly the automorphisms composed
with one canonical labelling, which is what algebra and frame keys need.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product
from typing import Iterator, Sequence

import numpy as np

from .algebra import AXIOMS, FAMILIES, VARIETIES, AlgebraBatch, ArrowAlgebra, batch_family_holds, batch_in_variety, make_algebra
from .errors import SizeBound
from .frames import Frame, make_frame
from .lattice import FiniteBDL, bits, lattice_of_sets, mask_of, validate_bdl

MAX_LATTICE = 10
TABLE_ROUTE_MAX = 7
MAX_FRAME_POINTS = {"WH": 4, "WD": 4, "WHB": 4, "DWH": 3}
PAIR_LIMIT = 400_000


# -- canonical forms ------------------------------------------------------------


def refine_colours(leq: np.ndarray) -> list[int]:
    """Stable colouring of points from below/above counts, refined by neighbour colours."""
    n = leq.shape[0]
    strict = leq & ~np.eye(n, dtype=bool)
    col = [(int(strict[:, i].sum()), int(strict[i].sum())) for i in range(n)]
    while True:
        sig = [
            (
                col[i],
                tuple(sorted(col[j] for j in np.flatnonzero(strict[:, i]))),
                tuple(sorted(col[j] for j in np.flatnonzero(strict[i]))),
            )
            for i in range(n)
        ]
        order = sorted(set(sig))
        new = [order.index(s) for s in sig]
        if len(set(new)) == len(set(col)):
            return new
        col = [(c,) for c in new]


def canonical_form(leq: np.ndarray, extra=None) -> tuple[bytes, list[tuple[int, ...]]]:
    """Least relabelled order matrix and all permutations attaining it.

    A permutation ``p`` lists old indices in new order; the relabelled
    matrix is ``leq[p][:, p]``.  ``extra`` optionally supplies additional
    matrices compared after the order.
    """
    n = leq.shape[0]
    if n == 0:
        return b"", [()]
    col = refine_colours(leq)
    classes = [sorted(i for i in range(n) if col[i] == c) for c in sorted(set(col))]
    best: bytes | None = None
    winners: list[tuple[int, ...]] = []
    for choice in product(*(permutations(c) for c in classes)):
        p = tuple(i for blk in choice for i in blk)
        ix = np.ix_(p, p)
        code = np.packbits(leq[ix]).tobytes()
        if extra is not None:
            code += b"".join(np.packbits(m[ix]).tobytes() for m in extra)
        if best is None or code < best:
            best, winners = code, [p]
        elif code == best:
            winners.append(p)
    return best, winners


def element_names(n: int) -> list[str]:
    if n == 1:
        return ["0"]
    mids = []
    for i in range(n - 2):
        mids.append(chr(ord("a") + i) if i < 26 else f"e{i}")
    return ["0"] + mids + ["1"]


def canonical_lattice(L: FiniteBDL) -> tuple[FiniteBDL, list[tuple[int, ...]]]:
    """Canonically labelled copy of ``L`` and the relabellings onto it (one per automorphism)."""
    code, perms = canonical_form(L.leq)
    p = perms[0]
    C = validate_bdl(element_names(L.n), L.leq[np.ix_(p, p)])
    return C, perms


def lattice_code(L: FiniteBDL) -> bytes:
    return canonical_form(L.leq)[0]


# -- posets and lattices -------------------------------------------------------


def downsets(leq: np.ndarray) -> list[int]:
    n = leq.shape[0]
    below = [mask_of(np.flatnonzero(leq[:, i])) for i in range(n)]
    return [D for D in range(1 << n) if all(not (below[i] & ~D) for i in bits(D))]


def _extend_labelled(leq: np.ndarray) -> Iterator[np.ndarray]:
    """Posets on one more point whose restriction to the old points is ``leq``."""
    n = leq.shape[0]
    downs = downsets(leq)
    full = (1 << n) - 1
    ups = [full ^ D for D in downs]
    for D in downs:
        for U in ups:
            if D & U:
                continue
            # every d in D must lie below every u in U already
            if any(not leq[d, u] for d in bits(D) for u in bits(U)):
                continue
            new = np.zeros((n + 1, n + 1), dtype=bool)
            new[:n, :n] = leq
            new[n, n] = True
            for d in bits(D):
                new[d, n] = True
            for u in bits(U):
                new[n, u] = True
            yield new


@lru_cache(maxsize=None)
def labelled_posets(m: int) -> tuple[bytes, ...]:
    """All labelled posets on ``m`` points, packed row-major."""
    if m == 0:
        return (b"",)
    out = []
    for code in labelled_posets(m - 1):
        leq = _unpack(code, m - 1)
        out.extend(np.packbits(x).tobytes() for x in _extend_labelled(leq))
    return tuple(out)


def _unpack(code: bytes, m: int) -> np.ndarray:
    if m == 0:
        return np.zeros((0, 0), dtype=bool)
    return np.unpackbits(np.frombuffer(code, dtype=np.uint8))[: m * m].reshape(m, m).astype(bool)


@lru_cache(maxsize=None)
def posets(m: int) -> tuple[np.ndarray, ...]:
    """Posets on ``m`` points up to isomorphism, canonically labelled, in canonical-code order."""
    if m > 6:
        raise SizeBound("poset enumeration by points is limited to 6 points")
    seen: dict[bytes, np.ndarray] = {}
    for code in labelled_posets(m):
        leq = _unpack(code, m)
        c, perms = canonical_form(leq)
        if c not in seen:
            p = perms[0]
            seen[c] = leq[np.ix_(p, p)]
    return tuple(seen[c] for c in sorted(seen))


def posets_with_few_downsets(limit: int) -> list[np.ndarray]:
    """Posets (up to isomorphism) with at most ``limit`` downsets, grown by adding maximal points."""
    level = {b"": np.zeros((0, 0), dtype=bool)}
    out = dict(level)
    while level:
        nxt: dict[bytes, np.ndarray] = {}
        for leq in level.values():
            n = leq.shape[0]
            for D in downsets(leq):
                new = np.zeros((n + 1, n + 1), dtype=bool)
                new[:n, :n] = leq
                new[n, n] = True
                for d in bits(D):
                    new[d, n] = True
                if len(downsets(new)) > limit:
                    continue
                c, perms = canonical_form(new)
                if c not in nxt:
                    p = perms[0]
                    nxt[c] = new[np.ix_(p, p)]
        out.update(nxt)
        level = nxt
    return list(out.values())


def _lattice_from_poset(leq: np.ndarray) -> FiniteBDL:
    L = lattice_of_sets(downsets(leq))
    return canonical_lattice(L)[0]


def _bdls_by_downsets(max_size: int) -> list[FiniteBDL]:
    return [_lattice_from_poset(p) for p in posets_with_few_downsets(max_size)]


def _bdls_by_tables(max_size: int) -> list[FiniteBDL]:
    """Bounded posets built from labelled middle posets, kept when they are distributive lattices."""
    out = []
    for n in range(1, max_size + 1):
        if n == 1:
            out.append(validate_bdl(["0"], np.ones((1, 1), dtype=bool)))
            continue
        k = n - 2
        for code in labelled_posets(k):
            mid = _unpack(code, k)
            leq = np.zeros((n, n), dtype=bool)
            leq[0, :] = True
            leq[:, n - 1] = True
            leq[1 : n - 1, 1 : n - 1] = mid
            try:
                L = validate_bdl([str(i) for i in range(n)], leq)
            except ValueError:
                continue
            out.append(canonical_lattice(L)[0])
    return out


def _dedupe_lattices(ls: Sequence[FiniteBDL]) -> list[FiniteBDL]:
    seen: dict[tuple, FiniteBDL] = {}
    for L in ls:
        k = (L.n, lattice_code(L))
        seen.setdefault(k, L)
    return [seen[k] for k in sorted(seen)]


@lru_cache(maxsize=None)
def _bdls(max_size: int, route: str) -> tuple[FiniteBDL, ...]:
    if route == "downsets":
        ls = _bdls_by_downsets(max_size)
    elif route == "tables":
        if max_size > TABLE_ROUTE_MAX:
            raise SizeBound(f"the table route is limited to {TABLE_ROUTE_MAX} elements")
        ls = _bdls_by_tables(max_size)
    else:
        raise ValueError(f"unknown route {route!r}")
    return tuple(_dedupe_lattices(ls))


def enumerate_bdls(max_size: int, route: str = "downsets") -> list[FiniteBDL]:
    """One canonically labelled lattice per isomorphism class, ordered by (size, canonical code)."""
    if max_size > MAX_LATTICE:
        raise SizeBound(f"lattice enumeration is limited to {MAX_LATTICE} elements")
    if max_size < 1:
        return []
    return list(_bdls(max_size, route))


# -- arrow tables --------------------------------------------------------------


def meet_irreducibles(L: FiniteBDL) -> list[int]:
    out = []
    for m in range(L.n):
        if m == L.top:
            continue
        above = [x for x in range(L.n) if L.leq[m, x] and x != m]
        if L.meet_all(above) != m:
            out.append(m)
    return out


def _monotone_maps(L: FiniteBDL, domain: list[int], fixed: dict[int, int], antitone: bool) -> list[dict[int, int]]:
    """Maps ``domain -> L`` that are monotone (or antitone) for the order of ``L``."""
    order = sorted(domain, key=lambda x: int(L.leq[:, x].sum()))
    out: list[dict[int, int]] = []
    cur: dict[int, int] = {}

    def ok(x: int, v: int) -> bool:
        for y, w in cur.items():
            if L.leq[y, x]:
                if antitone and not L.leq[v, w]:
                    return False
                if not antitone and not L.leq[w, v]:
                    return False
            if L.leq[x, y]:
                if antitone and not L.leq[w, v]:
                    return False
                if not antitone and not L.leq[v, w]:
                    return False
        return True

    def rec(i: int):
        if i == len(order):
            out.append(dict(cur))
            return
        x = order[i]
        values = [fixed[x]] if x in fixed else range(L.n)
        for v in values:
            if ok(x, v):
                cur[x] = v
                rec(i + 1)
                del cur[x]

    rec(0)
    return out


def imp_rows(L: FiniteBDL, p: int) -> np.ndarray:
    """Rows ``f = (p -> .)`` allowed by the WH axioms: meet-preserving, ``f(x) = 1`` for ``x >= p``."""
    mis = meet_irreducibles(L)
    fixed = {m: L.top for m in mis if L.leq[p, m]}
    rows = []
    for mp in _monotone_maps(L, mis, fixed, antitone=False):
        rows.append([L.meet_all(mp[m] for m in mis if L.leq[x, m]) for x in range(L.n)])
    return np.array(rows, dtype=np.int64).reshape(len(rows), L.n)


def dif_rows(L: FiniteBDL, p: int) -> np.ndarray:
    """Rows ``g = (p <- .)`` allowed by the WD axioms: meets to joins, ``g(x) = 0`` for ``x >= p``."""
    mis = meet_irreducibles(L)
    fixed = {m: L.bottom for m in mis if L.leq[p, m]}
    rows = []
    for mp in _monotone_maps(L, mis, fixed, antitone=True):
        rows.append([L.join_all(mp[m] for m in mis if L.leq[x, m]) for x in range(L.n)])
    return np.array(rows, dtype=np.int64).reshape(len(rows), L.n)


def _ji_order(L: FiniteBDL) -> list[int]:
    return sorted(L.join_irreducibles(), key=lambda p: (int(L.leq[:, p].sum()), p))


def _search_tables(L: FiniteBDL, dual: bool) -> np.ndarray:
    """All ``->`` tables satisfying WH (``dual=False``) or ``<-`` tables satisfying WD.

    Rows of join-irreducibles are chosen one at a time; every other row is
    the meet (join) of the rows of the join-irreducibles below it.  After each
    choice the transitivity axiom is checked on the rows fixed so far; the
    last join-irreducible is handled for all its candidate rows at once.
    Returns an array of shape ``(count, n, n)``.
    """
    n = L.n
    jis = _ji_order(L)
    if not jis:
        return np.full((1, n, n), L.bottom if dual else L.top, dtype=np.int64)
    below = {x: [p for p in jis if L.leq[p, x]] for x in range(n)}
    cands = {p: (dif_rows if dual else imp_rows)(L, p) for p in jis}
    comb = L.join if dual else L.meet
    neutral = L.bottom if dual else L.top
    leq = L.leq
    out: list[np.ndarray] = []
    rows: dict[int, np.ndarray] = {}

    def tables(last: int | None, batch: np.ndarray | None, known: list[int]) -> np.ndarray:
        """Rows of ``known`` elements, shape ``(B, len(known), n)``."""
        B = 1 if batch is None else len(batch)
        T = np.full((B, len(known), n), neutral, dtype=np.int64)
        for k, x in enumerate(known):
            for p in below[x]:
                r = batch if p == last else rows[p][None, :]
                T[:, k, :] = comb[T[:, k, :], r]
        return T

    def violates(T: np.ndarray, known: list[int]) -> np.ndarray:
        """Transitivity failures per batch entry for rows ``T`` of elements ``known``."""
        kn = np.asarray(known)
        A = T[:, :, kn]  # A[b, i, j] = (x_i op x_j)
        if dual:
            # x <- z <= (x <- y) | (y <- z)
            rhs = comb[A[:, :, :, None], T[:, None, :, :]]
            bad = ~leq[T[:, :, None, :], rhs]
        else:
            # (x -> y) & (y -> z) <= x -> z
            lhs = comb[A[:, :, :, None], T[:, None, :, :]]
            bad = ~leq[lhs, T[:, :, None, :]]
        return bad.reshape(len(T), -1).any(axis=1)

    def known_after(i: int) -> list[int]:
        done = set(jis[: i + 1])
        return [x for x in range(n) if all(p in done for p in below[x])]

    knowns = [known_after(i) for i in range(len(jis))]

    lower = {p: [q for q in jis if q != p and leq[q, p]] for p in jis}

    def allowed(p: int) -> np.ndarray:
        # (x | y) op z splits over the join, so the row of p is bounded by rows of q < p
        c = cands[p]
        ok = np.ones(len(c), dtype=bool)
        for q in lower[p]:
            ok &= (leq[rows[q][None, :], c] if dual else leq[c, rows[q][None, :]]).all(axis=1)
        return c[ok]

    def rec(i: int):
        p = jis[i]
        if i == len(jis) - 1:
            T = tables(p, allowed(p), knowns[i])
            ok = ~violates(T, knowns[i])
            out.append(T[ok])
            return
        for r in allowed(p):
            rows[p] = r
            if not violates(tables(None, None, knowns[i]), knowns[i])[0]:
                rec(i + 1)
            del rows[p]

    rec(0)
    res = np.concatenate(out) if out else np.zeros((0, n, n), dtype=np.int64)
    # the last level lists every element, in index order
    return res


def wh_tables(L: FiniteBDL) -> np.ndarray:
    """All ``->`` tables on ``L`` satisfying the WH axioms, shape ``(count, n, n)``."""
    return _search_tables(L, dual=False)


def wd_tables(L: FiniteBDL) -> np.ndarray:
    """All ``<-`` tables on ``L`` satisfying the WD axioms, shape ``(count, n, n)``."""
    return _search_tables(L, dual=True)


CHUNK = 1 << 22


def _e1_ok(L: FiniteBDL, imps: np.ndarray, cols: np.ndarray) -> np.ndarray:
    """``ok[k, c]``: E1 holds for ``->`` table ``k`` when ``u <- 0`` is column ``c``."""
    n = L.n
    x = np.arange(n)[None, None, :, None]
    y = np.arange(n)[None, None, None, :]
    out = np.zeros((len(imps), len(cols)), dtype=bool)
    step = max(1, CHUNK // max(1, len(cols) * n * n))
    for s in range(0, len(imps), step):
        blk = imps[s : s + step]
        # x & ((x -> y) <- 0) <= y
        lhs = L.meet[x, cols[:, blk]]
        out[s : s + step] = L.leq[lhs, y].all(axis=(2, 3)).T
    return out


def _e2_ok(L: FiniteBDL, difs: np.ndarray, rows1: np.ndarray) -> np.ndarray:
    """``ok[k, r]``: E2 holds for ``<-`` table ``k`` when ``1 -> u`` is row ``r``."""
    n = L.n
    x = np.arange(n)[None, None, :, None]
    y = np.arange(n)[None, None, None, :]
    out = np.zeros((len(difs), len(rows1)), dtype=bool)
    step = max(1, CHUNK // max(1, len(rows1) * n * n))
    for s in range(0, len(difs), step):
        blk = difs[s : s + step]
        # x <= y | (1 -> (x <- y))
        rhs = L.join[y, rows1[:, blk]]
        out[s : s + step] = L.leq[x, rhs].all(axis=(2, 3)).T
    return out


def whb_pairs(L: FiniteBDL, imps: np.ndarray, difs: np.ndarray) -> list[tuple[int, int]]:
    """Index pairs ``(i, j)`` with ``imps[i]``, ``difs[j]`` satisfying E1 and E2.

    E1 sees ``<-`` only through the column ``u <- 0`` and E2 sees ``->`` only
    through the row ``1 -> u``, so both are checked once per distinct
    column/row and pairs are assembled group by group.
    """
    if not len(imps) or not len(difs):
        return []
    cols, col_of = np.unique(difs[:, :, L.bottom], axis=0, return_inverse=True)
    rws, row_of = np.unique(imps[:, L.top, :], axis=0, return_inverse=True)
    col_of = np.asarray(col_of).reshape(-1)
    row_of = np.asarray(row_of).reshape(-1)
    e1 = _e1_ok(L, imps, cols)
    e2 = _e2_ok(L, difs, rws)
    by_col = [np.flatnonzero(col_of == c) for c in range(len(cols))]
    out: list[tuple[int, int]] = []
    for r in range(len(rws)):
        imps_r = np.flatnonzero(row_of == r)
        for c in range(len(cols)):
            ii = imps_r[e1[imps_r, c]]
            if not len(ii):
                continue
            jj = by_col[c][e2[by_col[c], r]]
            out.extend((int(i), int(j)) for i in ii for j in jj)
    return sorted(out)


def canonical_batch(L: FiniteBDL, imps: np.ndarray, difs: np.ndarray) -> AlgebraBatch:
    """Relabel onto the canonical lattice, keep one algebra per isomorphism class, sort by tables."""
    code, perms = canonical_form(L.leq)
    C = validate_bdl(element_names(L.n), L.leq[np.ix_(perms[0], perms[0])])
    n = L.n
    B = len(imps)
    best_keys: list[bytes] | None = None
    best_imp = best_dif = None
    for p in perms:
        p = np.asarray(p, dtype=np.int64)
        inv = np.empty_like(p)
        inv[p] = np.arange(n)
        I = inv[imps[:, p][:, :, p]]
        D = inv[difs[:, p][:, :, p]]
        flat = np.concatenate([I.reshape(B, -1), D.reshape(B, -1)], axis=1).astype(np.int8)
        keys = [row.tobytes() for row in flat]
        if best_keys is None:
            best_keys, best_imp, best_dif = keys, I.copy(), D.copy()
            continue
        for b in range(B):
            if keys[b] < best_keys[b]:
                best_keys[b] = keys[b]
                best_imp[b] = I[b]
                best_dif[b] = D[b]
    if best_keys is None or B == 0:
        return AlgebraBatch(C, np.zeros((0, n, n), np.int64), np.zeros((0, n, n), np.int64))
    first: dict[bytes, int] = {}
    for b, k in enumerate(best_keys):
        first.setdefault(k, b)
    order = [first[k] for k in sorted(first)]
    return AlgebraBatch(C, best_imp[order], best_dif[order])


def canonical_algebra(alg: ArrowAlgebra) -> tuple[ArrowAlgebra, tuple]:
    """Isomorphic copy on the canonical lattice with least tables, and its isomorphism key."""
    batch = canonical_batch(alg.lattice, alg.imp[None], alg.dif[None])
    can = batch.algebra(0, alg.name)
    return can, algebra_key_of(can)


def algebra_key_of(can: ArrowAlgebra) -> tuple:
    """Key of an algebra already in canonical form."""
    return (can.n, lattice_code(can.lattice), can.imp.astype(np.int8).tobytes(), can.dif.astype(np.int8).tobytes())


def algebra_key(alg: ArrowAlgebra) -> tuple:
    return canonical_algebra(alg)[1]


def _search_families(target: str) -> tuple[bool, bool, bool]:
    fams = VARIETIES[target]
    return "WH" in fams, "WD" in fams, "E1" in fams


_BATCHES: dict[tuple, AlgebraBatch] = {}


def _algebra_batch(target: str, L: FiniteBDL) -> AlgebraBatch:
    key = (L.key(), target)
    if key not in _BATCHES:
        _BATCHES[key] = _search_algebras(target, L)
    return _BATCHES[key]


def _one_sided(family: str) -> str | None:
    """``"to"`` or ``"from"`` if every axiom of the family uses only that arrow."""
    syms = set()
    for a in FAMILIES[family]:
        lhs, rhs = AXIOMS[a]
        syms |= (lhs.symbols() | rhs.symbols()) & {"to", "from"}
    return syms.pop() if len(syms) == 1 else None


def _prefilter(target: str, L: FiniteBDL, imps: np.ndarray, difs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Drop tables failing a family of the target that involves one arrow only."""
    for fam in VARIETIES[target]:
        if fam in ("WH", "WD"):
            continue
        side = _one_sided(fam)
        if side == "to":
            b = AlgebraBatch(L, imps, np.broadcast_to(difs[:1], imps.shape))
            imps = imps[batch_family_holds(b, fam)]
        elif side == "from":
            b = AlgebraBatch(L, np.broadcast_to(imps[:1], difs.shape), difs)
            difs = difs[batch_family_holds(b, fam)]
    return imps, difs


def _search_algebras(target: str, L: FiniteBDL) -> AlgebraBatch:
    need_wh, need_wd, need_e = _search_families(target)
    n = L.n
    imps = wh_tables(L) if need_wh else np.full((1, n, n), L.top, dtype=np.int64)
    difs = wd_tables(L) if need_wd else np.full((1, n, n), L.bottom, dtype=np.int64)
    imps, difs = _prefilter(target, L, imps, difs)
    if need_e:
        pairs = whb_pairs(L, imps, difs)
    else:
        if len(imps) * len(difs) > PAIR_LIMIT:
            raise SizeBound(f"{len(imps)} x {len(difs)} table pairs exceed the search limit of {PAIR_LIMIT}")
        pairs = list(product(range(len(imps)), range(len(difs))))
    if pairs:
        ii, jj = (np.array(v, dtype=np.int64) for v in zip(*pairs))
    else:
        ii = jj = np.zeros(0, dtype=np.int64)
    batch = canonical_batch(L, imps[ii].reshape(-1, n, n), difs[jj].reshape(-1, n, n))
    if target not in ("WH", "WD", "DWH", "WHB"):
        batch = batch.select(batch_in_variety(batch, target))
    return batch


def enumerate_algebra_batch(L: FiniteBDL, target: str) -> AlgebraBatch:
    """All algebras on ``L`` in the target variety up to isomorphism, as stacked tables.

    Targets needing only the WH families keep ``<-`` constantly 0; targets
    needing only WD keep ``->`` constantly 1.  The result lives on the
    canonical relabelling of ``L`` and is sorted by its tables.
    """
    if target not in VARIETIES:
        raise KeyError(f"unknown variety {target!r}")
    if L.n > 8:
        raise SizeBound("arrow-table search is limited to lattices with 8 elements")
    return _algebra_batch(target, L)


def enumerate_algebras(L: FiniteBDL, target: str) -> list[ArrowAlgebra]:
    return enumerate_algebra_batch(L, target).algebras()


# -- frames --------------------------------------------------------------------


def _bit_perm_codes(m: int, perms: list[tuple[int, ...]]) -> list[np.ndarray]:
    """For each point permutation, the source bit of every target bit in an ``m*m`` code."""
    out = []
    for p in perms:
        src = np.array([p[i] * m + p[j] for i in range(m) for j in range(m)], dtype=np.int64)
        out.append(src)
    return out


def _codes_to_matrices(codes: np.ndarray, m: int) -> np.ndarray:
    shifts = np.arange(m * m, dtype=np.int64)
    return ((codes[:, None] >> shifts[None, :]) & 1).astype(bool).reshape(-1, m, m)


def _permute_codes(codes: np.ndarray, src: np.ndarray) -> np.ndarray:
    out = np.zeros_like(codes)
    for t, s in enumerate(src):
        out |= ((codes >> s) & 1) << t
    return out


def _monotone_relation_codes(leq: np.ndarray, which: str) -> np.ndarray:
    """Relation codes (bit ``i*m + j`` for ``(i, j)``) meeting the frame condition of one relation."""
    m = leq.shape[0]
    codes = np.arange(1 << (m * m), dtype=np.int64)
    mats = _codes_to_matrices(codes, m)
    # R: x <= y implies R(y) within R(x); S: y <= x implies S(y) within S(x)
    ok = np.ones(len(codes), dtype=bool)
    for x in range(m):
        for y in range(m):
            if x == y or not leq[x, y]:
                continue
            if which == "R":
                ok &= ~np.any(mats[:, y, :] & ~mats[:, x, :], axis=1)
            else:
                ok &= ~np.any(mats[:, x, :] & ~mats[:, y, :], axis=1)
    return codes[ok]


def _frame_kind_codes(leq: np.ndarray, kind: str) -> list[tuple[int, int | None, int | None]]:
    m = leq.shape[0]
    if kind == "WH":
        return [(int(c), int(c), None) for c in _monotone_relation_codes(leq, "R")]
    if kind == "WD":
        return [(int(c), None, int(c)) for c in _monotone_relation_codes(leq, "S")]
    if kind == "WHB":
        rs = _monotone_relation_codes(leq, "R")
        conv = _codes_to_matrices(rs, m).transpose(0, 2, 1)
        # S = R^-1 must satisfy the WD condition too
        ok = np.ones(len(rs), dtype=bool)
        for x in range(m):
            for y in range(m):
                if x != y and leq[x, y]:
                    ok &= ~np.any(conv[:, x, :] & ~conv[:, y, :], axis=1)
        return [(int(c), int(c), None) for c in rs[ok]]
    if kind == "DWH":
        rs = _monotone_relation_codes(leq, "R")
        ss = _monotone_relation_codes(leq, "S")
        shift = m * m
        return [(int(r) | (int(s) << shift), int(r), int(s)) for r in rs for s in ss]
    raise ValueError(f"unknown frame kind {kind!r}")


def _relation(code: int, m: int) -> np.ndarray:
    return np.array([[(code >> (i * m + j)) & 1 for j in range(m)] for i in range(m)], dtype=bool).reshape(m, m)


def enumerate_frames(max_points: int, kind: str) -> list[Frame]:
    """Frames of the kind on 1..max_points points, one per isomorphism class.

    Ordered by point count, poset canonical code, then the least relation
    code over the poset automorphisms.  WHB frames carry ``S = R^-1``.
    """
    if kind not in MAX_FRAME_POINTS:
        raise ValueError(f"unknown frame kind {kind!r}")
    if max_points > MAX_FRAME_POINTS[kind]:
        raise SizeBound(f"{kind} frame enumeration is limited to {MAX_FRAME_POINTS[kind]} points")
    return list(_frames(max_points, kind))


@lru_cache(maxsize=None)
def _frames(max_points: int, kind: str) -> tuple[Frame, ...]:
    out = []
    for m in range(1, max_points + 1):
        for leq in posets(m):
            _, autos = canonical_form(leq)
            entries = _frame_kind_codes(leq, kind)
            if not entries:
                continue
            combined = np.array([e[0] for e in entries], dtype=np.int64)
            if kind == "DWH":
                src_r = _bit_perm_codes(m, autos)
                shift = m * m
                lo = combined & ((1 << shift) - 1)
                hi = combined >> shift
                best = combined.copy()
                for s in src_r:
                    cand = _permute_codes(lo, s) | (_permute_codes(hi, s) << shift)
                    best = np.minimum(best, cand)
            else:
                best = combined.copy()
                for s in _bit_perm_codes(m, autos):
                    best = np.minimum(best, _permute_codes(combined, s))
            keep = sorted(set(int(c) for c in combined[best == combined]))
            for code in keep:
                if kind == "DWH":
                    R = _relation(code & ((1 << (m * m)) - 1), m)
                    S = _relation(code >> (m * m), m)
                elif kind == "WD":
                    R, S = None, _relation(code, m)
                else:
                    R = _relation(code, m)
                    S = R.T.copy() if kind == "WHB" else None
                out.append(make_frame(leq, R, S))
    return tuple(out)


def frame_key(f: Frame) -> tuple:
    """Isomorphism key of a frame: canonical order code plus least relation matrices."""
    code, perms = canonical_form(f.leq)
    best = None
    for p in perms:
        ix = np.ix_(p, p)
        cand = tuple(f.rel(w)[ix].tobytes() for w in ("R", "S"))
        if best is None or cand < best:
            best = cand
    return (f.m, code) + best

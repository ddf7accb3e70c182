"""The eight acceptance criteria as runnable checks.

Each ``criterion_k`` returns a CriterionResult with a one-line detail.  The
same functions back ``whb verify`` and ``tests/test_acceptance.py``.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .algebra import batch_axiom_holds, check_axiom, check_axiom_family, classify, subuniverses
from .catalog import DEFAULT_CONFIGS, build_catalog, catalog
from .congruence import (
    all_congruences,
    cep_spot_check,
    congruence_duality,
    distributivity_violation,
    permutability_violation,
)
from .enumerator import enumerate_frames
from .frames import batch_relational_holds, complex_batch
from .named import chain3_hb, chain3_trivial, diamond_example
from .spectrum import batch_relations, filter_name, points, relation_R, relation_S, stone_report
from .tense import check_tense_axioms, congruence_transfer, m_reduct, s4_check, tense_extension
from .terms import holds_at

LEMMA_IDS = ("r", "t", "b", "rstar", "tstar", "bstar", "e1", "e2")


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float
    limit: float | None = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        bound = f" (limit {self.limit:g} s)" if self.limit is not None else ""
        return f"[{status}] criterion {self.number}: {self.title} - {self.detail} [{self.seconds:.2f} s{bound}]"


def _timed(number: int, title: str, limit: float | None, body: Callable[[], tuple[bool, str]]) -> CriterionResult:
    t0 = time.perf_counter()
    ok, detail = body()
    dt = time.perf_counter() - t0
    if limit is not None and dt >= limit:
        ok = False
        detail += f"; runtime {dt:.2f} s exceeds {limit:g} s"
    return CriterionResult(number, title, ok, detail, dt, limit)


def _env(alg, **assign: str) -> dict[str, int]:
    return {v: alg.lattice.index(name) for v, name in assign.items()}


# -- 1 ---------------------------------------------------------------------------


def _examples() -> tuple[bool, str]:
    from .algebra import AXIOMS

    notes = []
    ok = True

    # (a) 3-chain with trivial arrows
    A = chain3_trivial()
    labels = classify(A)
    r = check_axiom(A, "r")
    lhs, rhs = AXIOMS["r"]
    env = _env(A, x="1", y="a")
    one, a = A.lattice.index("1"), A.lattice.index("a")
    stated = not holds_at(lhs, rhs, A, env) and A.imp[one, a] == one and not A.lattice.leq[one, a]
    part_a = "DWH" in labels and not r.holds and stated
    ok &= part_a
    notes.append(f"(a) DWH={'DWH' in labels}, R fails={not r.holds}, x:=1,y:=a fails with 1->a=1={stated}")

    # (b) diamond example
    D = diamond_example()
    wh = all(rep.holds for rep in check_axiom_family(D, "WH"))
    wd = all(rep.holds for rep in check_axiom_family(D, "WD"))
    e_stated = all(not holds_at(*AXIOMS[e], D, _env(D, x="a", y="b")) for e in ("e1", "e2"))
    e_fail = not check_axiom(D, "e1").holds and not check_axiom(D, "e2").holds
    part_b = wh and wd and e_fail and e_stated
    ok &= part_b
    notes.append(f"(b) WH={wh}, WD={wd}, E1/E2 fail={e_fail}, both fail at x:=a,y:=b={e_stated}")

    # (c) 3-chain Heyting-Brouwer algebra
    C = chain3_hb()
    pts = [filter_name(C, P) for P in points(C)]
    R, S = relation_R(C), relation_S(C)
    R_pairs = {(int(i), int(j)) for i, j in zip(*np.nonzero(R))}
    t = tense_extension(C)
    U = 1  # {P1}
    not_in_G = (U & ~t.op("G", U)) != 0
    P_escapes = (t.op("P", U) & ~U) != 0
    MT = m_reduct(t)
    mt_fails = not check_axiom(MT, "b").holds and not check_axiom(MT, "bstar").holds
    part_c = (
        pts == ["{1}", "{a,1}"]
        and R_pairs == {(0, 0), (0, 1), (1, 1)}
        and np.array_equal(S, R.T)
        and not_in_G
        and P_escapes
        and mt_fails
    )
    ok &= part_c
    literal = (t.op("G", U) & ~U) == 0
    notes.append(
        f"(c) X(A)={pts}, R_A={sorted(R_pairs)}, S_A=R_A^-1={np.array_equal(S, R.T)}, "
        f"{{P1}} not within G({{P1}})={not_in_G}, P({{P1}}) not within {{P1}}={P_escapes}, "
        f"M(T(A)) fails B and B*={mt_fails} (G({{P1}})={t.set_name(t.op('G', U))}, so G(U) <= U holds={literal})"
    )
    return ok, "; ".join(notes)


def criterion_1() -> CriterionResult:
    return _timed(1, "worked examples", 1.0, _examples)


# -- 2 ---------------------------------------------------------------------------


def _representation(max_size: int) -> tuple[bool, str]:
    cat = build_catalog(DEFAULT_CONFIGS["WHB"])
    algs = cat.algebras(max_size)
    bad = []
    for A in algs:
        rep = stone_report(A)
        if not rep.ok:
            bad.append((A.name, rep.injective, rep.violations[:1]))
    detail = f"{len(algs)} WHB-algebras <= {max_size} elements, sigma injective and preserves and/or/0/1/->/<-"
    if bad:
        detail += f"; {len(bad)} failures, first {bad[0]}"
    return not bad, detail


def criterion_2(max_size: int = 8) -> CriterionResult:
    return _timed(2, "representation", 60.0, lambda: _representation(max_size))


# -- 3 ---------------------------------------------------------------------------


def _frame_lemmas(kind: str, pts: int, conds: tuple[str, ...]) -> tuple[int, list]:
    by_order: dict[bytes, list] = {}
    for f in enumerate_frames(pts, kind):
        by_order.setdefault(f.leq.tobytes(), []).append(f)
    bad = []
    total = 0
    for fs in by_order.values():
        Rs = np.stack([f.rel("R") for f in fs])
        Ss = np.stack([f.rel("S") for f in fs])
        b = complex_batch(fs[0].leq, Rs, Ss)
        for c in conds:
            diff = np.flatnonzero(batch_axiom_holds(b, c) != batch_relational_holds(fs[0].leq, Rs, Ss, c))
            bad.extend((kind, c, fs[i]) for i in diff)
        total += len(fs)
    return total, bad


def _lemmas(max_size: int, max_points: int) -> tuple[bool, str]:
    cat = catalog("DWH")
    n_alg = 0
    bad: list = []
    for b in cat.batches(max_size):
        leq, R, S = batch_relations(b)
        for c in LEMMA_IDS:
            diff = np.flatnonzero(batch_axiom_holds(b, c) != batch_relational_holds(leq, R, S, c))
            bad.extend(("algebra", c, b.algebra(int(i))) for i in diff)
        n_alg += b.size
    frames = {}
    for kind, pts, conds in (
        ("WH", max_points, LEMMA_IDS[:3]),
        ("WD", max_points, LEMMA_IDS[3:6]),
        ("WHB", max_points, LEMMA_IDS),
        ("DWH", min(max_points, 3), LEMMA_IDS),
    ):
        total, fb = _frame_lemmas(kind, pts, conds)
        frames[f"{kind}<={pts}"] = total
        bad.extend(fb)
    detail = (
        f"{n_alg} DWH-algebras <= {max_size} elements and frames "
        + ", ".join(f"{k}: {v}" for k, v in frames.items())
        + "; R/T/B, R*/T*/B*, E1/E2 match their relational conditions"
    )
    if bad:
        detail += f"; {len(bad)} mismatches, first {bad[0][:2]}"
    return not bad, detail


def criterion_3(max_size: int = 8, max_points: int = 4) -> CriterionResult:
    return _timed(3, "correspondence lemmas", None, lambda: _lemmas(max_size, max_points))


# -- 4 ---------------------------------------------------------------------------


def _duality(max_size: int) -> tuple[bool, str]:
    algs = catalog("WHB").algebras(max_size)
    bad = []
    for A in algs:
        rep = congruence_duality(A)
        if not rep.ok:
            bad.append((A.name, rep))
    detail = f"{len(algs)} WHB-algebras <= {max_size} elements: |Con| = |DC|, Theta and its inverse are mutually inverse and order-reversing"
    if bad:
        detail += f"; {len(bad)} failures, first {bad[0]}"
    return not bad, detail


def criterion_4(max_size: int = 6) -> CriterionResult:
    return _timed(4, "congruence duality", 120.0, lambda: _duality(max_size))


# -- 5 ---------------------------------------------------------------------------


def _tense(max_size: int, principal_size: int) -> tuple[bool, str]:
    algs = catalog("WHB").algebras(max_size)
    bad = []
    pairs = 0
    for A in algs:
        t = tense_extension(A)
        failed = [c.name for c in check_tense_axioms(t) if not c.holds]
        rep = congruence_transfer(A, principal=A.n <= principal_size)
        if A.n <= principal_size:
            pairs += A.n * (A.n - 1) // 2
        if failed or not rep.ok:
            bad.append((A.name, failed, rep))
    detail = (
        f"{len(algs)} WHB-algebras <= {max_size} elements: tense axioms, adjunctions and "
        f"|Con(A)| = |Con(T(A))| = |tense filters|; principal transfer on {pairs} pairs (algebras <= {principal_size})"
    )
    if bad:
        detail += f"; {len(bad)} failures, first {bad[0]}"
    return not bad, detail


def criterion_5(max_size: int = 8, principal_size: int = 5) -> CriterionResult:
    return _timed(5, "tense extension", None, lambda: _tense(max_size, principal_size))


# -- 6 ---------------------------------------------------------------------------


def _arithmetical(max_size: int) -> tuple[bool, str]:
    algs = catalog("WHB").algebras(max_size)
    non_dist = []
    non_perm = []
    for A in algs:
        cs = all_congruences(A)
        if distributivity_violation(cs) is not None:
            non_dist.append(A)
        p = permutability_violation(cs)
        if p is not None:
            non_perm.append((A, p))
    detail = (
        f"{len(algs)} WHB-algebras <= {max_size} elements: "
        f"Con distributive on {len(algs) - len(non_dist)}, congruences permute on {len(algs) - len(non_perm)}"
    )
    if non_perm:
        A, (t1, t2) = non_perm[0]
        names = A.names
        detail += (
            f"; first non-permuting pair on {A.name} with elements {list(names)}, "
            f"-> rows {[[names[v] for v in r] for r in A.imp]}, <- rows {[[names[v] for v in r] for r in A.dif]}: "
            f"[{t1.describe(names)}] and [{t2.describe(names)}]"
        )
    if non_dist:
        detail += f"; first non-distributive Con on {non_dist[0].name}"
    return not non_dist and not non_perm, detail


def criterion_6(max_size: int = 6) -> CriterionResult:
    return _timed(6, "arithmetical consequences", None, lambda: _arithmetical(max_size))


# -- 7 ---------------------------------------------------------------------------


def _s4(max_size: int) -> tuple[bool, str]:
    algs = [A for A in catalog("WHB").algebras(max_size) if "HB" in classify(A)]
    bad = []
    for A in algs:
        failed = [c.name for c in s4_check(tense_extension(A)) if not c.holds]
        if failed:
            bad.append((A.name, failed))
    detail = f"{len(algs)} HB-algebras <= {max_size} elements: G(U) <= U, G(U) <= GG(U), H(U) <= U, H(U) <= HH(U) in T(A)"
    if bad:
        detail += f"; {len(bad)} failures, first {bad[0]}"
    return not bad, detail


def criterion_7(max_size: int = 8) -> CriterionResult:
    return _timed(7, "S4 tense extension", None, lambda: _s4(max_size))


# -- 8 ---------------------------------------------------------------------------


def _cep(max_size: int) -> tuple[bool, str]:
    algs = catalog("WHB").algebras(max_size)
    pairs = 0
    bad = []
    for B in algs:
        for mask in subuniverses(B):
            rep = cep_spot_check(B, mask)
            pairs += 1
            if not rep.ok:
                bad.append((B.name, mask, rep.missing[:1]))
    detail = f"{pairs} subalgebra pairs A <= B with |B| <= {max_size}: every congruence of A extends"
    if bad:
        detail += f"; {len(bad)} failures, first {bad[0]}"
    return not bad, detail


def criterion_8(max_size: int = 5) -> CriterionResult:
    return _timed(8, "congruence extension", None, lambda: _cep(max_size))


CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
}

SUITES = {
    "paper-examples": (1,),
    "representation": (2,),
    "lemmas": (3,),
    "congruence": (4, 6, 8),
    "tense": (5, 7),
}


def run_suite(name: str, max_size: int | None = None) -> list[CriterionResult]:
    """Run a suite; ``max_size`` lowers the algebra size bound of catalog criteria."""
    out = []
    for k in SUITES[name]:
        fn = CRITERIA[k]
        if max_size is None or k == 1:
            out.append(fn())
        elif k == 3:
            out.append(fn(max_size=min(max_size, 8)))
        elif k == 5:
            out.append(fn(max_size=min(max_size, 8), principal_size=min(max_size, 5)))
        else:
            default = {2: 8, 4: 6, 6: 6, 7: 8, 8: 5}[k]
            out.append(fn(max_size=min(max_size, default)))
    return out

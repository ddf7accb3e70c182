from itertools import product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from whb.algebra import (
    AXIOMS,
    FAMILIES,
    INCLUSIONS,
    VARIETIES,
    AlgebraBatch,
    algebra_from_names,
    batch_axiom_holds,
    batch_in_variety,
    check_axiom,
    classify,
    family_holds,
    hom_violations,
    is_homomorphism,
    make_algebra,
    ordered_labels,
    subalgebra,
    subuniverses,
    tba_reduct_violation,
)
from whb.catalog import catalog
from whb.enumerator import enumerate_algebra_batch, enumerate_bdls, wd_tables, wh_tables
from whb.lattice import chain, diamond
from whb.named import NAMED, boolean_algebra, chain3_hb, chain3_trivial, diamond_example, one_element


def _oracle_labels(A):
    fams = {f: all(oracles.axiom_holds(A.lattice, A.imp, A.dif, a) for a in ax) for f, ax in FAMILIES.items()}
    return {lab for lab, fs in VARIETIES.items() if all(fams[f] for f in fs)}


def test_chain3_trivial_classification():
    A = chain3_trivial()
    labels = classify(A)
    assert {"DWH", "WHB", "Basic", "Basic*"} <= labels
    assert "RWH" not in labels and "Heyting" not in labels
    assert not check_axiom(A, "r").holds


def test_chain3_hb_is_hb():
    labels = classify(chain3_hb())
    assert "HB" in labels and "TBA-reduct" not in labels


def test_diamond_example_classification():
    # [DERIVED] from the axiom oracle
    assert ordered_labels(classify(diamond_example())) == ["WH", "WD", "DWH", "TWH", "TWD", "Basic*"]
    assert not family_holds(diamond_example(), "E1")
    assert not family_holds(diamond_example(), "E2")


def test_one_element_has_every_label():
    assert classify(one_element()) == frozenset(VARIETIES)


@pytest.mark.parametrize("k", [1, 2])
def test_boolean_hb_is_tense_reduct(k):
    A = boolean_algebra(k)
    assert tba_reduct_violation(A) is None
    assert "TBA-reduct" in classify(A)


def test_tba_reduct_needs_boolean_carrier():
    assert tba_reduct_violation(chain3_hb()) == "lattice is not Boolean"


@pytest.mark.parametrize("name", sorted(NAMED))
def test_classify_matches_axiom_oracle_on_named(name):
    A = NAMED[name]()
    got = set(classify(A)) - {"TBA-reduct"}
    assert got == _oracle_labels(A) - {"TBA-reduct"}


def test_classify_matches_oracle_on_catalog():
    for A in catalog("WHB").algebras(5):
        got = set(classify(A)) - {"TBA-reduct"}
        assert got == _oracle_labels(A) - {"TBA-reduct"}, A


def test_batch_axioms_match_single_checks():
    for b in catalog("DWH").batches(4):
        for ax in AXIOMS:
            got = batch_axiom_holds(b, ax)
            want = [check_axiom(b.algebra(i), ax).holds for i in range(b.size)]
            assert got.tolist() == want


def test_inclusions_hold_on_catalog():
    for b in catalog("WHB").batches(6):
        member = {lab: batch_in_variety(b, lab) for lab in VARIETIES}
        for small, big in INCLUSIONS:
            assert not (member[small] & ~member[big]).any()


def _all_tables(n):
    return np.array(list(product(range(n), repeat=n * n)), dtype=np.int64).reshape(-1, n, n)


def _oracle_tables(L, fam, other):
    out = []
    for t in _all_tables(L.n):
        imp, dif = (t, other) if fam == "WH" else (other, t)
        if all(oracles.axiom_holds(L, imp, dif, a) for a in FAMILIES[fam]):
            out.append(t.tobytes())
    return sorted(out)


def test_chain3_wh_tables_by_brute_force():
    L = chain(3)
    zero = np.zeros((3, 3), dtype=np.int64)
    assert sorted(t.tobytes() for t in wh_tables(L)) == _oracle_tables(L, "WH", zero)


def test_chain3_wd_tables_by_brute_force():
    L = chain(3)
    top = np.full((3, 3), 2, dtype=np.int64)
    assert sorted(t.tobytes() for t in wd_tables(L)) == _oracle_tables(L, "WD", top)


def test_chain3_whb_by_brute_force():
    # chain3 has no non-trivial automorphism, so labelled and canonical counts agree
    L = chain(3)
    zero = np.zeros((3, 3), dtype=np.int64)
    top = np.full((3, 3), 2, dtype=np.int64)
    whs = [np.frombuffer(b, dtype=np.int64).reshape(3, 3) for b in _oracle_tables(L, "WH", zero)]
    wds = [np.frombuffer(b, dtype=np.int64).reshape(3, 3) for b in _oracle_tables(L, "WD", top)]
    want = sum(
        oracles.axiom_holds(L, i, d, "e1") and oracles.axiom_holds(L, i, d, "e2") for i in whs for d in wds
    )
    assert enumerate_algebra_batch(L, "WHB").size == want == 6


def _monotone_violation(L, T, first_anti: bool):
    le = L.leq
    for a, b, c in product(range(L.n), repeat=3):
        if le[a, b]:
            if first_anti and not le[T[b, c], T[a, c]]:
                return ("first", a, b, c)
            if not first_anti and not le[T[a, c], T[b, c]]:
                return ("first", a, b, c)
            if first_anti and not le[T[c, a], T[c, b]]:
                return ("second", a, b, c)
            if not first_anti and not le[T[c, b], T[c, a]]:
                return ("second", a, b, c)
    return None


def test_wd_difference_monotone_then_antitone():
    # x <- y is monotone in x and antitone in y on every WD algebra up to 6 elements
    for L in enumerate_bdls(6):
        for A in enumerate_algebra_batch(L, "WD").algebras():
            assert _monotone_violation(L, A.dif, first_anti=False) is None


def test_wh_implication_antitone_then_monotone():
    for L in enumerate_bdls(5):
        for A in enumerate_algebra_batch(L, "WH").algebras():
            assert _monotone_violation(L, A.imp, first_anti=True) is None


@pytest.mark.parametrize("pair", [("R", "Rstar"), ("T", "Tstar"), ("B", "Bstar")])
def test_whb_condition_and_its_dual_coincide(pair):
    for A in catalog("WHB").algebras():
        assert family_holds(A, pair[0]) == family_holds(A, pair[1]), A


def test_make_algebra_rejects_bad_tables():
    L = chain(2)
    with pytest.raises(ValueError):
        make_algebra(L, [[1]], [[0, 0], [0, 0]])
    with pytest.raises(ValueError):
        make_algebra(L, [[1, 2], [1, 1]], [[0, 0], [0, 0]])
    with pytest.raises(KeyError):
        algebra_from_names(L, [["1", "q"], ["1", "1"]], [["0", "0"], ["0", "0"]])


def test_homomorphisms():
    B2 = NAMED["boolean-2"]()
    B4 = NAMED["boolean-4"]()
    # {} -> {}, {p0,p1} -> {p0,p1}
    assert is_homomorphism(B2, B4, [0, 3])
    # {} -> {}, 1 -> {p0}: the top is not preserved
    assert ("1",) in hom_violations(B2, B4, [0, 1])
    assert not is_homomorphism(B2, B4, [0, 1])


def test_subuniverses_of_diamond_example():
    A = diamond_example()
    subs = subuniverses(A)
    assert all((m & 0b1001) == 0b1001 for m in subs)
    for m in subs:
        sub, idx = subalgebra(A, m)
        assert is_homomorphism(sub, A, idx)
    with pytest.raises(ValueError):
        subalgebra(A, 0b0011)


@given(st.integers(0, 406))
def test_catalog_entries_are_whb(i):
    A = catalog("WHB").algebras()[i]
    assert "WHB" in _oracle_labels(A)


def test_batch_select_and_algebra():
    L = diamond()
    b = enumerate_algebra_batch(L, "WHB")
    keep = np.zeros(b.size, dtype=bool)
    keep[0] = True
    one = b.select(keep)
    assert isinstance(one, AlgebraBatch) and one.size == 1
    assert (one.algebra(0).imp == b.imp[0]).all()

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from whb.algebra import subuniverses
from whb.catalog import catalog
from whb.congruence import (
    Congruence,
    all_congruences,
    cep_spot_check,
    check_lattice_ops,
    closed_of_theta,
    congruence_duality,
    congruences_by_closure,
    congruences_by_partitions,
    distributivity_violation,
    doubly_closed_sets,
    generate,
    permutability_violation,
    principal_congruence,
    theta_of_closed,
)
from whb.errors import SizeBound
from whb.lattice import chain
from whb.named import NAMED, boolean_algebra, chain3_hb, chain3_trivial, diamond_example, heyting_brouwer, two_element_boolean
from whb.spectrum import canonical_frame


def _blocks(c: Congruence):
    return oracles.blocks_of(c.labels)


def test_chain3_hb_is_simple():
    # [DERIVED] {P1} is not R-closed since R(P1) = {P1, P2}; {P2} is not S-closed
    A = chain3_hb()
    assert doubly_closed_sets(canonical_frame(A)) == [0b00, 0b11]
    assert [c.labels for c in all_congruences(A)] == [(0, 1, 2), (0, 0, 0)]


def test_chain3_trivial_congruences():
    # empty relations: every point set is closed, every lattice congruence is compatible
    A = chain3_trivial()
    assert doubly_closed_sets(canonical_frame(A)) == [0, 1, 2, 3]
    got = {c.describe(A.names) for c in all_congruences(A)}
    assert got == {"0 | a | 1", "0,a | 1", "0 | a,1", "0,a,1"}


@pytest.mark.parametrize("name", sorted(NAMED))
def test_congruences_match_oracle_named(name):
    A = NAMED[name]()
    assert {_blocks(c) for c in all_congruences(A)} == oracles.congruences(A)


def test_congruences_match_oracle_on_catalog():
    for A in catalog("WHB").algebras(6):
        assert {_blocks(c) for c in all_congruences(A)} == oracles.congruences(A)


def test_partitions_and_closure_agree():
    for A in catalog("WHB").algebras(6):
        assert congruences_by_partitions(A) == congruences_by_closure(A)


def test_lattice_ops_closed():
    for A in catalog("WHB").algebras(6):
        assert check_lattice_ops(all_congruences(A), A)


def test_congruence_duality_on_catalog():
    for A in catalog("WHB").algebras(8):
        rep = congruence_duality(A)
        assert rep.ok, (A, rep)


def test_duality_maps_are_inverse_on_diamond():
    A = diamond_example()
    for Y in doubly_closed_sets(canonical_frame(A)):
        assert closed_of_theta(A, theta_of_closed(A, Y)) == Y


def _least_containing(A, a, b):
    cs = [c for c in oracles.congruences(A) if any(a in blk and b in blk for blk in c)]
    return min(cs, key=lambda c: sum(len(blk) ** 2 for blk in c))


def test_principal_congruence_examples():
    A = chain3_trivial()
    a = A.lattice.index("a")
    assert principal_congruence(A, 0, a).describe(A.names) == "0,a | 1"
    assert principal_congruence(A, a, 2).describe(A.names) == "0 | a,1"
    assert principal_congruence(A, 0, 2).describe(A.names) == "0,a,1"
    H = chain3_hb()
    assert principal_congruence(H, 0, 1).num_blocks() == 1


def test_principal_matches_oracle():
    for A in catalog("WHB").algebras(5):
        for a in range(A.n):
            for b in range(a + 1, A.n):
                assert _blocks(principal_congruence(A, a, b)) == _least_containing(A, a, b)


@given(st.integers(0, 150), st.data())
def test_generate_is_least(i, data):
    algs = catalog("WHB").algebras(6)
    A = algs[i % len(algs)]
    pairs = data.draw(st.lists(st.tuples(st.integers(0, A.n - 1), st.integers(0, A.n - 1)), max_size=3))
    g = generate(A, pairs)
    cs = all_congruences(A)
    assert g in cs
    for c in cs:
        if all(c.related(a, b) for a, b in pairs):
            assert g <= c


def test_congruence_lattice_distributive_on_catalog():
    for A in catalog("WHB").algebras(6):
        assert distributivity_violation(all_congruences(A)) is None


def test_trivial_arrow_chain_congruences_do_not_permute():
    # [DERIVED] 0,a|1 and 0|a,1 compose to different relations
    A = chain3_trivial()
    bad = permutability_violation(all_congruences(A))
    assert bad is not None
    assert {c.describe(A.names) for c in bad} == {"0,a | 1", "0 | a,1"}


def test_boolean_algebras_permute():
    for k in (1, 2, 3):
        assert permutability_violation(all_congruences(boolean_algebra(k))) is None


def test_congruence_order_and_blocks():
    c = Congruence.from_blocks(4, [[0, 2], [1, 3]])
    assert c.blocks() == [[0, 2], [1, 3]]
    assert Congruence.identity(4) <= c <= Congruence.total(4)
    assert not (c <= Congruence.identity(4))
    d = Congruence.from_blocks(4, [[0, 1]])
    assert c.join(d) == Congruence.total(4)
    assert c.meet(d) == Congruence.identity(4)


def test_cep_examples():
    B4 = boolean_algebra(2)
    rep = cep_spot_check(B4, 0b1001)
    assert rep.ok and rep.total == 2
    with pytest.raises(ValueError):
        cep_spot_check(B4, 0b0011)


def test_cep_on_catalog():
    for B in catalog("WHB").algebras(5):
        for mask in subuniverses(B):
            assert cep_spot_check(B, mask).ok


def test_congruence_size_bound():
    with pytest.raises(SizeBound):
        all_congruences(heyting_brouwer(chain(11)))


def test_two_element_boolean_is_simple():
    assert len(all_congruences(two_element_boolean())) == 2

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from filterlab.errors import InputError, ResourceLimitError
from filterlab.spaces import (
    HOMEOMORPHISM,
    LABELED,
    FiniteSpace,
    SpaceCatalogue,
    canonical_form,
    closure,
    discrete,
    enumerate_topologies,
    iit_space,
    indiscrete,
    is_continuous,
    is_homeomorphic,
    is_m_ultraconnected,
    is_ultraconnected,
    mask,
    members,
    minimal_open_nbhd,
    permute,
    sierpinski,
    subspace,
)

from oracles import (
    brute_force_classes,
    brute_force_preorder_topologies,
    brute_force_topologies,
    closure_by_scan,
)

S = sierpinski()


def spaces_upto(n):
    return [X for k in range(1, n + 1) for X in enumerate_topologies(k)]


# --- construction and validation ---------------------------------------------------


def test_invalid_families_rejected():
    with pytest.raises(InputError):
        FiniteSpace(2, frozenset({0b11}))  # no empty set
    with pytest.raises(InputError):
        FiniteSpace(2, frozenset({0, 0b01}))  # no full set
    with pytest.raises(InputError):
        FiniteSpace(3, frozenset({0, 0b001, 0b010, 0b111}))  # union missing
    with pytest.raises(InputError):
        FiniteSpace(0, frozenset({0}))


def test_json_roundtrip_and_ordering():
    js = S.to_json()
    assert js == {"n": 2, "opens": [[], [0, 1], [1]]}
    assert FiniteSpace.from_json(js) == S


def test_catalogue_json_roundtrip():
    cat = enumerate_topologies(3, HOMEOMORPHISM)
    again = SpaceCatalogue.from_json(cat.to_json())
    assert list(again) == list(cat)


# --- closure -----------------------------------------------------------------------


def test_closure_examples():
    assert closure(S, mask([1])) == 0b11
    assert closure(S, mask([0])) == 0b01
    for X in spaces_upto(3):
        assert closure(X, 0) == 0


def test_closure_out_of_range():
    with pytest.raises(InputError):
        closure(S, 0b100)


def test_closure_matches_scan_and_is_a_closure_operator():
    for X in spaces_upto(4):
        for a in range(1 << X.n):
            c = closure(X, a)
            assert c == closure_by_scan(X.n, X.opens, a)
            assert c & a == a
            assert closure(X, c) == c
            for b in range(1 << X.n):
                if a & b == a:
                    assert closure(X, b) & c == c


# --- minimal neighbourhoods --------------------------------------------------------


def test_minimal_nbhd_examples():
    assert minimal_open_nbhd(S, 1) == 0b10
    assert minimal_open_nbhd(S, 0) == 0b11
    D = discrete(3)
    assert [minimal_open_nbhd(D, y) for y in range(3)] == [1, 2, 4]
    with pytest.raises(InputError):
        minimal_open_nbhd(S, 2)


def test_minimal_nbhd_is_open_and_transitive():
    for X in spaces_upto(4):
        for y in range(X.n):
            u = minimal_open_nbhd(X, y)
            assert u in X.opens and u >> y & 1
            for z in members(u):
                assert minimal_open_nbhd(X, z) & ~u == 0


# --- continuity --------------------------------------------------------------------


def test_continuity_examples():
    D2 = discrete(2)
    assert is_continuous((0, 1), S, S)
    assert is_continuous((0, 0), D2, S)
    assert is_continuous((1, 1, 1), iit_space(3), D2)
    assert is_continuous((0, 1), D2, S)
    assert not is_continuous((0, 1), S, D2)


def test_continuity_range_errors():
    with pytest.raises(InputError):
        is_continuous((0,), S, S)
    with pytest.raises(InputError):
        is_continuous((0, 2), S, S)


# --- iit spaces ----------------------------------------------------------------------


def test_iit_examples():
    assert iit_space(1) == indiscrete(1)
    assert iit_space(2).opens == {0, 0b01, 0b11}
    assert iit_space(3).opens == {0, 0b001, 0b011, 0b111}
    with pytest.raises(InputError):
        iit_space(0)


@pytest.mark.parametrize("n", range(1, 7))
def test_iit_point_zero_has_full_closure_and_space_is_ultraconnected(n):
    X = iit_space(n)
    full_closure = [y for y in range(n) if closure(X, 1 << y) == X.full]
    assert full_closure == [0]
    assert is_ultraconnected(X)[0]
    for c in X.closed_sets:
        if c:
            assert c >> (n - 1) & 1


# --- enumeration -------------------------------------------------------------------


@pytest.mark.parametrize("n,count", [(1, 1), (2, 4), (3, 29), (4, 355)])
def test_labeled_counts_match_subset_family_oracle(n, count):
    got = enumerate_topologies(n)
    oracle = brute_force_topologies(n)
    assert len(oracle) == count
    assert {X.opens for X in got} == set(oracle)
    assert len(got) == count


@pytest.mark.parametrize("n,count", [(1, 1), (2, 3), (3, 9), (4, 33)])
def test_homeomorphism_counts_match_permutation_oracle(n, count):
    got = enumerate_topologies(n, HOMEOMORPHISM)
    assert len(got) == count == len(brute_force_classes(n, brute_force_topologies(n)))
    for X, Y in itertools.combinations(got, 2):
        assert not is_homeomorphic(X, Y)


def test_five_point_labeled_against_preorder_oracle():
    got = enumerate_topologies(5)
    assert len(got) == 6942
    assert {X.opens for X in got} == set(brute_force_preorder_topologies(5))


def test_enumeration_order_is_by_encoded_family():
    keys = [X.key for X in enumerate_topologies(4)]
    assert keys == sorted(keys)
    assert all(X.key == sum(1 << u for u in X.opens) for X in enumerate_topologies(3))


def test_enumeration_limits():
    with pytest.raises(ResourceLimitError):
        enumerate_topologies(6)
    with pytest.raises(ResourceLimitError):
        enumerate_topologies(7, HOMEOMORPHISM)
    with pytest.raises(ResourceLimitError):
        enumerate_topologies(4, limit=3)
    with pytest.raises(InputError):
        enumerate_topologies(2, "bogus")


def test_canonical_form_is_class_invariant():
    for X in enumerate_topologies(4):
        c = canonical_form(X)
        for perm in itertools.permutations(range(4)):
            assert canonical_form(permute(X, perm)) == c


# --- ultraconnectedness ------------------------------------------------------------


def test_ultraconnected_examples():
    assert is_ultraconnected(S) == (True, None)
    assert is_ultraconnected(discrete(2)) == (False, (0b01, 0b10))
    for n in range(1, 5):
        assert is_ultraconnected(indiscrete(n))[0]


def test_m_ultraconnected_examples():
    for X in spaces_upto(3):
        assert is_m_ultraconnected(X, 1)
    assert not is_m_ultraconnected(discrete(2), 2)
    assert is_m_ultraconnected(S, 3)
    with pytest.raises(InputError):
        is_m_ultraconnected(S, 0)


def test_ultraconnected_equivalences():
    for X in spaces_upto(4):
        ultra, pair = is_ultraconnected(X)
        hub = any(minimal_open_nbhd(X, y) == X.full for y in range(X.n))
        assert ultra == hub
        assert all(is_m_ultraconnected(X, m) == ultra for m in range(2, X.n + 1))
        if pair is not None:
            c1, c2 = pair
            assert c1 and c2 and c1 & c2 == 0
            assert X.is_closed(c1) and X.is_closed(c2)


# --- properties of random relabelings -----------------------------------------------


CAT4 = enumerate_topologies(4).spaces


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(CAT4), st.permutations(range(4)))
def test_permutation_preserves_structure(X, perm):
    Y = permute(X, perm)
    assert is_homeomorphic(X, Y)
    assert is_ultraconnected(X)[0] == is_ultraconnected(Y)[0]
    assert sorted(map(int.bit_count, X.opens)) == sorted(map(int.bit_count, Y.opens))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(CAT4), st.integers(1, 15))
def test_subspace_embedding_is_continuous(X, a):
    Y, emb = subspace(X, a)
    assert Y.n == len(emb)
    # the inclusion Y -> X is continuous: every open of X restricts to an open of Y
    for u in X.opens:
        assert sum(1 << k for k, x in enumerate(emb) if u >> x & 1) in Y.opens

"""Subset-sum/product closures and the four structure detectors."""

from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from ramseylab.errors import RamseyError, ValueOverflowError
from ramseylab.structures import (FSFamily, OP_ADD, OP_MUL, contains_kap,
                                  contains_kfp, contains_kfs, contains_kgp,
                                  fs_set, fs_values, structure_report,
                                  validate_kap, validate_kfp, validate_kfs,
                                  validate_kgp)


def _brute_fs(gens):
    out = set()
    for r in range(1, len(gens) + 1):
        for combo in combinations(range(len(gens)), r):
            out.add(sum(gens[i] for i in combo))
    return out


def test_fs_small():
    assert fs_values((1, 2)) == frozenset({1, 2, 3})
    assert fs_values((2, 2)) == frozenset({2, 4})
    assert fs_values((1, 2, 4)) == frozenset({1, 2, 3, 4, 5, 6, 7})


def test_fp_small():
    assert fs_values((2, 3), op=OP_MUL) == frozenset({2, 3, 6})
    assert fs_values((2, 2, 3), op=OP_MUL) == frozenset({2, 3, 4, 6, 12})


def test_fp_rejects_generator_one():
    with pytest.raises(RamseyError):
        fs_values((1, 2), op=OP_MUL)


def test_family_size_limit():
    with pytest.raises(RamseyError):
        FSFamily(generators=tuple(range(1, 32)), op=OP_ADD)


def test_fs_overflow_guard():
    with pytest.raises(ValueOverflowError):
        fs_values((2 ** 62, 2 ** 62))


@given(st.lists(st.integers(1, 40), min_size=1, max_size=8))
def test_fs_matches_brute_force(gens):
    assert fs_values(tuple(gens)) == frozenset(_brute_fs(tuple(gens)))


def test_fs_set_entry_point():
    fam = FSFamily(generators=(3, 5), op=OP_ADD)
    assert fs_set(fam) == frozenset({3, 5, 8})


# --- detectors ---------------------------------------------------------------

def test_kap_least_witness():
    assert contains_kap(frozenset({1, 3, 5, 9}), 3) == (1, 2)
    assert contains_kap(frozenset({1, 2, 4, 8}), 3) is None
    assert contains_kap(frozenset({7}), 1) == (7, 1)


def test_kgp_least_witness():
    assert contains_kgp(frozenset({2, 6, 18}), 3) == (2, 3)
    assert contains_kgp(frozenset({5}), 1) == (5, 2)
    # ratio 1 never counts
    assert contains_kgp(frozenset({4, 5, 6}), 2) is None


def test_kfs_requires_strictly_increasing_generators():
    # {1, 2, 3} carries FS((1, 2)); (1, 1) would need a repeat and the
    # detector refuses repeats even though FS((1,1)) = {1, 2} is inside.
    assert contains_kfs(frozenset({1, 2, 3}), 2) == (1, 2)
    assert contains_kfs(frozenset({1, 2}), 2) is None


def test_kfp_generators_at_least_two():
    assert contains_kfp(frozenset({2, 3, 6}), 2) == (2, 3)
    assert contains_kfp(frozenset({1, 2, 3}), 2) is None
    # k = 1 is membership, so a lone 1 still passes
    assert contains_kfp(frozenset({1}), 1) == (1,)


def test_k1_degeneracy_is_uniform():
    A = frozenset({5})
    assert contains_kap(A, 1) == (5, 1)
    assert contains_kgp(A, 1) == (5, 2)
    assert contains_kfs(A, 1) == (5,)
    assert contains_kfp(A, 1) == (5,)


_sets = st.frozensets(st.integers(1, 24), min_size=1, max_size=10)


@given(_sets, st.integers(1, 3))
def test_kap_matches_brute_force(A, k):
    hit = contains_kap(A, k)
    brute = None
    for a in sorted(A):
        for d in range(1, 25):
            if all(a + i * d in A for i in range(k)):
                brute = (a, d)
                break
        if brute:
            break
    assert (hit is None) == (brute is None)
    if hit is not None:
        assert hit == brute
        assert validate_kap(A, k, hit)


@given(_sets, st.integers(2, 3))
@settings(max_examples=150)
def test_kfs_matches_brute_force(A, k):
    hit = contains_kfs(A, k)
    brute = next((c for c in combinations(sorted(A), k)
                  if _brute_fs(c) <= A), None)
    assert (hit is None) == (brute is None)
    if hit is not None:
        assert validate_kfs(A, k, hit)


@given(_sets, st.integers(1, 3))
def test_report_is_self_validating(A, k):
    rep = structure_report(A, k)
    if rep.has_ap:
        assert validate_kap(A, k, rep.ap)
    if rep.has_gp:
        assert validate_kgp(A, k, rep.gp)
    if rep.has_fs:
        assert validate_kfs(A, k, rep.fs)
    if rep.has_fp:
        assert validate_kfp(A, k, rep.fp)
    js = rep.to_json()
    assert js["k"] == k


def test_validators_reject_junk():
    A = frozenset({1, 2, 3})
    assert not validate_kap(A, 2, (1, 0))
    assert not validate_kgp(A, 2, (1, 1))
    assert not validate_kfs(A, 2, (2, 2))
    assert not validate_kfs(A, 2, (1, 3))  # 4 escapes A
    assert not validate_kfp(A, 2, (2, 3))  # 6 escapes A

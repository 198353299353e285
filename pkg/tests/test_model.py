from __future__ import annotations

import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import A, P, profiles
from rawlsian.model import (
    Assignment,
    BlockVector,
    DeterministicAssignment,
    DimensionError,
    Dominance,
    PreferenceProfile,
    SigmaOrder,
    as_fraction,
    block_vector,
    cumulative_vector,
    r_dominates,
    sd_dominates_allocation,
)

EX1 = P("abc", "abc", "bca")
X1 = A([["1/2", "1/2", 0], ["1/2", "1/2", 0], [0, 0, 1]])


def test_rank_matrix_from_lists():
    assert EX1.rank[2] == (3, 1, 2)
    assert EX1.order(2) == (1, 2, 0)
    assert EX1.object_at(2, 2) == 2


def test_profile_rejects_non_square():
    with pytest.raises(DimensionError):
        PreferenceProfile(("1", "2"), ("a", "b", "c"), ((1, 2, 3), (1, 2, 3)))


def test_profile_rejects_ties():
    with pytest.raises(ValueError):
        PreferenceProfile(("1", "2"), ("a", "b"), ((1, 1), (1, 2)))


def test_from_lists_rejects_duplicates():
    with pytest.raises(ValueError, match="twice"):
        PreferenceProfile.from_lists(["aab", "abc", "abc"], objects=["a", "b", "c"])


def test_assignment_validation():
    with pytest.raises(ValueError, match="row"):
        A([["1/2", "1/4"], ["1/2", "1/2"]])
    with pytest.raises(ValueError, match="column"):
        A([[1, 0], [1, 0]])
    with pytest.raises(TypeError):
        Assignment.from_rows([[0.5, 0.5], [0.5, 0.5]])


def test_as_fraction_rejects_floats():
    assert as_fraction("3/6") == F(1, 2)
    with pytest.raises(TypeError):
        as_fraction(0.5)


def test_cumulative_vector_example():
    b1 = cumulative_vector(EX1, X1, 0)
    assert b1.b == (1, F(1, 2), 0)
    b3 = cumulative_vector(EX1, X1, 2)
    assert (b3.at(3), b3.at(2), b3.at(1)) == (0, 1, 1)


def test_cumulative_vector_single():
    p = P("a")
    assert cumulative_vector(p, A([[1]]), 0).b == (1,)


def test_cumulative_dimension_mismatch():
    with pytest.raises(DimensionError):
        cumulative_vector(EX1, A([[1, 0], [0, 1]]), 0)


def test_block_vector_examples():
    bx = block_vector(EX1, X1, SigmaOrder.rawlsian(3))
    assert bx.entries == (0, 0, 0, 1, F(1, 2), F(1, 2))
    y = A([[1, 0, 0], [0, 0, 1], [0, 1, 0]])
    by = block_vector(EX1, y, SigmaOrder.rawlsian(3))
    assert by.entries == (1, 0, 0, 1, 0, 0)
    assert bx.blocks() == [(0, 0, 0), (1, F(1, 2), F(1, 2))]


def test_block_vector_two_agents():
    p = P("ab", "ba")
    x = A([["1/3", "2/3"], ["2/3", "1/3"]])
    bv = block_vector(p, x, SigmaOrder.rawlsian(2))
    assert bv.entries == (F(2, 3), F(2, 3))


def test_r_dominates_examples():
    sigma = SigmaOrder.rawlsian(3)
    bx = block_vector(EX1, X1, sigma)
    by = block_vector(EX1, A([[1, 0, 0], [0, 0, 1], [0, 1, 0]]), sigma)
    assert r_dominates(bx, by) is Dominance.DOMINATES
    assert r_dominates(by, bx) is Dominance.DOMINATED
    assert r_dominates(bx, bx) is Dominance.EQUAL
    u = BlockVector((3, 2), 3, (0, 0, 0, 0, 0, 0))
    v = BlockVector((3, 2), 3, (0, F(1, 7), 0, 0, 0, 0))
    assert r_dominates(u, v) is Dominance.DOMINATES


def test_r_dominates_length_mismatch():
    with pytest.raises(DimensionError):
        r_dominates(BlockVector((2,), 2, (0, 0)), BlockVector((3, 2), 3, (0,) * 6))


def test_sigma_order():
    assert SigmaOrder.rawlsian(4).order == (4, 3, 2)
    assert SigmaOrder.boston(4).order == (2, 3, 4)
    assert SigmaOrder.parse("3,2,4").n == 4
    assert SigmaOrder.parse("").n == 1
    with pytest.raises(ValueError):
        SigmaOrder((2, 2))


def test_sd_dominates_examples():
    ex_sp = P("abc", "bca", "bca")
    assert sd_dominates_allocation(ex_sp, 2, [0, 1, 0], [0, 0, 1])
    assert not sd_dominates_allocation(ex_sp, 2, [0, 0, 1], [0, 1, 0])
    row = [F(1, 3)] * 3
    assert sd_dominates_allocation(EX1, 0, row, row)
    assert sd_dominates_allocation(EX1, 0, [F(1, 2), F(1, 2), 0], row)


def test_deterministic_assignment():
    d = DeterministicAssignment((2, 0, 1))
    assert d.to_assignment().p[0] == (0, 0, 1)
    assert d.ranks(EX1) == (3, 1, 1)
    with pytest.raises(ValueError):
        DeterministicAssignment((0, 0, 1))


def _random_assignment(rng: random.Random, n: int) -> Assignment:
    # convex combination of a few permutation matrices
    k = rng.randint(1, 3)
    weights = [F(rng.randint(1, 5)) for _ in range(k)]
    total = sum(weights)
    rows = [[F(0)] * n for _ in range(n)]
    for w in weights:
        perm = list(range(n))
        rng.shuffle(perm)
        for i, o in enumerate(perm):
            rows[i][o] += w / total
    return A(rows)


@settings(max_examples=60, deadline=None)
@given(profiles(1, 5), st.randoms(use_true_random=False))
def test_cumulative_monotone_and_top_identity(profile, rng):
    x = _random_assignment(rng, profile.n)
    for i in range(profile.n):
        cv = cumulative_vector(profile, x, i)
        assert cv.at(1) == 1
        assert all(cv.at(k) >= cv.at(k + 1) >= 0 for k in range(1, profile.n + 1))
        for k in range(1, profile.n + 1):
            assert cv.top(k) + cv.at(k + 1) == 1


@settings(max_examples=60, deadline=None)
@given(profiles(1, 5), st.randoms(use_true_random=False))
def test_block_vector_forgets_agent_identity(profile, rng):
    x = _random_assignment(rng, profile.n)
    perm = list(range(profile.n))
    rng.shuffle(perm)
    sigma = SigmaOrder.rawlsian(profile.n)
    assert block_vector(profile, x, sigma) == block_vector(
        profile.permute_agents(perm), x.permute_agents(perm), sigma
    )


@settings(max_examples=60, deadline=None)
@given(profiles(2, 4), st.randoms(use_true_random=False))
def test_r_dominance_is_a_strict_total_order(profile, rng):
    sigma = SigmaOrder.rawlsian(profile.n)
    bs = [block_vector(profile, _random_assignment(rng, profile.n), sigma) for _ in range(3)]
    for u in bs:
        for v in bs:
            d = r_dominates(u, v)
            back = r_dominates(v, u)
            if u.entries == v.entries:
                assert d is back is Dominance.EQUAL
            else:
                assert {d, back} == {Dominance.DOMINATES, Dominance.DOMINATED}
    a, b, c = sorted(bs, key=lambda bv: bv.entries)
    if r_dominates(a, b) is Dominance.DOMINATES and r_dominates(b, c) is Dominance.DOMINATES:
        assert r_dominates(a, c) is Dominance.DOMINATES


@settings(max_examples=60, deadline=None)
@given(profiles(1, 5), st.randoms(use_true_random=False))
def test_sd_dominance_reflexive_and_transitive(profile, rng):
    rows = [_random_assignment(rng, profile.n).p[0] for _ in range(3)]
    for r in rows:
        assert sd_dominates_allocation(profile, 0, r, r)
    for u in rows:
        for v in rows:
            for w in rows:
                if sd_dominates_allocation(profile, 0, u, v) and sd_dominates_allocation(profile, 0, v, w):
                    assert sd_dominates_allocation(profile, 0, u, w)

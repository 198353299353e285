from __future__ import annotations

import itertools
from fractions import Fraction as F

import pytest

from conftest import A, P
from rawlsian.analysis import (
    bvn_decompose,
    compare_assignments,
    corollary_check,
    egalitarian_check,
    egalitarian_uniform_relaxation,
    envy_report,
    improving_cycle,
    obvious_manipulability_probe,
    pointwise_worst_case,
    rank_distribution,
    rank_dominates,
    rank_efficient,
    sd_efficient,
    support_max_rank,
    swap_axiom_check,
    trading_cycle,
)
from rawlsian.analysis.rank import rank_improvement_by_permutations, rank_improvement_lp
from rawlsian.generate import generate
from rawlsian.model import Assignment, DeterministicAssignment, SigmaOrder, block_vector, r_dominates, Dominance
from rawlsian.rules import mtav_details, probabilistic_serial, rawlsian

EX1 = P("abc", "abc", "bca")
X1 = A([["1/2", "1/2", 0], ["1/2", "1/2", 0], [0, 0, 1]])
EX_SP = P("abc", "bca", "bca")
RANK_P1 = P("adcbe", "bcade", "cbade", "badce", "badec")
RANK_P2 = P("abc", "abc", "bac")
EGAL_P = P("abcd", "bcad", "abcd", "badc")
IDENT = lambda n: DeterministicAssignment(tuple(range(n))).to_assignment()  # noqa: E731


# sd-efficiency

def test_rawlsian_example_is_sd_efficient():
    rep = sd_efficient(EX1, X1)
    assert rep.efficient and rep.cycle is None and rep.lp_gain == 0
    ok, cert = rep
    assert ok and cert is None


def test_inefficient_example_has_cycle_and_gain():
    x = A([[0, "1/2", "1/2"], ["1/2", "1/2", 0], ["1/2", 0, "1/2"]])
    rep = sd_efficient(EX1, x)
    assert not rep.efficient
    assert rep.lp_gain == F(3, 2)
    assert {s.agent for s in rep.cycle} == {0, 2}
    assert rep.improvement is not None


def test_acyclic_mixture_is_efficient():
    # every holder of a worse object is content: the object graph is acyclic
    x = A([["1/2", 0, "1/2"], ["1/2", "1/2", 0], [0, "1/2", "1/2"]])
    assert sd_efficient(EX1, x).efficient


def test_single_agent_efficient():
    assert sd_efficient(P("a"), A([[1]])).efficient


def test_uniform_on_example_one_is_inefficient():
    steps = improving_cycle(EX1, Assignment.uniform(3))
    assert steps is not None


# rank

def test_rank_distribution_examples():
    x = probabilistic_serial(RANK_P2)
    y = A([[1, 0, 0], [0, 0, 1], [0, 1, 0]])
    assert rank_distribution(RANK_P2, x).m == (3, F(4, 3), 1)
    assert rank_distribution(RANK_P2, y).m == (3, 1, 1)
    assert rank_distribution(RANK_P2, Assignment.uniform(3)).e == (1, 1, 1)


def test_rank_dominance_example():
    x = rawlsian(RANK_P2)
    y = A([[1, 0, 0], [0, 0, 1], [0, 1, 0]])
    assert x == probabilistic_serial(RANK_P2)
    assert rank_dominates(RANK_P2, y, x)
    assert not rank_dominates(RANK_P2, x, y)
    assert not rank_dominates(RANK_P2, x, x)
    assert not rank_efficient(RANK_P2, x)
    assert rank_efficient(RANK_P2, y)


def test_rank_efficient_but_not_rawlsian():
    y = IDENT(5)
    x = DeterministicAssignment((3, 1, 2, 0, 4)).to_assignment()
    sigma = SigmaOrder.rawlsian(5)
    assert r_dominates(block_vector(RANK_P1, x, sigma), block_vector(RANK_P1, y, sigma)) is Dominance.DOMINATES
    assert block_vector(RANK_P1, y, sigma).entries[:10] == (0,) * 5 + (1, 0, 0, 0, 0)
    assert rank_efficient(RANK_P1, y)
    # neither rank-dominates the other
    assert not rank_dominates(RANK_P1, x, y) and not rank_dominates(RANK_P1, y, x)
    assert rawlsian(RANK_P1) != y


def test_rank_routes_agree():
    for seed in range(8):
        p = generate(4, "uniform", seed=seed)
        for x in (Assignment.uniform(4), rawlsian(p), probabilistic_serial(p)):
            assert rank_improvement_lp(p, x) == rank_improvement_by_permutations(p, x)
    assert rank_efficient(P("a"), A([[1]]))


def test_permutation_route_size_limit():
    p = generate(6, "uniform", seed=0)
    with pytest.raises(ValueError):
        rank_improvement_by_permutations(p, Assignment.uniform(6))


# envy

def test_ps_is_envy_free():
    for seed in range(20):
        p = generate(2 + seed % 7, "plackett-luce", seed=seed)
        assert envy_report(p, probabilistic_serial(p)).violations == 0


def test_weak_envy_example():
    rep = envy_report(EX_SP, rawlsian(EX_SP))
    assert rep.records[2].weakly_envies == ()  # agents 2 and 3 hold the same row
    # after agent 2 reports (b,a,c) the outcome is the identity: agent 3 holds c, agent 2 holds b
    lie = A([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    rep = envy_report(EX_SP, lie)
    assert 1 in rep.records[2].weakly_envies
    assert rep.agents_with_weak_envy >= 1


def test_identical_uniform_has_no_envy():
    rep = envy_report(P("abc", "abc", "abc"), Assignment.uniform(3))
    assert rep.violations == 0 and rep.average_envied is None


def test_compare_rawlsian_and_ps():
    c = compare_assignments(EX1, rawlsian(EX1), probabilistic_serial(EX1))
    assert (c.prefer_first, c.prefer_second, c.equal, c.incomparable) == (2, 1, 0, 0)


# egalitarian

def test_egalitarian_examples():
    assert egalitarian_check(EGAL_P, IDENT(4)).egalitarian
    x = rawlsian(EGAL_P)
    assert x == A([["1/2", "1/2", 0, 0], [0, 0, 1, 0], ["1/2", "1/2", 0, 0], [0, 0, 0, 1]])
    assert x != IDENT(4)
    assert egalitarian_check(P("a"), A([[1]])).egalitarian


def test_inegalitarian_witness():
    # agent 1 gets their last choice while a matching gives everyone a top choice
    p = P("ab", "ba")
    y = A([[0, 1], [1, 0]])
    rep = egalitarian_check(p, y)
    assert not rep.egalitarian and rep.slack > 0
    assert egalitarian_uniform_relaxation(p, y).egalitarian is False


def test_relaxation_is_sufficient():
    for seed in range(10):
        p = generate(4, "uniform", seed=seed)
        for y in (Assignment.uniform(4), rawlsian(p)):
            if not egalitarian_uniform_relaxation(p, y).egalitarian:
                assert not egalitarian_check(p, y).egalitarian


# decomposition

def test_bvn_examples():
    assert len(bvn_decompose(IDENT(3)).terms) == 1
    dec = bvn_decompose(X1)
    assert sorted((w, m.perm) for w, m in dec.terms) == [(F(1, 2), (0, 1, 2)), (F(1, 2), (1, 0, 2))]
    assert [w for w, _ in bvn_decompose(Assignment.uniform(2)).terms] == [F(1, 2), F(1, 2)]


def test_bvn_recomposes_exactly():
    for seed in range(20):
        n = 2 + seed % 6
        x = rawlsian(generate(n, "uniform", seed=seed))
        dec = bvn_decompose(x)
        assert dec.recompose() == x
        assert sum(w for w, _ in dec.terms) == 1
        assert len(dec.terms) <= n * n - 2 * n + 2


def test_support_max_rank():
    assert support_max_rank(EX1, X1) == 2
    assert support_max_rank(EX1, probabilistic_serial(EX1)) == 3
    assert support_max_rank(P("bca", "cab", "abc"), A([[0, 1, 0], [0, 0, 1], [1, 0, 0]])) == 1


def test_corollary_examples():
    rep = corollary_check(EX1)
    assert rep.holds and rep.bottleneck == 2 and rep.term_max_ranks == (2, 2)
    assert corollary_check(P("bca", "cab", "abc")).holds


def _pareto_optimal(profile, perm):
    n = profile.n
    mine = [profile.rank[i][perm[i]] for i in range(n)]
    for other in itertools.permutations(range(n)):
        theirs = [profile.rank[i][other[i]] for i in range(n)]
        if theirs != mine and all(t <= m for t, m in zip(theirs, mine)):
            return False
    return True


@pytest.mark.parametrize("seed", range(15))
def test_trading_cycle_matches_pareto_enumeration(seed):
    n = 2 + seed % 4
    p = generate(n, "uniform", seed=seed)
    for perm in itertools.permutations(range(n)):
        m = DeterministicAssignment(perm)
        assert (trading_cycle(p, m) is None) == _pareto_optimal(p, perm)


def test_corollary_random():
    for seed in range(10):
        p = generate(2 + seed % 5, "plackett-luce", seed=seed)
        rep = corollary_check(p)
        assert rep.holds
        assert rep.bottleneck == mtav_details(p).bottleneck


# manipulation

def test_probe_single_agent():
    rep = obvious_manipulability_probe(1, rawlsian, rule_name="rawlsian")
    assert not rep.obviously_manipulable and rep.records == []


def test_probe_bounds():
    with pytest.raises(ValueError):
        obvious_manipulability_probe(4, rawlsian)
    with pytest.raises(ValueError):
        obvious_manipulability_probe(5, rawlsian, max_n=5)


def test_probe_ps_two_agents():
    rep = obvious_manipulability_probe(2, probabilistic_serial, rule_name="ps")
    assert rep.profiles_evaluated == 4
    # two agents, two true rankings each, one misreport per ranking
    assert len(rep.records) == 4
    assert all(r.worst_truthful >= r.best_truthful for r in rep.records)


def test_pointwise_witness_example():
    # agent 2 (index 1) reports (b, a, c) instead of (b, c, a)
    truth, lie = pointwise_worst_case(EX_SP, rawlsian, 1, (1, 0, 2))
    assert (truth, lie) == (2, 1)


def test_swap_axioms_example():
    p = P("cab", "bca", "bca")
    rep = swap_axiom_check(p, "1", "a", "b")
    assert rep.before == (1, 0, 0)
    assert rep.after == (F(1, 3), 0, F(2, 3))
    assert not rep.swap_monotonic
    assert not rep.upper_invariant
    assert rep.lower_invariant


def test_swap_below_top_changes_nothing():
    p = P("bca", "cab", "abc")
    rep = swap_axiom_check(p, "1", "c", "a")
    assert rep.before == rep.after
    assert rep.swap_monotonic and rep.upper_invariant and rep.lower_invariant


def test_swap_rejects_non_adjacent():
    with pytest.raises(ValueError, match="adjacent"):
        swap_axiom_check(EX1, "1", "a", "c")
    with pytest.raises(ValueError):
        swap_axiom_check(EX1, "1", "b", "a")

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from msrank.core import BudgetedFunction, Instance, msr_objective
from msrank.functions import CappedModular
from msrank.greedy import Scheme, TieBreak, run_greedy, score
from msrank.oracle import random_instance, tight2

from conftest import V1, V2, V3


def test_example1_initial_scores(ex1):
    assert score(ex1, (), V2) == Fraction(1, 2)
    assert score(ex1, (), V1) == Fraction(2, 5)
    # f1 cannot afford v3
    assert score(ex1, (), V3) == Fraction(2, 13)


def test_example1_greedy_takes_middle_item_then_stops(ex1):
    ranking, trace = run_greedy(ex1)
    assert ranking == (V2,)
    assert trace.stop_reason == "zero-score"
    assert msr_objective(ex1, ranking).total == Fraction(3, 2)


def test_score_after_prefix(ex1):
    # f1 is exhausted once v2 is placed; f2 gains nothing from v1
    assert score(ex1, (V2,), V1) == 0
    assert score(ex1, (V2,), V3) == 0


def test_score_rejects_ranked_item(ex1):
    with pytest.raises(ValueError):
        score(ex1, (V1,), V1)


def test_small_tight_instance_scores():
    eps = Fraction(1, 100)
    inst = tight2(1, eps)
    assert score(inst, (), 1) == 1 + eps
    assert score(inst, (), 0) == 1


def test_small_tight_instance_highest_id():
    inst = tight2(1, Fraction(1, 100))
    ranking, _ = run_greedy(inst, tiebreak=TieBreak.HIGHEST_ID)
    assert ranking[0] == 1
    assert msr_objective(inst, ranking).total == Fraction(101, 100)


def test_inverse_budget_weights():
    f = CappedModular([1, 1])
    inst = Instance.build([1, 1], [(f, 1), (CappedModular([0, 1]), 4)])
    # v1: 1/1 + 1/4
    assert score(inst, (), 1, Scheme.INVERSE_BUDGET) == Fraction(5, 4)
    assert score(inst, (), 0, Scheme.INVERSE_BUDGET) == 1


def test_inverse_budget_rejects_zero_budget():
    inst = Instance.build([1], [(CappedModular([1]), 0)])
    with pytest.raises(ValueError, match="positive"):
        run_greedy(inst, Scheme.INVERSE_BUDGET)
    assert run_greedy(inst)[0] == ()


def test_tiebreaks():
    inst = Instance.build([1, 1, 1], [(CappedModular([1, 1, 1], cap=1), 3)])
    assert run_greedy(inst, tiebreak=TieBreak.LOWEST_ID)[0] == (0,)
    assert run_greedy(inst, tiebreak=TieBreak.HIGHEST_ID)[0] == (2,)
    picks = {run_greedy(inst, tiebreak=TieBreak.SEEDED_RANDOM, seed=s)[0] for s in range(30)}
    assert picks == {(0,), (1,), (2,)}
    a = run_greedy(inst, tiebreak=TieBreak.SEEDED_RANDOM, seed=7)
    assert a == run_greedy(inst, tiebreak=TieBreak.SEEDED_RANDOM, seed=7)


def test_exhausted_stop():
    inst = Instance.build([1, 1], [(CappedModular([1, 1]), 2)])
    ranking, trace = run_greedy(inst)
    assert ranking == (0, 1)
    assert trace.stop_reason == "exhausted"


def test_trace_csv(ex1):
    _, trace = run_greedy(ex1)
    lines = trace.to_csv().splitlines()
    assert lines[0] == "iteration,item,score,cost,active"
    assert lines[1] == "1,1,1/2,3,2"
    assert len(lines) == 2


def classic_greedy(instance):
    """Reference budgeted cost-benefit greedy for a single function."""
    (f,) = instance.functions
    costs = instance.costs
    chosen, spent = [], 0
    while True:
        best, best_ratio = None, 0
        for v in range(instance.n):
            if v in chosen or spent + costs[v] > f.budget:
                continue
            r = f.oracle.marginal(v, frozenset(chosen)) / costs[v]
            if r > best_ratio:
                best, best_ratio = v, r
        if best is None:
            return tuple(chosen)
        chosen.append(best)
        spent += costs[best]


@given(st.integers(0, 10 ** 6))
def test_single_function_matches_classic_greedy(seed):
    inst = random_instance(seed, m_max=1, unit_cost=seed % 2 == 0)
    ranking, _ = run_greedy(inst)
    expect = classic_greedy(inst)
    assert ranking[:len(expect)] == expect
    assert msr_objective(inst, ranking).total == msr_objective(inst, expect).total


@given(st.integers(0, 10 ** 6), st.sampled_from(list(Scheme)), st.sampled_from(list(TieBreak)))
def test_lazy_matches_naive(seed, scheme, tiebreak):
    inst = random_instance(seed, n_max=12, m_max=6, unit_cost=seed % 2 == 0)
    lazy = run_greedy(inst, scheme, tiebreak, lazy=True, seed=seed)
    naive = run_greedy(inst, scheme, tiebreak, lazy=False, seed=seed)
    assert lazy == naive
    assert lazy[1].marginal_calls <= naive[1].marginal_calls


@given(st.integers(0, 10 ** 6), st.sampled_from(list(Scheme)))
def test_stop_is_sound(seed, scheme):
    inst = random_instance(seed, unit_cost=seed % 2 == 0)
    ranking, trace = run_greedy(inst, scheme)
    rest = set(range(inst.n)) - set(ranking)
    if trace.stop_reason == "zero-score":
        assert all(score(inst, ranking, v, scheme) == 0 for v in rest)
    else:
        assert not rest
    for step in trace.steps:
        assert step.score > 0


@given(st.integers(0, 10 ** 6))
def test_greedy_steps_follow_best_score(seed):
    inst = random_instance(seed, unit_cost=False)
    ranking, trace = run_greedy(inst)
    for k, step in enumerate(trace.steps):
        prefix = ranking[:k]
        others = [score(inst, prefix, v) for v in range(inst.n) if v not in ranking[:k + 1]]
        assert all(step.score >= s for s in others)
        assert step.score == score(inst, prefix, step.item)


def test_functions_below_min_cost_are_skipped():
    inst = Instance([*Instance.build([2, 3], []).items],
                    [BudgetedFunction(CappedModular([5, 5]), 1), BudgetedFunction(CappedModular([1, 0]), 2)])
    ranking, trace = run_greedy(inst)
    assert ranking == (0,)
    # f1 is never queried and f2 cannot afford v1
    assert trace.marginal_calls == 1

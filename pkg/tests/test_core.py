from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from msrank.core import (BudgetedFunction, Instance, Item, ValidationError, check_ranking,
                         dumps_instance, loads_instance, msr_objective, prefix_index,
                         validate_instance)
from msrank.functions import Activation, CappedModular
from msrank.oracle import random_instance

from conftest import V1, V2, V3

EX1_COSTS = {V1: Fraction(5, 2), V2: Fraction(3), V3: Fraction(13, 2)}


class TestPrefixIndex:
    def test_exact_tie_with_budget_counts(self):
        assert prefix_index((V1, V3), EX1_COSTS, 9) == 2

    def test_second_item_over_budget(self):
        assert prefix_index((V1, V3), EX1_COSTS, 3) == 1

    def test_zero_budget(self):
        assert prefix_index((V2, V1, V3), EX1_COSTS, 0) == 0

    def test_first_item_too_expensive(self):
        assert prefix_index((V3, V1), EX1_COSTS, 3) == 0

    @given(st.lists(st.integers(1, 5), min_size=0, max_size=8),
           st.integers(0, 30), st.integers(0, 30))
    def test_monotone_in_budget(self, cost_list, b1, b2):
        order = list(range(len(cost_list)))
        lo, hi = sorted((b1, b2))
        assert prefix_index(order, cost_list, lo) <= prefix_index(order, cost_list, hi)

    @given(st.integers(0, 10), st.fractions(0, 15))
    def test_unit_costs(self, n, budget):
        order = list(range(n))
        assert prefix_index(order, [1] * n, budget) == min(int(budget), n)


class TestObjective:
    def test_example1_optimum(self, ex1):
        ev = msr_objective(ex1, (V1, V3))
        assert ev.prefix_index == (1, 2)
        assert ev.per_function_value == (1, 1)
        assert ev.total == 2

    def test_example1_greedy_choice(self, ex1):
        assert msr_objective(ex1, (V2,)).total == Fraction(3, 2)

    def test_empty_ranking(self, ex1):
        ev = msr_objective(ex1, ())
        assert ev.total == 0
        assert ev.prefix_index == (0, 0)

    def test_no_functions(self):
        inst = Instance([Item(0, 1)], [])
        assert msr_objective(inst, (0,)).total == 0

    def test_unknown_item(self, ex1):
        with pytest.raises(ValidationError):
            msr_objective(ex1, (V1, 7))

    def test_duplicate_item(self, ex1):
        with pytest.raises(ValidationError):
            check_ranking(ex1, (V1, V1))

    @given(st.integers(0, 10 ** 6), st.data())
    def test_evaluation_invariants(self, seed, data):
        inst = random_instance(seed, unit_cost=seed % 2 == 0)
        order = data.draw(st.permutations(range(inst.n)))
        k = data.draw(st.integers(0, inst.n))
        ev = msr_objective(inst, order[:k])
        assert ev.total == sum(ev.per_function_value)
        costs = inst.costs
        for idx, f in zip(ev.prefix_index, inst.functions):
            assert sum(costs[v] for v in order[:idx]) <= f.budget
            assert idx == k or sum(costs[v] for v in order[:idx + 1]) > f.budget

    @given(st.integers(0, 10 ** 6), st.data())
    def test_appending_never_decreases(self, seed, data):
        inst = random_instance(seed, unit_cost=False)
        order = data.draw(st.permutations(range(inst.n)))
        totals = [msr_objective(inst, order[:k]).total for k in range(inst.n + 1)]
        assert totals == sorted(totals)

    @given(st.integers(0, 10 ** 6), st.data())
    def test_budget_growth_never_decreases(self, seed, data):
        inst = random_instance(seed, unit_cost=False)
        order = data.draw(st.permutations(range(inst.n)))
        i = data.draw(st.integers(0, inst.m - 1))
        extra = data.draw(st.integers(1, 20))
        funcs = list(inst.functions)
        funcs[i] = BudgetedFunction(funcs[i].oracle, funcs[i].budget + extra)
        bigger = Instance(inst.items, funcs)
        assert msr_objective(bigger, order).total >= msr_objective(inst, order).total


class TestValidation:
    def test_example1_ok(self, ex1):
        assert validate_instance(ex1) == []

    def test_zero_cost(self):
        inst = Instance([Item(0, 0), Item(1, 1)], [])
        assert any("non-positive cost" in p for p in validate_instance(inst))

    def test_negative_budget(self):
        inst = Instance([Item(0, 1)], [BudgetedFunction(Activation([0], 1), -1)])
        assert any("negative budget" in p for p in validate_instance(inst))

    def test_duplicate_ids(self):
        inst = Instance([Item(0, 1), Item(0, 2)], [])
        assert "duplicate item ids" in validate_instance(inst)

    def test_nonzero_empty_value(self):
        class Shifted(CappedModular):
            def value(self, items):
                return super().value(items) + 1
        inst = Instance([Item(0, 1)], [BudgetedFunction(Shifted([1]), 1)])
        assert any("f(empty)" in p for p in validate_instance(inst))

    def test_empty_catalog(self):
        assert "empty item catalog" in validate_instance(Instance([], []))


class TestJson:
    def test_example1_round_trip(self, ex1):
        text = dumps_instance(ex1)
        again = loads_instance(text)
        assert again == ex1
        assert dumps_instance(again) == text
        assert again.costs == (Fraction(5, 2), 3, Fraction(13, 2))

    def test_decimal_input(self):
        text = ('{"items": [{"id": 0, "cost": 2.5}, {"id": 1, "cost": "13/2"}],'
                ' "functions": [{"type": "activation", "budget": 9, "params": {"liked": [1]}}]}')
        inst = loads_instance(text)
        assert inst.costs == (Fraction(5, 2), Fraction(13, 2))
        assert msr_objective(inst, (0, 1)).total == 1

    @given(st.integers(0, 10 ** 6))
    def test_random_round_trip(self, seed):
        inst = random_instance(seed, unit_cost=seed % 3 == 0)
        assert loads_instance(dumps_instance(inst)) == inst

    @pytest.mark.parametrize("text", [
        "not json",
        '{"functions": []}',
        '{"items": [{"id": 0, "cost": 1}], "functions": [{"type": "nope", "budget": 1}]}',
        '{"items": [{"id": 0, "cost": 0}], "functions": []}',
        '{"items": [{"id": 0, "cost": 1}], "functions": [{"type": "activation", "budget": 1, "params": {"liked": [4]}}]}',
    ])
    def test_bad_documents(self, text):
        with pytest.raises(ValidationError):
            loads_instance(text)

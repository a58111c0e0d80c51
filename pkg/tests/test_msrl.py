import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from msrank.core import Instance, msr_objective
from msrank.functions import CappedModular
from msrank.msrl import (best_of, dp_solve, gamma, integer_instance, large_functions, large_gain,
                         round_instance, sort_for_dp)
from msrank.oracle import brute_force_gamma, random_instance, singleton_bad

from conftest import V1, V2, V3


class TestLargeItems:
    def test_example1_large_sets(self, ex1):
        assert large_functions(ex1, V1, 0) == {0}
        assert large_functions(ex1, V2, 0) == {0}
        assert large_functions(ex1, V3, 0) == {1}
        # 5/2 + 13/2 = 9 still fits f2
        assert large_functions(ex1, V3, Fraction(5, 2)) == {1}
        assert large_functions(ex1, V3, 3) == frozenset()

    def test_gamma_examples(self, ex1):
        assert gamma(ex1, (V2,)) == Fraction(3, 2)
        assert gamma(ex1, (V1, V3)) == 2
        assert gamma(ex1, (V2, V3)) == Fraction(3, 2)
        assert gamma(ex1, ()) == 0

    def test_sort_breaks_ties_by_id(self):
        inst = Instance.build([3, 1, 3, 2], [])
        assert sort_for_dp(inst) == (1, 3, 0, 2)

    def test_sort_example1(self, ex1):
        assert sort_for_dp(ex1) == (V1, V2, V3)

    @given(st.integers(0, 10 ** 6), st.data())
    def test_one_large_item_per_function(self, seed, data):
        inst = random_instance(seed, unit_cost=False)
        order = data.draw(st.permutations(range(inst.n)))
        hits = [0] * inst.m
        spent = 0
        for v in order:
            for i in large_functions(inst, v, spent):
                hits[i] += 1
            spent += inst.costs[v]
        assert max(hits, default=0) <= 1

    @given(st.integers(0, 10 ** 6), st.data())
    def test_gamma_below_objective(self, seed, data):
        inst = random_instance(seed, unit_cost=False)
        order = data.draw(st.permutations(range(inst.n)))
        assert gamma(inst, order) <= msr_objective(inst, order).total

    @given(st.integers(0, 10 ** 6), st.data())
    def test_removal_loses_at_most_own_gain(self, seed, data):
        inst = random_instance(seed, unit_cost=False)
        order = data.draw(st.permutations(range(inst.n)))
        k = data.draw(st.integers(0, inst.n - 1))
        spent = sum(inst.costs[v] for v in order[:k])
        own = large_gain(inst, order[k], spent)
        rest = order[:k] + order[k + 1:]
        assert gamma(inst, rest) >= gamma(inst, order) - own


class TestRounding:
    def test_floor_example(self):
        inst = Instance.build([1], [(CappedModular([1]), 1), (CappedModular([Fraction(9, 10)]), 1)])
        r = round_instance(inst, Fraction(1, 2))
        assert r.P == 1
        assert r.K == Fraction(1, 4)
        assert r.values == {(0, 0): 4, (1, 0): 3}
        assert r.grid == 8

    def test_example1(self, ex1):
        r = round_instance(ex1, Fraction(1, 10))
        assert r.P == Fraction(3, 2)
        assert r.K == Fraction(3, 40)
        assert r.values == {(0, V1): 13, (0, V2): 20, (1, V3): 13}
        assert r.grid == 40

    def test_float_eps_is_exact(self, ex1):
        assert round_instance(ex1, 0.1).K == Fraction(3, 40)

    @pytest.mark.parametrize("eps", [0, 1, -0.5, 2])
    def test_eps_range(self, ex1, eps):
        with pytest.raises(ValueError):
            round_instance(ex1, eps)

    def test_infeasible_large_pairs_ignored(self):
        # item is large for f but never fits: P stays 0
        inst = Instance.build([5], [(CappedModular([7]), 4)])
        assert round_instance(inst).no_large

    def test_integer_instance_needs_integers(self, ex1):
        with pytest.raises(ValueError):
            integer_instance(ex1)
        r = integer_instance(ex1, 2)
        assert r.values == {(0, V1): 2, (0, V2): 3, (1, V3): 2}
        assert r.grid == 5


class TestDp:
    def test_example1_rounded(self, ex1):
        res = dp_solve(ex1, round_instance(ex1))
        assert res.ranking == (V1, V3)
        assert res.value == 26

    def test_example1_scaled(self, ex1):
        res = dp_solve(ex1, integer_instance(ex1, 2))
        assert res.ranking == (V1, V3)
        assert res.value == 4
        assert res.table.cost(4) == 9
        assert res.table.cost(3) == 3
        assert res.table.cost(1) == Fraction(5, 2)
        assert res.table.cost(0) == 0

    def test_engine_name_checked(self, ex1):
        with pytest.raises(ValueError):
            dp_solve(ex1, round_instance(ex1), engine="fortran")

    @given(st.integers(0, 10 ** 6))
    def test_engines_agree(self, seed):
        inst = random_instance(seed, n_max=10, unit_cost=False)
        r = round_instance(inst, Fraction(1, 5))
        if r.no_large:
            return
        a = dp_solve(inst, r, engine="numpy", keep_columns=True)
        b = dp_solve(inst, r, engine="python", keep_columns=True)
        assert a.ranking == b.ranking
        assert a.value == b.value
        assert a.table.columns == b.table.columns
        assert a.table.updates == b.table.updates

    @given(st.integers(0, 10 ** 6))
    def test_dp_matches_rounded_brute_force(self, seed):
        inst = random_instance(seed, n_max=6, m_max=4, unit_cost=False)
        r = round_instance(inst, Fraction(1, 4))
        if r.no_large:
            return
        res = dp_solve(inst, r)
        assert r.gamma(inst, res.ranking) == res.value
        assert brute_force_gamma(inst, rounded=r)[1] == res.value

    @given(st.integers(0, 10 ** 6))
    def test_table_shape(self, seed):
        inst = random_instance(seed, n_max=8, unit_cost=False)
        r = round_instance(inst, Fraction(1, 3))
        if r.no_large:
            return
        table = dp_solve(inst, r, keep_columns=True).table
        for j in range(1, inst.n + 1):
            col = [table.cost(val, j) for val in range(r.grid + 1)]
            assert col[0] == 0
            # reaching a higher value never costs less
            assert col == sorted(col)
            if j > 1:
                assert all(table.cost(val, j) <= table.cost(val, j - 1) for val in range(r.grid + 1))

    @given(st.integers(0, 10 ** 6))
    def test_ranking_is_cost_sorted_and_feasible(self, seed):
        inst = random_instance(seed, n_max=8, unit_cost=False)
        r = round_instance(inst)
        if r.no_large:
            return
        res = dp_solve(inst, r)
        costs = [inst.costs[v] for v in res.ranking]
        assert costs == sorted(costs)
        assert res.table.cost(res.value) == sum(costs)

    def test_csv_dump(self, ex1):
        table = dp_solve(ex1, integer_instance(ex1, 2), keep_columns=True).table
        lines = table.to_csv().splitlines()
        assert lines[0] == "val,j,cost"
        assert len(lines) == 1 + 3 * 6
        assert "4,3,9" in lines
        assert "1,1,5/2" in lines
        assert "3,1,inf" in lines

    def test_csv_needs_columns(self, ex1):
        with pytest.raises(ValueError):
            dp_solve(ex1, integer_instance(ex1, 2)).table.to_csv()


class TestBestOf:
    def test_example1_picks_dp(self, ex1):
        ranking, rep = best_of(ex1)
        assert ranking == (V1, V3)
        assert rep.chosen == "dp"
        assert rep.greedy_objective == Fraction(3, 2)
        assert rep.dp_objective == 2

    def test_tie_keeps_greedy(self):
        inst = Instance.build([1], [(CappedModular([1]), 1)])
        ranking, rep = best_of(inst)
        assert rep.greedy_objective == rep.dp_objective == 1
        assert rep.chosen == "greedy"
        assert ranking == rep.greedy_ranking

    def test_singleton_bad(self):
        inst = singleton_bad(5)
        ranking, rep = best_of(inst)
        assert msr_objective(inst, ranking).total == Fraction(201, 50)
        assert rep.dp_objective == 1

    @given(st.integers(0, 10 ** 6))
    def test_best_of_dominates_both(self, seed):
        inst = random_instance(seed, unit_cost=False)
        ranking, rep = best_of(inst)
        total = msr_objective(inst, ranking).total
        assert total == max(rep.greedy_objective, rep.dp_objective)


def test_gamma_optimum_reached_by_exact_dp():
    for seed in range(40):
        inst = random_instance(seed, n_max=6, m_max=4, unit_cost=False, integer=True)
        r = integer_instance(inst)
        if r.no_large:
            continue
        res = dp_solve(inst, r)
        assert res.value == brute_force_gamma(inst)[1]
        assert gamma(inst, res.ranking) == res.value
        assert math.isfinite(res.table.cost(res.value))

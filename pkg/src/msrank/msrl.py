"""Large-item objective, its FPTAS dynamic program, and the best-of combiner.

An item ``v`` is *large* for function ``i`` when ``2 c(v) > b_i``; each
function can afford at most one large item.  The large-item objective of a
ranking credits item ``v_j`` with ``f_i({v_j})`` for every function that takes
it as a large item within budget.  The DP tables, per prefix of the
cost-sorted catalog and per integer value, the cheapest ranking reaching at
least that (rounded) value.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import Instance, Ranking, check_ranking, msr_objective
from .functions import Number, as_fraction
from .greedy import Scheme, TieBreak, run_greedy

DEFAULT_EPS = Fraction(1, 10)


def large_functions(instance: Instance, v: int, prefix_cost) -> frozenset:
    """Functions that take ``v`` as a large item when it follows a prefix of cost ``prefix_cost``."""
    c = instance.costs[v]
    return frozenset(i for i, f in enumerate(instance.functions)
                     if 2 * c > f.budget and prefix_cost + c <= f.budget)


def large_gain(instance: Instance, v: int, prefix_cost) -> Number:
    """Contribution of ``v`` appended after a prefix of cost ``prefix_cost``."""
    single = frozenset((v,))
    return sum((instance.functions[i].oracle.value(single)
                for i in sorted(large_functions(instance, v, prefix_cost))), Fraction(0))


def gamma(instance: Instance, ranking) -> Number:
    order = check_ranking(instance, ranking)
    total, spent = Fraction(0), Fraction(0)
    for v in order:
        total += large_gain(instance, v, spent)
        spent += instance.costs[v]
    return total


def sort_for_dp(instance: Instance) -> tuple:
    return tuple(sorted(range(instance.n), key=lambda v: (instance.costs[v], v)))


def feasible_large_pairs(instance: Instance):
    """Yield ``(i, v)`` with ``v`` large for ``i`` and ``c(v) <= b_i``."""
    for i, f in enumerate(instance.functions):
        for v, c in enumerate(instance.costs):
            if 2 * c > f.budget and c <= f.budget:
                yield i, v


@dataclass(frozen=True)
class RoundedInstance:
    """Integer singleton values ``floor(f_i(v) / K)`` on feasible large pairs.

    ``grid`` is the largest value index the DP table needs.  ``P == 0``
    means no function has a valuable large item and the DP is skipped.
    """

    eps: Fraction | None
    P: Number
    K: Fraction
    values: dict = field(repr=False)
    grid: int

    @property
    def no_large(self) -> bool:
        return self.P == 0

    def gain(self, instance: Instance, v: int, prefix_cost) -> int:
        return sum(self.values.get((i, v), 0) for i in large_functions(instance, v, prefix_cost))

    def gamma(self, instance: Instance, ranking) -> int:
        total, spent = 0, Fraction(0)
        for v in check_ranking(instance, ranking):
            total += self.gain(instance, v, spent)
            spent += instance.costs[v]
        return total


def round_instance(instance: Instance, eps=DEFAULT_EPS) -> RoundedInstance:
    eps = as_fraction(eps)
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    single = {}
    for i, v in feasible_large_pairs(instance):
        single[i, v] = instance.functions[i].oracle.value(frozenset((v,)))
    P = max(single.values(), default=0)
    if P <= 0:
        return RoundedInstance(eps, 0, Fraction(0), {}, 0)
    m = instance.m
    K = as_fraction(P) * eps / m
    values = {}
    for key, x in single.items():
        q = math.floor(as_fraction(x) / K)
        if q > 0:
            values[key] = q
    grid = math.ceil(Fraction(m * m) / eps)
    return RoundedInstance(eps, P, K, values, grid)


def integer_instance(instance: Instance, scale=1) -> RoundedInstance:
    """Use ``scale * f_i(v)`` unrounded; every such value must be an integer."""
    scale = as_fraction(scale)
    values = {}
    P = 0
    for i, v in feasible_large_pairs(instance):
        x = as_fraction(instance.functions[i].oracle.value(frozenset((v,))))
        P = max(P, x)
        y = x * scale
        if y.denominator != 1:
            raise ValueError(f"f_{i}(v{v}) * {scale} = {y} is not an integer")
        if y:
            values[i, v] = int(y)
    best = {}
    for (i, _), y in values.items():
        best[i] = max(best.get(i, 0), y)
    return RoundedInstance(None, P, 1 / scale, values, sum(best.values()))


@dataclass
class DpTable:
    """Final column of ``T(val, n)`` plus parent links for reconstruction.

    ``columns`` holds every column when the table was kept for debugging.
    Costs are stored as integers in units of ``1 / scale``; ``INF`` marks
    unreachable values.
    """

    order: tuple
    grid: int
    scale: int
    last: list
    updates: int
    engine: str
    columns: list | None = None

    def cost(self, val: int, j: int | None = None):
        col = self.last if j is None else self.columns[j - 1]
        x = int(col[val])
        return math.inf if x >= _INF else Fraction(x, self.scale)

    def to_csv(self) -> str:
        if self.columns is None:
            raise ValueError("table columns were not kept; rerun with keep_columns=True")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["val", "j", "cost"])
        for j in range(1, len(self.columns) + 1):
            for val in range(self.grid + 1):
                c = self.cost(val, j)
                w.writerow([val, j, "inf" if c == math.inf else str(c)])
        return buf.getvalue()


_INF = np.iinfo(np.int64).max // 4


@dataclass
class DpResult:
    ranking: Ranking
    value: int
    table: DpTable


def _scaled_costs(instance: Instance):
    nums = list(instance.costs) + list(instance.budgets)
    scale = 1
    for x in nums:
        scale = math.lcm(scale, x.denominator)
    costs = [int(c * scale) for c in instance.costs]
    budgets = [int(b * scale) for b in instance.budgets]
    return scale, costs, budgets


def _item_rules(instance, rounded, order, costs, budgets):
    """Per DP position: large functions as (prefix-cost threshold, weight),
    sorted by threshold descending (the budget-sorted cursor)."""
    rules = []
    for v in order:
        c = costs[v]
        rule = []
        for i, b in enumerate(budgets):
            w = rounded.values.get((i, v), 0)
            if w and 2 * c > b and c <= b:
                rule.append((b - c, w))
        rule.sort(reverse=True)
        rules.append(rule)
    return rules


def dp_solve(instance: Instance, rounded: RoundedInstance, *, engine: str = "auto",
             keep_columns: bool = False) -> DpResult:
    """Cheapest-cost-per-value DP over items in non-decreasing cost order.

    Returns the ranking responsible for the largest reachable value, that
    value (in rounded units), and the table.
    """
    order = sort_for_dp(instance)
    scale, costs, budgets = _scaled_costs(instance)
    k = rounded.grid
    rules = _item_rules(instance, rounded, order, costs, budgets)
    if engine == "auto":
        engine = "numpy" if sum(costs) < _INF // 2 else "python"
    if engine == "numpy":
        table = _solve_numpy(order, costs, rules, k, keep_columns)
    elif engine == "python":
        table = _solve_python(order, costs, rules, k, keep_columns)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    table.scale = scale
    last, parents = table.last, table._parents
    best = max(val for val in range(k + 1) if last[val] < _INF)
    ranking = []
    val = best
    for j in range(len(order), 0, -1):
        taken, src = parents[j - 1]
        if taken[val]:
            ranking.append(order[j - 1])
        val = int(src[val])
    del table._parents
    return DpResult(tuple(reversed(ranking)), best, table)


def _first_column(n_grid, c, rule):
    g = sum(w for t, w in rule if t >= 0)
    col = [_INF] * n_grid
    col[0] = 0
    top = min(g, n_grid - 1)
    for val in range(1, top + 1):
        col[val] = c
    taken = [val <= top and val > 0 for val in range(n_grid)]
    return col, taken, [0] * n_grid


def _solve_python(order, costs, rules, k, keep_columns):
    n_grid = k + 1
    prev, taken, src = _first_column(n_grid, costs[order[0]] if order else 0, rules[0] if order else [])
    parents = [(taken, src)]
    columns = [list(prev)] if keep_columns else None
    updates = n_grid
    for j in range(1, len(order)):
        c, rule = costs[order[j]], rules[j]
        cur = [_INF] * n_grid
        take_src = [-1] * n_grid
        # values descending: prefix costs shrink, so eligible functions only accumulate
        cursor, acc = 0, 0
        for val in range(k, -1, -1):
            updates += 1
            t_prev = prev[val]
            if t_prev >= _INF:
                continue
            while cursor < len(rule) and rule[cursor][0] >= t_prev:
                acc += rule[cursor][1]
                cursor += 1
            target = min(val + acc, k)
            cand = t_prev + c
            if cand < cur[target]:
                cur[target] = cand
                take_src[target] = val
        taken, src = [False] * n_grid, [0] * n_grid
        x, x_parent = _INF, (False, 0)
        for val in range(k, -1, -1):
            updates += 1
            best, parent = prev[val], (False, val)
            if cur[val] < best:
                best, parent = cur[val], (True, take_src[val])
            if x < best:
                best, parent = x, x_parent
            cur[val] = best
            taken[val], src[val] = parent
            x, x_parent = best, parent
        parents.append((taken, src))
        prev = cur
        if keep_columns:
            columns.append(list(cur))
    table = DpTable(tuple(order), k, 1, prev, updates, "python", columns)
    table._parents = parents
    return table


def _solve_numpy(order, costs, rules, k, keep_columns):
    n_grid = k + 1
    col, taken, src = _first_column(n_grid, costs[order[0]] if order else 0, rules[0] if order else [])
    prev = np.array(col, dtype=np.int64)
    parents = [(np.array(taken), np.array(src, dtype=np.int32))]
    columns = [prev.copy()] if keep_columns else None
    updates = n_grid
    vals = np.arange(n_grid, dtype=np.int64)
    for j in range(1, len(order)):
        c, rule = costs[order[j]], rules[j]
        updates += 2 * n_grid
        finite = prev < _INF
        cur = np.full(n_grid, _INF, dtype=np.int64)
        take_src = np.full(n_grid, -1, dtype=np.int64)
        fv = vals[finite]
        if fv.size:
            tp = prev[finite]
            if rule:
                # thresholds ascending with suffix sums of weights
                thr = np.array([t for t, _ in reversed(rule)], dtype=np.int64)
                suffix = np.concatenate([np.cumsum([w for _, w in rule])[::-1], [0]]).astype(np.int64)
                gain = suffix[np.searchsorted(thr, tp, side="left")]
            else:
                gain = np.zeros_like(tp)
            target = np.minimum(fv + gain, k)
            cand = tp + c
            # per target keep the cheapest candidate, ties to the larger source value
            sel = np.lexsort((-fv, cand, target))
            t_sorted = target[sel]
            first = np.ones(sel.size, dtype=bool)
            first[1:] = t_sorted[1:] != t_sorted[:-1]
            chosen = sel[first]
            cur[target[chosen]] = cand[chosen]
            take_src[target[chosen]] = fv[chosen]
        take = cur < prev
        local = np.where(take, cur, prev)
        local_src = np.where(take, take_src, vals)
        suffix_min = np.minimum.accumulate(local[::-1])[::-1]
        above = np.empty(n_grid, dtype=np.int64)
        above[:-1] = suffix_min[1:]
        above[-1] = _INF
        own = ~(above < local)
        owner = np.minimum.accumulate(np.where(own, vals, n_grid)[::-1])[::-1]
        new = local[owner]
        parents.append((take[owner], local_src[owner].astype(np.int32)))
        prev = new
        if keep_columns:
            columns.append(prev.copy())
    table = DpTable(tuple(order), k, 1, prev.tolist(), updates, "numpy",
                    [c.tolist() for c in columns] if keep_columns else None)
    table._parents = parents
    return table


@dataclass(frozen=True)
class BestOfReport:
    greedy_ranking: Ranking
    greedy_objective: Number
    dp_ranking: Ranking
    dp_objective: Number
    chosen: str


def best_of(instance: Instance, eps=DEFAULT_EPS) -> tuple[Ranking, BestOfReport]:
    """Better of the uniform greedy and the large-item DP under the true objective."""
    rounded = round_instance(instance, eps)
    greedy_rank, _ = run_greedy(instance, Scheme.UNIFORM, TieBreak.LOWEST_ID)
    dp_rank = () if rounded.no_large else dp_solve(instance, rounded).ranking
    alg1 = msr_objective(instance, greedy_rank).total
    alg2 = msr_objective(instance, dp_rank).total
    chosen = "dp" if alg2 > alg1 else "greedy"
    report = BestOfReport(greedy_rank, alg1, dp_rank, alg2, chosen)
    return (dp_rank if chosen == "dp" else greedy_rank), report

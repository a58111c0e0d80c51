"""Comparison rankers: GreedySR, GreedyMin, Quality and Random."""
from __future__ import annotations

from enum import Enum
from fractions import Fraction

import numpy as np

from .core import Instance, Ranking, msr_objective
from .greedy import is_positive

SATURATION_TOL = 1e-9


class BaselineKind(Enum):
    GREEDY_SR = "greedysr"
    GREEDY_MIN = "greedymin"
    QUALITY = "quality"
    RANDOM = "random"


def greedy_sr(instance: Instance) -> Ranking:
    """Greedy that favors functions close to their maximum value.

    Each candidate scores ``sum_i f_i(v | pi) / (f_i(V) - f_i(pi))`` over
    functions that are neither saturated nor out of budget for ``v``,
    divided by ``c(v)``.
    """
    costs = instance.costs
    funcs = [(f.oracle, f.budget, f.oracle.max_value()) for f in instance.functions]
    order, base, spent = [], frozenset(), Fraction(0)
    remaining = set(range(instance.n))
    while remaining:
        live = []
        for oracle, budget, top in funcs:
            if spent >= budget:
                continue
            gap = top - oracle.value(base)
            if gap > SATURATION_TOL:
                live.append((oracle, budget, gap))
        if not live:
            break
        best, best_score = None, None
        for v in sorted(remaining):
            c = costs[v]
            s = sum((o.marginal(v, base) / gap for o, b, gap in live if spent + c <= b), Fraction(0)) / c
            if best is None or s > best_score:
                best, best_score = v, s
        if not is_positive(best_score):
            break
        order.append(best)
        remaining.discard(best)
        base = base | {best}
        spent += costs[best]
    return tuple(order)


def _sum_marginal(instance: Instance, v: int, base: frozenset):
    return sum((f.oracle.marginal(v, base) for f in instance.functions), Fraction(0))


def greedy_min(instance: Instance) -> Ranking:
    """Best-of-two under the smallest budget, treating ``sum_i f_i`` as one function.

    Candidates are the cost-efficient knapsack greedy and the most valuable
    feasible singleton; the one with the larger true objective is returned
    (the greedy one on ties).
    """
    if not instance.functions:
        return ()
    costs = instance.costs
    cap = min(instance.budgets)
    order, base, spent = [], frozenset(), Fraction(0)
    remaining = set(range(instance.n))
    while True:
        best, best_ratio = None, None
        for v in sorted(remaining):
            if spent + costs[v] > cap:
                continue
            r = _sum_marginal(instance, v, base) / costs[v]
            if best is None or r > best_ratio:
                best, best_ratio = v, r
        if best is None or not is_positive(best_ratio):
            break
        order.append(best)
        remaining.discard(best)
        base = base | {best}
        spent += costs[best]
    greedy = tuple(order)

    single, single_value = None, None
    for v in range(instance.n):
        if costs[v] > cap:
            continue
        val = _sum_marginal(instance, v, frozenset())
        if single is None or val > single_value:
            single, single_value = v, val
    if single is None:
        return greedy
    singleton = (single,)
    if msr_objective(instance, singleton).total > msr_objective(instance, greedy).total:
        return singleton
    return greedy


def quality_rank(instance: Instance, per_cost: bool = True) -> Ranking:
    """Items by total singleton value (per unit cost by default), best first."""
    def quality(v):
        q = _sum_marginal(instance, v, frozenset())
        return q / instance.costs[v] if per_cost else q
    scores = [quality(v) for v in range(instance.n)]
    return tuple(sorted(range(instance.n), key=lambda v: (-scores[v], v)))


def random_rank(instance: Instance, seed: int = 0) -> Ranking:
    rng = np.random.Generator(np.random.PCG64(seed))
    return tuple(int(v) for v in rng.permutation(instance.n))


def run_baseline(instance: Instance, kind: BaselineKind, seed: int = 0) -> Ranking:
    if kind is BaselineKind.GREEDY_SR:
        return greedy_sr(instance)
    if kind is BaselineKind.GREEDY_MIN:
        return greedy_min(instance)
    if kind is BaselineKind.QUALITY:
        return quality_rank(instance)
    return random_rank(instance, seed)

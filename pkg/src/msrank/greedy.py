"""Generalized cost-efficient greedy (Greedy / WGreedy) with lazy evaluation.

Each step appends the item maximizing

    (1 / c(v)) * sum_i kappa_i * f_i(v | pi)

over the functions that still have budget left (``c(pi) < b_i``) and can
afford ``v`` (``c(pi) + c(v) <= b_i``).  ``kappa_i`` is 1 for the uniform
scheme and ``1 / b_i`` for the inverse-budget scheme.
"""
from __future__ import annotations

import csv
import heapq
import io
import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .core import Instance, Ranking, check_ranking
from .functions import Number, is_exact

ZERO_TOL = 1e-12


class Scheme(Enum):
    UNIFORM = "uniform"
    INVERSE_BUDGET = "inverse-budget"


class TieBreak(Enum):
    LOWEST_ID = "lowest"
    HIGHEST_ID = "highest"
    SEEDED_RANDOM = "random"


@dataclass(frozen=True)
class TraceStep:
    iteration: int
    item: int
    score: Number
    cost: Fraction
    active: int


@dataclass
class GreedyTrace:
    steps: list = field(default_factory=list)
    stop_reason: str = ""
    marginal_calls: int = field(default=0, compare=False)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["iteration", "item", "score", "cost", "active"])
        for s in self.steps:
            w.writerow([s.iteration, s.item, _fmt(s.score), _fmt(s.cost), s.active])
        return buf.getvalue()


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return repr(x)


def is_positive(x) -> bool:
    """Exact values compare against 0; floats against ``ZERO_TOL``."""
    return x > 0 if is_exact(x) else x > ZERO_TOL


def coefficients(instance: Instance, scheme: Scheme) -> list:
    if scheme is Scheme.UNIFORM:
        return [1] * instance.m
    if any(f.budget <= 0 for f in instance.functions):
        raise ValueError("inverse-budget coefficients need every budget to be positive")
    return [1 / f.budget for f in instance.functions]


def score(instance: Instance, ranking, v: int, scheme: Scheme = Scheme.UNIFORM) -> Number:
    """Greedy selection criterion for appending ``v`` to ``ranking``."""
    order = check_ranking(instance, ranking)
    if v in order:
        raise ValueError(f"item {v} is already ranked")
    kappa = coefficients(instance, scheme)
    spent = sum((instance.costs[u] for u in order), Fraction(0))
    base = frozenset(order)
    c = instance.costs[v]
    total = Fraction(0)
    for k, f in zip(kappa, instance.functions):
        if spent < f.budget and spent + c <= f.budget:
            total += k * f.oracle.marginal(v, base)
    return total / c


class _Scorer:
    """Run-local scoring state; counts oracle marginal queries."""

    def __init__(self, instance: Instance, scheme: Scheme):
        costs = instance.costs
        floor = min(costs) if costs else 0
        kappa = coefficients(instance, scheme)
        # a function whose budget is below every item cost can never score
        self.funcs = [(f.oracle, f.budget, k) for f, k in zip(instance.functions, kappa)
                      if f.budget >= floor]
        self.budgets = instance.budgets
        self.costs = costs
        self.calls = 0

    def __call__(self, v: int, base: frozenset, spent) -> Number:
        c = self.costs[v]
        total = Fraction(0)
        for oracle, budget, k in self.funcs:
            if spent < budget and spent + c <= budget:
                self.calls += 1
                total += k * oracle.marginal(v, base)
        return total / c

    def active(self, spent) -> int:
        return sum(1 for b in self.budgets if spent < b)


def _tie_keys(n: int, tiebreak: TieBreak, seed: int) -> list:
    if tiebreak is TieBreak.LOWEST_ID:
        return list(range(n))
    if tiebreak is TieBreak.HIGHEST_ID:
        return [-v for v in range(n)]
    perm = list(range(n))
    random.Random(seed).shuffle(perm)
    keys = [0] * n
    for rank, v in enumerate(perm):
        keys[v] = rank
    return keys


def run_greedy(instance: Instance, scheme: Scheme = Scheme.UNIFORM,
               tiebreak: TieBreak = TieBreak.LOWEST_ID, lazy: bool = True,
               seed: int = 0) -> tuple[Ranking, GreedyTrace]:
    """Build a ranking greedily; stops once no remaining item has a positive score.

    Among equal scores the item with the smallest tie key wins (lowest id,
    highest id, or a seeded random order).  ``lazy`` only changes how many
    oracle queries are made, never the result.
    """
    scorer = _Scorer(instance, scheme)
    keys = _tie_keys(instance.n, tiebreak, seed)
    pick = _pick_lazy if lazy else _pick_naive
    # lazy entries: (-upper bound, tie key, item, iteration stamp)
    state = {"heap": None}

    order: list[int] = []
    base = frozenset()
    spent = Fraction(0)
    remaining = set(range(instance.n))
    trace = GreedyTrace()
    iteration = 0
    while True:
        if not remaining:
            trace.stop_reason = "exhausted"
            break
        iteration += 1
        best, best_score = pick(scorer, keys, remaining, base, spent, iteration, state)
        if best is None or not is_positive(best_score):
            trace.stop_reason = "zero-score"
            break
        active = scorer.active(spent)
        order.append(best)
        remaining.discard(best)
        base = base | {best}
        spent += instance.costs[best]
        trace.steps.append(TraceStep(iteration, best, best_score, spent, active))
    trace.marginal_calls = scorer.calls
    return tuple(order), trace


def _pick_naive(scorer, keys, remaining, base, spent, iteration, state):
    best, best_score = None, None
    for v in sorted(remaining, key=keys.__getitem__):
        s = scorer(v, base, spent)
        if best is None or s > best_score:
            best, best_score = v, s
    return best, best_score


def _pick_lazy(scorer, keys, remaining, base, spent, iteration, state):
    heap = state["heap"]
    if heap is None:
        heap = [(-scorer(v, base, spent), keys[v], v, iteration) for v in sorted(remaining)]
        heapq.heapify(heap)
        state["heap"] = heap
    while heap:
        neg, key, v, stamp = heap[0]
        if v not in remaining:
            heapq.heappop(heap)
            continue
        if stamp == iteration:
            heapq.heappop(heap)
            return v, -neg
        if not is_positive(-neg):
            # every bound is at most this one and scores never grow back
            return v, -neg
        heapq.heapreplace(heap, (-scorer(v, base, spent), key, v, iteration))
    return None, None

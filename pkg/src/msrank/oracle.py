"""Exhaustive solvers and the adversarial fixtures used as ground truth."""
from __future__ import annotations

import random
from fractions import Fraction

from .core import Instance, Ranking
from .functions import Activation, CappedModular, Number, WeightedCoverage, as_fraction
from .msrl import feasible_large_pairs, large_gain

DEFAULT_GUARD = 10 ** 7


class TooLarge(RuntimeError):
    """The enumeration would visit more sequences than the guard allows."""


def _sequence_bound(costs, limit, guard) -> int:
    """Upper bound on the number of cost-feasible sequences (the cheapest
    items give the deepest prefix); stops counting past ``guard``."""
    depth, spent = 0, 0
    for c in sorted(costs):
        if spent + c > limit:
            break
        spent += c
        depth += 1
    total, falling = 1, 1
    n = len(costs)
    for d in range(depth):
        falling *= n - d
        total += falling
        if total > guard:
            break
    return total


def brute_force_msr(instance: Instance, guard: int = DEFAULT_GUARD) -> tuple[Ranking, Number]:
    """Maximum objective over all rankings, by exhaustive search over sequences.

    A sequence is extended only while some function is still open after the
    extension.  Ties go to the lexicographically smallest ranking.
    """
    funcs = instance.functions
    if not funcs:
        return (), Fraction(0)
    costs = instance.costs
    top = max(f.budget for f in funcs)
    bound = _sequence_bound(costs, top, guard)
    if bound > guard:
        raise TooLarge(f"about {bound} sequences exceed the guard of {guard}")
    budgets = [f.budget for f in funcs]
    memo: dict = {}

    def value(i, s):
        key = (i, s)
        if key not in memo:
            memo[key] = funcs[i].oracle.value(s)
        return memo[key]

    best = [Fraction(-1), ()]
    visited = [0]

    def visit(order, s, spent, closed):
        visited[0] += 1
        if visited[0] > guard:
            raise TooLarge(f"visited more than {guard} sequences")
        open_ = [i for i in range(len(funcs)) if budgets[i] >= spent]
        total = closed + sum((value(i, s) for i in open_), Fraction(0))
        if total > best[0]:
            best[0], best[1] = total, tuple(order)
        if not open_:
            return
        reach = max(budgets[i] for i in open_)
        for v in range(len(costs)):
            if v in s:
                continue
            nxt = spent + costs[v]
            if nxt > reach:
                continue
            closing = sum((value(i, s) for i in open_ if budgets[i] < nxt), Fraction(0))
            order.append(v)
            visit(order, s | {v}, nxt, closed + closing)
            order.pop()

    visit([], frozenset(), Fraction(0), Fraction(0))
    return best[1], best[0]


def brute_force_gamma(instance: Instance, guard: int = DEFAULT_GUARD, rounded=None) -> tuple[Ranking, Number]:
    """Maximum large-item objective over sequences of large items.

    With ``rounded`` (a :class:`RoundedInstance`) the integer rounded values
    are maximized instead.  Items contributing nothing at their position
    are never appended; they cannot raise the objective.
    """
    large = sorted({v for _, v in feasible_large_pairs(instance)})
    if not large:
        return (), Fraction(0) if rounded is None else 0
    costs = instance.costs
    top = max(f.budget for f in instance.functions)
    bound = _sequence_bound([costs[v] for v in large], top, guard)
    if bound > guard:
        raise TooLarge(f"about {bound} sequences exceed the guard of {guard}")
    if rounded is None:
        gain = lambda v, spent: large_gain(instance, v, spent)
        zero = Fraction(0)
    else:
        gain = lambda v, spent: rounded.gain(instance, v, spent)
        zero = 0
    best = [zero - 1, ()]
    visited = [0]

    def visit(order, spent, total):
        visited[0] += 1
        if visited[0] > guard:
            raise TooLarge(f"visited more than {guard} sequences")
        if total > best[0]:
            best[0], best[1] = total, tuple(order)
        for v in large:
            if v in order:
                continue
            g = gain(v, spent)
            if g <= 0:
                continue
            order.append(v)
            visit(order, spent + costs[v], total + g)
            order.pop()

    visit([], Fraction(0), zero)
    return best[1], best[0]


# -- fixtures -----------------------------------------------------------------

def example1() -> Instance:
    """Three items, two modular functions; cost-efficient greedy and the best
    singleton both take the middle item while the optimum skips it."""
    f1 = CappedModular({0: 1, 1: Fraction(3, 2)}, 3)
    f2 = CappedModular({2: 1}, 3)
    return Instance.build([Fraction(5, 2), 3, Fraction(13, 2)],
                          [(f1, 3, "f1"), (f2, 9, "f2")], names=["v1", "v2", "v3"])


def tight2(k: int = 2, eps=Fraction(1, 100)) -> Instance:
    """Unit-cost family where the uniform greedy can only reach about half the optimum.

    ``n = m = 2k`` and ``b_i = i``.  For ``i <= k``:
    ``f_i = min(1, [v_i] + eps [v_{i+k}])``; for ``i > k``: ``f_i = [v_i]``.
    """
    eps = as_fraction(eps)
    n = 2 * k
    funcs = []
    for i in range(1, n + 1):
        if i <= k:
            w = {i - 1: 1, i + k - 1: eps}
        else:
            w = {i - 1: 1}
        funcs.append((CappedModular(w, n, cap=1), i, f"f{i}"))
    return Instance.build([1] * n, funcs, names=[f"v{i}" for i in range(1, n + 1)])


def singleton_bad(m: int = 5, eps=Fraction(1, 100)) -> Instance:
    """Budgets ``b_i = i``; item ``v_i`` (cost 1) is worth 1 to ``f_i`` only;
    a tiny item ``v_0`` (cost eps) is worth ``2 eps / m`` to every function."""
    eps = as_fraction(eps)
    n = m + 1
    funcs = []
    for i in range(1, m + 1):
        funcs.append((CappedModular({0: 2 * eps / m, i: 1}, n), i, f"f{i}"))
    return Instance.build([eps] + [1] * m, funcs, names=[f"v{i}" for i in range(n)])


def second_bad(m: int = 4, eps=Fraction(1, 100)) -> Instance:
    """Budgets ``b_i = 2^i``.  Function ``i`` owns a big item of cost ``2^i``
    worth ``1 - m eps + i eps`` and a half-size item of cost ``2^(i-1)`` worth
    half of that minus ``eps``.  Items are ``v_{i1}`` at id ``2(i-1)`` and
    ``v_{i2}`` at id ``2(i-1)+1``."""
    eps = as_fraction(eps)
    n = 2 * m
    costs, names, funcs = [], [], []
    for i in range(1, m + 1):
        big = 1 - m * eps + i * eps
        costs += [2 ** i, 2 ** (i - 1)]
        names += [f"v{i}1", f"v{i}2"]
        w = {2 * (i - 1): big, 2 * (i - 1) + 1: big / 2 - eps}
        funcs.append((CappedModular(w, n), 2 ** i, f"f{i}"))
    return Instance.build(costs, funcs, names=names)


FIXTURES = {
    "example1": example1,
    "tight2": tight2,
    "singleton_bad": singleton_bad,
    "second_bad": second_bad,
}


def fixture(name: str, **params) -> Instance:
    try:
        build = FIXTURES[name]
    except KeyError:
        raise ValueError(f"unknown fixture {name!r}; known: {sorted(FIXTURES)}") from None
    return build(**params)


# -- random instances for property suites --------------------------------------

def random_function(rng: random.Random, n: int, family: str, integer: bool = False):
    if family == "activation":
        liked = [v for v in range(n) if rng.random() < 0.4] or [rng.randrange(n)]
        return Activation(liked, n)
    if family == "capped_modular":
        if integer:
            w = [rng.randint(0, 5) for _ in range(n)]
            return CappedModular(w)
        w = [Fraction(rng.randint(0, 8), rng.randint(1, 4)) for _ in range(n)]
        cap = None if rng.random() < 0.3 else Fraction(rng.randint(1, 12), 2)
        return CappedModular(w, cap=cap)
    if family == "coverage":
        universe = [f"e{k}" for k in range(rng.randint(2, 8))]
        covers = [[e for e in universe if rng.random() < 0.35] for _ in range(n)]
        weights = {e: rng.randint(1, 4) for e in universe}
        return WeightedCoverage(covers, weights)
    raise ValueError(f"unknown family {family!r}")


FAMILIES = ("activation", "capped_modular", "coverage")


def random_instance(seed: int, n_max: int = 7, m_max: int = 5, unit_cost: bool = True,
                    integer: bool = False, max_cost: int = 10, n_min: int = 1) -> Instance:
    """Small random instance for brute-force comparisons.

    Unit-cost instances draw budgets from ``1..n``; knapsack instances draw
    costs from ``1..max_cost`` and budgets from ``1..2*max_cost`` so that
    large items are common.
    """
    rng = random.Random(seed)
    n = rng.randint(n_min, n_max)
    m = rng.randint(1, m_max)
    if unit_cost:
        costs = [1] * n
        budgets = [rng.randint(1, n) for _ in range(m)]
    else:
        costs = [rng.randint(1, max_cost) for _ in range(n)]
        budgets = [rng.randint(1, 2 * max_cost) for _ in range(m)]
    funcs = []
    for i in range(m):
        family = rng.choice(FAMILIES)
        funcs.append((random_function(rng, n, family, integer), budgets[i], f"{family}{i}"))
    return Instance.build(costs, funcs)

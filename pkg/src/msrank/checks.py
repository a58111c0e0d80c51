"""Oracle-backed verification suites run by ``msrank check``.

Each suite returns a list of :class:`CheckResult`; the CLI prints one line
per result and exits non-zero when any fails.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .baselines import greedy_min
from .core import msr_objective
from .functions import (Activation, CappedModular, FacilityLocationGain, ValuationOracle,
                        WeightedCoverage, submodularity_audit)
from .greedy import Scheme, TieBreak, run_greedy
from .msrl import best_of, dp_solve, gamma, integer_instance, round_instance
from .oracle import (brute_force_gamma, brute_force_msr, example1, random_instance,
                     singleton_bad, tight2)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}" + (f"  ({self.detail})" if self.detail else "")


def suite_approx(count: int = 40, seed: int = 0) -> list[CheckResult]:
    bad2, bad3, bad_knap = [], [], []
    eps = Fraction(1, 10)
    for s in range(seed, seed + count):
        inst = random_instance(s, unit_cost=True)
        _, opt = brute_force_msr(inst)
        g = msr_objective(inst, run_greedy(inst, Scheme.UNIFORM)[0]).total
        w = msr_objective(inst, run_greedy(inst, Scheme.INVERSE_BUDGET)[0]).total
        if 2 * g < opt:
            bad2.append(s)
        if 3 * w < opt:
            bad3.append(s)
        knap = random_instance(s, n_max=6, m_max=4, unit_cost=False)
        _, kopt = brute_force_msr(knap)
        ranking, _ = best_of(knap, eps)
        if msr_objective(knap, ranking).total * (3 + 1 / (1 - eps)) < kopt:
            bad_knap.append(s)
    return [
        CheckResult("greedy >= OPT/2 (unit costs)", not bad2, f"{count} instances, violations {bad2}"),
        CheckResult("wgreedy >= OPT/3 (unit costs)", not bad3, f"{count} instances, violations {bad3}"),
        CheckResult("best_of >= OPT/(3+1/(1-eps)) (knapsack)", not bad_knap,
                    f"{count} instances, violations {bad_knap}"),
    ]


def suite_dp(count: int = 40, seed: int = 0) -> list[CheckResult]:
    mismatch, engines, fptas = [], [], []
    for s in range(seed, seed + count):
        inst = random_instance(s, n_max=6, m_max=4, unit_cost=False, integer=True)
        exact = integer_instance(inst)
        _, best = brute_force_gamma(inst)
        res = dp_solve(inst, exact)
        if res.value != best or gamma(inst, res.ranking) != best:
            mismatch.append(s)
        if dp_solve(inst, exact, engine="python").ranking != res.ranking:
            engines.append(s)
        for eps in (Fraction(1, 2), Fraction(1, 10), Fraction(1, 100)):
            rounded = round_instance(inst, eps)
            if rounded.no_large:
                continue
            ranking = dp_solve(inst, rounded).ranking
            if gamma(inst, ranking) < (1 - eps) * best:
                fptas.append((s, str(eps)))
    return [
        CheckResult("dp value == brute-force large-item optimum", not mismatch,
                    f"{count} instances, mismatches {mismatch}"),
        CheckResult("numpy and python DP engines agree", not engines, f"disagreements {engines}"),
        CheckResult("rounded DP within (1-eps) of optimum", not fptas, f"violations {fptas}"),
    ]


def suite_fixtures() -> list[CheckResult]:
    out = []
    inst = example1()
    g = msr_objective(inst, run_greedy(inst)[0]).total
    ranking, report = best_of(inst, Fraction(1, 10))
    out.append(CheckResult("example1: greedy 3/2, best_of 2 via (v1,v3)",
                           g == Fraction(3, 2) and report.dp_objective == 2 and ranking == (0, 2),
                           f"greedy={g} best_of={msr_objective(inst, ranking).total} ranking={ranking}"))
    t = tight2(10, Fraction(1, 1000))
    _, opt = brute_force_msr(tight2(2, Fraction(1, 1000)))
    alg = msr_objective(t, run_greedy(t, tiebreak=TieBreak.HIGHEST_ID)[0]).total
    ratio = alg / 20
    out.append(CheckResult("tight2: uniform greedy ratio near 1/2", ratio <= Fraction(51, 100) and opt == 4,
                           f"k=10 ratio={float(ratio):.4f}; OPT(k=2)={opt}"))
    sb = singleton_bad(5, Fraction(1, 100))
    _, sopt = brute_force_msr(sb)
    gm = msr_objective(sb, greedy_min(sb)).total
    bo = msr_objective(sb, best_of(sb, Fraction(1, 10))[0]).total
    out.append(CheckResult("singleton_bad(m=5): greedy_min < OPT/3 <= best_of*(3+1/0.9)/3",
                           3 * gm < sopt and bo * (3 + Fraction(10, 9)) >= sopt,
                           f"OPT={sopt} greedy_min={gm} best_of={bo}"))
    return out


class _Supermodular(ValuationOracle):
    """``|S|^2``: monotone but supermodular; the audit must reject it."""

    kind = "supermodular_stub"

    def __init__(self, n):
        self.n_items = n

    def value(self, items):
        return len(self._members(items)) ** 2

    def params(self):
        return {}

    @classmethod
    def from_params(cls, params, n_items):
        return cls(n_items)


def audit_oracles(seed: int = 0, n: int = 8) -> dict:
    rng = random.Random(seed)
    pts = np.random.Generator(np.random.PCG64(seed)).random((5, 2))
    dist = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2))
    return {
        "coverage": WeightedCoverage([[f"e{rng.randrange(6)}" for _ in range(rng.randint(0, 3))]
                                      for _ in range(n)], {f"e{k}": rng.randint(1, 5) for k in range(6)}),
        "activation": Activation([v for v in range(n) if rng.random() < 0.3], n),
        "capped_modular": CappedModular([Fraction(rng.randint(0, 9), rng.randint(1, 3)) for _ in range(n)],
                                        cap=Fraction(7, 2)),
        "facility": FacilityLocationGain(dist, exact=True),
    }


def suite_audit(trials: int = 1000, seed: int = 0) -> list[CheckResult]:
    out = []
    for name, oracle in audit_oracles(seed).items():
        cx = submodularity_audit(oracle, trials=trials, seed=seed)
        out.append(CheckResult(f"audit {name}", cx is None, str(cx) if cx else f"{trials} trials"))
    cx = submodularity_audit(_Supermodular(8), trials=trials, seed=seed)
    out.append(CheckResult("audit catches supermodular stub", cx is not None, str(cx)))
    return out


SUITES = {
    "approx": suite_approx,
    "dp": suite_dp,
    "fixtures": suite_fixtures,
    "audit": suite_audit,
}

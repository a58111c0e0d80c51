"""Dataset loaders and seeded synthetic generators.

All randomness comes from numpy's PCG64 bit generator
(``numpy.random.Generator(numpy.random.PCG64(seed))``).  Draw order is
fixed: item costs first, then (synthetic only) the liked sets one user at a
time, then function budgets.
"""
from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from .core import BudgetedFunction, Instance, Item, ValidationError
from .functions import Activation, FacilityLocationGain, WeightedCoverage

log = logging.getLogger(__name__)

COST_MODES = ("unit", "uniform", "document-length")
BUDGET_MODES = ("uniform", "scaled-by-mean-cost")
MAX_ITEM_COST = 10


class DataError(ValidationError):
    """Input file could not be turned into an instance."""


@dataclass(frozen=True)
class ScenarioConfig:
    max_budget: int = 10
    cost_mode: str = "unit"
    budget_mode: str = "uniform"
    seed: int = 0

    def __post_init__(self):
        if self.max_budget < 1:
            raise ValueError("max_budget must be a positive integer")
        if self.cost_mode not in COST_MODES:
            raise ValueError(f"cost_mode must be one of {COST_MODES}")
        if self.budget_mode not in BUDGET_MODES:
            raise ValueError(f"budget_mode must be one of {BUDGET_MODES}")

    def rng(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(self.seed))


def draw_costs(rng: np.random.Generator, n: int, config: ScenarioConfig,
               lengths: Sequence[int] | None = None) -> list:
    if config.cost_mode == "unit":
        return [Fraction(1)] * n
    if config.cost_mode == "uniform":
        return [Fraction(int(x)) for x in rng.integers(1, MAX_ITEM_COST, size=n, endpoint=True)]
    if lengths is None:
        raise ValueError("document-length costs need document lengths")
    return [Fraction(x) for x in lengths]


def draw_budgets(rng: np.random.Generator, m: int, config: ScenarioConfig, costs: Sequence) -> list:
    raw = [Fraction(int(x)) for x in rng.integers(1, config.max_budget, size=m, endpoint=True)]
    if config.budget_mode == "scaled-by-mean-cost":
        mean = sum(costs, Fraction(0)) / len(costs)
        raw = [b * mean for b in raw]
    return raw


def _build(config: ScenarioConfig, n: int, oracles_factory, labels, names=None, lengths=None) -> Instance:
    rng = config.rng()
    costs = draw_costs(rng, n, config, lengths)
    oracles = oracles_factory(rng)
    budgets = draw_budgets(rng, len(oracles), config, costs)
    items = [Item(v, c, None if names is None else names[v]) for v, c in enumerate(costs)]
    functions = [BudgetedFunction(o, b, lab) for o, b, lab in zip(oracles, budgets, labels)]
    return Instance(items, functions)


def load_activation_instance(path, config: ScenarioConfig, like_threshold: int = 1) -> Instance:
    """One 0-1 activation function per user from a ``user,item,count`` CSV.

    A user likes an item when its count is strictly above ``like_threshold``.
    Items are numbered in sorted order of their labels; users with no liked
    item are dropped.
    """
    path = Path(path)
    triples = []
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise DataError(f"{path}: empty file")
        if [h.strip() for h in header] != ["user", "item", "count"]:
            raise DataError(f"{path}:1: header must be 'user,item,count', got {','.join(header)!r}")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not x.strip() for x in row):
                continue
            if len(row) != 3:
                raise DataError(f"{path}:{lineno}: expected 3 fields, got {len(row)}")
            user, item, count = (x.strip() for x in row)
            if not user or not item:
                raise DataError(f"{path}:{lineno}: empty user or item")
            try:
                c = int(count)
            except ValueError:
                raise DataError(f"{path}:{lineno}: count {count!r} is not an integer") from None
            if c < 0:
                raise DataError(f"{path}:{lineno}: negative count {c}")
            triples.append((user, item, c))
    if not triples:
        raise DataError(f"{path}: no rating rows")

    item_names = sorted({it for _, it, _ in triples})
    index = {name: v for v, name in enumerate(item_names)}
    liked: dict[str, set] = {}
    for user, item, c in triples:
        bucket = liked.setdefault(user, set())
        if c > like_threshold:
            bucket.add(index[item])
    users = []
    for user in sorted(liked):
        if liked[user]:
            users.append(user)
        else:
            log.warning("user %s likes no item above threshold %s; dropped", user, like_threshold)
    n = len(item_names)

    def factory(rng):
        return [Activation(liked[u], n) for u in users]

    return _build(config, n, factory, users, names=item_names)


def _read_token_lines(path) -> list[list[str]]:
    with Path(path).open(encoding="utf-8") as fh:
        return [line.split() for line in fh]


def load_coverage_instance(topics_path, documents_path, config: ScenarioConfig) -> Instance:
    """One keyword-coverage-rate function per topic; documents are the items.

    Topics file: one whitespace-separated keyword list per line.  Documents
    file: one whitespace-tokenized document per line.  A document covers a
    keyword if the token occurs in it at least once.
    """
    topics = [t for t in _read_token_lines(topics_path) if t]
    docs = _read_token_lines(documents_path)
    while docs and not docs[-1]:
        docs.pop()
    if not docs:
        raise DataError(f"{documents_path}: no documents")
    if not topics:
        raise DataError(f"{topics_path}: no topics")
    for lineno, doc in enumerate(docs, start=1):
        if not doc:
            raise DataError(f"{documents_path}:{lineno}: empty document")
    for lineno, kw in enumerate(topics, start=1):
        if not kw:
            raise DataError(f"{topics_path}:{lineno}: topic with zero keywords")
    token_sets = [set(d) for d in docs]
    lengths = [len(d) for d in docs]
    oracles, labels = [], []
    for t, keywords in enumerate(topics):
        kw = sorted(set(keywords))
        weight = Fraction(1, len(kw))
        covers = [sorted(ts.intersection(kw)) for ts in token_sets]
        oracles.append(WeightedCoverage(covers, {k: weight for k in kw}))
        labels.append(f"topic{t}")
    if config.cost_mode == "document-length" and config.budget_mode != "scaled-by-mean-cost":
        config = ScenarioConfig(config.max_budget, config.cost_mode, "scaled-by-mean-cost", config.seed)
    return _build(config, len(docs), lambda rng: oracles, labels, lengths=lengths)


def load_points(path) -> np.ndarray:
    rows = []
    with Path(path).open(newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row:
                continue
            try:
                rows.append([float(x) for x in row])
            except ValueError:
                raise DataError(f"{path}:{lineno}: non-numeric value") from None
    if not rows:
        raise DataError(f"{path}: no points")
    width = len(rows[0])
    for lineno, r in enumerate(rows, start=1):
        if len(r) != width:
            raise DataError(f"{path}:{lineno}: expected {width} columns, got {len(r)}")
    return np.array(rows)


def facility_oracle(points: np.ndarray, features: Sequence[int], exact: bool = False) -> FacilityLocationGain:
    """Radius-reduction function on a feature subset; every point is both a
    data point and a candidate item."""
    points = np.asarray(points, dtype=float)
    feats = list(features)
    if not feats:
        raise DataError("empty feature subset")
    if min(feats) < 0 or max(feats) >= points.shape[1]:
        raise DataError(f"feature index out of range for {points.shape[1]}-dimensional points")
    sub = points[:, feats]
    diff = sub[:, None, :] - sub[None, :, :]
    dist = np.sqrt((diff ** 2).sum(axis=2))
    return FacilityLocationGain(dist, exact=exact)


def load_facility_instance(points, feature_sets: Sequence[Sequence[int]], config: ScenarioConfig,
                           exact: bool = False) -> Instance:
    """One facility-location gain per model; ``points`` is an array or a CSV path."""
    if not isinstance(points, np.ndarray):
        points = load_points(points)
    if points.ndim != 2:
        raise DataError("points must form a 2-D matrix")
    oracles = [facility_oracle(points, fs, exact) for fs in feature_sets]
    labels = [f"model{k}" for k in range(len(oracles))]
    return _build(config, points.shape[0], lambda rng: oracles, labels)


def gen_synthetic(n: int, m: int, density: float, config: ScenarioConfig) -> Instance:
    """``m`` activation functions whose liked sets include each item independently
    with probability ``density``.  Users that like nothing are kept (their
    function is identically zero) so ``m`` is exact."""
    if not 0 < density <= 1:
        raise ValueError("density must lie in (0, 1]")

    def factory(rng):
        out = []
        for _ in range(m):
            mask = rng.random(n) < density
            out.append(Activation(np.flatnonzero(mask).tolist(), n))
        return out

    return _build(config, n, factory, [f"user{u}" for u in range(m)])

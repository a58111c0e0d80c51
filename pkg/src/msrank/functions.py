"""Monotone submodular valuation oracles.

Every oracle is immutable and answers queries on explicit item sets, so the
algorithms that use them keep their own incremental bookkeeping.  Values are
exact (``int``/``Fraction``) except for :class:`FacilityLocationGain`, which
uses floats unless built with ``exact=True``.
"""
from __future__ import annotations

import random
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from numbers import Rational
from typing import Any, ClassVar, Iterable, Mapping, Sequence

import numpy as np

Number = Any  # int | Fraction | float


class UnknownItemError(ValueError):
    """An item id outside ``range(n_items)`` was passed to an oracle."""


def as_fraction(x) -> Fraction:
    """Convert ints, Fractions, decimal strings, ``"p/q"`` strings or floats.

    Floats go through their shortest repr, so ``2.5`` becomes ``5/2`` and
    ``0.1`` becomes ``1/10`` (the value the user wrote, not the binary one).
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if x != x or x in (float("inf"), float("-inf")):
            raise ValueError(f"non-finite number {x!r}")
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"cannot convert {type(x).__name__} to Fraction")


def encode_number(x):
    """JSON encoding that round-trips through :func:`as_fraction`."""
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    return x


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


class ValuationOracle(ABC):
    """A set function ``f: 2^V -> R+`` with ``f(empty) = 0``.

    Subclasses implement :meth:`value`; :meth:`marginal` defaults to the
    difference of two value queries and is overridden where cheaper.
    """

    kind: ClassVar[str]
    n_items: int

    @abstractmethod
    def value(self, items: Iterable[int]) -> Number:
        ...

    def marginal(self, item: int, items: Iterable[int]) -> Number:
        base = self._members(items)
        self._check_item(item)
        if item in base:
            return 0
        return self.value(base | {item}) - self.value(base)

    @cached_property
    def _max_value(self) -> Number:
        return self.value(range(self.n_items))

    def max_value(self) -> Number:
        """``f(V)``, computed once."""
        return self._max_value

    @abstractmethod
    def params(self) -> dict:
        """JSON-ready parameter payload accepted by :meth:`from_params`."""

    @classmethod
    @abstractmethod
    def from_params(cls, params: Mapping, n_items: int) -> "ValuationOracle":
        ...

    def _check_item(self, item: int) -> None:
        if not (isinstance(item, (int, np.integer)) and 0 <= item < self.n_items):
            raise UnknownItemError(f"unknown item id {item!r} (n_items={self.n_items})")

    def _members(self, items: Iterable[int]) -> frozenset:
        s = items if isinstance(items, frozenset) else frozenset(items)
        for v in s:
            self._check_item(v)
        return s

    def __eq__(self, other):
        if not isinstance(other, ValuationOracle):
            return NotImplemented
        return (self.kind, self.n_items, self.params()) == (other.kind, other.n_items, other.params())

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self):
        return f"{type(self).__name__}(n_items={self.n_items})"


class WeightedCoverage(ValuationOracle):
    """``f(S)`` = total weight of the elements covered by the items in ``S``.

    Elements are normalized to strings so the JSON form round-trips.
    Elements without an explicit weight count 1.
    """

    kind = "coverage"

    def __init__(self, covers: Sequence[Iterable], weights: Mapping | None = None):
        self.n_items = len(covers)
        self.covers = tuple(frozenset(str(e) for e in c) for c in covers)
        universe = frozenset().union(*self.covers) if self.covers else frozenset()
        given = {str(k): as_fraction(w) for k, w in (weights or {}).items()}
        for k, w in given.items():
            if w < 0:
                raise ValueError(f"negative weight {w} for element {k!r}")
        self.weights = {e: given.get(e, Fraction(1)) for e in universe}
        # explicit weights for elements nobody covers are kept for round-tripping
        self._extra = {k: w for k, w in given.items() if k not in universe}

    def value(self, items):
        covered = set()
        for v in self._members(items):
            covered |= self.covers[v]
        return sum((self.weights[e] for e in covered), Fraction(0))

    def marginal(self, item, items):
        base = self._members(items)
        self._check_item(item)
        if item in base:
            return Fraction(0)
        new = set(self.covers[item])
        for v in base:
            new -= self.covers[v]
            if not new:
                break
        return sum((self.weights[e] for e in new), Fraction(0))

    def params(self):
        weights = {e: encode_number(w) for e, w in sorted(self.weights.items()) if w != 1}
        weights.update({e: encode_number(w) for e, w in sorted(self._extra.items())})
        out = {"covers": [sorted(c) for c in self.covers]}
        if weights:
            out["weights"] = weights
        return out

    @classmethod
    def from_params(cls, params, n_items):
        covers = params["covers"]
        if len(covers) != n_items:
            raise ValueError(f"coverage needs {n_items} element lists, got {len(covers)}")
        return cls(covers, params.get("weights"))


class Activation(ValuationOracle):
    """0-1 function: 1 as soon as any liked item is present."""

    kind = "activation"

    def __init__(self, liked: Iterable[int], n_items: int):
        self.n_items = n_items
        self.liked = frozenset(int(v) for v in liked)
        for v in self.liked:
            self._check_item(v)

    def value(self, items):
        return 1 if self._members(items) & self.liked else 0

    def marginal(self, item, items):
        base = self._members(items)
        self._check_item(item)
        if item not in self.liked or base & self.liked:
            return 0
        return 1

    def params(self):
        return {"liked": sorted(self.liked)}

    @classmethod
    def from_params(cls, params, n_items):
        return cls(params["liked"], n_items)


class CappedModular(ValuationOracle):
    """``f(S) = min(cap, sum of w(v) for v in S)``; ``cap=None`` means modular."""

    kind = "capped_modular"

    def __init__(self, weights: Sequence | Mapping, n_items: int | None = None, cap=None):
        if isinstance(weights, Mapping):
            if n_items is None:
                raise ValueError("n_items is required when weights is a mapping")
            w = [Fraction(0)] * n_items
            for k, x in weights.items():
                idx = int(k)
                if not 0 <= idx < n_items:
                    raise UnknownItemError(f"unknown item id {k!r} (n_items={n_items})")
                w[idx] = as_fraction(x)
        else:
            w = [as_fraction(x) for x in weights]
            if n_items is not None and len(w) != n_items:
                raise ValueError(f"expected {n_items} weights, got {len(w)}")
        if any(x < 0 for x in w):
            raise ValueError("weights must be non-negative")
        self.n_items = len(w)
        self.weights = tuple(w)
        self.cap = None if cap is None else as_fraction(cap)
        if self.cap is not None and self.cap < 0:
            raise ValueError("cap must be non-negative")

    def value(self, items):
        total = sum((self.weights[v] for v in self._members(items)), Fraction(0))
        return total if self.cap is None else min(self.cap, total)

    def marginal(self, item, items):
        base = self._members(items)
        self._check_item(item)
        if item in base:
            return Fraction(0)
        if self.cap is None:
            return self.weights[item]
        total = sum((self.weights[v] for v in base), Fraction(0))
        return min(self.cap, total + self.weights[item]) - min(self.cap, total)

    def params(self):
        weights = {str(i): encode_number(w) for i, w in enumerate(self.weights) if w != 0}
        return {"weights": weights, "cap": None if self.cap is None else encode_number(self.cap)}

    @classmethod
    def from_params(cls, params, n_items):
        weights = params["weights"]
        if not isinstance(weights, Mapping) and len(weights) != n_items:
            raise ValueError(f"expected {n_items} weights, got {len(weights)}")
        return cls(weights, n_items, params.get("cap"))


class FacilityLocationGain(ValuationOracle):
    """Average radius reduction obtained by labeling the items in ``S``.

    ``distances[p][v]`` is the distance from point ``p`` to item ``v``; the
    baseline radius of ``p`` defaults to its largest distance to any item, so
    ``f(empty) = 0``.  With ``exact=True`` all arithmetic is on Fractions.
    """

    kind = "facility"

    def __init__(self, distances, radius=None, exact: bool = False):
        self.exact = exact
        if exact:
            d = [tuple(as_fraction(x) for x in row) for row in distances]
            widths = {len(row) for row in d}
            if len(widths) > 1:
                raise ValueError("ragged distance matrix")
            if any(x < 0 for row in d for x in row):
                raise ValueError("distances must be non-negative")
            self.n_points = len(d)
            self.n_items = widths.pop() if widths else 0
            self.distances = tuple(d)
            if radius is None:
                r = tuple(max(row) if row else Fraction(0) for row in d)
            else:
                r = tuple(as_fraction(x) for x in radius)
        else:
            d = np.asarray(distances, dtype=float)
            if d.ndim != 2:
                raise ValueError("distance matrix must be 2-D")
            if (d < 0).any():
                raise ValueError("distances must be non-negative")
            self.n_points, self.n_items = d.shape
            d.setflags(write=False)
            self.distances = d
            if radius is None:
                r = d.max(axis=1) if self.n_items else np.zeros(self.n_points)
            else:
                r = np.asarray(radius, dtype=float)
            r.setflags(write=False)
        if len(r) != self.n_points:
            raise ValueError(f"radius has {len(r)} entries for {self.n_points} points")
        self.radius = r
        if self.n_points == 0:
            raise ValueError("facility location needs at least one point")

    def _nearest(self, base: frozenset):
        if self.exact:
            out = []
            for p, row in enumerate(self.distances):
                cur = self.radius[p]
                for s in base:
                    if row[s] < cur:
                        cur = row[s]
                out.append(cur)
            return out
        if not base:
            return self.radius
        cols = self.distances[:, sorted(base)]
        return np.minimum(self.radius, cols.min(axis=1))

    def value(self, items):
        base = self._members(items)
        cur = self._nearest(base)
        if self.exact:
            return sum((r - c for r, c in zip(self.radius, cur)), Fraction(0)) / self.n_points
        return float(np.mean(self.radius - cur))

    def marginal(self, item, items):
        base = self._members(items)
        self._check_item(item)
        if item in base:
            return Fraction(0) if self.exact else 0.0
        cur = self._nearest(base)
        if self.exact:
            gain = Fraction(0)
            for p, row in enumerate(self.distances):
                if row[item] < cur[p]:
                    gain += cur[p] - row[item]
            return gain / self.n_points
        return float(np.maximum(cur - self.distances[:, item], 0.0).sum() / self.n_points)

    def params(self):
        if self.exact:
            return {
                "distances": [[encode_number(x) for x in row] for row in self.distances],
                "radius": [encode_number(x) for x in self.radius],
                "exact": True,
            }
        return {"distances": self.distances.tolist(), "radius": self.radius.tolist()}

    @classmethod
    def from_params(cls, params, n_items):
        oracle = cls(params["distances"], params.get("radius"), bool(params.get("exact", False)))
        if oracle.n_items != n_items:
            raise ValueError(f"distance matrix has {oracle.n_items} columns for {n_items} items")
        return oracle


ORACLE_TYPES: dict[str, type[ValuationOracle]] = {
    cls.kind: cls for cls in (WeightedCoverage, Activation, CappedModular, FacilityLocationGain)
}


def oracle_from_params(kind: str, params: Mapping, n_items: int) -> ValuationOracle:
    try:
        cls = ORACLE_TYPES[kind]
    except KeyError:
        raise ValueError(f"unknown function type {kind!r}; known: {sorted(ORACLE_TYPES)}") from None
    return cls.from_params(params, n_items)


@dataclass(frozen=True)
class Counterexample:
    """A violated oracle property found by :func:`submodularity_audit`."""

    prop: str
    small: frozenset
    large: frozenset
    item: int | None
    lhs: Number
    rhs: Number

    def __str__(self):
        return (f"{self.prop} violated: S={sorted(self.small)} T={sorted(self.large)} "
                f"v={self.item} ({self.lhs} vs {self.rhs})")


def submodularity_audit(oracle: ValuationOracle, universe: Iterable[int] | None = None,
                        trials: int = 1000, seed: int = 0, tol=0) -> Counterexample | None:
    """Randomized check of normalization, monotonicity, marginal consistency
    and diminishing returns.  Returns the first violation, or ``None``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    items = sorted(range(oracle.n_items) if universe is None else set(universe))
    rng = random.Random(seed)
    empty = frozenset()
    v0 = oracle.value(empty)
    if v0 != 0:
        return Counterexample("normalization", empty, empty, None, v0, 0)
    for _ in range(trials):
        large = frozenset(v for v in items if rng.random() < 0.5)
        small = frozenset(v for v in large if rng.random() < 0.5)
        fs, ft = oracle.value(small), oracle.value(large)
        if fs > ft + tol:
            return Counterexample("monotonicity", small, large, None, fs, ft)
        outside = [v for v in items if v not in large]
        if not outside:
            continue
        v = rng.choice(outside)
        ms, mt = oracle.marginal(v, small), oracle.marginal(v, large)
        for base, m in ((small, ms), (large, mt)):
            direct = oracle.value(base | {v}) - oracle.value(base)
            if abs(m - direct) > tol:
                return Counterexample("marginal consistency", base, base, v, m, direct)
        if ms < 0:
            return Counterexample("monotonicity", small, small | {v}, v, ms, 0)
        if ms < mt - tol:
            return Counterexample("submodularity", small, large, v, ms, mt)
    return None

"""Problem data model and exact evaluation of the ranking objective.

An :class:`Instance` is a catalog of costed items plus budgeted valuation
functions.  A ranking is a tuple of distinct item ids; each function is
evaluated on the longest prefix of the ranking whose total cost fits its
budget, and the objective is the sum over functions.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .functions import Number, ValuationOracle, as_fraction, encode_number, oracle_from_params

Ranking = tuple  # tuple[int, ...]


class ValidationError(ValueError):
    """Bad instance data or a ranking that does not belong to the instance."""


@dataclass(frozen=True)
class Item:
    id: int
    cost: Fraction
    name: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "cost", as_fraction(self.cost))


@dataclass(frozen=True)
class BudgetedFunction:
    oracle: ValuationOracle
    budget: Fraction
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "budget", as_fraction(self.budget))


@dataclass(frozen=True)
class Instance:
    items: tuple
    functions: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        object.__setattr__(self, "functions", tuple(self.functions))

    @property
    def n(self) -> int:
        return len(self.items)

    @property
    def m(self) -> int:
        return len(self.functions)

    @property
    def costs(self) -> tuple:
        return tuple(it.cost for it in self.items)

    @property
    def budgets(self) -> tuple:
        return tuple(f.budget for f in self.functions)

    def item_name(self, v: int) -> str:
        name = self.items[v].name
        return name if name is not None else str(v)

    @classmethod
    def build(cls, costs: Sequence, functions: Iterable[tuple], names: Sequence[str] | None = None):
        """Shorthand: ``functions`` yields ``(oracle, budget)`` or ``(oracle, budget, label)``."""
        items = [Item(i, c, None if names is None else names[i]) for i, c in enumerate(costs)]
        return cls(items, [BudgetedFunction(*entry) for entry in functions])


@dataclass(frozen=True)
class Evaluation:
    prefix_index: tuple
    per_function_value: tuple
    total: Number = field(default=Fraction(0))


def validate_instance(instance: Instance) -> list[str]:
    """List every problem found in ``instance``; an empty list means ok."""
    problems = []
    if not instance.items:
        problems.append("empty item catalog")
    ids = [it.id for it in instance.items]
    if len(set(ids)) != len(ids):
        problems.append("duplicate item ids")
    if sorted(ids) != list(range(len(ids))):
        problems.append("item ids are not contiguous from 0")
    elif ids != list(range(len(ids))):
        problems.append("items are not listed in id order")
    for it in instance.items:
        if it.cost <= 0:
            problems.append(f"item {it.id}: non-positive cost {it.cost}")
    for i, f in enumerate(instance.functions):
        if f.budget < 0:
            problems.append(f"function {i}: negative budget {f.budget}")
        if f.oracle.n_items != len(instance.items):
            problems.append(f"function {i}: oracle covers {f.oracle.n_items} items, "
                            f"catalog has {len(instance.items)}")
            continue
        base = f.oracle.value(frozenset())
        if base != 0:
            problems.append(f"function {i}: f(empty) = {base}, expected 0")
    return problems


def ensure_valid(instance: Instance) -> Instance:
    problems = validate_instance(instance)
    if problems:
        raise ValidationError("; ".join(problems))
    return instance


def check_ranking(instance: Instance, order: Sequence[int]) -> Ranking:
    order = tuple(order)
    seen = set()
    for v in order:
        if not isinstance(v, int) or not 0 <= v < instance.n:
            raise ValidationError(f"unknown item id {v!r}")
        if v in seen:
            raise ValidationError(f"item {v} appears twice in the ranking")
        seen.add(v)
    return order


def prefix_index(order: Sequence[int], costs: Sequence | Mapping, budget) -> int:
    """Length of the longest prefix of ``order`` whose total cost is within ``budget``."""
    spent = 0
    for j, v in enumerate(order):
        spent += costs[v]
        if spent > budget:
            return j
    return len(order)


def msr_objective(instance: Instance, ranking: Sequence[int]) -> Evaluation:
    order = check_ranking(instance, ranking)
    costs = instance.costs
    prefix_sets: dict[int, frozenset] = {}
    idx, values = [], []
    for f in instance.functions:
        k = prefix_index(order, costs, f.budget)
        if k not in prefix_sets:
            prefix_sets[k] = frozenset(order[:k])
        idx.append(k)
        values.append(f.oracle.value(prefix_sets[k]))
    return Evaluation(tuple(idx), tuple(values), sum(values, Fraction(0)))


# -- JSON --------------------------------------------------------------------

def instance_to_dict(instance: Instance) -> dict:
    items = []
    for it in instance.items:
        row = {"id": it.id, "cost": encode_number(it.cost)}
        if it.name is not None:
            row["name"] = it.name
        items.append(row)
    functions = []
    for f in instance.functions:
        row = {"type": f.oracle.kind, "budget": encode_number(f.budget), "params": f.oracle.params()}
        if f.label:
            row["label"] = f.label
        functions.append(row)
    return {"items": items, "functions": functions}


def instance_from_dict(data: Mapping) -> Instance:
    try:
        raw_items = data["items"]
        raw_functions = data.get("functions", [])
    except (KeyError, TypeError, AttributeError):
        raise ValidationError("instance must be an object with an 'items' list") from None
    try:
        items = sorted((Item(int(r["id"]), as_fraction(r["cost"]), r.get("name")) for r in raw_items),
                       key=lambda it: it.id)
        n = len(items)
        functions = [
            BudgetedFunction(oracle_from_params(r["type"], r.get("params", {}), n),
                             as_fraction(r["budget"]), r.get("label", ""))
            for r in raw_functions
        ]
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"malformed instance: {exc}") from exc
    return ensure_valid(Instance(items, functions))


def dumps_instance(instance: Instance) -> str:
    return json.dumps(instance_to_dict(instance), indent=1, sort_keys=True) + "\n"


def loads_instance(text: str) -> Instance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc}") from exc
    return instance_from_dict(data)


def read_instance(path) -> Instance:
    return loads_instance(Path(path).read_text(encoding="utf-8"))


def write_instance(instance: Instance, path) -> None:
    Path(path).write_text(dumps_instance(instance), encoding="utf-8")

"""Command-line front end.

Exit codes: 0 ok, 1 usage error, 2 data error, 3 check failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .baselines import greedy_min, greedy_sr, quality_rank, random_rank
from .checks import SUITES
from .core import Instance, ValidationError, dumps_instance, msr_objective, read_instance
from .functions import as_fraction, encode_number
from .greedy import Scheme, TieBreak, run_greedy
from .ingest import ScenarioConfig, gen_synthetic, load_activation_instance
from .msrl import DEFAULT_EPS, best_of, dp_solve, round_instance
from .oracle import FIXTURES, fixture

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_CHECK = 0, 1, 2, 3

ALGORITHMS = ("greedy", "wgreedy", "dp", "bestof", "greedysr", "greedymin", "quality", "random")
CSV_COLUMNS = ["algorithm", "seed", "max_budget", "objective", "ranking_length"]

log = logging.getLogger("msrank")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def solve(instance: Instance, algo: str, eps=DEFAULT_EPS, seed: int = 0,
          tiebreak: TieBreak = TieBreak.LOWEST_ID, lazy: bool = True):
    """Run one algorithm by CLI name and return its ranking."""
    if algo == "greedy":
        return run_greedy(instance, Scheme.UNIFORM, tiebreak, lazy, seed)[0]
    if algo == "wgreedy":
        if any(f.budget <= 0 for f in instance.functions):
            raise UsageError("wgreedy needs every budget to be positive")
        return run_greedy(instance, Scheme.INVERSE_BUDGET, tiebreak, lazy, seed)[0]
    if algo == "dp":
        rounded = round_instance(instance, eps)
        return () if rounded.no_large else dp_solve(instance, rounded).ranking
    if algo == "bestof":
        return best_of(instance, eps)[0]
    if algo == "greedysr":
        return greedy_sr(instance)
    if algo == "greedymin":
        return greedy_min(instance)
    if algo == "quality":
        return quality_rank(instance)
    if algo == "random":
        return random_rank(instance, seed)
    raise UsageError(f"unknown algorithm {algo!r}")


def fmt_number(x) -> str:
    return format(float(x), ".12g")


# -- solve ---------------------------------------------------------------------

def cmd_solve(args) -> int:
    instance = read_instance(args.instance)
    tiebreak = TieBreak(args.tie_break)
    if args.trace and args.algo not in ("greedy", "wgreedy"):
        raise UsageError("--trace is only available for greedy and wgreedy")
    if args.algo in ("greedy", "wgreedy") and args.trace:
        scheme = Scheme.UNIFORM if args.algo == "greedy" else Scheme.INVERSE_BUDGET
        if scheme is Scheme.INVERSE_BUDGET and any(f.budget <= 0 for f in instance.functions):
            raise UsageError("wgreedy needs every budget to be positive")
        ranking, trace = run_greedy(instance, scheme, tiebreak, args.lazy, args.seed)
        Path(args.trace).write_text(trace.to_csv(), encoding="utf-8")
    elif args.algo == "dp" and args.dump_table:
        rounded = round_instance(instance, args.eps)
        if rounded.no_large:
            ranking = ()
            Path(args.dump_table).write_text("val,j,cost\n", encoding="utf-8")
        else:
            res = dp_solve(instance, rounded, keep_columns=True)
            ranking = res.ranking
            Path(args.dump_table).write_text(res.table.to_csv(), encoding="utf-8")
    else:
        ranking = solve(instance, args.algo, args.eps, args.seed, tiebreak, args.lazy)
    ev = msr_objective(instance, ranking)
    if args.json:
        out = {
            "algorithm": args.algo,
            "ranking": list(ranking),
            "names": [instance.item_name(v) for v in ranking],
            "prefix_index": list(ev.prefix_index),
            "per_function_value": [encode_number(as_fraction(x)) for x in ev.per_function_value],
            "total": encode_number(as_fraction(ev.total)),
        }
        print(json.dumps(out, indent=1))
    else:
        print("ranking: " + " ".join(instance.item_name(v) for v in ranking))
        for i, f in enumerate(instance.functions):
            label = f.label or f"f{i}"
            print(f"  {label}: prefix {ev.prefix_index[i]}, value {fmt_number(ev.per_function_value[i])}")
        print(f"total: {fmt_number(ev.total)}")
    return EXIT_OK


# -- bench ---------------------------------------------------------------------

@dataclass(frozen=True)
class RunRecord:
    algorithm: str
    seed: int
    max_budget: int
    objective: object
    wall_ms: float
    ranking_length: int


def _bench_instance(args, max_budget: int, seed: int) -> Instance:
    config = ScenarioConfig(max_budget=max_budget, cost_mode=args.cost_mode, seed=seed)
    if args.ratings:
        return load_activation_instance(args.ratings, config, args.like_threshold)
    return gen_synthetic(args.n, args.m, args.density, config)


def _bench_task(task):
    args, max_budget, seed = task
    instance = _bench_instance(args, max_budget, seed)
    rows = []
    for algo in args.algo:
        start = time.perf_counter()
        ranking = solve(instance, algo, args.eps, seed, TieBreak(args.tie_break), args.lazy)
        wall = (time.perf_counter() - start) * 1000
        objective = msr_objective(instance, ranking).total
        rows.append(RunRecord(algo, seed, max_budget, objective, wall, len(ranking)))
    return rows


def run_bench(args) -> list[RunRecord]:
    tasks = [(args, b, args.seed + r) for b in args.budget_max for r in range(args.reps)]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            chunks = list(pool.map(_bench_task, tasks))
    else:
        chunks = [_bench_task(t) for t in tasks]
    rows = [r for chunk in chunks for r in chunk]
    rows.sort(key=lambda r: (r.algorithm, r.max_budget, r.seed))
    return rows


def records_csv(rows, timing: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = CSV_COLUMNS + (["wall_ms"] if timing else [])
    w.writerow(cols)
    for r in rows:
        line = [r.algorithm, r.seed, r.max_budget, fmt_number(r.objective), r.ranking_length]
        if timing:
            line.append(f"{r.wall_ms:.3f}")
        w.writerow(line)
    return buf.getvalue()


def summarize(rows) -> list[tuple]:
    groups: dict = {}
    for r in rows:
        groups.setdefault((r.algorithm, r.max_budget), []).append(float(r.objective))
    out = []
    for (algo, b), vals in sorted(groups.items()):
        std = statistics.stdev(vals) if len(vals) > 1 else 0.0
        out.append((algo, b, statistics.fmean(vals), std, len(vals)))
    return out


def gnuplot_data(summary) -> str:
    lines = []
    current = None
    for algo, b, mean, std, _ in summary:
        if algo != current:
            if current is not None:
                lines += ["", ""]
            lines.append(f"# {algo}: max_budget mean std")
            current = algo
        lines.append(f"{b} {mean:.12g} {std:.12g}")
    return "\n".join(lines) + "\n"


def cmd_bench(args) -> int:
    if args.reps < 1:
        raise UsageError("--reps must be >= 1")
    rows = run_bench(args)
    text = records_csv(rows, args.timing)
    summary = summarize(rows)
    report = "\n".join(f"{a:10s} B={b:<4d} {m:.6g} ± {s:.3g} (n={k})" for a, b, m, s, k in summary)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(report)
    else:
        sys.stdout.write(text)
        print(report, file=sys.stderr)
    if args.gnuplot:
        Path(args.gnuplot).write_text(gnuplot_data(summary), encoding="utf-8")
    return EXIT_OK


# -- check / gen / fixture --------------------------------------------------------

def cmd_check(args) -> int:
    results = SUITES[args.suite]()
    for r in results:
        print(r.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} passed")
    return EXIT_CHECK if failed else EXIT_OK


def cmd_gen(args) -> int:
    config = ScenarioConfig(max_budget=args.budget_max, cost_mode=args.cost_mode, seed=args.seed)
    instance = gen_synthetic(args.n, args.m, args.density, config)
    _emit(dumps_instance(instance), args.out)
    return EXIT_OK


def cmd_fixture(args) -> int:
    params = {}
    if args.k is not None:
        params["k"] = args.k
    if args.m is not None:
        params["m"] = args.m
    if args.fixture_eps is not None:
        params["eps"] = as_fraction(args.fixture_eps)
    try:
        instance = fixture(args.name, **params)
    except TypeError as exc:
        raise UsageError(str(exc)) from None
    _emit(dumps_instance(instance), args.out)
    return EXIT_OK


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _budget_list(text: str) -> list[int]:
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values or min(values) < 1:
        raise argparse.ArgumentTypeError("budgets must be positive integers")
    return values


def _algo_list(text: str) -> list[str]:
    algos = [a.strip() for a in text.split(",") if a.strip()]
    bad = [a for a in algos if a not in ALGORITHMS]
    if bad or not algos:
        raise argparse.ArgumentTypeError(f"unknown algorithm(s) {bad}; choose from {', '.join(ALGORITHMS)}")
    return algos


def _eps(text: str) -> Fraction:
    try:
        eps = as_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid eps {text!r}") from None
    if not 0 < eps < 1:
        raise argparse.ArgumentTypeError("eps must lie in (0, 1)")
    return eps


def _add_common(p):
    p.add_argument("--eps", type=_eps, default=DEFAULT_EPS, help="DP rounding precision (default 0.1)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tie-break", choices=[t.value for t in TieBreak], default="lowest")
    p.add_argument("--lazy", action=argparse.BooleanOptionalAction, default=True,
                   help="lazy greedy evaluation (default on)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="msrank", description="Budgeted submodular ranking solvers.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="rank the items of an instance JSON file")
    p.add_argument("instance")
    p.add_argument("--algo", choices=ALGORITHMS, default="bestof")
    _add_common(p)
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--trace", metavar="CSV", help="write the greedy trace (greedy/wgreedy)")
    p.add_argument("--dump-table", metavar="CSV", help="write the full DP table (dp only)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="sweep budgets and seeds, emit tidy CSV")
    p.add_argument("--algo", type=_algo_list, default=list(ALGORITHMS),
                   help="comma-separated algorithms (default all)")
    _add_common(p)
    p.add_argument("--budget-max", type=_budget_list, default=[2, 4, 8],
                   help="comma-separated maximum budgets to sweep")
    p.add_argument("--cost-mode", choices=["unit", "uniform"], default="unit")
    p.add_argument("--reps", type=int, default=5, help="seeds per budget: seed, seed+1, ...")
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--m", type=int, default=50)
    p.add_argument("--density", type=float, default=0.05)
    p.add_argument("--ratings", help="user,item,count CSV instead of the synthetic scenario")
    p.add_argument("--like-threshold", type=int, default=1)
    p.add_argument("--out", help="CSV output path (default stdout)")
    p.add_argument("--gnuplot", help="also write mean/std blocks per algorithm")
    p.add_argument("--timing", action="store_true", help="add a wall_ms column (not reproducible)")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("check", help="run a verification suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("gen", help="write a synthetic playlist instance")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--m", type=int, default=50)
    p.add_argument("--density", type=float, default=0.05)
    p.add_argument("--budget-max", type=int, default=10)
    p.add_argument("--cost-mode", choices=["unit", "uniform"], default="unit")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("fixture", help="write a named adversarial instance")
    p.add_argument("name", choices=sorted(FIXTURES))
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--eps", dest="fixture_eps")
    p.add_argument("--out")
    p.set_defaults(func=cmd_fixture)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"msrank: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValidationError, OSError, ValueError) as exc:
        print(f"msrank: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())

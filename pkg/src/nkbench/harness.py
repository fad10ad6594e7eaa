"""Experimental pipeline: population sizing, grid sweeps, and comparisons.

For every (n, k) cell the sweep generates instances, certifies their
global optima with branch and bound, sizes each algorithm's population
by bisection to 10/10 successful runs, and records the four per-run
statistics (population size, generations, evaluations, DHC flips).
Everything derives from a single master seed, so reruns are byte
identical and interrupted sweeps resume to the same final files.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .evolution import ALGORITHMS, EvoConfig, run_evolution
from .exact import NodeLimitError, solve
from .landscape import generate_instance
from .rng import ALGORITHM_IDS, STREAM_BISECT, STREAM_INSTANCE, STREAM_RUN, split_seed

logger = logging.getLogger(__name__)

RESULTS_HEADER = [
    "n", "k", "algorithm", "instance_seed", "run_index",
    "population_size", "generations", "evaluations", "dhc_flips", "success",
]
AGGREGATE_HEADER = [
    "n", "k", "algorithm", "instances", "runs",
    "mean_population_size", "std_population_size",
    "mean_generations", "std_generations",
    "mean_evaluations", "std_evaluations",
    "mean_dhc_flips", "std_dhc_flips",
]
RATIO_HEADER = [
    "n", "k", "algorithm_a", "algorithm_b", "instances",
    "evaluations_ratio", "dhc_flips_ratio",
]
PLOT_HEADER = ["algorithm", "statistic", "k", "n", "value"]
PLOT_STATISTICS = ("population_size", "generations", "evaluations", "dhc_flips")

MANIFEST_FORMAT_VERSION = 1
CONFIG_FORMAT_VERSION = 1

DEFAULT_RUNS_PER_SIZE = 10
DEFAULT_INITIAL_SIZE = 16
DEFAULT_PRECISION = 1.1
DEFAULT_POPULATION_CAP = 2**20


class PopulationCapError(RuntimeError):
    """Bisection's doubling phase exceeded the population cap."""

    def __init__(self, instance_seed: int, algorithm: str, cap: int):
        super().__init__(
            f"algorithm {algorithm} failed 10/10 up to population cap {cap} "
            f"on instance {instance_seed}"
        )
        self.instance_seed = instance_seed
        self.algorithm = algorithm
        self.cap = cap


@dataclass
class RunStats:
    """Counters of one run, keyed for aggregation across the grid."""

    n: int
    k: int
    algorithm: str
    instance_seed: int
    run_index: int
    population_size: int
    generations: int
    evaluations: int
    dhc_flips: int
    success: bool
    run_seed: int = 0

    def csv_row(self) -> list[str]:
        return [
            str(self.n), str(self.k), self.algorithm, str(self.instance_seed),
            str(self.run_index), str(self.population_size), str(self.generations),
            str(self.evaluations), str(self.dhc_flips), str(int(self.success)),
        ]

    @staticmethod
    def from_csv_row(row: list[str]) -> "RunStats":
        return RunStats(
            n=int(row[0]), k=int(row[1]), algorithm=row[2], instance_seed=int(row[3]),
            run_index=int(row[4]), population_size=int(row[5]), generations=int(row[6]),
            evaluations=int(row[7]), dhc_flips=int(row[8]), success=bool(int(row[9])),
        )

    def sort_key(self):
        return (self.k, self.n, self.instance_seed, self.algorithm, self.run_index)


@dataclass
class CellAggregate:
    """Mean/stddev of each statistic over a cell's successful runs."""

    n: int
    k: int
    algorithm: str
    instances: int
    runs: int
    mean_population_size: float
    std_population_size: float
    mean_generations: float
    std_generations: float
    mean_evaluations: float
    std_evaluations: float
    mean_dhc_flips: float
    std_dhc_flips: float


@dataclass
class RatioCell:
    n: int
    k: int
    instances: int
    evaluations_ratio: float
    dhc_flips_ratio: float


@dataclass
class RatioCurve:
    """Per-cell mean of per-instance statistic ratios between two algorithms."""

    algorithm_a: str
    algorithm_b: str
    cells: list[RatioCell]


@dataclass
class BisectionResult:
    population_size: int
    runs: list[RunStats]
    sizes_tried: list[int]


@dataclass(frozen=True)
class AlgorithmSpec:
    """One benchmarked algorithm with its operator parameters."""

    algorithm: str
    p_c: float = 0.6
    p_m: float | None = None
    rtr_window: int | None = None

    def to_dict(self) -> dict:
        out: dict = {"algorithm": self.algorithm, "p_c": self.p_c}
        if self.p_m is not None:
            out["p_m"] = self.p_m
        if self.rtr_window is not None:
            out["rtr_window"] = self.rtr_window
        return out

    @staticmethod
    def from_entry(entry) -> "AlgorithmSpec":
        if isinstance(entry, str):
            return AlgorithmSpec(algorithm=entry)
        return AlgorithmSpec(
            algorithm=entry["algorithm"],
            p_c=float(entry.get("p_c", 0.6)),
            p_m=entry.get("p_m"),
            rtr_window=entry.get("rtr_window"),
        )


@dataclass
class SweepConfig:
    """Full description of one sweep; round-trips through JSON identically."""

    grid: dict[int, list[int]]          # k -> list of n values
    instances_per_cell: int
    algorithms: list[AlgorithmSpec]
    master_seed: int
    output_dir: str | None = None
    node_limit: int | None = None
    population_cap: int = DEFAULT_POPULATION_CAP
    max_generations: int | None = None
    solver_restarts: int | None = None

    def validate(self) -> None:
        if not self.grid:
            raise ValueError("grid must contain at least one k entry")
        for k, ns in self.grid.items():
            if not ns:
                raise ValueError(f"grid entry k={k} lists no n values")
            if k >= min(ns):
                raise ValueError(f"grid entry k={k} requires k < min(n)={min(ns)}")
        if self.instances_per_cell < 1:
            raise ValueError("instances_per_cell must be >= 1")
        if not self.algorithms:
            raise ValueError("at least one algorithm is required")
        tags = [spec.algorithm for spec in self.algorithms]
        if len(set(tags)) != len(tags):
            raise ValueError("algorithm tags must be unique")
        for tag in tags:
            if tag not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {tag!r}")

    def to_dict(self) -> dict:
        return {
            "format_version": CONFIG_FORMAT_VERSION,
            "grid": {str(k): sorted(ns) for k, ns in sorted(self.grid.items())},
            "instances_per_cell": self.instances_per_cell,
            "algorithms": [spec.to_dict() for spec in self.algorithms],
            "master_seed": self.master_seed,
            "output_dir": self.output_dir,
            "node_limit": self.node_limit,
            "population_cap": self.population_cap,
            "max_generations": self.max_generations,
            "solver_restarts": self.solver_restarts,
        }

    @staticmethod
    def from_dict(obj: dict) -> "SweepConfig":
        if obj.get("format_version") != CONFIG_FORMAT_VERSION:
            raise ValueError(f"unsupported config format_version: {obj.get('format_version')!r}")
        cfg = SweepConfig(
            grid={int(k): sorted(int(x) for x in ns) for k, ns in obj["grid"].items()},
            instances_per_cell=int(obj["instances_per_cell"]),
            algorithms=[AlgorithmSpec.from_entry(e) for e in obj["algorithms"]],
            master_seed=int(obj["master_seed"]),
            output_dir=obj.get("output_dir"),
            node_limit=obj.get("node_limit"),
            population_cap=int(obj.get("population_cap", DEFAULT_POPULATION_CAP)),
            max_generations=obj.get("max_generations"),
            solver_restarts=obj.get("solver_restarts"),
        )
        cfg.validate()
        return cfg

    def config_hash(self) -> str:
        canon = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(canon.encode()).hexdigest()


# ---------------------------------------------------------------------------
# Bisection population sizing

def bisect_population_size(
    inst,
    algorithm: str | AlgorithmSpec,
    target_value: float,
    seed: int,
    runs_per_size: int = DEFAULT_RUNS_PER_SIZE,
    initial_size: int = DEFAULT_INITIAL_SIZE,
    precision: float = DEFAULT_PRECISION,
    population_cap: int = DEFAULT_POPULATION_CAP,
    max_generations: int | None = None,
) -> BisectionResult:
    """Smallest population size passing 10/10 runs, to 10% precision.

    Doubles from `initial_size` until a size passes all runs (fresh run
    seeds per size), then bisects between the last failing and first
    passing size until their ratio is within `precision`.  If the first
    size already passes, there is no failing bracket and it is returned
    as is.  Raises PopulationCapError when doubling exceeds the cap.
    """
    spec = algorithm if isinstance(algorithm, AlgorithmSpec) else AlgorithmSpec(algorithm)

    def try_size(size: int) -> list[RunStats] | None:
        stats = []
        for run_index in range(runs_per_size):
            run_seed = split_seed(seed, STREAM_RUN, size, run_index)
            cfg = EvoConfig(
                algorithm=spec.algorithm,
                population_size=size,
                p_c=spec.p_c,
                p_m=spec.p_m,
                rtr_window=spec.rtr_window,
                max_generations=max_generations,
                target_value=target_value,
            )
            outcome = run_evolution(inst, cfg, run_seed)
            if not outcome.success:
                return None  # one failure sinks the size; remaining runs skipped
            stats.append(
                RunStats(
                    n=inst.n, k=inst.k, algorithm=spec.algorithm,
                    instance_seed=inst.seed, run_index=run_index,
                    population_size=size, generations=outcome.generations,
                    evaluations=outcome.evaluations, dhc_flips=outcome.dhc_flips,
                    success=True, run_seed=run_seed,
                )
            )
        return stats

    sizes_tried: list[int] = []
    low = None
    size = initial_size
    while True:
        sizes_tried.append(size)
        stats = try_size(size)
        if stats is not None:
            high, high_stats = size, stats
            break
        low = size
        size *= 2
        if size > population_cap:
            raise PopulationCapError(inst.seed, spec.algorithm, population_cap)

    if low is not None:
        while high > low * precision:
            mid = (low + high) // 2
            mid -= mid % 2
            if mid <= low or mid >= high:
                break
            sizes_tried.append(mid)
            stats = try_size(mid)
            if stats is not None:
                high, high_stats = mid, stats
            else:
                low = mid
    return BisectionResult(population_size=high, runs=high_stats, sizes_tried=sizes_tried)


# ---------------------------------------------------------------------------
# Sweep execution

def _cell_list(config: SweepConfig) -> list[tuple[int, int]]:
    return [(k, n) for k in sorted(config.grid) for n in sorted(config.grid[k])]


def _instance_seed(config: SweepConfig, k: int, n: int, index: int) -> int:
    return split_seed(config.master_seed, STREAM_INSTANCE, k, n, index)


def _bisect_seed(config: SweepConfig, k: int, n: int, index: int, tag: str) -> int:
    return split_seed(config.master_seed, STREAM_BISECT, k, n, index, ALGORITHM_IDS[tag])


def _certify_unit(args) -> tuple[str, dict]:
    """Worker: certify one instance; returns (key, record)."""
    config_dict, k, n, index = args
    config = SweepConfig.from_dict(config_dict)
    seed = _instance_seed(config, k, n, index)
    inst = generate_instance(n, k, seed)
    key = f"{k}:{n}:{index}"
    try:
        res = solve(inst, restarts=config.solver_restarts, node_limit=config.node_limit)
    except NodeLimitError as err:
        return key, {
            "instance_seed": seed,
            "status": "node_limit",
            "nodes_expanded": err.nodes_expanded,
        }
    return key, {
        "instance_seed": seed,
        "status": "certified",
        "optimum_value": res.optimum_value,
        "seed_value": res.seed_value,
        "nodes_expanded": res.nodes_expanded,
    }


def _run_unit(args) -> tuple[str, dict, list[list[str]]]:
    """Worker: bisection for one (instance, algorithm) pair."""
    config_dict, k, n, index, tag, target_value = args
    config = SweepConfig.from_dict(config_dict)
    spec = next(s for s in config.algorithms if s.algorithm == tag)
    seed = _instance_seed(config, k, n, index)
    inst = generate_instance(n, k, seed)
    key = f"{k}:{n}:{index}:{tag}"
    try:
        result = bisect_population_size(
            inst, spec, target_value,
            seed=_bisect_seed(config, k, n, index, tag),
            population_cap=config.population_cap,
            max_generations=config.max_generations,
        )
    except PopulationCapError:
        return key, {"status": "population_cap"}, []
    record = {
        "status": "done",
        "population_size": result.population_size,
        "sizes_tried": result.sizes_tried,
    }
    return key, record, [s.csv_row() for s in result.runs]


def run_sweep(config: SweepConfig):
    """Yield every RunStats of the sweep, certifying instances first.

    Sequential, file-free variant of execute_sweep; fully deterministic
    given the config (all seeds derive from master_seed and unit keys).
    """
    config.validate()
    config_dict = config.to_dict()
    for k, n in _cell_list(config):
        for index in range(config.instances_per_cell):
            key, cert = _certify_unit((config_dict, k, n, index))
            if cert["status"] != "certified":
                logger.warning("skipping uncertified instance %s (%s)", key, cert["status"])
                continue
            for spec in config.algorithms:
                _, record, rows = _run_unit(
                    (config_dict, k, n, index, spec.algorithm, cert["optimum_value"])
                )
                if record["status"] != "done":
                    logger.warning("unsolvable at cap: %s %s", key, spec.algorithm)
                    continue
                for row in rows:
                    yield RunStats.from_csv_row(row)


@dataclass
class SweepPaths:
    results: Path
    aggregates: Path
    manifest: Path
    complete: bool


def execute_sweep(
    config: SweepConfig,
    out_dir: str | Path,
    workers: int = 1,
    resume: bool = False,
    limit: int | None = None,
) -> SweepPaths:
    """Run the sweep with file outputs, resumably and optionally parallel.

    Writes results.csv (sorted rows), aggregates.csv, and manifest.json
    into out_dir.  A journal of finished work units lets an interrupted
    sweep resume to byte-identical final files; `limit` stops after that
    many pending units (the manifest then marks the sweep incomplete).
    """
    config.validate()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    config_dict = config.to_dict()
    config_hash = config.config_hash()
    manifest_path = out / "manifest.json"
    journal_path = out / "journal.csv"

    certified: dict[str, dict] = {}
    completed: dict[str, dict] = {}
    rows_by_unit: dict[str, list[list[str]]] = {}
    if resume and manifest_path.exists():
        previous = json.loads(manifest_path.read_text())
        if previous.get("config_hash") != config_hash:
            raise ValueError("manifest belongs to a different config; refusing to resume")
        if previous.get("complete"):
            return SweepPaths(
                out / "results.csv", out / "aggregates.csv", manifest_path, True
            )
        certified = previous.get("certified", {})
        completed = previous.get("completed_units", {})
        if journal_path.exists():
            with journal_path.open() as fh:
                reader = csv.reader(fh)
                header = next(reader, None)
                for row in reader:
                    unit, data = row[0], row[1:]
                    if unit in completed:
                        rows_by_unit.setdefault(unit, []).append(data)

    def write_manifest(complete: bool) -> None:
        manifest = {
            "format_version": MANIFEST_FORMAT_VERSION,
            "config_hash": config_hash,
            "config": config_dict,
            "certified": {key: certified[key] for key in sorted(certified)},
            "completed_units": {key: completed[key] for key in sorted(completed)},
            "complete": complete,
        }
        _atomic_write(manifest_path, json.dumps(manifest, sort_keys=True, indent=2) + "\n")

    cert_pending = []
    for k, n in _cell_list(config):
        for index in range(config.instances_per_cell):
            key = f"{k}:{n}:{index}"
            if key not in certified:
                cert_pending.append((config_dict, k, n, index))

    budget = [limit if limit is not None else float("inf")]

    def take_budget(count: int) -> int:
        allowed = int(min(count, budget[0]))
        budget[0] -= allowed
        return allowed

    def process(func, pending):
        if not pending:
            return
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                for result in pool.map(func, pending):
                    yield result
        else:
            for args in pending:
                yield func(args)

    journal = journal_path.open("w", newline="")
    try:
        journal_writer = csv.writer(journal)
        journal_writer.writerow(["unit"] + RESULTS_HEADER)
        for unit in sorted(rows_by_unit):
            for data in rows_by_unit[unit]:
                journal_writer.writerow([unit] + data)
        journal.flush()

        cert_pending = cert_pending[: take_budget(len(cert_pending))]
        for key, record in process(_certify_unit, cert_pending):
            certified[key] = record
            write_manifest(False)

        run_pending = []
        for k, n in _cell_list(config):
            for index in range(config.instances_per_cell):
                cert = certified.get(f"{k}:{n}:{index}")
                if cert is None or cert["status"] != "certified":
                    continue
                for spec in config.algorithms:
                    key = f"{k}:{n}:{index}:{spec.algorithm}"
                    if key not in completed:
                        run_pending.append(
                            (config_dict, k, n, index, spec.algorithm, cert["optimum_value"])
                        )

        run_pending = run_pending[: take_budget(len(run_pending))]
        for key, record, rows in process(_run_unit, run_pending):
            completed[key] = record
            rows_by_unit[key] = rows
            for data in rows:
                journal_writer.writerow([key] + data)
            journal.flush()
            write_manifest(False)
    finally:
        journal.close()

    all_certified = all(
        f"{k}:{n}:{index}" in certified
        for k, n in _cell_list(config)
        for index in range(config.instances_per_cell)
    )
    expected_units = sum(
        1
        for k, n in _cell_list(config)
        for index in range(config.instances_per_cell)
        if certified.get(f"{k}:{n}:{index}", {}).get("status") == "certified"
        for _ in config.algorithms
    )
    complete = all_certified and len(completed) == expected_units

    stats = [
        RunStats.from_csv_row(data)
        for unit in sorted(rows_by_unit)
        for data in rows_by_unit[unit]
    ]
    stats.sort(key=RunStats.sort_key)
    results_path = out / "results.csv"
    aggregates_path = out / "aggregates.csv"
    if complete:
        _atomic_write(results_path, _results_csv_text(stats))
        _atomic_write(aggregates_path, _aggregates_csv_text(aggregate(stats)))
        journal_path.unlink(missing_ok=True)
    write_manifest(complete)
    return SweepPaths(results_path, aggregates_path, manifest_path, complete)


# ---------------------------------------------------------------------------
# Aggregation and comparison

def aggregate(stats) -> list[CellAggregate]:
    """Mean and stddev of the four statistics over successful runs per cell."""
    groups: dict[tuple[int, int, str], list[RunStats]] = {}
    instance_sets: dict[tuple[int, int, str], set[int]] = {}
    for s in stats:
        key = (s.k, s.n, s.algorithm)
        instance_sets.setdefault(key, set()).add(s.instance_seed)
        if s.success:
            groups.setdefault(key, []).append(s)
    out = []
    for key in sorted(instance_sets):
        k, n, algorithm = key
        runs = groups.get(key, [])
        if not runs:
            logger.warning("cell (n=%d, k=%d, %s) has no successful runs; omitted", n, k, algorithm)
            continue
        columns = {
            name: np.array([getattr(s, name) for s in runs], dtype=np.float64)
            for name in PLOT_STATISTICS
        }
        out.append(
            CellAggregate(
                n=n, k=k, algorithm=algorithm,
                instances=len({s.instance_seed for s in runs}),
                runs=len(runs),
                mean_population_size=float(columns["population_size"].mean()),
                std_population_size=float(columns["population_size"].std()),
                mean_generations=float(columns["generations"].mean()),
                std_generations=float(columns["generations"].std()),
                mean_evaluations=float(columns["evaluations"].mean()),
                std_evaluations=float(columns["evaluations"].std()),
                mean_dhc_flips=float(columns["dhc_flips"].mean()),
                std_dhc_flips=float(columns["dhc_flips"].std()),
            )
        )
    return out


def _per_instance_means(stats) -> tuple[str, dict]:
    algorithms = {s.algorithm for s in stats}
    if len(algorithms) != 1:
        raise ValueError(f"expected a single algorithm per side, got {sorted(algorithms)}")
    per_instance: dict[tuple[int, int, int], list[RunStats]] = {}
    for s in stats:
        if s.success:
            per_instance.setdefault((s.k, s.n, s.instance_seed), []).append(s)
    means = {
        key: (
            float(np.mean([s.evaluations for s in runs])),
            float(np.mean([s.dhc_flips for s in runs])),
        )
        for key, runs in per_instance.items()
    }
    return algorithms.pop(), means


def compare(stats_a, stats_b) -> RatioCurve:
    """Per-cell mean of per-instance evaluation and flip ratios (A over B).

    Both sides must cover identical instance sets; a mismatch is an error
    rather than a silent subset.
    """
    stats_a = list(stats_a)
    stats_b = list(stats_b)
    tag_a, means_a = _per_instance_means(stats_a)
    tag_b, means_b = _per_instance_means(stats_b)
    if set(means_a) != set(means_b):
        only_a = sorted(set(means_a) - set(means_b))[:3]
        only_b = sorted(set(means_b) - set(means_a))[:3]
        raise ValueError(
            f"instance sets differ between sides (A-only {only_a}, B-only {only_b})"
        )
    cells: dict[tuple[int, int], list[tuple[float, float]]] = {}
    for key in means_a:
        k, n, _ = key
        ev_a, fl_a = means_a[key]
        ev_b, fl_b = means_b[key]
        cells.setdefault((k, n), []).append((ev_a / ev_b, fl_a / fl_b))
    out = []
    for (k, n) in sorted(cells):
        ratios = cells[(k, n)]
        out.append(
            RatioCell(
                n=n, k=k, instances=len(ratios),
                evaluations_ratio=float(np.mean([r[0] for r in ratios])),
                dhc_flips_ratio=float(np.mean([r[1] for r in ratios])),
            )
        )
    return RatioCurve(algorithm_a=tag_a, algorithm_b=tag_b, cells=out)


# ---------------------------------------------------------------------------
# File formats

def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def _results_csv_text(stats) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(RESULTS_HEADER)
    for s in stats:
        writer.writerow(s.csv_row())
    return buf.getvalue()


def write_results_csv(path: str | Path, stats) -> None:
    _atomic_write(Path(path), _results_csv_text(sorted(stats, key=RunStats.sort_key)))


def read_results_csv(path: str | Path) -> list[RunStats]:
    with Path(path).open() as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != RESULTS_HEADER:
            raise ValueError(f"unexpected results header: {header}")
        return [RunStats.from_csv_row(row) for row in reader]


def _aggregates_csv_text(aggregates) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(AGGREGATE_HEADER)
    for a in aggregates:
        writer.writerow(
            [str(a.n), str(a.k), a.algorithm, str(a.instances), str(a.runs)]
            + [
                repr(value)
                for value in (
                    a.mean_population_size, a.std_population_size,
                    a.mean_generations, a.std_generations,
                    a.mean_evaluations, a.std_evaluations,
                    a.mean_dhc_flips, a.std_dhc_flips,
                )
            ]
        )
    return buf.getvalue()


def write_aggregates_csv(path: str | Path, aggregates) -> None:
    _atomic_write(Path(path), _aggregates_csv_text(aggregates))


def read_aggregates_csv(path: str | Path) -> list[CellAggregate]:
    with Path(path).open() as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != AGGREGATE_HEADER:
            raise ValueError(f"unexpected aggregates header: {header}")
        out = []
        for row in reader:
            out.append(
                CellAggregate(
                    n=int(row[0]), k=int(row[1]), algorithm=row[2],
                    instances=int(row[3]), runs=int(row[4]),
                    mean_population_size=float(row[5]), std_population_size=float(row[6]),
                    mean_generations=float(row[7]), std_generations=float(row[8]),
                    mean_evaluations=float(row[9]), std_evaluations=float(row[10]),
                    mean_dhc_flips=float(row[11]), std_dhc_flips=float(row[12]),
                )
            )
        return out


def write_ratio_csv(path: str | Path, curve: RatioCurve) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(RATIO_HEADER)
    for cell in curve.cells:
        writer.writerow(
            [
                str(cell.n), str(cell.k), curve.algorithm_a, curve.algorithm_b,
                str(cell.instances), repr(cell.evaluations_ratio), repr(cell.dhc_flips_ratio),
            ]
        )
    _atomic_write(Path(path), buf.getvalue())


def export_plot_data(aggregates) -> list[list[str]]:
    """Plot-ready rows: one (algorithm, statistic) series per k, n ascending."""
    rows = []
    ordered = sorted(aggregates, key=lambda a: (a.algorithm, a.k, a.n))
    for statistic in PLOT_STATISTICS:
        for a in ordered:
            rows.append(
                [a.algorithm, statistic, str(a.k), str(a.n), repr(getattr(a, f"mean_{statistic}"))]
            )
    rows.sort(key=lambda r: (r[0], r[1], int(r[2]), int(r[3])))
    return rows


def write_plot_csv(path: str | Path, aggregates) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(PLOT_HEADER)
    for row in export_plot_data(aggregates):
        writer.writerow(row)
    _atomic_write(Path(path), buf.getvalue())

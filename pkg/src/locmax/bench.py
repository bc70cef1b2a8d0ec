"""Benchmark harness: quality ratios, shrink statistics and engine checks.

All results are plain records convertible to CSV rows under a fixed,
versioned schema; timing columns are informational only and are the one
part of a record that is not reproducible across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from .bsp import bsp_local_max
from .generate import GeneratorSpec, with_unit_weights
from .graph import Graph, Matching, validate_matching
from .graphio import read_graph, write_csv
from .matchers import MATCHERS, PhaseTrace, local_max_seq
from .pram import pram_local_max

CSV_SCHEMA_VERSION = "locmax-bench-1"

BENCH_COLUMNS = (
    "schema",
    "instance",
    "algorithm",
    "engine",
    "seed",
    "weight",
    "ratio_vs_gpa",
    "rounds",
    "mean_removed_fraction",
    "millis",
    "messages",
)

SHRINK_COLUMNS = (
    "schema",
    "instance",
    "round",
    "seeds_alive",
    "mean_removed_fraction",
    "mean_survivor_fraction",
)


@dataclass(frozen=True)
class BenchRecord:
    instance: str
    algorithm: str
    engine: str
    seed: int
    weight: float
    ratio_vs_gpa: float
    rounds: int
    mean_removed_fraction: float
    millis: float
    messages: int

    def as_row(self) -> dict[str, object]:
        return {
            "schema": CSV_SCHEMA_VERSION,
            "instance": self.instance,
            "algorithm": self.algorithm,
            "engine": self.engine,
            "seed": self.seed,
            "weight": repr(self.weight),
            "ratio_vs_gpa": repr(self.ratio_vs_gpa),
            "rounds": self.rounds,
            "mean_removed_fraction": repr(self.mean_removed_fraction),
            "millis": f"{self.millis:.3f}",
            "messages": self.messages,
        }


@dataclass(frozen=True)
class InstanceSpec:
    """An instance either generated from a family or read from a file."""

    family: str                  # "random" | "rgg" | "file"
    x: int = 0
    alpha: int = 4
    weights: str = "default"     # "unit" | "random" | "euclidean" | "default"
    path: str | None = None

    def label(self, seed: int) -> str:
        if self.family == "file":
            return Path(self.path).name
        tail = f"-a{self.alpha}" if self.family == "random" else ""
        return f"{self.family}-x{self.x}{tail}-w{self.weights}-s{seed}"

    def build(self, seed: int) -> Graph:
        if self.family == "file":
            return read_graph(self.path)
        if self.family == "random":
            g = GeneratorSpec("random", self.x, alpha=self.alpha, seed=seed).build()
            if self.weights == "euclidean":
                raise ValueError("euclidean weights are undefined for the random family")
        elif self.family == "rgg":
            mode = "euclidean" if self.weights in ("euclidean", "default") else "random"
            g = GeneratorSpec("rgg", self.x, seed=seed, weight_mode=mode).build()
        else:
            raise ValueError(f"unknown family {self.family!r}")
        if self.weights == "unit":
            g = with_unit_weights(g)
        return g


@dataclass(frozen=True)
class SuiteConfig:
    instances: tuple[InstanceSpec, ...]
    algorithms: tuple[str, ...]
    seeds: tuple[int, ...]
    engine: str = "seq"          # engine for the localmax algorithm
    p: int = 4                   # workers for the bsp engine
    rerandomize: bool = True


def run_matcher(
    g: Graph,
    algorithm: str,
    seed: int,
    engine: str = "seq",
    p: int = 4,
    rerandomize: bool = True,
) -> tuple[Matching, PhaseTrace]:
    """Dispatch one run; only localmax has non-sequential engines."""
    if algorithm == "localmax":
        if engine == "seq":
            return local_max_seq(g, seed, rerandomize)
        if engine == "pram":
            return pram_local_max(g, seed, rerandomize=rerandomize)
        if engine == "bsp":
            return bsp_local_max(g, p, seed, rerandomize)
        raise ValueError(f"unknown engine {engine!r}")
    if engine != "seq":
        raise ValueError(f"algorithm {algorithm!r} only runs on the seq engine")
    try:
        matcher = MATCHERS[algorithm]
    except KeyError:
        raise ValueError(f"unknown algorithm {algorithm!r}") from None
    return matcher(g, seed)


def run_suite(config: SuiteConfig) -> list[BenchRecord]:
    """One record per (instance, algorithm, seed); GPA is the quality baseline.

    The GPA weight for each (instance, seed) cell is computed regardless of
    whether GPA was requested, so ratio_vs_gpa is always defined.
    """
    records: list[BenchRecord] = []
    for spec in config.instances:
        for seed in config.seeds:
            g = spec.build(seed)
            label = spec.label(seed)
            gpa_matching, gpa_trace = run_matcher(g, "gpa", seed)
            gpa_weight = gpa_matching.weight(g)
            for alg in config.algorithms:
                if alg == "gpa":
                    matching, trace = gpa_matching, gpa_trace
                else:
                    matching, trace = run_matcher(
                        g, alg, seed, config.engine, config.p, config.rerandomize
                    )
                check = validate_matching(g, matching)
                if not (check.valid and check.maximal):
                    raise AssertionError(
                        f"{alg} produced an invalid or non-maximal matching "
                        f"on {label}: {check.detail}"
                    )
                weight = matching.weight(g)
                ratio = weight / gpa_weight if gpa_weight > 0 else 1.0
                messages = (
                    sum(rm.candidate_records for rm in trace.messages)
                    if trace.messages is not None
                    else 0
                )
                records.append(
                    BenchRecord(
                        instance=label,
                        algorithm=alg,
                        engine=config.engine if alg == "localmax" else "seq",
                        seed=seed,
                        weight=weight,
                        ratio_vs_gpa=ratio,
                        rounds=trace.total_rounds,
                        mean_removed_fraction=trace.mean_removed_fraction(),
                        millis=trace.wall_millis,
                        messages=messages,
                    )
                )
    return records


def write_bench_csv(records: list[BenchRecord], path: str | Path, append: bool = False) -> int:
    return write_csv((r.as_row() for r in records), path, BENCH_COLUMNS, append=append)


@dataclass
class ShrinkReport:
    """Per-round shrink statistics of unit-weight local max, over many seeds.

    ``mean_removed_fraction`` and ``mean_survivor_fraction`` are
    edge-weighted (total edges removed or surviving over total edges
    entering a round, across all seeds and rounds), which matches the
    expected one-round shrink factor; the unweighted per-round means are
    kept alongside for reporting.
    """

    instance: str
    seeds: tuple[int, ...]
    per_round_removed: list[float] = field(default_factory=list)
    per_round_survivor: list[float] = field(default_factory=list)
    per_round_seeds: list[int] = field(default_factory=list)
    mean_removed_fraction: float = 0.0
    mean_survivor_fraction: float = 0.0
    unweighted_mean_removed: float = 0.0
    unweighted_mean_survivor: float = 0.0
    max_rounds: int = 0
    max_edges: int = 0

    def rows(self) -> list[dict[str, object]]:
        return [
            {
                "schema": CSV_SCHEMA_VERSION,
                "instance": self.instance,
                "round": i,
                "seeds_alive": self.per_round_seeds[i],
                "mean_removed_fraction": repr(self.per_round_removed[i]),
                "mean_survivor_fraction": repr(self.per_round_survivor[i]),
            }
            for i in range(len(self.per_round_removed))
        ]


def shrink_report(spec: InstanceSpec, seeds: tuple[int, ...], rerandomize: bool = True) -> ShrinkReport:
    """Run unit-weight local max per seed and aggregate shrink factors."""
    unit_spec = InstanceSpec(spec.family, spec.x, spec.alpha, "unit", spec.path)
    report = ShrinkReport(unit_spec.label(seeds[0] if seeds else 0), tuple(seeds))
    before_by_round: list[list[int]] = []
    removed_by_round: list[list[int]] = []
    total_before = total_removed = 0
    all_removed: list[float] = []
    all_survivor: list[float] = []
    for seed in seeds:
        g = unit_spec.build(seed)
        report.max_edges = max(report.max_edges, g.num_edges)
        _, trace = local_max_seq(g, seed, rerandomize)
        report.max_rounds = max(report.max_rounds, trace.total_rounds)
        for i, r in enumerate(trace.rounds):
            if i == len(before_by_round):
                before_by_round.append([])
                removed_by_round.append([])
            before_by_round[i].append(r.edges_before)
            removed_by_round[i].append(r.edges_removed)
            total_before += r.edges_before
            total_removed += r.edges_removed
            if r.edges_before:
                all_removed.append(r.edges_removed / r.edges_before)
                all_survivor.append(1.0 - r.edges_removed / r.edges_before)
    for i in range(len(before_by_round)):
        b = sum(before_by_round[i])
        r = sum(removed_by_round[i])
        report.per_round_seeds.append(len(before_by_round[i]))
        report.per_round_removed.append(r / b if b else 0.0)
        report.per_round_survivor.append(1.0 - r / b if b else 0.0)
    if total_before:
        report.mean_removed_fraction = total_removed / total_before
        report.mean_survivor_fraction = 1.0 - report.mean_removed_fraction
    if all_removed:
        report.unweighted_mean_removed = sum(all_removed) / len(all_removed)
        report.unweighted_mean_survivor = sum(all_survivor) / len(all_survivor)
    return report


def round_bound(m: int) -> int:
    """Empirical hard cap on local max rounds: 4*log2(m+2)."""
    return max(1, math.ceil(4 * math.log2(m + 2)))


@dataclass(frozen=True)
class CrossCheckRow:
    instance: str
    seed: int
    matched: bool                # all engines produced the identical matching
    detail: str
    rounds: int
    crew_conflicts: int
    slot_ops: int
    work_budget: int             # 8 * (n + 2m)
    n: int
    m: int


@dataclass
class CrossCheckReport:
    rows: list[CrossCheckRow] = field(default_factory=list)

    @property
    def mismatches(self) -> list[CrossCheckRow]:
        return [r for r in self.rows if not r.matched]

    @property
    def passed(self) -> bool:
        return not self.mismatches


def engine_cross_check(
    instances: tuple[InstanceSpec, ...],
    seeds: tuple[int, ...],
    workers: tuple[int, ...] = (1, 2, 4, 8),
    rerandomize: bool = True,
    checked: bool = True,
) -> CrossCheckReport:
    """Assert that all engines return the identical matching per instance/seed.

    Runs the sequential engine, the simulated-parallel engine (in checked
    mode by default, recording write conflicts and the work meter) and the
    bulk-synchronous engine for every requested worker count.
    """
    report = CrossCheckReport()
    for spec in instances:
        for seed in seeds:
            g = spec.build(seed)
            label = spec.label(seed)
            base, base_trace = local_max_seq(g, seed, rerandomize)
            mismatch = []
            pram_matching, pram_trace = pram_local_max(
                g, seed, checked=checked, rerandomize=rerandomize
            )
            if pram_matching != base:
                mismatch.append("pram")
            for p in workers:
                if p > g.num_vertices:
                    continue
                bsp_matching, _ = bsp_local_max(g, p, seed, rerandomize)
                if bsp_matching != base:
                    mismatch.append(f"bsp-p{p}")
            conflicts = pram_trace.write_log.conflicts if pram_trace.write_log else 0
            report.rows.append(
                CrossCheckRow(
                    instance=label,
                    seed=seed,
                    matched=not mismatch,
                    detail=",".join(mismatch),
                    rounds=base_trace.total_rounds,
                    crew_conflicts=conflicts,
                    slot_ops=pram_trace.slot_ops or 0,
                    work_budget=8 * (g.num_vertices + 2 * g.num_edges),
                    n=g.num_vertices,
                    m=g.num_edges,
                )
            )
    return report

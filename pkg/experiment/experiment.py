import csv
import logging
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from functools import cached_property
from pathlib import Path

import numpy as np
from pydantic import BaseModel

from accounting import Channel, bits_to_threshold, vector_bits
from analysis import (
    BoundReport,
    RateFit,
    check_trace_against_bound,
    estimate_constants,
    fit_linear_rate,
    positive_prefix,
    solve_minimizer,
)
from analysis.bounds import theorem1_coefficients
from data import (
    ClusterAssignment,
    Dataset,
    assign_clusters,
    dirichlet_partition,
    export_partition,
    generate_dataset,
    label_histogram,
    mean_tv_distance,
    total_variation,
)
from engines import Problem, RunConfig, RunResult, Schedule, engines_config, write_trace_csv
from errors import ContractViolation
from losses import LossModel, build_model, quadratic_minimizer
from losses.default import QuadraticModel
from numerics import RandomStream
from topology import EsGraph, export_edges, path_graph, random_connected_graph, ring_graph
from utils import confined_path, format_float

from .config import ExperimentConfig, Topology

logger = logging.getLogger(__name__)

COMPARISON_HEADER = [
    "algorithm",
    "quantize_levels",
    "rounds_to_gamma",
    "bits_to_gamma",
    *(f"bits_to_gamma_{c.value}" for c in Channel),
    "total_bits",
    "bits_saved_pct",
    "final_accuracy",
    "final_loss",
]


class RunSummary(BaseModel):
    algorithm: str
    seed: int
    T: int
    K: int
    N: int
    M: int
    final_loss: float
    final_gap: float | None = None
    final_grad_sq_norm: float
    final_accuracy: float | None = None
    rate: RateFit | None = None
    bits: dict[str, int]
    total_bits: int
    visit_counts: list[int]


class ComparisonRow(BaseModel):
    algorithm: str
    quantize_levels: int | None = None
    rounds_to_gamma: int | None = None
    bits_to_gamma: int | None = None
    channel_bits_to_gamma: dict[str, int] | None = None
    total_bits: int
    bits_saved_pct: float | None = None
    final_accuracy: float | None = None
    final_loss: float

    def row(self) -> list[str]:
        channel_bits = [
            "" if self.channel_bits_to_gamma is None else str(self.channel_bits_to_gamma[c.value]) for c in Channel
        ]
        return [
            self.algorithm,
            "" if self.quantize_levels is None else str(self.quantize_levels),
            "" if self.rounds_to_gamma is None else str(self.rounds_to_gamma),
            "not-reached" if self.bits_to_gamma is None else str(self.bits_to_gamma),
            *channel_bits,
            str(self.total_bits),
            format_float(self.bits_saved_pct),
            format_float(self.final_accuracy),
            format_float(self.final_loss),
        ]


class PartitionStats(BaseModel):
    N: int
    M: int
    sizes: list[int]
    classes: list[int]
    label_histograms: list[list[float]]
    tv_to_global: list[float]
    mean_tv: float
    cluster_members: list[list[int]]
    cluster_masses: list[int]


def build_graph(kind: Topology, size: int, max_degree: int, stream: RandomStream) -> EsGraph:
    if kind == "ring":
        return ring_graph(size)
    if kind == "path":
        return path_graph(size)
    return random_connected_graph(size, max_degree, stream)


class Experiment:
    """
    Builds one seeded problem instance from an ExperimentConfig and runs the
    engines and analyses on it, writing artifacts under `out_dir`.
    """

    def __init__(self, config: ExperimentConfig, out_dir: str | Path):
        self.config = config
        self.out_dir = Path(out_dir)
        self.root = RandomStream(config.seed)

    def __repr__(self):
        return f"Experiment(seed={self.config.seed}, algorithm={self.config.algorithm!r})"

    def path(self, name: str) -> Path:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        return confined_path(self.out_dir, name)

    # --- Problem construction ---
    @cached_property
    def dataset(self) -> Dataset:
        return generate_dataset(self.config.dataset_spec(), self.root.substream("dataset"))

    @cached_property
    def model(self) -> LossModel:
        return build_model(self.config.model, self.config.d_in, mu_reg=self.config.mu_reg, hidden=self.config.hidden)

    @cached_property
    def assignment(self) -> ClusterAssignment:
        c = self.config
        partition = dirichlet_partition(self.dataset, c.N, c.lam, self.root.substream("partition"))
        return assign_clusters(partition, c.M, c.cluster_policy, self.root.substream("clusters"))

    @cached_property
    def graph(self) -> EsGraph:
        c = self.config
        return build_graph(c.topology, c.M, c.max_degree, self.root.substream("graph"))

    @cached_property
    def client_graph(self) -> EsGraph:
        c = self.config
        return build_graph(c.client_topology, c.N, c.max_degree, self.root.substream("client-graph"))

    @cached_property
    def w_star(self) -> np.ndarray | None:
        partition = self.assignment.partition
        if isinstance(self.model, QuadraticModel):
            return quadratic_minimizer(self.model, partition.shards, partition.weights)
        if self.model.kind == "logistic":
            step = 1.0 / max(self.model.smoothness_upper_bound(s.features) for s in partition.shards)
            return solve_minimizer(self.model, partition.shards, partition.weights, step)
        return None

    @cached_property
    def smoothness(self) -> float:
        """L for the schedule: the configured value, or one derived from the data."""
        if self.config.L != "auto":
            return float(self.config.L)
        shards = self.assignment.partition.shards
        if isinstance(self.model, QuadraticModel):
            return max(float(np.linalg.eigvalsh(QuadraticModel.hessian(s.features))[-1]) for s in shards)
        if self.model.kind == "logistic":
            return max(self.model.smoothness_upper_bound(s.features) for s in shards)
        est = estimate_constants(
            self.model, self.assignment, self.config.probe_count, self.root.substream("smoothness")
        )
        return est.L

    def problem(self, algorithm: str) -> Problem:
        client_graph = self.client_graph if algorithm == "sfl-rw" else None
        return Problem(self.model, self.assignment, self.graph, client_graph=client_graph, w_star=self.w_star)

    def schedule(self) -> Schedule:
        c = self.config
        if c.schedule == "constant":
            return Schedule.constant(self.smoothness, c.T, c.q1, c.q2)
        return Schedule(mode=c.schedule, L=self.smoothness, K=c.K, q=c.q)

    def run_config(self, algorithm: str | None = None, compress: bool = True) -> RunConfig:
        c = self.config
        schedule = self.schedule()
        return RunConfig(
            algorithm=algorithm or c.algorithm,
            T=c.T,
            K=schedule.K,
            schedule=schedule,
            batch_size=c.batch_size,
            Q=vector_bits(self.model.dim) if c.Q == "auto" else c.Q,
            quantize_levels=c.quantize_levels if compress else None,
            seed=c.seed,
            init_scale=c.init_scale,
        )

    # --- Operations ---
    def run(self, algorithm: str | None = None, compress: bool = True) -> RunResult:
        run_config = self.run_config(algorithm, compress)
        engine = engines_config[run_config.algorithm]()
        logger.info("Running %s with seed %d", engine.name, run_config.seed)
        return engine.run(run_config, self.problem(run_config.algorithm))

    def summarize(self, result: RunResult) -> RunSummary:
        final = result.final
        gaps = positive_prefix([r.gap for r in result.records()])
        rate = fit_linear_rate(gaps) if len(gaps) >= 5 else None
        return RunSummary(
            algorithm=result.algorithm,
            seed=self.config.seed,
            T=result.T,
            K=self.schedule().K,
            N=self.assignment.partition.N,
            M=self.assignment.M,
            final_loss=final.loss,
            final_gap=final.gap,
            final_grad_sq_norm=final.grad_sq_norm,
            final_accuracy=final.accuracy,
            rate=rate,
            bits=result.ledger.snapshot(),
            total_bits=result.ledger.total_bits,
            visit_counts=result.visit_counts,
        )

    def write_run(self, result: RunResult) -> RunSummary:
        """Write trace.csv, ledger.json and summary.json for one run."""
        summary = self.summarize(result)
        write_trace_csv(result, self.path("trace.csv"))
        result.ledger.write_json(self.path("ledger.json"))
        self.path("summary.json").write_text(summary.model_dump_json(indent=2) + "\n", encoding="utf-8")
        logger.info("Wrote trace, ledger and summary to %s", self.out_dir)
        return summary

    def verify_bounds(self) -> list[BoundReport]:
        c = self.config
        kinds = ["thm1", "thm2"] if c.bounds == "both" else [c.bounds]
        if c.algorithm != "fedchs":
            raise ContractViolation(f"Bound checks apply to fedchs runs, not {c.algorithm}")
        result = self.run()
        self.write_run(result)
        schedule = self.schedule()
        est = estimate_constants(
            self.model,
            self.assignment,
            c.probe_count,
            self.root.substream("probes"),
            batch_size=c.batch_size,
            w0=result.iterates[0],
            iterates=result.iterates,
            schedule=schedule,
        )
        if est.L < schedule.L:
            logger.debug("Raising L estimate %.6g to the schedule's %.6g", est.L, schedule.L)
            est = est.model_copy(update={"L": schedule.L})
        logger.debug("Strongly convex coefficients: %s", theorem1_coefficients(est.L, schedule.rates()))

        reports = []
        for kind in kinds:
            report = check_trace_against_bound(result, kind, est, schedule, self.model, self.assignment)
            report.write_json(self.path(f"bounds_{kind}.json"))
            logger.info("%s check %s (min margin %.6g)", kind, "passed" if report.passed else "FAILED", report.min_margin)
            reports.append(report)
        return reports

    def _threshold(self, result: RunResult, gamma: float | None) -> tuple[int | None, int | None]:
        records = result.records()
        if gamma is None:
            return None, None
        if self.model.is_classifier:
            accuracies = [r.accuracy for r in records]
            bits = bits_to_threshold(records, accuracies, gamma)
            if bits is None:
                return None, None
            return next(i for i, a in enumerate(accuracies) if a >= gamma), bits
        for i, record in enumerate(records):
            if record.gap is not None and record.gap <= gamma:
                return i, record.total_bits
        return None, None

    def comparison_row(self, result: RunResult, gamma: float | None, levels: int | None) -> ComparisonRow:
        rounds, bits = self._threshold(result, gamma)
        channel_bits = None if rounds is None else dict(result.records()[rounds].bits)
        return ComparisonRow(
            algorithm=result.algorithm,
            quantize_levels=levels,
            rounds_to_gamma=rounds,
            bits_to_gamma=bits,
            channel_bits_to_gamma=channel_bits,
            total_bits=result.ledger.total_bits,
            final_accuracy=result.final.accuracy,
            final_loss=result.final.loss,
        )

    def compare(self, algorithms: Sequence[str], gamma: float | None) -> list[ComparisonRow]:
        """
        Run each algorithm on the same data and seeds. With `quantize_levels`
        set, each algorithm also runs uncompressed and the compressed row
        reports the share of bits saved.
        """
        if len(algorithms) < 2:
            raise ContractViolation(f"compare needs at least two algorithms, got {list(algorithms)}")
        unknown = [a for a in algorithms if a not in engines_config]
        if unknown:
            raise ContractViolation(f"Unknown algorithms: {unknown}")
        levels = self.config.quantize_levels
        rows = []
        for algorithm in algorithms:
            raw = self.run(algorithm, compress=False)
            rows.append(self.comparison_row(raw, gamma, None))
            if levels is not None:
                compressed = self.run(algorithm)
                row = self.comparison_row(compressed, gamma, levels)
                row.bits_saved_pct = 100.0 * (1.0 - row.total_bits / raw.ledger.total_bits)
                rows.append(row)

        with open(self.path("comparison.csv"), "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(COMPARISON_HEADER)
            for row in rows:
                writer.writerow(row.row())
        logger.info("Wrote comparison of %s to %s", ", ".join(algorithms), self.out_dir)
        return rows

    def partition_stats(self) -> PartitionStats:
        assignment = self.assignment
        partition = assignment.partition
        classes = self.dataset.classes
        global_hist = label_histogram(self.dataset.strata, classes)
        histograms = [label_histogram(strata, classes) for strata in partition.strata]
        stats = PartitionStats(
            N=partition.N,
            M=assignment.M,
            sizes=list(partition.sizes),
            classes=[int(c) for c in classes],
            label_histograms=[[float(v) for v in h] for h in histograms],
            tv_to_global=[total_variation(h, global_hist) for h in histograms],
            mean_tv=mean_tv_distance(partition),
            cluster_members=[list(c.members) for c in assignment.clusters],
            cluster_masses=list(assignment.masses),
        )
        self.path("partition_stats.json").write_text(stats.model_dump_json(indent=2) + "\n", encoding="utf-8")
        export_partition(partition, self.path("partition.tsv"))
        export_edges(self.graph, self.path("es_graph.txt"))
        logger.info("Wrote partition statistics to %s", self.out_dir)
        return stats


def _run_seed(config: ExperimentConfig, seed: int, out_dir: str) -> RunSummary:
    seeded = config.with_overrides(seed=seed)
    experiment = Experiment(seeded, Path(out_dir) / f"seed-{seed}")
    return experiment.write_run(experiment.run())


def run_sweep(config: ExperimentConfig, seeds: Sequence[int], out_dir: str | Path, jobs: int = 1) -> list[RunSummary]:
    """One run per seed, each in its own `seed-<s>/` directory, optionally across worker processes."""
    out_dir = Path(out_dir)
    for seed in seeds:
        confined_path(out_dir, f"seed-{seed}")
    if jobs <= 1:
        return [_run_seed(config, seed, str(out_dir)) for seed in seeds]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(_run_seed, config, seed, str(out_dir)) for seed in seeds]
        return [future.result() for future in futures]

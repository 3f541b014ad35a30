"""Benchmark harness: the four optimisation encodings, QPU sweeps, metrics.

An encoding fixes where optimisation sits relative to partitioning:

* baseline - partition, distribute, measure; no optimisation at all
* global   - optimise the monolithic circuit, then partition and distribute
* local    - partition and distribute first, then optimise each subcircuit
             independently (markers are barriers)
* hybrid   - optimise before partitioning and again per subcircuit

The partition seed depends only on (master seed, circuit id, k), never on
the strategy, so baseline and local always share a cut.
"""
from __future__ import annotations

import csv
import enum
import json
import statistics
import time
import zlib
from dataclasses import dataclass, field, replace
from pathlib import Path

from .circuits import Circuit, gate_counts
from .corpus import CorpusSpec, build_corpus
from .distribute import (DistributedCircuit, distribute, distributed_metrics,
                         reassemble)
from .partitioning import (Hypergraph, Partition, build_hypergraph,
                           connectivity_minus_one, cut_cost, partition)
from .passes import PassReport, optimize
from .qasm import load_qasm_dir
from .simulate import MAX_ORACLE_QUBITS, unitary_equal_up_to_phase

CSV_HEADER = ("circuit_id,width,strategy,k,n1q,n2q,n3q,depth_max,depth_mean,"
              "n_nonlocal,conn_minus_1,compile_time_s")


class Strategy(enum.Enum):
    BASELINE = "baseline"
    GLOBAL = "global"
    LOCAL = "local"
    HYBRID = "hybrid"


ALL_STRATEGIES = (Strategy.BASELINE, Strategy.GLOBAL, Strategy.LOCAL, Strategy.HYBRID)


@dataclass(frozen=True)
class RunConfig:
    qpu_counts: tuple[int, ...] = tuple(range(2, 11))
    epsilon: float = 0.03
    seed: int = 0
    corpus: CorpusSpec | None = None
    qasm_dir: str | Path | None = None
    out_path: str | Path | None = None
    strategies: tuple[Strategy, ...] = ALL_STRATEGIES
    jobs: int = 1
    timing_repeats: int = 3

    def __post_init__(self):
        if any(k < 2 for k in self.qpu_counts):
            raise ValueError("every QPU count must be >= 2")
        if self.timing_repeats < 1:
            raise ValueError("timing_repeats must be >= 1")


@dataclass(frozen=True)
class MetricsRecord:
    circuit_id: str
    width: int
    strategy: str
    k: int
    n1q: int
    n2q: int
    n3q: int
    depth_max: int
    depth_mean: float
    n_nonlocal: int
    conn_minus_1: int
    compile_time_s: float

    def __post_init__(self):
        if min(self.n1q, self.n2q, self.n3q, self.depth_max,
               self.n_nonlocal, self.conn_minus_1) < 0:
            raise ValueError("metric counts must be nonnegative")
        if self.compile_time_s <= 0:
            raise ValueError("compile time must be positive")


@dataclass(frozen=True)
class PipelineResult:
    distributed: DistributedCircuit
    hypergraph: Hypergraph
    partition: Partition
    reports: tuple[PassReport, ...]


def partition_seed(master_seed: int, circuit_id: str, k: int) -> int:
    """Strategy-independent seed: identical for baseline and local runs."""
    return (master_seed * 1000003 + zlib.crc32(circuit_id.encode()) * 31 + k) % (2 ** 32)


def optimize_subcircuits(d: DistributedCircuit) -> tuple[DistributedCircuit, tuple[PassReport, ...]]:
    """Optimise every subcircuit independently; markers stay barriers."""
    parts = []
    reports: list[PassReport] = []
    for sub in d.parts:
        opt, reps = optimize(sub)
        parts.append(opt)
        reports.extend(reps)
    return replace(d, parts=tuple(parts), positions=None), tuple(reports)


def compile_pipeline(c: Circuit, strategy: Strategy, k: int,
                     epsilon: float = 0.03, seed: int = 0) -> PipelineResult:
    """Run one encoding end to end; exactly one partitioning step."""
    if k > c.width:
        raise ValueError(f"k={k} exceeds circuit width {c.width}")
    reports: list[PassReport] = []
    pseed = partition_seed(seed, c.id, k)

    staged = c
    if strategy in (Strategy.GLOBAL, Strategy.HYBRID):
        staged, reps = optimize(staged)
        reports.extend(reps)
    h = build_hypergraph(staged)
    p = partition(h, k, epsilon, pseed)
    d = distribute(staged, p)
    if strategy in (Strategy.LOCAL, Strategy.HYBRID):
        d, reps = optimize_subcircuits(d)
        reports.extend(reps)
    return PipelineResult(d, h, p, tuple(reports))


def run_encoding(c: Circuit, strategy: Strategy, k: int, epsilon: float = 0.03,
                 seed: int = 0, timing_repeats: int = 3) -> MetricsRecord:
    """One benchmark record; wall-clock is the minimum over repeated runs."""
    best_time = None
    result = None
    for _ in range(max(1, timing_repeats)):
        start = time.perf_counter()
        result = compile_pipeline(c, strategy, k, epsilon, seed)
        elapsed = time.perf_counter() - start
        if best_time is None or elapsed < best_time:
            best_time = elapsed
    return _record_from(c, strategy, k, result, best_time)


def _record_from(c: Circuit, strategy: Strategy, k: int,
                 result: PipelineResult, elapsed: float) -> MetricsRecord:
    m = distributed_metrics(result.distributed)
    return MetricsRecord(
        circuit_id=c.id, width=c.width, strategy=strategy.value, k=k,
        n1q=m.n1q, n2q=m.n2q, n3q=m.n3q,
        depth_max=m.depth_max, depth_mean=m.depth_mean,
        n_nonlocal=m.n_nonlocal,
        conn_minus_1=connectivity_minus_one(result.hypergraph, result.partition),
        compile_time_s=max(elapsed, 1e-9))


@dataclass
class BenchmarkResult:
    records: list[MetricsRecord]
    failures: list[tuple[str, str, int, str]]  # circuit, strategy, k, error
    skipped: list[tuple[str, int]] = field(default_factory=list)  # k > width

    def aggregate_ids(self) -> set[str]:
        bad = {f[0] for f in self.failures}
        return {r.circuit_id for r in self.records} - bad

    def aggregate_records(self) -> list[MetricsRecord]:
        """Records of circuits that succeeded under every strategy."""
        keep = self.aggregate_ids()
        return [r for r in self.records if r.circuit_id in keep]


def _load_circuits(cfg: RunConfig) -> list[Circuit]:
    if cfg.qasm_dir is not None:
        return load_qasm_dir(cfg.qasm_dir)
    return build_corpus(cfg.corpus or CorpusSpec())


def _metrics_task(args):
    c, strategy_value, k, epsilon, seed = args
    result = compile_pipeline(c, Strategy(strategy_value), k, epsilon, seed)
    return c.id, strategy_value, k, result


def run_benchmark(cfg: RunConfig) -> BenchmarkResult:
    """One record per (circuit, strategy, k <= width); failures are recorded
    and skipped, never fatal. Writes CSV plus an aggregate JSON when
    cfg.out_path is set."""
    circuits = _load_circuits(cfg)
    if not circuits:
        raise ValueError("benchmark corpus is empty")
    out = BenchmarkResult([], [])

    jobs: list[tuple[Circuit, Strategy, int]] = []
    for c in circuits:
        for strategy in cfg.strategies:
            for k in cfg.qpu_counts:
                if k > c.width:
                    if strategy is cfg.strategies[0]:
                        out.skipped.append((c.id, k))
                    continue
                jobs.append((c, strategy, k))

    timings: dict[tuple[str, str, int], float] = {}
    results: dict[tuple[str, str, int], PipelineResult] = {}

    if cfg.jobs > 1:
        # metrics phase in parallel, timing phase strictly serial afterwards
        from concurrent.futures import ProcessPoolExecutor
        payload = [(c, s.value, k, cfg.epsilon, cfg.seed) for c, s, k in jobs]
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            for (c, s, k), outcome in zip(jobs, pool.map(_metrics_task, payload)):
                results[(c.id, s.value, k)] = outcome[3]
        for c, s, k in jobs:
            best = None
            for _ in range(cfg.timing_repeats):
                start = time.perf_counter()
                compile_pipeline(c, s, k, cfg.epsilon, cfg.seed)
                elapsed = time.perf_counter() - start
                best = elapsed if best is None or elapsed < best else best
            timings[(c.id, s.value, k)] = best

    for c, strategy, k in jobs:
        key = (c.id, strategy.value, k)
        try:
            if key in results:
                record = _record_from(c, strategy, k, results[key], timings[key])
            else:
                record = run_encoding(c, strategy, k, cfg.epsilon, cfg.seed,
                                      cfg.timing_repeats)
            out.records.append(record)
        except Exception as exc:  # noqa: BLE001 - per-record failure policy
            out.failures.append((c.id, strategy.value, k, str(exc)))

    if cfg.out_path is not None:
        write_csv(out.records, cfg.out_path)
        agg_path = Path(cfg.out_path).with_suffix(".agg.json")
        agg = summarize_records(out.aggregate_records())
        agg["failures"] = [list(f) for f in out.failures]
        agg["skipped"] = [list(s) for s in out.skipped]
        agg_path.write_text(json.dumps(agg, indent=2, sort_keys=True) + "\n")
    return out


# ---------------------------------------------------------------------------
# CSV and summaries

def write_csv(records: list[MetricsRecord], path: str | Path) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER.split(","))
        for r in records:
            writer.writerow([
                r.circuit_id, r.width, r.strategy, r.k, r.n1q, r.n2q, r.n3q,
                r.depth_max, f"{r.depth_mean:.17g}", r.n_nonlocal,
                r.conn_minus_1, f"{r.compile_time_s:.9g}"])


def read_csv(path: str | Path) -> list[MetricsRecord]:
    path = Path(path)
    records = []
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CSV_HEADER.split(","):
            raise ValueError(f"unexpected CSV header in {path}: {header}")
        for row in reader:
            records.append(MetricsRecord(
                circuit_id=row[0], width=int(row[1]), strategy=row[2],
                k=int(row[3]), n1q=int(row[4]), n2q=int(row[5]), n3q=int(row[6]),
                depth_max=int(row[7]), depth_mean=float(row[8]),
                n_nonlocal=int(row[9]), conn_minus_1=int(row[10]),
                compile_time_s=float(row[11])))
    return records


def width_bin(width: int) -> int:
    """Nearest power-of-two bucket (log-space rounding)."""
    import math
    return 2 ** round(math.log2(width))


_MEAN_METRICS = ("n1q", "n2q", "n3q", "depth_max", "depth_mean",
                 "n_nonlocal", "conn_minus_1")


def summarize_records(records: list[MetricsRecord]) -> dict:
    """Per-strategy compile-time stats plus per-(strategy, width-bin) means."""
    by_strategy: dict[str, list[MetricsRecord]] = {}
    for r in records:
        by_strategy.setdefault(r.strategy, []).append(r)

    compile_time = {}
    for strategy, rs in sorted(by_strategy.items()):
        times = [r.compile_time_s for r in rs]
        compile_time[strategy] = {
            "mean": statistics.fmean(times),
            "median": statistics.median(times),
            "stddev": statistics.pstdev(times),
            "count": len(times),
        }

    by_bin: dict[str, dict[str, dict[str, float]]] = {}
    groups: dict[tuple[str, int], list[MetricsRecord]] = {}
    for r in records:
        groups.setdefault((r.strategy, width_bin(r.width)), []).append(r)
    for (strategy, bin_), rs in sorted(groups.items()):
        cell = {metric: statistics.fmean(getattr(r, metric) for r in rs)
                for metric in _MEAN_METRICS}
        by_bin.setdefault(strategy, {})[str(bin_)] = cell

    return {"compile_time": compile_time, "by_width_bin": by_bin}


# ---------------------------------------------------------------------------
# semantic verification sweep (shared by the CLI and the acceptance suite)

VERIFY_STRATEGIES = (Strategy.GLOBAL, Strategy.LOCAL, Strategy.HYBRID)


@dataclass
class VerifyOutcome:
    checked: int = 0
    failures: list[tuple[str, str, int]] = field(default_factory=list)


def verify_corpus(circuits: list[Circuit], qpu_counts=tuple(range(2, 11)),
                  epsilon: float = 0.03, seed: int = 0,
                  max_width: int = MAX_ORACLE_QUBITS, tol: float = 1e-7,
                  strategies=VERIFY_STRATEGIES) -> VerifyOutcome:
    """Reassemble every optimised pipeline output and compare it against the
    source circuit with the statevector oracle."""
    outcome = VerifyOutcome()
    for c in circuits:
        if c.width > max_width:
            continue
        for strategy in strategies:
            for k in qpu_counts:
                if k > c.width:
                    continue
                result = compile_pipeline(c, strategy, k, epsilon, seed)
                rebuilt = reassemble(result.distributed)
                outcome.checked += 1
                if not unitary_equal_up_to_phase(c, rebuilt, tol):
                    outcome.failures.append((c.id, strategy.value, k))
    return outcome

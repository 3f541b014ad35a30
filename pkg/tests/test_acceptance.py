"""Acceptance criteria, one test per criterion, one PASS/FAIL line each.

Hard criteria assert; directional-trend criteria print PASS or WARN only,
because the in-repo corpus differs from any external suite. Run with
``pytest tests/test_acceptance.py -v -s`` to see the per-criterion lines.
"""
import itertools
import math
import statistics
import time
import warnings

import numpy as np
import pytest

from dqcbench.circuits import GateKind
from dqcbench.corpus import CorpusSpec, build_corpus, write_corpus
from dqcbench.harness import (ALL_STRATEGIES, Strategy, _record_from,
                              compile_pipeline, verify_corpus, width_bin)
from dqcbench.kak import kak_resynthesize
from dqcbench.partitioning import balance_cap, cut_cost, partition
from tests.test_kak import CX, SWAP, haar_unitary, max_err_up_to_phase, product_of
from tests.test_partitioning import bridge_instance, exhaustive_optimum, oracle_cut


def _line(name: str, ok: bool, detail: str = "", soft: bool = False):
    status = "PASS" if ok else ("WARN" if soft else "FAIL")
    print(f"ACCEPTANCE {name}: {status}" + (f" ({detail})" if detail else ""))


@pytest.fixture(scope="module")
def sweep():
    """Full-corpus sweep: one pipeline run per (circuit, strategy, k <= width)."""
    rows = []
    for c in build_corpus(CorpusSpec()):
        for strategy in ALL_STRATEGIES:
            for k in range(2, 11):
                if k > c.width:
                    continue
                start = time.perf_counter()
                result = compile_pipeline(c, strategy, k, 0.03, 0)
                elapsed = time.perf_counter() - start
                record = _record_from(c, strategy, k, result, elapsed)
                rows.append((c, strategy, k, record, result.partition))
    return rows


def test_semantic_preservation():
    circuits = [c for c in build_corpus(CorpusSpec()) if c.width <= 10]
    start = time.perf_counter()
    outcome = verify_corpus(circuits, tol=1e-7)
    elapsed = time.perf_counter() - start
    ok = outcome.checked > 0 and not outcome.failures
    _line("semantic-preservation", ok,
          f"{outcome.checked} pipeline outputs, {len(outcome.failures)} failures, "
          f"{elapsed:.0f}s")
    assert ok, outcome.failures


def test_balance(sweep):
    violations = [
        (c.id, strategy.value, k)
        for c, strategy, k, _, part in sweep
        if max(part.part_sizes()) > balance_cap(c.width, k, 0.03)
    ]
    _line("balance", not violations, f"{len(sweep)} partitions checked")
    assert not violations, violations[:5]


def test_cut_structure_invariance(sweep):
    nonlocal_of = {(c.id, strategy, k): rec.n_nonlocal
                   for c, strategy, k, rec, _ in sweep}
    violations = []
    for (cid, strategy, k), value in nonlocal_of.items():
        if strategy is Strategy.LOCAL:
            if value != nonlocal_of[(cid, Strategy.BASELINE, k)]:
                violations.append((cid, k))
    _line("cut-structure-invariance", not violations)
    assert not violations, violations[:5]


def test_count_monotonicity(sweep):
    records = {(c.id, strategy, k): rec for c, strategy, k, rec, _ in sweep}
    total_viol, triple_viol = [], []
    for (cid, strategy, k), rec in records.items():
        if strategy is Strategy.BASELINE:
            continue
        base = records[(cid, Strategy.BASELINE, k)]
        if rec.n1q + rec.n2q + rec.n3q > base.n1q + base.n2q + base.n3q:
            total_viol.append((cid, strategy.value, k))
        if strategy is Strategy.HYBRID and rec.n3q > base.n3q:
            triple_viol.append((cid, k))
    ok = not total_viol and not triple_viol
    _line("count-monotonicity", ok)
    assert ok, (total_viol[:5], triple_viol[:5])


def test_partitioner_oracle():
    start = time.perf_counter()
    hits = 0
    balance_ok = True
    for trial in range(50):
        hg = bridge_instance(3 + trial % 4, 3 + (trial // 4) % 4)
        assert hg.vertex_count <= 12
        p = partition(hg, 2, 0.03, seed=trial)
        if max(p.part_sizes()) > balance_cap(hg.vertex_count, 2, 0.03):
            balance_ok = False
        if cut_cost(hg, p) == exhaustive_optimum(hg):
            hits += 1
    elapsed = time.perf_counter() - start
    ok = hits >= 48 and balance_ok  # >= 95% of 50
    _line("partitioner-oracle", ok, f"{hits}/50 optimal, {elapsed:.0f}s")
    assert ok


def test_kak_correctness():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(1000):
        u = haar_unitary(rng)
        gates = kak_resynthesize(u)
        worst = max(worst, max_err_up_to_phase(u, product_of(gates)))
    cx_of = lambda gates: sum(1 for g in gates if g.kind is GateKind.CX)
    special_ok = (
        cx_of(kak_resynthesize(np.eye(4, dtype=complex))) == 0
        and cx_of(kak_resynthesize(CX)) == 1
        and cx_of(kak_resynthesize(SWAP)) == 3)
    ok = worst < 1e-7 and special_ok
    _line("kak-correctness", ok, f"worst reconstruction error {worst:.2e}")
    assert ok


def test_directional_trends(sweep):
    records = [rec for _, _, _, rec, _ in sweep]
    med = {s.value: statistics.median(
        [r.compile_time_s for r in records if r.strategy == s.value])
        for s in ALL_STRATEGIES}
    time_ok = (med["hybrid"] >= med["global"]) and (med["hybrid"] >= med["local"])

    large = [r for r in records if width_bin(r.width) >= 64]
    mean_nl = {s: statistics.fmean([r.n_nonlocal for r in large if r.strategy == s])
               for s in ("baseline", "global")}
    comm_ok = mean_nl["global"] <= mean_nl["baseline"]

    detail = (f"median times {({k: round(v, 5) for k, v in med.items()})}; "
              f"mean n_nonlocal>=64 baseline {mean_nl['baseline']:.1f} "
              f"vs global {mean_nl['global']:.1f}")
    _line("directional-trends", time_ok and comm_ok, detail, soft=True)
    if not (time_ok and comm_ok):
        warnings.warn(f"directional trend violated: {detail}")


def test_run_determinism(tmp_path):
    from dqcbench.cli import main
    corpus_dir = tmp_path / "corpus"
    write_corpus(CorpusSpec(widths=(4, 8)), corpus_dir)
    outs = []
    for name in ("a.csv", "b.csv"):
        path = tmp_path / name
        code = main(["run", "--corpus", str(corpus_dir), "--out", str(path),
                     "--seed", "11", "--timing-repeats", "1"])
        assert code == 0
        outs.append([line.rsplit(",", 1)[0]
                     for line in path.read_text().splitlines()])
    ok = outs[0] == outs[1]
    _line("run-determinism", ok, f"{len(outs[0]) - 1} data rows compared")
    assert ok

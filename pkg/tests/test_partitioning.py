import itertools
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from dqcbench.circuits import Circuit, ccx, cx, cz, h, rz
from dqcbench.corpus import generate
from dqcbench.partitioning import (Hypergraph, Partition, balance_cap,
                                   build_hypergraph, connectivity_minus_one,
                                   cut_cost, partition)


def oracle_cut(h: Hypergraph, assignment) -> int:
    """Independent recount, net by net."""
    total = 0
    for verts, w in h.nets:
        parts = {assignment[v] for v in verts}
        if len(parts) >= 2:
            total += w
    return total


def exhaustive_optimum(h: Hypergraph, k: int = 2, epsilon: float = 0.03):
    n = h.vertex_count
    cap = balance_cap(n, k, epsilon)
    best = None
    for bits in range(2 ** n):
        assignment = [(bits >> i) & 1 for i in range(n)]
        sizes = [assignment.count(0), assignment.count(1)]
        if 0 in sizes or max(sizes) > cap:
            continue
        cost = oracle_cut(h, assignment)
        if best is None or cost < best:
            best = cost
    return best


def bridge_instance(n_a: int, n_b: int) -> Hypergraph:
    """Two cliques of weight-3 nets joined by one weight-1 bridge net."""
    nets = []
    for base, size in ((0, n_a), (n_a, n_b)):
        for i, j in itertools.combinations(range(base, base + size), 2):
            nets.append((frozenset((i, j)), 3))
    nets.append((frozenset((n_a - 1, n_a)), 1))
    return Hypergraph(n_a + n_b, tuple(nets))


class TestBuildHypergraph:
    def test_weighted_nets_from_repeats(self):
        c = Circuit(3, (h(0), cx(0, 1), cx(0, 1), cx(1, 2)))
        hg = build_hypergraph(c)
        nets = dict(hg.nets)
        assert nets == {frozenset((0, 1)): 2, frozenset((1, 2)): 1}

    def test_only_1q_gates_no_nets(self):
        assert build_hypergraph(Circuit(2, (h(0), h(1)))).nets == ()

    def test_ccx_single_net(self):
        hg = build_hypergraph(Circuit(3, (ccx(0, 1, 2),)))
        assert hg.nets == ((frozenset((0, 1, 2)), 1),)

    def test_symmetric_2q_orders_merge(self):
        hg = build_hypergraph(Circuit(2, (cz(0, 1), cz(1, 0))))
        assert hg.nets == ((frozenset((0, 1)), 2),)

    def test_total_weight_counts_multiqubit_gates(self):
        c = generate("random", 10, 0)
        hg = build_hypergraph(c)
        expected = sum(1 for g in c.gates if g.arity >= 2)
        assert hg.total_weight == expected


class TestPartitionType:
    def test_balance_enforced(self):
        with pytest.raises(ValueError, match="balance"):
            Partition(2, (0, 0, 0, 0, 0, 1))  # cap = ceil(1.03*6/2) = 4

    def test_nonempty_enforced(self):
        with pytest.raises(ValueError, match="nonempty"):
            Partition(3, (0, 1, 0, 1))

    def test_part_id_range(self):
        with pytest.raises(ValueError, match="range"):
            Partition(2, (0, 2))

    def test_k1_trivial_partition_allowed(self):
        p = Partition(1, (0, 0, 0))
        assert p.part_sizes() == [3]

    def test_balance_cap_example(self):
        # 10 vertices over 3 parts at 3% slack
        assert balance_cap(10, 3, 0.03) == 4


class TestCutCost:
    def test_monochromatic_zero(self):
        hg = build_hypergraph(generate("ghz", 6))
        p = Partition(1, (0,) * 6)
        assert cut_cost(hg, p) == 0

    def test_weight_counted_once_per_net(self):
        hg = Hypergraph(2, ((frozenset((0, 1)), 2),))
        assert cut_cost(hg, Partition(2, (0, 1))) == 2

    def test_three_part_net_counts_once(self):
        hg = Hypergraph(3, ((frozenset((0, 1, 2)), 5),))
        assert cut_cost(hg, Partition(3, (0, 1, 2))) == 5
        assert connectivity_minus_one(hg, Partition(3, (0, 1, 2))) == 10

    def test_coverage_required(self):
        hg = Hypergraph(3, ((frozenset((0, 1)), 1),))
        with pytest.raises(ValueError, match="cover"):
            cut_cost(hg, Partition(2, (0, 1)))

    def test_matches_oracle_on_random_instances(self):
        rng = random.Random(5)
        for trial in range(25):
            n = rng.randint(4, 12)
            nets = {}
            for _ in range(3 * n):
                arity = rng.choice((2, 2, 3))
                verts = frozenset(rng.sample(range(n), arity))
                nets[verts] = nets.get(verts, 0) + 1
            hg = Hypergraph(n, tuple(nets.items()))
            k = rng.randint(2, min(4, n))
            p = partition(hg, k, 0.03, seed=trial)
            assert cut_cost(hg, p) == oracle_cut(hg, p.assignment)
            assert connectivity_minus_one(hg, p) >= cut_cost(hg, p)

    def test_cut_bounded_by_total_weight(self):
        hg = build_hypergraph(generate("random", 12, 1))
        p = partition(hg, 3, 0.03, 0)
        assert 0 <= cut_cost(hg, p) <= hg.total_weight


class TestPartitionSolver:
    def test_infeasible_k(self):
        hg = build_hypergraph(generate("ghz", 4))
        with pytest.raises(ValueError, match="infeasible"):
            partition(hg, 5, 0.03, 0)
        with pytest.raises(ValueError, match=">= 2"):
            partition(hg, 1, 0.03, 0)

    def test_zero_net_hypergraph(self):
        hg = Hypergraph(6, ())
        p = partition(hg, 3, 0.03, 0)
        assert cut_cost(hg, p) == 0
        assert sorted(p.part_sizes()) == [2, 2, 2]

    def test_deterministic_per_seed(self):
        hg = build_hypergraph(generate("random", 24, 2))
        for k in (2, 5):
            a = partition(hg, k, 0.03, seed=9).assignment
            b = partition(hg, k, 0.03, seed=9).assignment
            assert a == b

    def test_balance_always_satisfied(self):
        for fam in ("ghz", "qft", "random", "qaoa_ring", "grover_like"):
            c = generate(fam, 13, 1)
            hg = build_hypergraph(c)
            for k in (2, 3, 6, 13):
                p = partition(hg, k, 0.03, seed=3)
                cap = balance_cap(13, k, 0.03)
                assert max(p.part_sizes()) <= cap
                assert min(p.part_sizes()) >= 1

    def test_bridge_family_attains_optimum(self):
        hits = 0
        for trial in range(50):
            hg = bridge_instance(3 + trial % 4, 3 + (trial // 4) % 4)
            p = partition(hg, 2, 0.03, seed=trial)
            if cut_cost(hg, p) == exhaustive_optimum(hg):
                hits += 1
        assert hits >= 48  # >= 95%

    def test_random_instances_near_optimum(self):
        # soft bound: <= 1.5x the exhaustive optimum on small random instances
        rng = random.Random(11)
        for trial in range(15):
            n = rng.randint(6, 11)
            nets = {}
            for _ in range(2 * n):
                verts = frozenset(rng.sample(range(n), 2))
                nets[verts] = nets.get(verts, 0) + 1
            hg = Hypergraph(n, tuple(nets.items()))
            got = cut_cost(hg, partition(hg, 2, 0.03, seed=trial))
            opt = exhaustive_optimum(hg)
            assert got <= max(opt * 1.5, opt + 0)  # reported bound
            if opt == 0:
                assert got == 0

    @settings(max_examples=25, deadline=None)
    @given(st.integers(4, 20), st.integers(0, 100))
    def test_balance_property(self, n, seed):
        rng = random.Random(seed)
        nets = {}
        for _ in range(2 * n):
            verts = frozenset(rng.sample(range(n), rng.choice((2, 3))))
            nets[verts] = nets.get(verts, 0) + 1
        hg = Hypergraph(n, tuple(nets.items()))
        k = 2 + seed % min(4, n - 1)
        p = partition(hg, k, 0.03, seed=seed)
        assert max(p.part_sizes()) <= balance_cap(n, k, 0.03)


def test_hypergraph_validation():
    with pytest.raises(ValueError, match="arity"):
        Hypergraph(4, ((frozenset((0,)), 1),))
    with pytest.raises(ValueError, match="weight"):
        Hypergraph(4, ((frozenset((0, 1)), 0),))
    with pytest.raises(ValueError, match="range"):
        Hypergraph(2, ((frozenset((0, 5)), 1),))

"""Dependency hypergraph and balanced k-way partitioning.

Qubits are vertices; every multi-qubit gate contributes a hyperedge over its
support, with identical supports merged into one weighted net. The solver is
a multilevel scheme: heavy-pair matching coarsens the instance, a
largest-first greedy produces the initial balanced assignment, and
Fiduccia-Mattheyses-style passes with rollback refine the cut at each level
under a hard balance constraint.
"""
from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .circuits import Circuit

DEFAULT_EPSILON = 0.03


@dataclass(frozen=True)
class Hypergraph:
    vertex_count: int
    nets: tuple[tuple[frozenset[int], int], ...]  # (vertex set, weight)

    def __post_init__(self):
        for verts, weight in self.nets:
            if not 2 <= len(verts) <= 3:
                raise ValueError(f"net arity must be 2 or 3, got {len(verts)}")
            if weight < 1:
                raise ValueError("net weight must be >= 1")
            if max(verts) >= self.vertex_count:
                raise ValueError("net vertex out of range")

    @property
    def total_weight(self) -> int:
        return sum(w for _, w in self.nets)


@dataclass(frozen=True)
class Partition:
    k: int
    assignment: tuple[int, ...]
    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(self.assignment))
        n = len(self.assignment)
        if self.k < 1:
            raise ValueError("part count must be >= 1")
        if any(not 0 <= p < self.k for p in self.assignment):
            raise ValueError("part id out of range")
        sizes = Counter(self.assignment)
        if self.k <= n and len(sizes) < self.k:
            raise ValueError("every part must be nonempty when k <= vertex count")
        if n and max(sizes.values()) > balance_cap(n, self.k, self.epsilon):
            raise ValueError(
                f"partition violates balance: max part size {max(sizes.values())} "
                f"> cap {balance_cap(n, self.k, self.epsilon)}")

    def part_sizes(self) -> list[int]:
        sizes = [0] * self.k
        for p in self.assignment:
            sizes[p] += 1
        return sizes


def balance_cap(vertex_count: int, k: int, epsilon: float) -> int:
    return math.ceil((1.0 + epsilon) * vertex_count / k)


def build_hypergraph(c: Circuit) -> Hypergraph:
    """One weighted net per distinct multi-qubit gate support; 1Q gates add nothing."""
    weights: Counter[frozenset[int]] = Counter()
    for g in c.gates:
        if g.is_marker:
            raise ValueError("cannot build a hypergraph over telegate markers")
        if g.arity >= 2:
            weights[frozenset(g.qubits)] += 1
    nets = tuple(sorted(weights.items(), key=lambda kv: (sorted(kv[0]), kv[1])))
    return Hypergraph(c.width, tuple((verts, w) for verts, w in nets))


def cut_cost(h: Hypergraph, p: Partition) -> int:
    """Total weight of nets spanning two or more parts (cut-net metric)."""
    if len(p.assignment) != h.vertex_count:
        raise ValueError("partition does not cover the hypergraph's vertices")
    cost = 0
    for verts, weight in h.nets:
        if len({p.assignment[v] for v in verts}) > 1:
            cost += weight
    return cost


def connectivity_minus_one(h: Hypergraph, p: Partition) -> int:
    """Sum over nets of (parts touched - 1) * weight; logged beside cut-net."""
    if len(p.assignment) != h.vertex_count:
        raise ValueError("partition does not cover the hypergraph's vertices")
    cost = 0
    for verts, weight in h.nets:
        cost += (len({p.assignment[v] for v in verts}) - 1) * weight
    return cost


# ---------------------------------------------------------------------------
# multilevel solver

class _Level:
    """One coarsening level: weighted vertices and remapped weighted nets."""

    def __init__(self, weights: list[int], nets: list[tuple[tuple[int, ...], int]]):
        self.weights = weights
        self.nets = nets
        self.incident: list[list[int]] = [[] for _ in weights]
        for idx, (verts, _) in enumerate(nets):
            for v in verts:
                self.incident[v].append(idx)


def _coarsen(level: _Level, max_weight: int) -> tuple[_Level, list[int]] | None:
    """Contract a heavy-pair matching; None when no pair is contractable."""
    n = len(level.weights)
    scores: Counter[tuple[int, int]] = Counter()
    for verts, w in level.nets:
        vs = sorted(verts)
        share = w / (len(vs) - 1)
        for i in range(len(vs)):
            for j in range(i + 1, len(vs)):
                scores[(vs[i], vs[j])] += share
    matched = [False] * n
    merges: list[tuple[int, int]] = []
    for (u, v), _ in sorted(scores.items(), key=lambda kv: (-kv[1], kv[0])):
        if matched[u] or matched[v]:
            continue
        if level.weights[u] + level.weights[v] > max_weight:
            continue
        matched[u] = matched[v] = True
        merges.append((u, v))
    if not merges:
        return None
    mapping = [-1] * n
    new_weights: list[int] = []
    for u, v in merges:
        mapping[u] = mapping[v] = len(new_weights)
        new_weights.append(level.weights[u] + level.weights[v])
    for v in range(n):
        if mapping[v] < 0:
            mapping[v] = len(new_weights)
            new_weights.append(level.weights[v])
    nets: Counter[tuple[int, ...]] = Counter()
    for verts, w in level.nets:
        image = tuple(sorted({mapping[v] for v in verts}))
        if len(image) >= 2:
            nets[image] += w
    return _Level(new_weights, sorted(nets.items())), mapping


def _greedy_initial(level: _Level, k: int, cap: int, rng: random.Random,
                    shuffle: bool) -> list[int]:
    """Largest-first into the lightest part; random order on restarts."""
    order = sorted(range(len(level.weights)),
                   key=lambda v: (-level.weights[v], v))
    if shuffle:
        rng.shuffle(order)
    loads = [0] * k
    assignment = [0] * len(level.weights)
    for v in order:
        fitting = [p for p in range(k) if loads[p] + level.weights[v] <= cap]
        pool = fitting if fitting else range(k)
        part = min(pool, key=lambda p: (loads[p], p))
        assignment[v] = part
        loads[part] += level.weights[v]
    return assignment


class _RefineEngine:
    """Incremental cut-net gain tracking for one level.

    Two-vertex nets live in a dense weight matrix: connectivity of every
    vertex to every part is a single matmul, and each move is a rank-1
    update. Three-vertex nets (CCX supports) are few, so their gain
    corrections are patched per move over the affected vertices only.
    """

    def __init__(self, level: _Level, k: int, cap: int, assignment: list[int]):
        self.level = level
        self.k = k
        self.cap = cap
        n = len(level.weights)
        self.n = n
        self.assignment = assignment
        self.weights = np.array(level.weights)

        w2 = np.zeros((n, n))
        self.tri_nets: list[tuple[tuple[int, ...], int]] = []
        for verts, w in level.nets:
            if len(verts) == 2:
                a, b = verts
                w2[a, b] += w
                w2[b, a] += w
            else:
                self.tri_nets.append((verts, w))
        self.w2 = w2
        self.tri_incident: list[list[int]] = [[] for _ in range(n)]
        for idx, (verts, _) in enumerate(self.tri_nets):
            for v in verts:
                self.tri_incident[v].append(idx)

        self.part = list(assignment)  # plain list: hot scalar reads
        indicator = np.zeros((n, k))
        indicator[np.arange(n), np.array(self.part)] = 1.0
        self.conn = w2 @ indicator  # conn[v, p]: 2-net weight from v to part p
        self.loads = np.bincount(self.part, weights=self.weights, minlength=k)
        self.counts = np.bincount(self.part, minlength=k)
        self.tri_gain = np.zeros((n, k))
        for v in range(n):
            self._patch_tri(v)

    def _patch_tri(self, v: int) -> None:
        """Rebuild v's 3-net gain row.

        When the other two vertices straddle parts the net stays cut wherever
        v goes (zero gain); when they share part p0 the gain is constant in d
        apart from a bonus at d = p0.
        """
        const = 0.0
        self.tri_gain[v, :] = 0.0
        part = self.part
        for idx in self.tri_incident[v]:
            verts, w = self.tri_nets[idx]
            o1, o2 = (part[u] for u in verts if u != v)
            if o1 != o2:
                continue
            now_cut = o1 != part[v]
            const += w * (int(now_cut) - 1)
            self.tri_gain[v, o1] += w
        if const:
            self.tri_gain[v, :] += const

    def gains(self):
        """Matrix G[v, d]: cut reduction if v moves to part d."""
        src_conn = self.conn[np.arange(self.n), self.part]
        return self.conn - src_conn[:, None] + self.tri_gain

    def admissible(self, locked=None, only_overfull: bool = False):
        """Boolean mask M[v, d] of allowed moves under balance and locks."""
        mask = self.loads[None, :] + self.weights[:, None] <= self.cap
        mask[np.arange(self.n), self.part] = False
        movable = self.counts[self.part] > 1
        if locked is not None:
            movable &= ~locked
        if only_overfull:
            movable &= self.loads[self.part] > self.cap
        mask &= movable[:, None]
        return mask

    def best_move(self, mask):
        """(gain, v, dst) of the best admissible move; ties -> lowest index."""
        g = np.where(mask, self.gains(), -np.inf)
        flat = int(np.argmax(g))
        v, dst = divmod(flat, self.k)
        if not mask[v, dst]:
            return None
        return g[v, dst], v, dst

    def move(self, v: int, dst: int) -> None:
        src = self.part[v]
        self.conn[:, src] -= self.w2[:, v]
        self.conn[:, dst] += self.w2[:, v]
        self.part[v] = dst
        self.assignment[v] = dst
        self.loads[src] -= self.weights[v]
        self.loads[dst] += self.weights[v]
        self.counts[src] -= 1
        self.counts[dst] += 1
        touched = {v}
        for idx in self.tri_incident[v]:
            touched.update(self.tri_nets[idx][0])
        for u in touched:
            self._patch_tri(u)


def _repair_balance(engine: _RefineEngine) -> None:
    """Move best-gain vertices out of overfull parts until feasible (or stuck)."""
    while (engine.loads > engine.cap).any():
        best = engine.best_move(engine.admissible(only_overfull=True))
        if best is None:
            return  # chunky coarse vertices; finer levels finish the repair
        _, v, dst = best
        engine.move(v, dst)


def _fm_refine(engine: _RefineEngine, max_passes: int = 8) -> None:
    """FM passes with rollback: chain best admissible moves (negative gains
    allowed), keep the best prefix, stop when a pass yields no improvement."""
    for _ in range(max_passes):
        locked = np.zeros(engine.n, dtype=bool)
        trail: list[tuple[int, int]] = []  # vertex, old part
        cum = best_cum = 0.0
        best_len = 0
        while True:
            best = engine.best_move(engine.admissible(locked=locked))
            if best is None:
                break
            gain, v, dst = best
            trail.append((v, int(engine.part[v])))
            engine.move(v, dst)
            locked[v] = True
            cum += gain
            if cum > best_cum + 1e-9:
                best_cum, best_len = cum, len(trail)
        for v, src in reversed(trail[best_len:]):
            engine.move(v, src)
        if best_cum <= 0:
            return


def _solve(h: Hypergraph, k: int, epsilon: float, rng: random.Random,
           shuffle_init: bool) -> list[int]:
    cap = balance_cap(h.vertex_count, k, epsilon)
    base = _Level([1] * h.vertex_count,
                  sorted((tuple(sorted(verts)), w) for verts, w in h.nets))
    levels = [base]
    mappings: list[list[int]] = []
    while len(levels[-1].weights) > max(2 * k, 8):
        contracted = _coarsen(levels[-1], max_weight=cap)
        if contracted is None:
            break
        nxt, mapping = contracted
        if len(nxt.weights) >= len(levels[-1].weights):
            break
        levels.append(nxt)
        mappings.append(mapping)

    assignment = _greedy_initial(levels[-1], k, cap, rng, shuffle_init)
    for depth_ in range(len(levels) - 1, -1, -1):
        engine = _RefineEngine(levels[depth_], k, cap, assignment)
        _repair_balance(engine)
        _fm_refine(engine)
        if depth_ > 0:
            mapping = mappings[depth_ - 1]
            assignment = [assignment[mapping[v]] for v in range(len(levels[depth_ - 1].weights))]
    return assignment


def _cut_of(h: Hypergraph, assignment: list[int]) -> int:
    cost = 0
    for verts, weight in h.nets:
        if len({assignment[v] for v in verts}) > 1:
            cost += weight
    return cost


def partition(h: Hypergraph, k: int, epsilon: float = DEFAULT_EPSILON,
              seed: int = 0, restarts: int = 2) -> Partition:
    """Balanced k-way partition minimising cut nets; deterministic per seed."""
    if k < 2:
        raise ValueError(f"part count must be >= 2, got {k}")
    if k > h.vertex_count:
        raise ValueError(
            f"infeasible: k={k} exceeds vertex count {h.vertex_count}")
    if epsilon < 0:
        raise ValueError("imbalance tolerance must be >= 0")
    rng = random.Random(seed)
    best: list[int] | None = None
    best_cut = None
    for restart in range(max(1, restarts)):
        assignment = _solve(h, k, epsilon, rng, shuffle_init=restart > 0)
        cut = _cut_of(h, assignment)
        if best_cut is None or cut < best_cut:
            best, best_cut = assignment, cut
    return Partition(k, tuple(best), epsilon)

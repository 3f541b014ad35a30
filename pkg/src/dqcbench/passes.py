"""Peephole circuit optimisation passes and the fixpoint pipeline.

Four passes: inverse-pair cancellation, rotation merging, commutation-aware
cancellation, and two-qubit block resynthesis. All are semantics-preserving
(up to global phase) and none moves, removes, or commutes through a telegate
marker — a remote gate is an ordering barrier for local rewrites.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuits import (ARITY, Circuit, Gate, GateKind, ROTATIONS, depth,
                       gate_counts, normalize_angle)
from .kak import kak_resynthesize
from .simulate import gate_matrix, u3_matrix

ANGLE_EPS = 1e-12   # merged rotations below this are dropped
COMMUTE_WALK_CAP = 64  # bound on how far a cancellation may look ahead


@dataclass(frozen=True)
class PassReport:
    name: str
    gates_before: tuple[int, int, int]
    gates_after: tuple[int, int, int]
    depth_before: int
    depth_after: int
    iterations: int

    @property
    def changed(self) -> bool:
        return self.gates_before != self.gates_after or self.depth_before != self.depth_after


@dataclass(frozen=True)
class TwoQubitBlock:
    qubits: tuple[int, int]
    start: int
    end: int  # exclusive index range in the source gate list
    matrix: np.ndarray


def _report(name: str, before: Circuit, after: Circuit, iterations: int) -> PassReport:
    return PassReport(name, gate_counts(before), gate_counts(after),
                      depth(before), depth(after), max(1, iterations))


class _WireIndex:
    """Per-qubit successor chains over a gate list, tolerant of removals."""

    def __init__(self, gates: tuple[Gate, ...]):
        self.nxt: list[dict[int, int]] = [{} for _ in gates]
        last: dict[int, int] = {}
        for i in range(len(gates) - 1, -1, -1):
            for q in gates[i].qubits:
                if q in last:
                    self.nxt[i][q] = last[q]
                last[q] = i

    def successor(self, i: int, q: int, removed: list[bool]) -> int | None:
        j = self.nxt[i].get(q)
        while j is not None and removed[j]:
            j = self.nxt[j].get(q)
        return j


def _next_shared(gates, index: _WireIndex, i: int, removed) -> int | None:
    best = None
    for q in gates[i].qubits:
        j = index.successor(i, q, removed)
        if j is not None and (best is None or j < best):
            best = j
    return best


_SELF_INVERSE = frozenset({
    GateKind.I, GateKind.X, GateKind.Y, GateKind.Z, GateKind.H,
    GateKind.CX, GateKind.CZ, GateKind.SWAP, GateKind.CCX,
})
_DAGGER_PAIRS = {
    (GateKind.S, GateKind.SDG), (GateKind.SDG, GateKind.S),
    (GateKind.T, GateKind.TDG), (GateKind.TDG, GateKind.T),
}


def _is_inverse_pair(g1: Gate, g2: Gate) -> bool:
    """Exact inverses on identical qubit tuples."""
    if g1.is_marker or g2.is_marker or g1.qubits != g2.qubits:
        return False
    if g1.kind in _SELF_INVERSE and g1.kind == g2.kind:
        return True
    if (g1.kind, g2.kind) in _DAGGER_PAIRS:
        return True
    if g1.kind in ROTATIONS and g1.kind == g2.kind:
        return abs(normalize_angle(g1.params[0] + g2.params[0])) < ANGLE_EPS
    if g1.kind is GateKind.U3 and g2.kind is GateKind.U3:
        prod = u3_matrix(*g2.params) @ u3_matrix(*g1.params)
        if abs(prod[0, 0]) < 1e-9:
            return False
        prod = prod / (prod[0, 0] / abs(prod[0, 0]))
        return bool(np.abs(prod - np.eye(2)).max() < 1e-9)
    return False


_DIAGONAL_1Q = frozenset({GateKind.I, GateKind.Z, GateKind.S, GateKind.SDG,
                          GateKind.T, GateKind.TDG, GateKind.RZ})
_XAXIS_1Q = frozenset({GateKind.I, GateKind.X, GateKind.RX})


def commutes(g1: Gate, g2: Gate) -> bool:
    """Conservative commutation test over a fixed rule set.

    Rules: disjoint supports; matching 1Q rotation classes on one qubit;
    diagonal 1Q gates through a CX control or either CZ leg; X-axis 1Q gates
    through a CX target; CX pairs sharing their control. Markers never commute.
    """
    if g1.is_marker or g2.is_marker:
        return False
    q2 = g2.qubits
    if not any(q in q2 for q in g1.qubits):
        return True
    if g1.arity == 1 and g2.arity == 1:
        # same qubit (shared support, both 1Q)
        if g1.kind in _DIAGONAL_1Q and g2.kind in _DIAGONAL_1Q:
            return True
        return g1.kind in _XAXIS_1Q and g2.kind in _XAXIS_1Q
    if g1.arity > g2.arity:
        g1, g2 = g2, g1
    if g1.arity == 1:
        q = g1.qubits[0]
        if g2.kind is GateKind.CX:
            if g1.kind in _DIAGONAL_1Q and q == g2.qubits[0]:
                return True
            if g1.kind in _XAXIS_1Q and q == g2.qubits[1]:
                return True
        if g2.kind is GateKind.CZ and g1.kind in _DIAGONAL_1Q:
            return True
        return False
    if g1.kind is GateKind.CX and g2.kind is GateKind.CX:
        return g1.qubits[0] == g2.qubits[0] and g1.qubits[1] != g2.qubits[1]
    return False


def cancel_inverse_pairs(c: Circuit) -> tuple[Circuit, PassReport]:
    """Remove wire-adjacent exact-inverse pairs, repeating to a fixpoint."""
    gates = list(c.gates)
    sweeps = 0
    while True:
        sweeps += 1
        index = _WireIndex(tuple(gates))
        removed = [False] * len(gates)
        hit = False
        for i in range(len(gates)):
            if removed[i] or gates[i].is_marker:
                continue
            j = _next_shared(gates, index, i, removed)
            if j is not None and _is_inverse_pair(gates[i], gates[j]):
                removed[i] = removed[j] = True
                hit = True
        gates = [g for g, r in zip(gates, removed) if not r]
        if not hit:
            break
    out = c.replace_gates(gates)
    return out, _report("cancel_inverse_pairs", c, out, sweeps)


def merge_rotations(c: Circuit) -> tuple[Circuit, PassReport]:
    """Merge wire-adjacent same-axis rotations; drop merged angles near zero."""
    gates = list(c.gates)
    sweeps = 0
    while True:
        sweeps += 1
        index = _WireIndex(tuple(gates))
        removed = [False] * len(gates)
        hit = False
        for i in range(len(gates)):
            while (not removed[i]) and gates[i].kind in ROTATIONS:
                j = index.successor(i, gates[i].qubits[0], removed)
                if j is None or gates[j].kind != gates[i].kind \
                        or gates[j].qubits != gates[i].qubits:
                    break
                angle = normalize_angle(gates[i].params[0] + gates[j].params[0])
                removed[j] = True
                hit = True
                if abs(angle) < ANGLE_EPS:
                    removed[i] = True
                else:
                    gates[i] = Gate(gates[i].kind, gates[i].qubits, (angle,))
        gates = [g for g, r in zip(gates, removed) if not r]
        if not hit:
            break
    out = c.replace_gates(gates)
    return out, _report("merge_rotations", c, out, sweeps)


def commutative_cancellation(c: Circuit) -> tuple[Circuit, PassReport]:
    """Cancel inverse pairs separated only by gates commuting with both."""
    gates = list(c.gates)
    sweeps = 0
    while True:
        sweeps += 1
        index = _WireIndex(tuple(gates))
        removed = [False] * len(gates)
        # partner prefilter: positions grouped by qubit tuple, so a gate with
        # no later same-tuple gate skips its walk entirely
        by_tuple: dict[tuple[int, ...], list[int]] = {}
        for idx, g in enumerate(gates):
            by_tuple.setdefault(g.qubits, []).append(idx)
        hit = False
        for i in range(len(gates)):
            gi = gates[i]
            if removed[i] or gi.is_marker:
                continue
            peers = by_tuple[gi.qubits]
            if peers[-1] <= i:
                continue
            passed: list[int] = []
            # per-wire walk frontier; candidates are gates sharing >=1 wire
            frontier = {q: i for q in gi.qubits}
            for _ in range(COMMUTE_WALK_CAP):
                nxt = None
                for q, pos in frontier.items():
                    j = index.successor(pos, q, removed)
                    if j is not None and (nxt is None or j < nxt):
                        nxt = j
                if nxt is None:
                    break
                gn = gates[nxt]
                for q in gn.qubits:
                    if q in frontier:
                        frontier[q] = nxt
                if gn.qubits == gi.qubits:
                    if _is_inverse_pair(gi, gn):
                        if all(commutes(gates[m], gn) for m in passed):
                            removed[i] = removed[nxt] = True
                            hit = True
                        break
                    # a same-tuple non-inverse gate ends the walk; later sweeps
                    # (and rotation merging) pick up anything it shadowed
                    break
                if not commutes(gi, gn):
                    break
                passed.append(nxt)
        gates = [g for g, r in zip(gates, removed) if not r]
        if not hit:
            break
    out = c.replace_gates(gates)
    return out, _report("commutative_cancellation", c, out, sweeps)


def _block_matrix(block: list[Gate], pair: tuple[int, int]) -> np.ndarray:
    """Accumulated 4x4 unitary of a block over (lo, hi) -> tensor slots (0, 1)."""
    lo, hi = pair
    mat = np.eye(4, dtype=complex)
    eye = np.eye(2, dtype=complex)
    for g in block:
        gm = gate_matrix(g)
        if g.arity == 1:
            full = np.kron(gm, eye) if g.qubits[0] == lo else np.kron(eye, gm)
        elif g.qubits == (lo, hi):
            full = gm
        else:  # (hi, lo): conjugate by SWAP to flip tensor slots
            swap = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]],
                            dtype=complex)
            full = swap @ gm @ swap
        mat = full @ mat
    return mat


def collect_blocks(c: Circuit) -> list[TwoQubitBlock]:
    """Maximal contiguous runs touching exactly one qubit pair.

    Only runs containing at least two two-qubit gates are returned; CCX and
    markers always terminate a run.
    """
    blocks: list[TwoQubitBlock] = []
    start = None
    qubits: set[int] = set()
    n_2q = 0

    def close(end: int):
        nonlocal start, qubits, n_2q
        if start is not None and n_2q >= 2 and len(qubits) == 2:
            pair = tuple(sorted(qubits))
            mat = _block_matrix(list(c.gates[start:end]), pair)
            blocks.append(TwoQubitBlock(pair, start, end, mat))
        start, qubits, n_2q = None, set(), 0

    for i, g in enumerate(c.gates):
        if g.is_marker or ARITY.get(g.kind, 0) > 2:
            close(i)
            continue
        if start is None:
            start, qubits, n_2q = i, set(g.qubits), 0
        elif len(qubits | set(g.qubits)) > 2:
            close(i)
            start, qubits = i, set(g.qubits)
        else:
            qubits |= set(g.qubits)
        if g.arity == 2:
            n_2q += 1
    close(len(c.gates))
    return blocks


def collect_and_resynthesize_blocks(c: Circuit) -> tuple[Circuit, PassReport]:
    """Resynthesize two-qubit blocks via KAK when it strictly improves them.

    A replacement is accepted only when it does not increase either the block's
    two-qubit count or its total gate count, and strictly decreases at least
    one of the two. This keeps every aggregate count monotone under the full
    pipeline and makes the pass idempotent.
    """
    replacements: dict[tuple[int, int], list[Gate]] = {}
    for block in collect_blocks(c):
        old = list(c.gates[block.start:block.end])
        old_2q = sum(1 for g in old if g.arity == 2)
        new = kak_resynthesize(block.matrix)
        lo, hi = block.qubits
        remapped = [Gate(g.kind, tuple(lo if q == 0 else hi for q in g.qubits), g.params)
                    for g in new]
        new_2q = sum(1 for g in remapped if g.arity == 2)
        if new_2q > old_2q or len(remapped) > len(old):
            continue
        if new_2q == old_2q and len(remapped) == len(old):
            continue
        replacements[(block.start, block.end)] = remapped

    if not replacements:
        return c, _report("resynthesize_blocks", c, c, 1)
    gates: list[Gate] = []
    i = 0
    bounds = sorted(replacements)
    for start, end in bounds:
        gates.extend(c.gates[i:start])
        gates.extend(replacements[(start, end)])
        i = end
    gates.extend(c.gates[i:])
    out = c.replace_gates(gates)
    return out, _report("resynthesize_blocks", c, out, 1)


PIPELINE = (cancel_inverse_pairs, merge_rotations, commutative_cancellation,
            collect_and_resynthesize_blocks)

MAX_PIPELINE_ITERATIONS = 10


def optimize(c: Circuit, max_iterations: int = MAX_PIPELINE_ITERATIONS
             ) -> tuple[Circuit, list[PassReport]]:
    """Run the pass pipeline until no pass changes the circuit (or the cap)."""
    reports: list[PassReport] = []
    for _ in range(max_iterations):
        before = c.gates
        for pass_fn in PIPELINE:
            c, report = pass_fn(c)
            reports.append(report)
        if c.gates == before:
            break
    return c, reports

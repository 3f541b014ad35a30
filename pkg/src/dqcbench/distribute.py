"""Telegate-based distribution of a partitioned circuit.

Each part becomes a subcircuit over its own qubits. A gate whose support
crosses parts is recorded once as a telegate and leaves one marker in every
touched subcircuit; no communication qubits are added. Markers carry the
original kind plus a link id so the halves can be matched back together.
"""
from __future__ import annotations

import statistics
from dataclasses import dataclass

from .circuits import (Circuit, Gate, GateKind, TelegatePayload, depth,
                       gate_counts)
from .partitioning import Partition


@dataclass(frozen=True)
class Telegate:
    gate: Gate               # the original gate, on global qubit indices
    parts: frozenset[int]
    position: int            # index in the source gate list


@dataclass(frozen=True)
class DistributedCircuit:
    source_width: int
    source_id: str
    parts: tuple[Circuit, ...]
    qubit_maps: tuple[tuple[int, ...], ...]  # per part: local index -> global
    telegates: tuple[Telegate, ...]
    # per part: the source position of each local gate (markers included);
    # None once subcircuits have been rewritten and exact positions are gone.
    positions: tuple[tuple[int, ...], ...] | None = None


@dataclass(frozen=True)
class DistributedMetrics:
    n1q: int
    n2q: int
    n3q: int
    depth_max: int
    depth_mean: float
    n_nonlocal: int
    # marker-exclusive variants, for the open question of whether a remote
    # gate occupies a local layer at all
    depth_max_bare: int
    depth_mean_bare: float


def distribute(c: Circuit, p: Partition) -> DistributedCircuit:
    """Split c into per-part subcircuits plus telegate records for cut gates."""
    if any(g.is_marker for g in c.gates):
        raise ValueError("circuit already contains telegate markers")
    if len(p.assignment) != c.width:
        raise ValueError(
            f"partition covers {len(p.assignment)} qubits, circuit has {c.width}")

    globals_per_part: list[list[int]] = [[] for _ in range(p.k)]
    for q in range(c.width):
        globals_per_part[p.assignment[q]].append(q)
    if any(not qs for qs in globals_per_part):
        raise ValueError("every part must hold at least one qubit")
    local_index = {}
    for part, qs in enumerate(globals_per_part):
        for li, q in enumerate(qs):
            local_index[q] = li

    part_gates: list[list[Gate]] = [[] for _ in range(p.k)]
    part_positions: list[list[int]] = [[] for _ in range(p.k)]
    telegates: list[Telegate] = []
    for pos, g in enumerate(c.gates):
        touched = sorted({p.assignment[q] for q in g.qubits})
        if len(touched) == 1:
            part = touched[0]
            part_gates[part].append(
                Gate(g.kind, tuple(local_index[q] for q in g.qubits), g.params))
            part_positions[part].append(pos)
            continue
        link = len(telegates)
        telegates.append(Telegate(g, frozenset(touched), pos))
        payload = TelegatePayload(g.kind, link)
        for part in touched:
            local = tuple(local_index[q] for q in g.qubits
                          if p.assignment[q] == part)
            part_gates[part].append(
                Gate(GateKind.TELEGATE_MARKER, local, payload=payload))
            part_positions[part].append(pos)

    subcircuits = tuple(
        Circuit(len(globals_per_part[part]), tuple(part_gates[part]),
                id=f"{c.id}/part{part}")
        for part in range(p.k))
    return DistributedCircuit(
        source_width=c.width,
        source_id=c.id,
        parts=subcircuits,
        qubit_maps=tuple(tuple(qs) for qs in globals_per_part),
        telegates=tuple(telegates),
        positions=tuple(tuple(ps) for ps in part_positions))


def distributed_metrics(d: DistributedCircuit) -> DistributedMetrics:
    """Counts summed across subcircuits, critical-path and mean depth, and
    the non-local gate count."""
    n1 = n2 = n3 = 0
    for sub in d.parts:
        a, b, cc = gate_counts(sub)
        n1, n2, n3 = n1 + a, n2 + b, n3 + cc
    depths = [depth(sub) for sub in d.parts]
    bare = [depth(sub.replace_gates([g for g in sub.gates if not g.is_marker]))
            for sub in d.parts]
    return DistributedMetrics(
        n1q=n1, n2q=n2, n3q=n3,
        depth_max=max(depths), depth_mean=statistics.fmean(depths),
        n_nonlocal=len(d.telegates),
        depth_max_bare=max(bare), depth_mean_bare=statistics.fmean(bare))


def _to_global(g: Gate, qubit_map: tuple[int, ...]) -> Gate:
    return Gate(g.kind, tuple(qubit_map[q] for q in g.qubits), g.params)


def reassemble(d: DistributedCircuit) -> Circuit:
    """Merge subcircuits and telegates back into one circuit.

    With exact positions available (a fresh distribution) this reproduces the
    source circuit gate for gate. After local rewrites it interleaves the
    parts against the telegate order instead: parts act on disjoint qubits,
    so any interleaving that respects each part's sequence and its marker
    barriers implements the same unitary.
    """
    if d.positions is not None:
        merged: list[tuple[int, Gate]] = [(t.position, t.gate) for t in d.telegates]
        for part, sub in enumerate(d.parts):
            qmap = d.qubit_maps[part]
            for pos, g in zip(d.positions[part], sub.gates):
                if not g.is_marker:
                    merged.append((pos, _to_global(g, qmap)))
        merged.sort(key=lambda item: item[0])
        return Circuit(d.source_width, tuple(g for _, g in merged), d.source_id)

    cursors = [0] * len(d.parts)
    out: list[Gate] = []

    def flush_until_marker(part: int, link: int):
        sub = d.parts[part]
        qmap = d.qubit_maps[part]
        while cursors[part] < len(sub.gates):
            g = sub.gates[cursors[part]]
            cursors[part] += 1
            if g.is_marker:
                if g.payload.link != link:
                    raise ValueError(
                        f"marker order violated in part {part}: expected link "
                        f"{link}, found {g.payload.link}")
                return
            out.append(_to_global(g, qmap))
        raise ValueError(f"missing marker for telegate {link} in part {part}")

    for link, te in enumerate(d.telegates):
        for part in sorted(te.parts):
            flush_until_marker(part, link)
        out.append(te.gate)
    for part, sub in enumerate(d.parts):
        qmap = d.qubit_maps[part]
        for g in sub.gates[cursors[part]:]:
            if g.is_marker:
                raise ValueError(f"unconsumed marker in part {part}")
            out.append(_to_global(g, qmap))
    return Circuit(d.source_width, tuple(out), d.source_id)

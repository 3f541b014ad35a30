"""Deterministic benchmark-circuit generators.

Six structural families over widths 2..128. The algorithmic families are
structural stand-ins: what matters for partitioning and pass behaviour is
the interaction pattern, not algorithmic fidelity.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from pathlib import Path

from .circuits import Circuit, Gate, GateKind, ccx, cx, cz, h, rx, ry, rz, t, x
from .qasm import emit_qasm

FAMILIES = ("ghz", "wchain", "qft", "qaoa_ring", "grover_like", "random")

DEFAULT_WIDTHS = (2, 4, 8, 16, 32, 64, 128)
RANDOM_GATES_PER_QUBIT = 10


@dataclass(frozen=True)
class CorpusSpec:
    families: tuple[str, ...] = FAMILIES
    widths: tuple[int, ...] = DEFAULT_WIDTHS
    random_seeds: tuple[int, ...] = (0, 1, 2)

    def __post_init__(self):
        for f in self.families:
            if f not in FAMILIES:
                raise ValueError(f"unknown family '{f}'; known: {FAMILIES}")
        for w in self.widths:
            if not 2 <= w <= 130:
                raise ValueError(f"width {w} outside supported range [2, 130]")


def _ghz(width: int) -> list[Gate]:
    return [h(0)] + [cx(i, i + 1) for i in range(width - 1)]


def _wchain(width: int) -> list[Gate]:
    # W-state-style chain: an RY that splits amplitude, then a CX link.
    gates: list[Gate] = [x(0)]
    for i in range(width - 1):
        theta = 2.0 * math.acos(math.sqrt(1.0 / (width - i)))
        gates.append(ry(theta, i + 1))
        gates.append(cx(i + 1, i))
    return gates


def _qft(width: int) -> list[Gate]:
    # Controlled-phase approximated structurally as RZ halves around a CZ,
    # which keeps one two-qubit gate per pair: n(n-1)/2 total, plus n H.
    gates: list[Gate] = []
    for i in range(width):
        gates.append(h(i))
        for j in range(i + 1, width):
            theta = math.pi / (2 ** (j - i))
            gates.append(rz(theta / 2, i))
            gates.append(rz(theta / 2, j))
            gates.append(cz(i, j))
    return gates


def _qaoa_ring(width: int, layers: int = 2) -> list[Gate]:
    gates: list[Gate] = [h(q) for q in range(width)]
    edges = sorted({tuple(sorted((i, (i + 1) % width))) for i in range(width)})
    for layer in range(layers):
        gamma = 0.4 + 0.3 * layer
        beta = 0.7 + 0.2 * layer
        for a, b in edges:
            gates.append(cx(a, b))
            gates.append(rz(2.0 * gamma, b))
            gates.append(cx(a, b))
        for q in range(width):
            gates.append(rx(2.0 * beta, q))
    return gates


def _grover_like(width: int, rounds: int = 2) -> list[Gate]:
    # Diffusion-style blocks separated by a sparse phase "oracle". The layer
    # of disjoint CCX gates stands in for the multi-controlled phase. Between
    # rounds, everything off the oracle wires is redundant, which gives the
    # optimiser realistic material in all three arity classes.
    def diffusion() -> list[Gate]:
        block = [h(q) for q in range(width)]
        block += [x(q) for q in range(width)]
        if width == 2:
            block.append(cz(0, 1))
        else:
            block += [ccx(i, i + 1, i + 2) for i in range(0, width - 2, 3)]
        block += [x(q) for q in range(width)]
        block += [h(q) for q in range(width)]
        return block

    gates: list[Gate] = []
    for r in range(rounds):
        if r:
            gates += [t(q) for q in range(0, width, 8)]
        gates += diffusion()
    return gates


def _random(width: int, seed: int) -> list[Gate]:
    # Draws use r.random() only, so the stream is stable across Python
    # versions (randrange/sample make no such guarantee).
    r = random.Random(seed)

    def pick(n: int) -> int:
        return min(int(r.random() * n), n - 1)

    def distinct_qubits(arity: int) -> tuple[int, ...]:
        qubits: list[int] = []
        while len(qubits) < arity:
            q = pick(width)
            if q not in qubits:
                qubits.append(q)
        return tuple(qubits)

    kinds = [GateKind.H, GateKind.T, GateKind.RZ, GateKind.CX]
    if width >= 3:
        kinds.append(GateKind.CCX)
    gates: list[Gate] = []
    for _ in range(RANDOM_GATES_PER_QUBIT * width):
        kind = kinds[pick(len(kinds))]
        qubits = distinct_qubits(1 if kind in (GateKind.H, GateKind.T, GateKind.RZ)
                                 else 2 if kind is GateKind.CX else 3)
        params = (r.random() * 2.0 * math.pi - math.pi,) if kind is GateKind.RZ else ()
        gates.append(Gate(kind, qubits, params))
    return gates


def generate(family: str, width: int, seed: int = 0) -> Circuit:
    """Deterministic circuit for (family, width, seed); width must be >= 2."""
    if width < 2:
        raise ValueError(f"width must be >= 2, got {width}")
    if family == "ghz":
        gates = _ghz(width)
    elif family == "wchain":
        gates = _wchain(width)
    elif family == "qft":
        gates = _qft(width)
    elif family == "qaoa_ring":
        gates = _qaoa_ring(width)
    elif family == "grover_like":
        gates = _grover_like(width)
    elif family == "random":
        gates = _random(width, seed)
    else:
        raise ValueError(f"unknown family '{family}'; known: {FAMILIES}")
    suffix = f"_s{seed}" if family == "random" else ""
    return Circuit(width, tuple(gates), id=f"{family}_w{width:03d}{suffix}")


def build_corpus(spec: CorpusSpec = CorpusSpec()) -> list[Circuit]:
    """All circuits of a corpus spec, in a fixed deterministic order."""
    out: list[Circuit] = []
    for family in spec.families:
        for width in spec.widths:
            if family == "random":
                out.extend(generate(family, width, s) for s in spec.random_seeds)
            else:
                out.append(generate(family, width))
    return out


def write_corpus(spec: CorpusSpec, out_dir: str | Path) -> list[Path]:
    """Write the corpus as one QASM file per circuit; returns the paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for c in build_corpus(spec):
        path = out_dir / f"{c.id}.qasm"
        path.write_text(emit_qasm(c))
        paths.append(path)
    return paths

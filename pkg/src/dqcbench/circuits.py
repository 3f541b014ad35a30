"""Core circuit representation: gate taxonomy, validation, structural metrics.

Circuits are immutable value objects. Rewrites always build a new Circuit,
so circuits can be shared freely across threads.

Qubit convention: qubit 0 is the most significant bit of a basis-state index
(|q0 q1 ... q_{n-1}>), matching the simulator and the 4x4/8x8 gate matrices.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field


class GateKind(enum.Enum):
    """Closed gate set. Unknown gates are rejected, never decomposed."""

    I = "id"
    X = "x"
    Y = "y"
    Z = "z"
    H = "h"
    S = "s"
    SDG = "sdg"
    T = "t"
    TDG = "tdg"
    RX = "rx"
    RY = "ry"
    RZ = "rz"
    U3 = "u3"
    CX = "cx"
    CZ = "cz"
    SWAP = "swap"
    CCX = "ccx"
    # Stand-in for the local half of a remote (cross-QPU) gate. Carries the
    # original gate's kind and a link id; opaque to every optimisation pass.
    TELEGATE_MARKER = "_telegate"


ARITY: dict[GateKind, int] = {
    GateKind.I: 1, GateKind.X: 1, GateKind.Y: 1, GateKind.Z: 1,
    GateKind.H: 1, GateKind.S: 1, GateKind.SDG: 1, GateKind.T: 1,
    GateKind.TDG: 1, GateKind.RX: 1, GateKind.RY: 1, GateKind.RZ: 1,
    GateKind.U3: 1,
    GateKind.CX: 2, GateKind.CZ: 2, GateKind.SWAP: 2,
    GateKind.CCX: 3,
}

PARAM_COUNT: dict[GateKind, int] = {
    GateKind.RX: 1, GateKind.RY: 1, GateKind.RZ: 1, GateKind.U3: 3,
}

ROTATIONS = frozenset({GateKind.RX, GateKind.RY, GateKind.RZ})


@dataclass(frozen=True)
class TelegatePayload:
    """What a marker stands for: the remote gate's kind and its link id.

    ``link`` indexes the telegate record shared by all markers of one cut
    gate, which is how reassembly matches the halves back together.
    """

    remote_kind: GateKind
    link: int


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()
    payload: TelegatePayload | None = None

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(self.qubits))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"duplicate qubits in {self.kind.name}{self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise ValueError(f"negative qubit index in {self.kind.name}{self.qubits}")
        if self.kind is GateKind.TELEGATE_MARKER:
            if self.payload is None:
                raise ValueError("telegate marker requires a payload")
            if not 1 <= len(self.qubits) <= 2:
                raise ValueError("telegate marker touches 1 or 2 local qubits")
            if self.params:
                raise ValueError("telegate marker takes no parameters")
            return
        if self.payload is not None:
            raise ValueError(f"{self.kind.name} does not carry a payload")
        if len(self.qubits) != ARITY[self.kind]:
            raise ValueError(
                f"{self.kind.name} acts on {ARITY[self.kind]} qubits, got {self.qubits}")
        if len(self.params) != PARAM_COUNT.get(self.kind, 0):
            raise ValueError(
                f"{self.kind.name} takes {PARAM_COUNT.get(self.kind, 0)} "
                f"parameters, got {len(self.params)}")

    @property
    def is_marker(self) -> bool:
        return self.kind is GateKind.TELEGATE_MARKER

    @property
    def arity(self) -> int:
        return len(self.qubits)


@dataclass(frozen=True)
class Circuit:
    width: int
    gates: tuple[Gate, ...] = ()
    id: str = ""

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.width < 1:
            raise ValueError(f"circuit width must be >= 1, got {self.width}")
        for g in self.gates:
            if max(g.qubits) >= self.width:
                raise ValueError(
                    f"gate {g.kind.name}{g.qubits} out of range for width {self.width}")

    def __len__(self) -> int:
        return len(self.gates)

    def replace_gates(self, gates) -> "Circuit":
        """New circuit with the same width and id but a different gate list."""
        return Circuit(self.width, tuple(gates), self.id)


# Gate construction helpers; keep generator and test code readable.
def h(q: int) -> Gate: return Gate(GateKind.H, (q,))
def x(q: int) -> Gate: return Gate(GateKind.X, (q,))
def y(q: int) -> Gate: return Gate(GateKind.Y, (q,))
def z(q: int) -> Gate: return Gate(GateKind.Z, (q,))
def s(q: int) -> Gate: return Gate(GateKind.S, (q,))
def sdg(q: int) -> Gate: return Gate(GateKind.SDG, (q,))
def t(q: int) -> Gate: return Gate(GateKind.T, (q,))
def tdg(q: int) -> Gate: return Gate(GateKind.TDG, (q,))
def rx(theta: float, q: int) -> Gate: return Gate(GateKind.RX, (q,), (theta,))
def ry(theta: float, q: int) -> Gate: return Gate(GateKind.RY, (q,), (theta,))
def rz(theta: float, q: int) -> Gate: return Gate(GateKind.RZ, (q,), (theta,))
def u3(theta: float, phi: float, lam: float, q: int) -> Gate:
    return Gate(GateKind.U3, (q,), (theta, phi, lam))
def cx(c: int, tq: int) -> Gate: return Gate(GateKind.CX, (c, tq))
def cz(a: int, b: int) -> Gate: return Gate(GateKind.CZ, (a, b))
def swap(a: int, b: int) -> Gate: return Gate(GateKind.SWAP, (a, b))
def ccx(c1: int, c2: int, tq: int) -> Gate: return Gate(GateKind.CCX, (c1, c2, tq))


def normalize_angle(a: float) -> float:
    """Map an angle to (-pi, pi]."""
    r = math.remainder(a, 2.0 * math.pi)
    if r <= -math.pi:
        r += 2.0 * math.pi
    return r


def depth(c: Circuit) -> int:
    """Longest chain of gates sharing qubits (greedy per-qubit frontiers).

    A telegate marker occupies one layer on each local qubit it touches.
    """
    level = [0] * c.width
    out = 0
    for g in c.gates:
        l = 1 + max(level[q] for q in g.qubits)
        for q in g.qubits:
            level[q] = l
        if l > out:
            out = l
    return out


def gate_counts(c: Circuit) -> tuple[int, int, int]:
    """(n1q, n2q, n3q) by arity class. Telegate markers are excluded."""
    n = [0, 0, 0]
    for g in c.gates:
        if g.is_marker:
            continue
        n[ARITY[g.kind] - 1] += 1
    return (n[0], n[1], n[2])


def marker_count(c: Circuit) -> int:
    return sum(1 for g in c.gates if g.is_marker)

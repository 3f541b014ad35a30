"""Small statevector simulator, used only as the semantic-equivalence oracle.

Capped at 10 qubits so a full-unitary comparison stays fast. Qubit 0 is the
most significant bit of the basis index.
"""
from __future__ import annotations

import cmath
import math

import numpy as np

from .circuits import Circuit, Gate, GateKind

MAX_ORACLE_QUBITS = 10

_SQ2 = 1.0 / math.sqrt(2.0)

_FIXED_1Q = {
    GateKind.I: np.eye(2, dtype=complex),
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    GateKind.Z: np.array([[1, 0], [0, -1]], dtype=complex),
    GateKind.H: np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    GateKind.S: np.diag([1, 1j]).astype(complex),
    GateKind.SDG: np.diag([1, -1j]).astype(complex),
    GateKind.T: np.diag([1, cmath.exp(1j * math.pi / 4)]),
    GateKind.TDG: np.diag([1, cmath.exp(-1j * math.pi / 4)]),
}

_FIXED_MULTI = {
    GateKind.CX: np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
    GateKind.CZ: np.diag([1, 1, 1, -1]).astype(complex),
    GateKind.SWAP: np.array(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex),
}
_CCX = np.eye(8, dtype=complex)
_CCX[[6, 7], :] = _CCX[[7, 6], :]
_FIXED_MULTI[GateKind.CCX] = _CCX


def rx_matrix(t: float) -> np.ndarray:
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def ry_matrix(t: float) -> np.ndarray:
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz_matrix(t: float) -> np.ndarray:
    return np.diag([cmath.exp(-1j * t / 2), cmath.exp(1j * t / 2)])


def u3_matrix(theta: float, phi: float, lam: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [[c, -cmath.exp(1j * lam) * s],
         [cmath.exp(1j * phi) * s, cmath.exp(1j * (phi + lam)) * c]], dtype=complex)


def gate_matrix(g: Gate) -> np.ndarray:
    """Dense matrix of a gate on its own qubits (row/col order = g.qubits)."""
    if g.is_marker:
        raise ValueError("telegate markers have no matrix; reassemble first")
    if g.kind in _FIXED_1Q:
        return _FIXED_1Q[g.kind]
    if g.kind in _FIXED_MULTI:
        return _FIXED_MULTI[g.kind]
    if g.kind is GateKind.RX:
        return rx_matrix(g.params[0])
    if g.kind is GateKind.RY:
        return ry_matrix(g.params[0])
    if g.kind is GateKind.RZ:
        return rz_matrix(g.params[0])
    if g.kind is GateKind.U3:
        return u3_matrix(*g.params)
    raise ValueError(f"no matrix for {g.kind}")


def basis_state(width: int, index: int = 0) -> np.ndarray:
    state = np.zeros(2 ** width, dtype=complex)
    state[index] = 1.0
    return state


def _apply_gate_tensor(tensor: np.ndarray, g: Gate, width: int) -> np.ndarray:
    """Apply g to a tensor whose first `width` axes are qubits (size 2 each)."""
    mat = gate_matrix(g)
    k = len(g.qubits)
    op = mat.reshape((2,) * (2 * k))
    # tensordot contracts the gate's input axes with the state's qubit axes,
    # leaving the new output axes first; move them back into place.
    tensor = np.tensordot(op, tensor, axes=(list(range(k, 2 * k)), list(g.qubits)))
    return np.moveaxis(tensor, list(range(k)), list(g.qubits))


def apply(c: Circuit, state: np.ndarray) -> np.ndarray:
    """Evolve a statevector through the circuit, gate by gate."""
    if c.width > MAX_ORACLE_QUBITS:
        raise ValueError(f"oracle is capped at {MAX_ORACLE_QUBITS} qubits, got {c.width}")
    if state.shape != (2 ** c.width,):
        raise ValueError(f"state has {state.shape[0]} amplitudes for width {c.width}")
    tensor = state.astype(complex).reshape((2,) * c.width)
    for g in c.gates:
        tensor = _apply_gate_tensor(tensor, g, c.width)
    out = tensor.reshape(-1)
    norm = np.linalg.norm(state)
    if norm > 0 and abs(np.linalg.norm(out) - norm) > 1e-10 * max(1, len(c.gates)):
        raise ArithmeticError("statevector norm drifted during simulation")
    return out


def unitary(c: Circuit) -> np.ndarray:
    """Full 2^n x 2^n unitary of the circuit (n <= 10)."""
    if c.width > MAX_ORACLE_QUBITS:
        raise ValueError(f"oracle is capped at {MAX_ORACLE_QUBITS} qubits, got {c.width}")
    dim = 2 ** c.width
    # Columns evolve in one batch: axes 0..n-1 are row qubits, axis n the column.
    tensor = np.eye(dim, dtype=complex).reshape((2,) * c.width + (dim,))
    for g in c.gates:
        tensor = _apply_gate_tensor(tensor, g, c.width)
    return tensor.reshape(dim, dim)


def unitary_equal_up_to_phase(c1: Circuit, c2: Circuit, tol: float = 1e-7) -> bool:
    """True iff the two circuits implement the same unitary up to one global phase."""
    if c1.width != c2.width:
        raise ValueError(f"width mismatch: {c1.width} vs {c2.width}")
    u1 = unitary(c1)
    u2 = unitary(c2)
    i, j = np.unravel_index(np.abs(u1).argmax(), u1.shape)
    ref = u1[i, j]
    lam = u2[i, j] / ref
    if abs(abs(lam) - 1.0) > tol:
        return False
    return bool(np.abs(u2 - lam * u1).max() <= tol)

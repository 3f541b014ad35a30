"""Two-qubit unitary decomposition via the Cartan (KAK) form.

Any U in U(4) factors as

    U = g * (a0 x a1) * exp(i*(x*XX + y*YY + z*ZZ)) * (b0 x b1)

with canonical interaction coefficients 0 <= |z| <= y <= x <= pi/4 (z >= 0
when x = pi/4). The coefficients pin down the minimal CX count (0..3), and
resynthesis rebuilds the gate with that many CX plus single-qubit U3 gates.

The working basis is the magic (Bell-like) basis, in which the local group
SU(2)xSU(2) becomes SO(4) and the interaction term becomes diagonal.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .circuits import Gate, GateKind, cx, u3
from .simulate import rx_matrix, ry_matrix, rz_matrix, u3_matrix

ATOL_CLASS = 1e-9     # Weyl coefficient below this counts as 0 / as pi/4
ATOL_UNITARY = 1e-9   # max-entry tolerance for the unitarity precondition
PI4 = math.pi / 4

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)

MAGIC = np.array(
    [[1, 0, 0, 1j],
     [0, 1j, 1, 0],
     [0, 1j, -1, 0],
     [1, 0, 0, -1j]], dtype=complex) / math.sqrt(2)
_MAGIC_DAG = MAGIC.conj().T

# Maps magic-basis diagonal phases to (w, x, y, z); rows follow from the
# diagonal forms of XX, YY, ZZ in the magic basis.
_GAMMA = np.array(
    [[1, 1, 1, 1],
     [1, 1, -1, -1],
     [-1, 1, -1, 1],
     [1, -1, -1, 1]], dtype=float) / 4.0

_CX01 = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
_CX10 = np.array([[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=complex)

# Local fixups used while folding coefficients into the Weyl chamber.
_FLIPPERS = (1j * _X, 1j * _Y, 1j * _Z)
_SWAPPERS = (  # _SWAPPERS[k] exchanges the two axes other than k
    np.array([[1, -1j], [1j, -1]]) * 1j / math.sqrt(2),
    np.array([[1, 1], [1, -1]]) * 1j / math.sqrt(2),
    np.array([[0, 1 - 1j], [1 + 1j, 0]]) * 1j / math.sqrt(2),
)


@dataclass(frozen=True)
class KakDecomposition:
    """U = global_phase * (a0 x a1) @ canonical(x, y, z) @ (b0 x b1)."""

    global_phase: complex
    a0: np.ndarray
    a1: np.ndarray
    coefficients: tuple[float, float, float]
    b0: np.ndarray
    b1: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.global_phase * np.kron(self.a0, self.a1)
                @ canonical_matrix(*self.coefficients)
                @ np.kron(self.b0, self.b1))


def canonical_matrix(x: float, y: float, z: float) -> np.ndarray:
    """exp(i*(x*XX + y*YY + z*ZZ)), evaluated in the magic basis."""
    dx = np.array([1, 1, -1, -1], dtype=float)
    dy = np.array([-1, 1, -1, 1], dtype=float)
    dz = np.array([1, -1, -1, 1], dtype=float)
    phases = np.exp(1j * (x * dx + y * dy + z * dz))
    return MAGIC @ np.diag(phases) @ _MAGIC_DAG


def _require_unitary(mat: np.ndarray, atol: float) -> None:
    if mat.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got {mat.shape}")
    err = np.abs(mat.conj().T @ mat - np.eye(4)).max()
    if err > atol:
        raise ValueError(f"matrix is not unitary within {atol} (deviation {err:.2e})")


def _diag_groups(vals: np.ndarray, tol: float = 1e-9):
    start = 0
    for i in range(1, len(vals) + 1):
        if i == len(vals) or abs(vals[i] - vals[start]) > tol:
            yield start, i
            start = i


def _bidiagonalize(w: np.ndarray, tol: float = 1e-9):
    """Special-orthogonal L, R with L @ w @ R diagonal, for unitary w.

    Works on (Re w, Im w): the SVD of the real part fixes a basis in which the
    imaginary part is block-diagonal over equal-singular-value groups and
    symmetric inside them, so each block is finished off with eigh.
    """
    a, b = w.real.copy(), w.imag.copy()
    u, svals, vt = np.linalg.svd(a)
    left = u.T
    right = vt.T
    bp = left @ b @ right
    for lo, hi in _diag_groups(svals, tol):
        blk = bp[lo:hi, lo:hi]
        if svals[lo] > tol:
            _, o = np.linalg.eigh((blk + blk.T) / 2)
            left[lo:hi, :] = o.T @ left[lo:hi, :]
            right[:, lo:hi] = right[:, lo:hi] @ o
        else:
            u0, _, v0t = np.linalg.svd(blk)
            left[lo:hi, :] = u0.T @ left[lo:hi, :]
            right[:, lo:hi] = right[:, lo:hi] @ v0t.T
    if np.linalg.det(left) < 0:
        left[0, :] *= -1
    if np.linalg.det(right) < 0:
        right[:, 0] *= -1
    return left, right


def _kron_factor(mat: np.ndarray):
    """mat = g * kron(a, b) with det(a) = det(b) = 1; returns (g, a, b)."""
    r, c = np.unravel_index(np.abs(mat).argmax(), (4, 4))
    a = np.zeros((2, 2), dtype=complex)
    b = np.zeros((2, 2), dtype=complex)
    for i in range(2):
        for j in range(2):
            a[(r >> 1) ^ i, (c >> 1) ^ j] = mat[r ^ (i << 1), c ^ (j << 1)]
            b[(r & 1) ^ i, (c & 1) ^ j] = mat[r ^ i, c ^ j]
    da = cmath.sqrt(np.linalg.det(a))
    db = cmath.sqrt(np.linalg.det(b))
    if abs(da) > 0:
        a /= da
    if abs(db) > 0:
        b /= db
    g = mat[r, c] / (a[r >> 1, c >> 1] * b[(r & 1), (c & 1)])
    if g.real < 0:
        a, g = -a, -g
    if np.abs(mat - g * np.kron(a, b)).max() > 1e-7:
        raise ArithmeticError("matrix is not a tensor product of single-qubit factors")
    return g, a, b


def _canonicalize(x: float, y: float, z: float, atol: float = ATOL_CLASS):
    """Fold (x, y, z) into the Weyl chamber, collecting local corrections.

    Returns (phase, (l0, l1), (x', y', z'), (r0, r1)) such that
    exp(i(x XX + y YY + z ZZ)) = phase * (l0 x l1) @ canonical(x',y',z') @ (r0 x r1).
    """
    phase = 1.0 + 0.0j
    left = [_I2.copy(), _I2.copy()]
    right = [_I2.copy(), _I2.copy()]
    v = [x, y, z]

    def shift(k: int, step: int):
        nonlocal phase
        v[k] += step * math.pi / 2
        phase *= 1j ** step
        m = np.linalg.matrix_power(_FLIPPERS[k], step % 4)
        right[0] = m @ right[0]
        right[1] = m @ right[1]

    def negate(k1: int, k2: int):
        nonlocal phase
        v[k1] *= -1
        v[k2] *= -1
        phase *= -1
        flip = _FLIPPERS[3 - k1 - k2]
        left[1] = left[1] @ flip
        right[1] = flip @ right[1]

    def swap_axes(k1: int, k2: int):
        v[k1], v[k2] = v[k2], v[k1]
        sw = _SWAPPERS[3 - k1 - k2]
        left[0] = left[0] @ sw
        left[1] = left[1] @ sw
        right[0] = sw @ right[0]
        right[1] = sw @ right[1]

    def to_quarter(k: int):
        while v[k] <= -math.pi / 4:
            shift(k, +1)
        while v[k] > math.pi / 4:
            shift(k, -1)

    to_quarter(0)
    to_quarter(1)
    to_quarter(2)
    if abs(v[0]) < abs(v[1]):
        swap_axes(0, 1)
    if abs(v[1]) < abs(v[2]):
        swap_axes(1, 2)
    if abs(v[0]) < abs(v[1]):
        swap_axes(0, 1)
    if v[0] < 0:
        negate(0, 2)
    if v[1] < 0:
        negate(1, 2)
    to_quarter(2)
    if v[0] > math.pi / 4 - atol and v[2] < 0:
        shift(0, -1)
        negate(0, 2)
    return phase, (left[0], left[1]), (v[0], v[1], v[2]), (right[0], right[1])


def kak_decompose(mat: np.ndarray, atol: float = ATOL_UNITARY) -> KakDecomposition:
    """Cartan decomposition with canonical Weyl-chamber coefficients."""
    mat = np.asarray(mat, dtype=complex)
    _require_unitary(mat, atol)
    w = _MAGIC_DAG @ mat @ MAGIC
    left, right = _bidiagonalize(w)
    d = left @ w @ right
    # w = left.T @ d @ right.T; conjugating the SO(4) factors back out of the
    # magic basis yields the local tensor products.
    kl = MAGIC @ left.T @ _MAGIC_DAG
    kr = MAGIC @ right.T @ _MAGIC_DAG
    wphase, x, y, z = _GAMMA @ np.angle(np.diag(d))
    gl, a0, a1 = _kron_factor(kl)
    gr, b0, b1 = _kron_factor(kr)
    gc, (c0, c1), coeffs, (d0, d1) = _canonicalize(x, y, z)
    return KakDecomposition(
        global_phase=cmath.exp(1j * wphase) * gl * gr * gc,
        a0=a0 @ c0, a1=a1 @ c1,
        coefficients=coeffs,
        b0=d0 @ b0, b1=d1 @ b1)


def weyl_coordinates(mat: np.ndarray) -> tuple[float, float, float]:
    return kak_decompose(mat).coefficients


def min_cx_count(x: float, y: float, z: float, atol: float = ATOL_CLASS) -> int:
    """Minimal CX count for a canonical class: coefficients snap to 0 / pi/4."""
    near0 = [abs(v) < atol for v in (x, y, z)]
    if all(near0):
        return 0
    if abs(x - PI4) < atol and near0[1] and near0[2]:
        return 1
    if near0[2]:
        return 2
    return 3


def _template(n_cx: int, x: float, y: float, z: float):
    """Gate list on qubits (0, 1) whose canonical class is exactly (x, y, z).

    Exact-zero rotations (identity factors) are dropped; the class is
    unchanged because RX(0) = RY(0) = RZ(0) = I.
    """
    if n_cx == 0:
        return []
    if n_cx == 1:
        gates = [cx(0, 1)]
    elif n_cx == 2:
        gates = [cx(0, 1),
                 Gate(GateKind.RX, (0,), (2 * x,)),
                 Gate(GateKind.RZ, (1,), (2 * y,)),
                 cx(0, 1)]
    else:
        gates = [cx(1, 0),
                 Gate(GateKind.RZ, (0,), (math.pi / 2 - 2 * x,)),
                 Gate(GateKind.RY, (1,), (math.pi / 2 - 2 * y,)),
                 cx(0, 1),
                 Gate(GateKind.RY, (1,), (math.pi / 2 + 2 * z,)),
                 cx(1, 0)]
    return [g for g in gates
            if g.kind is GateKind.CX or abs(g.params[0]) > 1e-12]


def _gate_matrix_2q(g: Gate) -> np.ndarray:
    if g.kind is GateKind.CX:
        return _CX01 if g.qubits == (0, 1) else _CX10
    mats = {GateKind.RX: rx_matrix, GateKind.RY: ry_matrix, GateKind.RZ: rz_matrix}
    m = mats[g.kind](g.params[0])
    return np.kron(m, _I2) if g.qubits == (0,) else np.kron(_I2, m)


def _u3_params(mat: np.ndarray) -> tuple[float, float, float]:
    """(theta, phi, lam) with u3(theta, phi, lam) = mat up to global phase."""
    theta = 2.0 * math.atan2(abs(mat[1, 0]), abs(mat[0, 0]))
    if abs(mat[0, 0]) > 1e-12:
        base = cmath.phase(mat[0, 0])
        phi = cmath.phase(mat[1, 0]) - base if abs(mat[1, 0]) > 1e-12 else 0.0
        lam = cmath.phase(-mat[0, 1]) - base if abs(mat[0, 1]) > 1e-12 else (
            cmath.phase(mat[1, 1]) - base - phi)
    else:
        # theta ~ pi: only the anti-diagonal is populated
        base = cmath.phase(mat[1, 0])
        phi = 0.0
        lam = cmath.phase(-mat[0, 1]) - base
    return theta, phi, lam


def _is_identity_up_to_phase(mat: np.ndarray, tol: float = 1e-9) -> bool:
    if abs(mat[0, 0]) < tol:
        return False
    m = mat / (mat[0, 0] / abs(mat[0, 0]))
    return bool(np.abs(m - np.eye(2)).max() < tol)


def _local_gates(m0: np.ndarray, m1: np.ndarray) -> list[Gate]:
    out = []
    if not _is_identity_up_to_phase(m0):
        out.append(u3(*_u3_params(m0), 0))
    if not _is_identity_up_to_phase(m1):
        out.append(u3(*_u3_params(m1), 1))
    return out


def kak_resynthesize(mat: np.ndarray, atol: float = ATOL_UNITARY) -> list[Gate]:
    """Rebuild a two-qubit unitary as U3 gates and a minimal number of CX.

    The gates act on abstract qubits 0 and 1 (list order = execution order);
    their product equals the input up to a global phase.
    """
    dec = kak_decompose(np.asarray(mat, dtype=complex), atol)
    x, y, z = dec.coefficients
    n_cx = min_cx_count(x, y, z)
    template = _template(n_cx, x, y, z)

    v = np.eye(4, dtype=complex)
    for g in template:
        v = _gate_matrix_2q(g) @ v
    tdec = kak_decompose(v)
    # The template realises the same canonical class, so only local factors
    # and phase differ between it and the target.
    pre0 = tdec.b0.conj().T @ dec.b0
    pre1 = tdec.b1.conj().T @ dec.b1
    post0 = dec.a0 @ tdec.a0.conj().T
    post1 = dec.a1 @ tdec.a1.conj().T
    return _local_gates(pre0, pre1) + template + _local_gates(post0, post1)


def gates_to_matrix(gates: list[Gate]) -> np.ndarray:
    """Product of two-qubit-register gates (qubits 0/1, first gate applied first)."""
    v = np.eye(4, dtype=complex)
    for g in gates:
        if g.kind is GateKind.U3:
            m = u3_matrix(*g.params)
            v = (np.kron(m, _I2) if g.qubits == (0,) else np.kron(_I2, m)) @ v
        else:
            v = _gate_matrix_2q(g) @ v
    return v

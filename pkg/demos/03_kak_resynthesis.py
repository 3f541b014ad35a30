"""Decompose two-qubit unitaries into minimal-CX circuits via the Cartan form."""
import numpy as np

from dqcbench import kak_decompose, kak_resynthesize, min_cx_count, weyl_coordinates
from dqcbench.circuits import GateKind
from dqcbench.kak import gates_to_matrix

CX = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)

# Weyl-chamber coordinates classify every two-qubit gate up to local rotations.
for name, u in (("identity", np.eye(4, dtype=complex)), ("CX", CX), ("SWAP", SWAP)):
    x, y, z = weyl_coordinates(u)
    print(f"{name:>8}: (x, y, z) * 4/pi = "
          f"({x * 4 / np.pi:.3f}, {y * 4 / np.pi:.3f}, {z * 4 / np.pi:.3f})"
          f"  -> {min_cx_count(x, y, z)} CX")

# A Haar-random unitary almost surely needs all three CX gates.
rng = np.random.default_rng(0)
m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
q, r = np.linalg.qr(m)
u = q * (np.diag(r) / np.abs(np.diag(r)))

dec = kak_decompose(u)
print("\nrandom unitary coefficients:", np.round(dec.coefficients, 4))
print("reconstruction error:", np.abs(dec.reconstruct() - u).max())

gates = kak_resynthesize(u)
n_cx = sum(1 for g in gates if g.kind is GateKind.CX)
print(f"resynthesised into {len(gates)} gates ({n_cx} CX):")
for g in gates:
    print("   ", g.kind.name, g.qubits, tuple(round(p, 3) for p in g.params))

v = gates_to_matrix(gates)
i, j = np.unravel_index(np.abs(u).argmax(), u.shape)
err = np.abs(v - (v[i, j] / u[i, j]) * u).max()
print("rebuilt product matches input up to phase:", err < 1e-7, f"(err {err:.2e})")

"""Watch the peephole passes compress a redundant circuit, with proof."""
from dqcbench import Circuit, gate_counts, optimize, unitary_equal_up_to_phase
from dqcbench.circuits import cx, h, rz, t, tdg
from dqcbench.corpus import generate
from dqcbench.passes import (cancel_inverse_pairs, commutative_cancellation,
                             merge_rotations)

# Inverse pairs vanish even when a commuting gate sits between them.
c = Circuit(2, (cx(0, 1), rz(0.4, 0), cx(0, 1)))
out, report = commutative_cancellation(c)
print("CX RZ CX ->", [g.kind.name for g in out.gates])
print("still the same unitary:", unitary_equal_up_to_phase(c, out))

# Same-axis rotations merge and near-zero angles evaporate.
c = Circuit(1, (rz(0.3, 0), rz(0.4, 0), rz(-0.7, 0)))
out, _ = merge_rotations(c)
print("rotation chain ->", [g.kind.name for g in out.gates])

# T and its adjoint annihilate wherever they become wire-adjacent.
c = Circuit(1, (t(0), tdg(0), t(0), tdg(0)))
print("T/Tdg chain ->", len(cancel_inverse_pairs(c)[0].gates), "gates")

# The full pipeline loops to a fixpoint; grover-style circuits carry lots of
# redundancy between diffusion rounds.
c = generate("grover_like", 16)
out, reports = optimize(c)
print(f"\ngrover_like(16): {gate_counts(c)} -> {gate_counts(out)}")
for rep in reports[:4]:
    print(f"  {rep.name:>26}: {sum(rep.gates_before)} -> {sum(rep.gates_after)} gates")
print("semantics preserved:",
      unitary_equal_up_to_phase(generate("grover_like", 8),
                                optimize(generate("grover_like", 8))[0]))

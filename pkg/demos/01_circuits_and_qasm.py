"""Build circuits, measure their structure, and round-trip them through QASM."""
from dqcbench import Circuit, depth, gate_counts, emit_qasm, parse_qasm
from dqcbench.circuits import ccx, cx, h, rz

# A circuit is a width plus an ordered gate tuple; gates are plain values.
bell = Circuit(2, (h(0), cx(0, 1)), id="bell")
print("bell depth:", depth(bell))                 # 2: H then CX
print("bell counts (1q, 2q, 3q):", gate_counts(bell))

# Depth follows per-qubit frontiers: parallel gates share a layer.
wide = Circuit(4, (h(0), h(1), h(2), h(3), cx(0, 1), cx(2, 3), ccx(1, 2, 3)))
print("wide depth:", depth(wide))                 # 3 layers
print("wide counts:", gate_counts(wide))

# QASM 2 emission is deterministic: one gate per line, 17-digit angles.
text = emit_qasm(Circuit(2, (h(0), rz(0.25, 0), cx(0, 1)), id="demo"))
print("\n--- emitted QASM ---")
print(text)

# Parsing the emission reproduces the exact gate list.
back = parse_qasm(text)
print("round-trip identical:", back.gates == (h(0), rz(0.25, 0), cx(0, 1)))

# Errors carry positions and name the offending gate.
try:
    parse_qasm("qreg q[1];\nfoo q[0];")
except ValueError as exc:
    print("parse error:", exc)

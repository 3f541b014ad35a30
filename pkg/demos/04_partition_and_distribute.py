"""Cut a circuit across QPUs: hypergraph, balanced partition, telegates."""
from dqcbench import (build_hypergraph, connectivity_minus_one, cut_cost,
                      distribute, distributed_metrics, partition, reassemble)
from dqcbench.corpus import generate

c = generate("qft", 12)
print("circuit:", c.id, "-", len(c.gates), "gates")

# Qubits become vertices; every multi-qubit gate adds (weight to) a net.
h = build_hypergraph(c)
print("hypergraph:", h.vertex_count, "vertices,", len(h.nets),
      "weighted nets, total weight", h.total_weight)

# Balanced 3-way partition at the default 3% imbalance tolerance.
p = partition(h, k=3, epsilon=0.03, seed=0)
print("part sizes:", p.part_sizes())
print("cut-net cost:", cut_cost(h, p),
      "| connectivity-1:", connectivity_minus_one(h, p))

# Distribution splits the gate list; each cut gate becomes one telegate
# record plus a marker in every touched subcircuit.
d = distribute(c, p)
for i, sub in enumerate(d.parts):
    print(f"  part {i}: {len(sub.gates)} local entries over qubits {d.qubit_maps[i]}")
print("telegates (non-local gates):", len(d.telegates))

m = distributed_metrics(d)
print("distributed metrics: 1q/2q/3q =", (m.n1q, m.n2q, m.n3q),
      "depth max/mean = %d/%.1f" % (m.depth_max, m.depth_mean),
      "non-local =", m.n_nonlocal)

# A fresh distribution reassembles into the source circuit, gate for gate.
print("exact reassembly:", reassemble(d).gates == c.gates)

"""Distributed quantum circuit compilation toolkit.

Builds dependency hypergraphs over circuits, partitions them across QPUs
with a balance constraint, distributes cut gates as telegates, optimises
circuits with a fixed peephole/KAK pass stack, and benchmarks the four
optimisation encodings (baseline / global / local / hybrid).
"""
from .circuits import (ARITY, Circuit, Gate, GateKind, TelegatePayload,
                       depth, gate_counts, marker_count, normalize_angle)
from .corpus import CorpusSpec, FAMILIES, build_corpus, generate, write_corpus
from .distribute import (DistributedCircuit, DistributedMetrics, Telegate,
                         distribute, distributed_metrics, reassemble)
from .harness import (ALL_STRATEGIES, BenchmarkResult, MetricsRecord,
                      PipelineResult, RunConfig, Strategy, compile_pipeline,
                      optimize_subcircuits, read_csv, run_benchmark,
                      run_encoding, summarize_records, verify_corpus,
                      width_bin, write_csv)
from .kak import (KakDecomposition, kak_decompose, kak_resynthesize,
                  min_cx_count, weyl_coordinates)
from .partitioning import (Hypergraph, Partition, balance_cap,
                           build_hypergraph, connectivity_minus_one, cut_cost,
                           partition)
from .passes import (PassReport, TwoQubitBlock, cancel_inverse_pairs,
                     collect_and_resynthesize_blocks, commutative_cancellation,
                     commutes, merge_rotations, optimize)
from .qasm import (QasmError, QasmSyntaxError, RegisterError,
                   UnsupportedGateError, emit_qasm, load_qasm_dir,
                   load_qasm_file, parse_qasm)
from .simulate import (apply, basis_state, gate_matrix, unitary,
                       unitary_equal_up_to_phase)

__version__ = "0.1.0"

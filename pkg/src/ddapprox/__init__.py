"""Decision-diagram simulation with similarity-based node replacement."""

from .circuits import (Circuit, Gate, GrcsError, generate_supremacy, parse_grcs,
                       serialize_grcs)
from .contribution import compute_contributions, rank_and_split
from .dd import (TERMINAL, CorruptVirtualEdgeError, DecisionDiagram, Edge, Node,
                 NodeCount, VirtualEntry, ZeroNodeError, fidelity)
from .lsh import (Bucket, HashFamily, build_family, hash_code,
                  hierarchical_bucketize, lsh_match, realify)
from .replace import (MATCH_EXHAUSTIVE, MATCH_LSH, ApproxResult, BlockVector,
                      IllegalPairError, MemoryReport, NoCandidateError,
                      StrategySpec, apply_replacement, block_vector,
                      match_exhaustive, memory_report, remove_nodes_baseline,
                      run_strategy)
from .simulate import (ApproximatedDDError, TooManyQubitsError, apply_gate,
                       dense_simulate, simulate_circuit)
from .sweep import (SweepRecord, default_fractions, lsh_comparable_fractions,
                    sweep_removal, sweep_strategy, write_csv)

__version__ = "0.1.0"

__all__ = [
    "ApproxResult", "ApproximatedDDError", "BlockVector", "Bucket", "Circuit",
    "CorruptVirtualEdgeError", "DecisionDiagram", "Edge", "Gate", "GrcsError",
    "HashFamily", "IllegalPairError", "MATCH_EXHAUSTIVE", "MATCH_LSH",
    "MemoryReport", "NoCandidateError", "Node", "NodeCount", "StrategySpec",
    "SweepRecord", "TERMINAL", "TooManyQubitsError", "VirtualEntry",
    "ZeroNodeError", "apply_gate", "apply_replacement", "block_vector",
    "build_family", "compute_contributions", "default_fractions",
    "dense_simulate", "fidelity", "generate_supremacy", "hash_code",
    "hierarchical_bucketize", "lsh_comparable_fractions", "lsh_match",
    "match_exhaustive", "memory_report", "parse_grcs", "rank_and_split",
    "realify", "remove_nodes_baseline", "run_strategy", "serialize_grcs",
    "simulate_circuit", "sweep_removal", "sweep_strategy", "write_csv",
]

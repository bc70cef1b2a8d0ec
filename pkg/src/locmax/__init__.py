"""Approximate maximum-weight matching via the local max algorithm.

The package provides the adjacency-array graph type, the local max matcher
in sequential, simulated-parallel (PRAM-style) and bulk-synchronous forms,
the greedy, GPA, HEM and red-blue competitor matchers, synthetic input
generators and file ingestion, an exact brute-force oracle for small
instances, and a benchmark harness with a CLI (``locmax``).
"""

from .bench import (
    BenchRecord,
    CrossCheckReport,
    InstanceSpec,
    ShrinkReport,
    SuiteConfig,
    engine_cross_check,
    run_matcher,
    run_suite,
    shrink_report,
)
from .bsp import Partition, RoundMessages, bsp_local_max, partition_graph
from .generate import GeneratorSpec, gen_random, gen_rgg, rgg_threshold
from .graph import (
    Graph,
    Matching,
    MatchingCheck,
    assert_graph_invariants,
    build_graph,
    matching_from_edge_ids,
    validate_matching,
)
from .graphio import (
    read_edge_list,
    read_graph,
    read_matrix_market,
    write_csv,
    write_edge_list,
)
from .matchers import (
    MATCHERS,
    PhaseTrace,
    RoundStats,
    gpa,
    greedy,
    hem,
    local_max_seq,
    rbm,
)
from .oracle import (
    AuditReport,
    OracleResult,
    approximation_audit,
    max_weight_matching_bruteforce,
)
from .pram import PramState, WriteLog, pram_local_max, pram_phase, segmented_broadcast
from .tiebreak import DUMMY_KEY, TieKey, edge_salts, key_ranks, round_seed, tie_key

__version__ = "0.1.0"

__all__ = [
    "BenchRecord",
    "CrossCheckReport",
    "InstanceSpec",
    "ShrinkReport",
    "SuiteConfig",
    "engine_cross_check",
    "run_matcher",
    "run_suite",
    "shrink_report",
    "Partition",
    "RoundMessages",
    "bsp_local_max",
    "partition_graph",
    "GeneratorSpec",
    "gen_random",
    "gen_rgg",
    "rgg_threshold",
    "Graph",
    "Matching",
    "MatchingCheck",
    "assert_graph_invariants",
    "build_graph",
    "matching_from_edge_ids",
    "validate_matching",
    "read_edge_list",
    "read_graph",
    "read_matrix_market",
    "write_csv",
    "write_edge_list",
    "MATCHERS",
    "PhaseTrace",
    "RoundStats",
    "gpa",
    "greedy",
    "hem",
    "local_max_seq",
    "rbm",
    "AuditReport",
    "OracleResult",
    "approximation_audit",
    "max_weight_matching_bruteforce",
    "PramState",
    "WriteLog",
    "pram_local_max",
    "pram_phase",
    "segmented_broadcast",
    "DUMMY_KEY",
    "TieKey",
    "edge_salts",
    "key_ranks",
    "round_seed",
    "tie_key",
    "__version__",
]

"""Exact maximum-weight matching oracle for small instances, plus audits.

The oracle is deliberately brute force (branch over edges with pruning) so
it shares no code path with any matcher it is used to judge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .graph import Graph, Matching, build_graph, validate_matching

ORACLE_EDGE_CAP = 24


@dataclass(frozen=True)
class OracleResult:
    opt_weight: float
    opt_edges: tuple[int, ...]   # one optimal edge set (ties broken arbitrarily)
    instances_enumerated: int    # search-tree nodes explored


def max_weight_matching_bruteforce(g: Graph, max_edges: int = ORACLE_EDGE_CAP) -> OracleResult:
    """Exact optimum by include/exclude branching over edges.

    Edges are visited in decreasing weight order; a branch is cut when the
    remaining total weight cannot beat the incumbent. Refuses instances
    with more than ``max_edges`` edges.
    """
    m = g.num_edges
    if m > max_edges:
        raise ValueError(f"instance too large for the oracle: m={m} > {max_edges}")
    order = sorted(range(m), key=lambda k: -g.edge_weight[k])
    w = [float(g.edge_weight[k]) for k in order]
    uu = [int(g.edge_u[k]) for k in order]
    vv = [int(g.edge_v[k]) for k in order]
    suffix = [0.0] * (m + 1)
    for i in range(m - 1, -1, -1):
        suffix[i] = suffix[i + 1] + w[i]

    best_weight = -1.0
    best_edges: tuple[int, ...] = ()
    nodes = 0
    chosen: list[int] = []

    def walk(i: int, used: int, total: float) -> None:
        nonlocal best_weight, best_edges, nodes
        nodes += 1
        if total > best_weight:
            best_weight = total
            best_edges = tuple(sorted(order[j] for j in chosen))
        if i == m or total + suffix[i] <= best_weight:
            return
        bit = (1 << uu[i]) | (1 << vv[i])
        if not used & bit:
            chosen.append(i)
            walk(i + 1, used | bit, total + w[i])
            chosen.pop()
        walk(i + 1, used, total)

    walk(0, 0, 0.0)
    return OracleResult(max(best_weight, 0.0), best_edges, nodes)


@dataclass(frozen=True)
class AuditReport:
    """Outcome of running one matcher against the oracle on random instances."""

    matcher: str
    trials: int
    min_ratio: float
    mean_ratio: float
    guarantee_violations: int  # ratio < 1/2 where the matcher promises it
    invalid: int
    non_maximal: int

    @property
    def passed(self) -> bool:
        return self.guarantee_violations == 0 and self.invalid == 0 and self.non_maximal == 0


# Matchers carrying the 1/2-approximation guarantee; others are report-only.
HALF_APPROX_MATCHERS = frozenset({"localmax", "greedy"})

# Slack for accumulated floating-point error in weight sums.
RATIO_EPS = 1e-9

_WEIGHT_REGIMES = ("uniform", "few_values", "all_equal", "powers")


def random_audit_instance(rng: np.random.Generator, max_edges: int = ORACLE_EDGE_CAP) -> Graph:
    """Small random graph in mixed weight regimes, ties included on purpose."""
    n = int(rng.integers(2, 13))
    cap = min(max_edges, n * (n - 1) // 2)
    m = int(rng.integers(0, cap + 1))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    idx = rng.choice(len(pairs), size=m, replace=False) if m else []
    regime = _WEIGHT_REGIMES[int(rng.integers(0, len(_WEIGHT_REGIMES)))]
    edges = []
    for i in idx:
        u, v = pairs[int(i)]
        if regime == "uniform":
            w = float(rng.random())
        elif regime == "few_values":
            w = float(rng.integers(1, 5)) / 4.0
        elif regime == "all_equal":
            w = 1.0
        else:
            w = float(2 ** rng.integers(0, 5))
        edges.append((u, v, w))
    return build_graph(edges, num_vertices=n)


def approximation_audit(
    matcher_id: str,
    trials: int,
    seed: int,
    matcher: Callable[[Graph, int], tuple[Matching, object]] | None = None,
) -> AuditReport:
    """Compare a matcher against the exact oracle on random small instances.

    Ratios are matcher weight over optimum (1.0 when the optimum is zero).
    A ratio below 1/2 counts as a guarantee violation only for matchers in
    HALF_APPROX_MATCHERS; validity and maximality are enforced for all.
    """
    if matcher is None:
        from .matchers import MATCHERS
        matcher = MATCHERS[matcher_id]
    enforce_half = matcher_id in HALF_APPROX_MATCHERS
    ratios: list[float] = []
    violations = invalid = non_maximal = 0
    for t in range(trials):
        rng = np.random.default_rng((seed, t))
        g = random_audit_instance(rng)
        opt = max_weight_matching_bruteforce(g)
        matching, _ = matcher(g, t)
        check = validate_matching(g, matching)
        if not check.valid:
            invalid += 1
        elif not check.maximal:
            non_maximal += 1
        got = matching.weight(g)
        ratio = 1.0 if opt.opt_weight == 0.0 else got / opt.opt_weight
        ratios.append(ratio)
        if enforce_half and ratio < 0.5 - RATIO_EPS:
            violations += 1
    if ratios:
        min_ratio = min(ratios)
        mean_ratio = math.fsum(ratios) / len(ratios)
    else:
        min_ratio = mean_ratio = float("nan")
    return AuditReport(matcher_id, trials, min_ratio, mean_ratio, violations, invalid, non_maximal)

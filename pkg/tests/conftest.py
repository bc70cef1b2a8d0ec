"""Shared fixtures and reference implementations used as test oracles."""

from __future__ import annotations

import numpy as np
import pytest

from locmax import Graph, Matching, build_graph


@pytest.fixture
def triangle() -> Graph:
    # weights 1, 2, 3 on edges (0,1), (1,2), (0,2)
    return build_graph([(0, 1, 1.0), (1, 2, 2.0), (0, 2, 3.0)])


@pytest.fixture
def path4() -> Graph:
    # a-b-c-d with weights 2, 3, 2
    return build_graph([(0, 1, 2.0), (1, 2, 3.0), (2, 3, 2.0)])


@pytest.fixture
def star9() -> Graph:
    # K_{1,8}, unit weights, center 0
    return build_graph([(0, leaf, 1.0) for leaf in range(1, 9)])


def random_graph_edges(rng: np.random.Generator, n: int, m: int) -> list[tuple[int, int, float]]:
    """Simple random edge list, possibly with weight ties."""
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    m = min(m, len(pairs))
    idx = rng.choice(len(pairs), size=m, replace=False)
    tie_heavy = rng.random() < 0.5
    edges = []
    for i in idx:
        u, v = pairs[int(i)]
        w = float(rng.integers(1, 4)) if tie_heavy else float(rng.random())
        edges.append((u, v, w))
    return edges


def naive_validate(g: Graph, matching: Matching) -> tuple[bool, bool]:
    """O(m*n) reference for validate_matching."""
    used: set[int] = set()
    for k in matching.edges:
        if not 0 <= k < g.num_edges:
            return False, False
        u, v = g.endpoints(k)
        if u in used or v in used:
            return False, False
        used.add(u)
        used.add(v)
    for v in range(g.num_vertices):
        expected = -1
        for k in matching.edges:
            a, b = g.endpoints(k)
            if v == a:
                expected = b
            elif v == b:
                expected = a
        if matching.mate[v] != expected:
            return False, False
    maximal = True
    for k in range(g.num_edges):
        u, v = g.endpoints(k)
        if u not in used and v not in used:
            maximal = False
    return True, maximal

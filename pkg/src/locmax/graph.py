"""Immutable adjacency-array graph representation and matching containers.

The graph is stored in three coupled arrays: ``offsets`` gives each vertex a
contiguous range of incidence slots, each slot records (owning vertex, edge
id), and the edge arrays hold endpoints and weights. Every edge owns exactly
two slots, one in each endpoint's range. The layout supports segmented
(per-vertex) array operations without any per-query adjacency construction,
which is what the PRAM-style engine relies on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph with nonnegative real edge weights.

    Instances are immutable after construction (the arrays are marked
    read-only) and safe to share across concurrent workers.
    """

    num_vertices: int
    offsets: np.ndarray      # (n+1,) int64; offsets[v]..offsets[v+1] = v's slots
    slot_vertex: np.ndarray  # (2m,) int64; owning vertex of each incidence slot
    slot_edge: np.ndarray    # (2m,) int64; edge id referenced by each slot
    edge_u: np.ndarray       # (m,) int64
    edge_v: np.ndarray       # (m,) int64
    edge_weight: np.ndarray  # (m,) float64

    @property
    def num_edges(self) -> int:
        return int(self.edge_u.size)

    def degree(self, v: int) -> int:
        return int(self.offsets[v + 1] - self.offsets[v])

    def incident_edges(self, v: int) -> np.ndarray:
        """Edge ids incident to v, in ascending edge-id order."""
        return self.slot_edge[self.offsets[v]:self.offsets[v + 1]]

    def endpoints(self, edge_id: int) -> tuple[int, int]:
        return int(self.edge_u[edge_id]), int(self.edge_v[edge_id])

    def other_endpoint(self, edge_id: int, v: int) -> int:
        u = int(self.edge_u[edge_id])
        return int(self.edge_v[edge_id]) if u == v else u

    def total_weight(self, edge_ids: Iterable[int]) -> float:
        ids = np.fromiter(sorted(int(k) for k in edge_ids), dtype=np.int64)
        return float(self.edge_weight[ids].sum()) if ids.size else 0.0


def build_graph(
    edge_list: Iterable[tuple[int, int, float]],
    num_vertices: int | None = None,
) -> Graph:
    """Build an adjacency-array graph from (u, v, weight) triples.

    Self-loops are dropped. Among parallel edges only the heaviest is kept
    (ties resolved toward the earlier input position). Vertex ids must lie
    in [0, num_vertices); when ``num_vertices`` is omitted it is inferred as
    max id + 1.

    Raises ValueError for out-of-range ids and NaN, infinite or negative
    weights, naming the offending input position.
    """
    kept: dict[tuple[int, int], int] = {}
    us: list[int] = []
    vs: list[int] = []
    ws: list[float] = []
    max_id = -1
    for pos, (u, v, w) in enumerate(edge_list):
        ui, vi = int(u), int(v)
        if ui < 0 or vi < 0:
            raise ValueError(f"edge {pos}: negative vertex id ({ui}, {vi})")
        if num_vertices is not None and (ui >= num_vertices or vi >= num_vertices):
            raise ValueError(
                f"edge {pos}: vertex id out of range for n={num_vertices}: ({ui}, {vi})"
            )
        wf = float(w)
        if math.isnan(wf) or math.isinf(wf) or wf < 0.0:
            raise ValueError(f"edge {pos}: weight must be finite and >= 0, got {w!r}")
        if ui == vi:
            continue  # self-loops can never be matched
        max_id = max(max_id, ui, vi)
        pair = (ui, vi) if ui < vi else (vi, ui)
        at = kept.get(pair)
        if at is None:
            kept[pair] = len(us)
            us.append(ui)
            vs.append(vi)
            ws.append(wf)
        elif wf > ws[at]:
            us[at], vs[at], ws[at] = ui, vi, wf

    n = num_vertices if num_vertices is not None else max_id + 1
    m = len(us)
    edge_u = np.asarray(us, dtype=np.int64)
    edge_v = np.asarray(vs, dtype=np.int64)
    edge_weight = np.asarray(ws, dtype=np.float64)

    slot_vertex = np.concatenate([edge_u, edge_v]) if m else np.empty(0, dtype=np.int64)
    slot_eid = np.concatenate([np.arange(m), np.arange(m)]).astype(np.int64)
    order = np.lexsort((slot_eid, slot_vertex))
    slot_vertex = slot_vertex[order]
    slot_eid = slot_eid[order]

    degrees = np.bincount(slot_vertex, minlength=n).astype(np.int64)
    offsets = np.concatenate([[0], np.cumsum(degrees)]).astype(np.int64)

    for arr in (offsets, slot_vertex, slot_eid, edge_u, edge_v, edge_weight):
        arr.setflags(write=False)
    return Graph(n, offsets, slot_vertex, slot_eid, edge_u, edge_v, edge_weight)


def assert_graph_invariants(g: Graph) -> None:
    """Raise ValueError unless the adjacency-array layout is fully consistent.

    Checks the offset monotonicity, the slot/edge cross-referencing (each
    edge id appearing exactly twice, once per endpoint), simplicity and the
    weight domain. Used by tests and by the PRAM engine's checked mode after
    every compaction.
    """
    n, m = g.num_vertices, g.num_edges
    if g.offsets.shape != (n + 1,):
        raise ValueError("offsets must have length n+1")
    if g.offsets[0] != 0 or g.offsets[-1] != 2 * m:
        raise ValueError("offsets must start at 0 and end at 2m")
    if np.any(np.diff(g.offsets) < 0):
        raise ValueError("offsets must be nondecreasing")
    if g.slot_vertex.shape != (2 * m,) or g.slot_edge.shape != (2 * m,):
        raise ValueError("slot arrays must have length 2m")
    expect_owner = np.repeat(np.arange(n, dtype=np.int64), np.diff(g.offsets))
    if not np.array_equal(g.slot_vertex, expect_owner):
        raise ValueError("slot_vertex disagrees with the offsets segmentation")
    if m:
        if g.slot_edge.min() < 0 or g.slot_edge.max() >= m:
            raise ValueError("slot_edge references an edge id out of range")
        counts = np.bincount(g.slot_edge, minlength=m)
        if not np.all(counts == 2):
            raise ValueError("every edge id must appear in exactly two slots")
        order = np.argsort(g.slot_edge, kind="stable")
        owners = g.slot_vertex[order].reshape(m, 2)
        lo = np.minimum(g.edge_u, g.edge_v)
        hi = np.maximum(g.edge_u, g.edge_v)
        if not (np.array_equal(np.minimum(owners[:, 0], owners[:, 1]), lo)
                and np.array_equal(np.maximum(owners[:, 0], owners[:, 1]), hi)):
            raise ValueError("slot owners disagree with edge endpoints")
        if np.any(g.edge_u == g.edge_v):
            raise ValueError("self-loop present")
        if np.any(g.edge_u < 0) or np.any(g.edge_v < 0) or max(g.edge_u.max(), g.edge_v.max()) >= n:
            raise ValueError("edge endpoint out of range")
        packed = lo.astype(np.int64) * n + hi
        if np.unique(packed).size != m:
            raise ValueError("duplicate edge pair present")
        if np.any(~np.isfinite(g.edge_weight)) or np.any(g.edge_weight < 0):
            raise ValueError("weights must be finite and >= 0")


@dataclass(frozen=True, eq=False)
class Matching:
    """A set of matched edge ids with the induced per-vertex mate table.

    ``mate[v]`` is the partner vertex of v, or -1 when v is unmatched.
    """

    edges: frozenset[int]
    mate: np.ndarray  # (n,) int64

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matching):
            return NotImplemented
        return self.edges == other.edges and np.array_equal(self.mate, other.mate)

    def __hash__(self) -> int:
        return hash(self.edges)

    @property
    def size(self) -> int:
        return len(self.edges)

    def sorted_edge_ids(self) -> np.ndarray:
        return np.fromiter(sorted(self.edges), dtype=np.int64, count=len(self.edges))

    def weight(self, g: Graph) -> float:
        return g.total_weight(self.edges)


def matching_from_edge_ids(g: Graph, edge_ids: Iterable[int]) -> Matching:
    """Assemble a Matching from edge ids assumed pairwise vertex-disjoint."""
    ids = np.fromiter((int(k) for k in edge_ids), dtype=np.int64)
    mate = np.full(g.num_vertices, -1, dtype=np.int64)
    if ids.size:
        mate[g.edge_u[ids]] = g.edge_v[ids]
        mate[g.edge_v[ids]] = g.edge_u[ids]
    mate.setflags(write=False)
    return Matching(frozenset(int(k) for k in ids), mate)


class MatchingCheck(NamedTuple):
    valid: bool
    maximal: bool
    detail: str


def validate_matching(g: Graph, m: Matching) -> MatchingCheck:
    """Diagnostic validation; never raises.

    ``valid`` holds when the edge set is pairwise vertex-disjoint and the
    mate table is exactly the one induced by it. ``maximal`` additionally
    requires that no remaining edge has both endpoints unmatched.
    """
    n = g.num_vertices
    if m.mate.shape != (n,):
        return MatchingCheck(False, False, "mate table has wrong length")
    seen = np.zeros(n, dtype=bool)
    for k in m.edges:
        if not 0 <= k < g.num_edges:
            return MatchingCheck(False, False, f"edge id {k} out of range")
        u, v = g.endpoints(k)
        if seen[u] or seen[v]:
            return MatchingCheck(False, False, f"vertex shared by two matched edges (edge {k})")
        seen[u] = seen[v] = True
        if m.mate[u] != v or m.mate[v] != u:
            return MatchingCheck(False, False, f"mate table disagrees with matched edge {k}")
    if np.any(m.mate[~seen] != -1):
        return MatchingCheck(False, False, "mate entry set for an unmatched vertex")
    unmatched_u = m.mate[g.edge_u] == -1
    unmatched_v = m.mate[g.edge_v] == -1
    addable = bool(np.any(unmatched_u & unmatched_v))
    return MatchingCheck(True, not addable, "")

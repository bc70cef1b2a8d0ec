"""Synthetic input families: uniform random graphs and random geometric graphs."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import Graph, build_graph

RGG_THRESHOLD_FACTOR = 0.55


@dataclass(frozen=True)
class GeneratorSpec:
    """Declarative description of one synthetic instance."""

    family: str          # "random" | "rgg"
    x: int               # log2 of the vertex count
    alpha: int = 4       # edges per vertex (random family only)
    seed: int = 0
    weight_mode: str = "random"  # rgg: "euclidean" | "random"

    def __post_init__(self) -> None:
        if self.family not in ("random", "rgg"):
            raise ValueError(f"unknown family {self.family!r}")
        if self.x < 1:
            raise ValueError("x must be >= 1")
        if self.alpha < 1:
            raise ValueError("alpha must be a positive integer")

    @property
    def num_vertices(self) -> int:
        return 1 << self.x

    def label(self) -> str:
        if self.family == "random":
            return f"random-x{self.x}-a{self.alpha}"
        return f"rgg-x{self.x}-{self.weight_mode}"

    def build(self) -> Graph:
        if self.family == "random":
            return gen_random(self.num_vertices, self.alpha, self.seed)
        return gen_rgg(self.x, self.seed, self.weight_mode)


def gen_random(n: int, alpha: int, seed: int) -> Graph:
    """Uniform simple graph with exactly alpha*n edges and U[0,1) weights.

    Edges are drawn uniformly without replacement among the n*(n-1)/2
    unordered pairs, by batched rejection sampling; the result is a
    deterministic function of the seed.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    m = alpha * n
    capacity = n * (n - 1) // 2
    if m > capacity:
        raise ValueError(
            f"density infeasible: requested {m} edges but only {capacity} pairs exist for n={n}"
        )
    rng = np.random.default_rng(seed)
    if 2 * m > capacity:
        # dense request: rejection would thrash, sample pair indices directly
        lo, hi = np.triu_indices(n, k=1)
        pick = rng.choice(capacity, size=m, replace=False)
        chosen = lo[pick] * n + hi[pick]
        weights = rng.random(m)
        edges = zip((chosen // n).tolist(), (chosen % n).tolist(), weights.tolist())
        return build_graph(edges, num_vertices=n)
    chosen = np.empty(0, dtype=np.int64)
    while chosen.size < m:
        need = m - chosen.size
        batch = need + need // 8 + 16
        a = rng.integers(0, n, size=batch, dtype=np.int64)
        b = rng.integers(0, n, size=batch, dtype=np.int64)
        ok = a != b
        lo = np.minimum(a[ok], b[ok])
        hi = np.maximum(a[ok], b[ok])
        packed = lo * n + hi
        # dedup within the batch, keeping first-draw order
        _, first = np.unique(packed, return_index=True)
        packed = packed[np.sort(first)]
        packed = packed[~np.isin(packed, chosen)]
        chosen = np.concatenate([chosen, packed[:need]])
    weights = rng.random(m)
    edges = zip((chosen // n).tolist(), (chosen % n).tolist(), weights.tolist())
    return build_graph(edges, num_vertices=n)


def rgg_threshold(n: int) -> float:
    """Connection radius for the geometric family: 0.55 * sqrt(ln n / n)."""
    return RGG_THRESHOLD_FACTOR * math.sqrt(math.log(n) / n)


def _morton_order(points: np.ndarray) -> np.ndarray:
    """Order point indices along a z-order curve (16 bits per coordinate)."""
    q = np.clip((points * 65536.0).astype(np.uint32), 0, 65535).astype(np.uint64)

    def spread(b: np.ndarray) -> np.ndarray:
        b = (b | (b << np.uint64(16))) & np.uint64(0x0000FFFF0000FFFF)
        b = (b | (b << np.uint64(8))) & np.uint64(0x00FF00FF00FF00FF)
        b = (b | (b << np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
        b = (b | (b << np.uint64(2))) & np.uint64(0x3333333333333333)
        b = (b | (b << np.uint64(1))) & np.uint64(0x5555555555555555)
        return b

    key = spread(q[:, 0]) | (spread(q[:, 1]) << np.uint64(1))
    return np.argsort(key, kind="stable")


def gen_rgg(x: int, seed: int, weight_mode: str = "euclidean") -> Graph:
    """Random geometric graph on 2^x uniform points in the unit square.

    Vertices u, v are adjacent iff their Euclidean distance is strictly
    below the threshold radius (points exactly at the radius are NOT
    connected). Weights are either the Euclidean distances or fresh U[0,1)
    draws, per ``weight_mode``. Candidate pairs come from a uniform grid
    with cell width equal to the radius, so generation is expected
    O(n + m) rather than quadratic.

    Vertices are numbered along a space-filling (z-order) curve of their
    positions: geometric instances normally reach a partitioner with a
    spatially coherent numbering, and contiguous-range partitions of this
    family are expected to have few cut edges.
    """
    if x < 2:
        raise ValueError("x must be >= 2")
    if weight_mode not in ("euclidean", "random"):
        raise ValueError(f"weight_mode must be euclidean or random, got {weight_mode!r}")
    n = 1 << x
    rng = np.random.default_rng(seed)
    points = rng.random((n, 2))
    points = points[_morton_order(points)]
    radius = rgg_threshold(n)
    eu, ev, dist = radius_edges_grid(points, radius)
    if weight_mode == "euclidean":
        weights = dist
    else:
        weights = rng.random(eu.size)
    edges = zip(eu.tolist(), ev.tolist(), weights.tolist())
    return build_graph(edges, num_vertices=n)


def radius_edges_grid(points: np.ndarray, radius: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All pairs at Euclidean distance < radius, via a uniform spatial hash.

    Returns (u, v, distance) arrays with u < v, ordered deterministically.
    Exact (not approximate): any pair within the radius lies in the same or
    an adjacent grid cell because the cell width equals the radius.
    """
    n = points.shape[0]
    if n == 0 or radius <= 0:
        e = np.empty(0, dtype=np.int64)
        return e, e.copy(), np.empty(0, dtype=np.float64)
    side = max(1, int(math.floor(1.0 / radius)))  # cells are >= radius wide
    cx = np.minimum((points[:, 0] / (1.0 / side)).astype(np.int64), side - 1)
    cy = np.minimum((points[:, 1] / (1.0 / side)).astype(np.int64), side - 1)
    cell = cx * side + cy
    order = np.lexsort((np.arange(n), cell))
    sorted_cell = cell[order]
    uniq, starts = np.unique(sorted_cell, return_index=True)
    starts = np.concatenate([starts, [n]])
    cell_slice = {int(c): (int(starts[i]), int(starts[i + 1])) for i, c in enumerate(uniq)}

    us: list[np.ndarray] = []
    vs: list[np.ndarray] = []
    ds: list[np.ndarray] = []
    r2 = radius * radius
    for i, c in enumerate(uniq):
        px, py = int(c) // side, int(c) % side
        own = order[starts[i]:starts[i + 1]]
        cand_parts = []
        for dx in (-1, 0, 1):
            qx = px + dx
            if not 0 <= qx < side:
                continue
            for dy in (-1, 0, 1):
                qy = py + dy
                if not 0 <= qy < side:
                    continue
                sl = cell_slice.get(qx * side + qy)
                if sl is not None:
                    cand_parts.append(order[sl[0]:sl[1]])
        cand = np.concatenate(cand_parts)
        diff = points[own][:, None, :] - points[cand][None, :, :]
        d2 = np.einsum("ijk,ijk->ij", diff, diff)
        pi, qi = np.nonzero((d2 < r2) & (own[:, None] < cand[None, :]))
        if pi.size:
            us.append(own[pi])
            vs.append(cand[qi])
            ds.append(np.sqrt(d2[pi, qi]))
    if not us:
        e = np.empty(0, dtype=np.int64)
        return e, e.copy(), np.empty(0, dtype=np.float64)
    return np.concatenate(us), np.concatenate(vs), np.concatenate(ds)


def radius_edges_bruteforce(points: np.ndarray, radius: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Quadratic all-pairs reference for :func:`radius_edges_grid`."""
    n = points.shape[0]
    us, vs, ds = [], [], []
    r2 = radius * radius
    for u in range(n):
        diff = points[u + 1:] - points[u]
        d2 = np.einsum("ij,ij->i", diff, diff)
        hit = np.nonzero(d2 < r2)[0]
        if hit.size:
            us.append(np.full(hit.size, u, dtype=np.int64))
            vs.append(hit + u + 1)
            ds.append(np.sqrt(d2[hit]))
    if not us:
        e = np.empty(0, dtype=np.int64)
        return e, e.copy(), np.empty(0, dtype=np.float64)
    return np.concatenate(us), np.concatenate(vs), np.concatenate(ds)


def with_unit_weights(g: Graph) -> Graph:
    """Copy of the graph with every weight forced to 1.0 (cardinality runs)."""
    edges = zip(g.edge_u.tolist(), g.edge_v.tolist(), [1.0] * g.num_edges)
    return build_graph(edges, num_vertices=g.num_vertices)

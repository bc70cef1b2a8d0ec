"""Partitioned bulk-synchronous local max with boundary-message accounting.

Vertices are assigned to workers in contiguous ranges (balanced by degree
sums); every edge is stored at both endpoint owners, so a worker can settle
the candidate of any vertex it owns from local data alone. What crosses the
network per round is (a) candidate records for the endpoints of surviving
cut edges, exchanged at the first barrier so both owners of a cut edge reach
the same match verdict, and (b) matched-status flags for cut-edge endpoints
at the second barrier so both owners agree which edges die. The matching is
identical to the sequential result for every worker count, because all
decisions flow from the shared key order.

Workers here are logical: the supersteps are simulated sequentially, worker
by worker, each writing only to vertices it owns. The message accounting
always reflects the requested partition.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .graph import Graph, Matching, matching_from_edge_ids
from .matchers import PhaseTrace, RoundStats
from .tiebreak import edge_salts, key_ranks, round_seed

#: Bytes per candidate record: vertex id, weight, salt, edge id.
CANDIDATE_RECORD_BYTES = 32


@dataclass(frozen=True)
class RoundMessages:
    """Candidate records exchanged across partition boundaries in one round."""

    round_index: int
    candidate_records: int
    bytes_estimate: int
    cut_edges_surviving: int
    status_records: int  # matched-status flags at the second barrier


@dataclass(frozen=True)
class Partition:
    num_workers: int
    bounds: np.ndarray          # (p+1,) range starts; worker i owns [bounds[i], bounds[i+1])
    owner: np.ndarray           # (n,) worker of each vertex
    local_edges: list[np.ndarray]  # per worker: edge ids incident to an owned vertex
    cut_edges: np.ndarray       # edge ids whose endpoints have different owners
    degree_imbalance: float     # max worker degree-sum over the ideal 2m/p

    @property
    def cut_fraction(self) -> float:
        total = sum(int(e.size) for e in self.local_edges)
        m = total - int(self.cut_edges.size)  # cut edges are stored at both owners
        return self.cut_edges.size / m if m else 0.0


def partition_graph(g: Graph, p: int) -> Partition:
    """Split vertices into p contiguous ranges with near-equal degree sums.

    The split greedily sweeps the degree prefix sums (the offsets array),
    cutting as close as possible to each multiple of 2m/p, and reports the
    worst per-worker degree sum relative to the ideal share.
    """
    n = g.num_vertices
    if p < 1:
        raise ValueError("p must be >= 1")
    if p > n:
        raise ValueError(f"p={p} exceeds the vertex count {n}")
    two_m = 2 * g.num_edges
    targets = (np.arange(1, p, dtype=np.float64) * two_m) / p
    cuts = np.searchsorted(g.offsets, targets, side="left").astype(np.int64)
    if cuts.size:
        # every worker owns at least one vertex: force strictly increasing
        # cuts, then cap so enough vertices remain for the workers after it
        steps = np.arange(1, p, dtype=np.int64)
        cuts = np.maximum.accumulate(cuts - steps) + steps
        cuts = np.minimum(np.maximum(cuts, steps), n - p + steps)
        bounds = np.concatenate([[0], cuts, [n]]).astype(np.int64)
    else:
        bounds = np.array([0, n], dtype=np.int64)
    owner = np.repeat(np.arange(p, dtype=np.int64), np.diff(bounds))

    owner_u = owner[g.edge_u]
    owner_v = owner[g.edge_v]
    edge_ids = np.arange(g.num_edges, dtype=np.int64)
    local = [edge_ids[(owner_u == w) | (owner_v == w)] for w in range(p)]
    cut = edge_ids[owner_u != owner_v]

    if two_m:
        share = two_m / p
        sums = [float(g.offsets[bounds[w + 1]] - g.offsets[bounds[w]]) for w in range(p)]
        imbalance = max(sums) / share
    else:
        imbalance = 1.0
    return Partition(p, bounds, owner, local, cut, imbalance)


def bsp_local_max(
    g: Graph,
    p: int,
    seed: int,
    rerandomize: bool = True,
) -> tuple[Matching, PhaseTrace]:
    """Bulk-synchronous local max over a p-way contiguous partition.

    Per round and per worker: settle the candidates of owned vertices from
    the local edge list; after the first barrier (candidate exchange for
    cut edges) every owner of an edge reaches the same match verdict; after
    the second barrier (matched-status exchange) dead local edges are
    dropped and surviving candidates reset. The returned matching equals
    ``local_max_seq(g, seed)`` for every p.
    """
    t0 = time.perf_counter()
    part = partition_graph(g, p)
    owner = part.owner
    n, m = g.num_vertices, g.num_edges
    trace = PhaseTrace(messages=[])

    cand = np.full(n, -1, dtype=np.int64)
    vertex_matched = np.zeros(n, dtype=bool)
    rank_of = np.full(m, -1, dtype=np.int64)
    is_cut = np.zeros(m, dtype=bool)
    is_cut[part.cut_edges] = True

    local_live = [e.copy() for e in part.local_edges]
    matched_ever = np.zeros(m, dtype=bool)
    live_union = np.arange(m, dtype=np.int64)
    round_index = 0
    while live_union.size:
        rs = round_seed(seed, round_index, rerandomize)
        rank_of[live_union] = key_ranks(
            g.edge_weight[live_union], edge_salts(rs, live_union), live_union
        )

        # superstep 1: each worker raises candidates for its owned vertices
        for w in range(p):
            el = local_live[w]
            us, vs = g.edge_u[el], g.edge_v[el]
            r = rank_of[el]
            mine_u = owner[us] == w
            mine_v = owner[vs] == w
            np.maximum.at(cand, us[mine_u], r[mine_u])
            np.maximum.at(cand, vs[mine_v], r[mine_v])

        # barrier 1: candidate records for surviving cut-edge endpoints,
        # deduplicated per (vertex, receiving worker)
        cut_live = live_union[is_cut[live_union]]
        cu, cv = g.edge_u[cut_live], g.edge_v[cut_live]
        sent_u = np.unique(cu * np.int64(p) + owner[cv]).size
        sent_v = np.unique(cv * np.int64(p) + owner[cu]).size
        records = int(sent_u + sent_v)

        # superstep 2: with reconciled candidates, every owner of an edge
        # reaches the same verdict; owners mark their matched vertices
        for w in range(p):
            el = local_live[w]
            us, vs = g.edge_u[el], g.edge_v[el]
            r = rank_of[el]
            won = (cand[us] == r) & (cand[vs] == r)
            matched_ever[el[won]] = True
            mine_u = owner[us] == w
            mine_v = owner[vs] == w
            vertex_matched[us[won & mine_u]] = True
            vertex_matched[vs[won & mine_v]] = True

        # barrier 2: matched-status flags for cut-edge endpoints
        status_records = 2 * int(cut_live.size)

        # superstep 3: drop edges with a matched endpoint, reset survivors
        for w in range(p):
            el = local_live[w]
            us, vs = g.edge_u[el], g.edge_v[el]
            alive = ~(vertex_matched[us] | vertex_matched[vs])
            mine_u = owner[us] == w
            mine_v = owner[vs] == w
            cand[us[alive & mine_u]] = -1
            cand[vs[alive & mine_v]] = -1
            local_live[w] = el[alive]

        newly_matched = int(matched_ever[live_union].sum())
        still = ~(
            vertex_matched[g.edge_u[live_union]] | vertex_matched[g.edge_v[live_union]]
        )
        survivors = live_union[still]
        trace.rounds.append(
            RoundStats(live_union.size, newly_matched, live_union.size - survivors.size)
        )
        trace.messages.append(
            RoundMessages(
                round_index,
                records,
                records * CANDIDATE_RECORD_BYTES,
                int(cut_live.size),
                status_records,
            )
        )
        live_union = survivors
        round_index += 1

    matched = np.nonzero(matched_ever)[0]
    trace.wall_millis = (time.perf_counter() - t0) * 1000.0
    return matching_from_edge_ids(g, matched), trace

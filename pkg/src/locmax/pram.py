"""Array-level simulation of the CREW-style parallel local max phase.

The engine keeps the graph in the adjacency-array layout (edge records plus
per-vertex incidence slots) and runs each phase as a fixed sequence of
whole-array passes: draw per-edge keys, broadcast the per-vertex maximum to
every slot with a segmented reduction, match edges that win at both
endpoints via cross pointers, spread deletion flags, then compact the edge
and slot arrays with prefix sums and rebuild the offsets and cross
pointers. One pass corresponds to one simulated parallel step.

In checked mode every shared-array write of a step is recorded, and two
writes landing on the same cell within one step count as an exclusive-write
violation (there should be none).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, Matching, assert_graph_invariants, matching_from_edge_ids
from .matchers import PhaseTrace, RoundStats
from .tiebreak import edge_salts, key_ranks, round_seed


@dataclass
class WriteLog:
    """Exclusive-write checker for the simulated steps.

    Each call to :meth:`record` is one simulated step's writes to one
    array; duplicate target indices within that call are conflicts.
    """

    steps: int = 0
    writes: int = 0
    conflicts: int = 0
    samples: list[tuple[str, str, int]] = field(default_factory=list)

    def record(self, step: str, array: str, indices: np.ndarray) -> None:
        self.steps += 1
        self.writes += int(indices.size)
        if indices.size:
            uniq, counts = np.unique(indices, return_counts=True)
            clashing = counts > 1
            if np.any(clashing):
                self.conflicts += int(counts[clashing].sum() - clashing.sum())
                for cell in uniq[clashing][:3]:
                    if len(self.samples) < 16:
                        self.samples.append((step, array, int(cell)))


@dataclass
class PramState:
    """Mutable working copy of the graph, evolving across phases.

    ``edge_orig`` keeps each surviving edge's id in the input graph, so the
    per-round tie-breaking keys and the reported matching are immune to the
    renumbering done by compaction. ``cross`` maps each incidence slot to
    the partner slot of the same edge; ``scratch`` is the per-edge cell the
    pointer-exchange steps write through.
    """

    num_vertices: int
    offsets: np.ndarray
    slot_vertex: np.ndarray
    slot_edge: np.ndarray
    cross: np.ndarray
    edge_u: np.ndarray
    edge_v: np.ndarray
    edge_weight: np.ndarray
    edge_orig: np.ndarray
    scratch: np.ndarray
    flags: np.ndarray

    @classmethod
    def from_graph(cls, g: Graph) -> "PramState":
        m = g.num_edges
        return cls(
            num_vertices=g.num_vertices,
            offsets=g.offsets.copy(),
            slot_vertex=g.slot_vertex.copy(),
            slot_edge=g.slot_edge.copy(),
            cross=np.full(2 * m, -1, dtype=np.int64),
            edge_u=g.edge_u.copy(),
            edge_v=g.edge_v.copy(),
            edge_weight=g.edge_weight.copy(),
            edge_orig=np.arange(m, dtype=np.int64),
            scratch=np.full(m, -1, dtype=np.int64),
            flags=np.zeros(m, dtype=np.int64),
        )

    @property
    def num_edges(self) -> int:
        return int(self.edge_u.size)

    @property
    def num_slots(self) -> int:
        return int(self.slot_edge.size)

    def to_graph(self) -> Graph:
        """Snapshot the current arrays as an (unvalidated) Graph."""
        return Graph(
            self.num_vertices,
            self.offsets.copy(),
            self.slot_vertex.copy(),
            self.slot_edge.copy(),
            self.edge_u.copy(),
            self.edge_v.copy(),
            self.edge_weight.copy(),
        )

    def check_consistent(self) -> None:
        """Full structural validation: graph invariants + cross involution."""
        assert_graph_invariants(self.to_graph())
        if self.num_slots:
            idx = np.arange(self.num_slots, dtype=np.int64)
            if not np.array_equal(self.cross[self.cross], idx):
                raise ValueError("cross pointers are not an involution")
            if not np.array_equal(self.slot_edge[self.cross], self.slot_edge):
                raise ValueError("cross pointer leaves its edge")
            if np.any(self.slot_vertex[self.cross] == self.slot_vertex):
                raise ValueError("cross pointer fails to switch endpoints")


def compute_cross_pointers(state: PramState, log: WriteLog | None = None) -> None:
    """Make each incidence slot know the index of its partner slot.

    Two write/read step pairs: the endpoint with the smaller vertex id
    deposits its slot index in the edge's scratch cell and the larger-id
    endpoint reads it, then the roles swap. Within each step exactly one of
    an edge's two slots writes, so writes stay exclusive.
    """
    m = state.num_edges
    if state.slot_edge.size != 2 * m:
        raise ValueError("slot array length disagrees with the edge count")
    if m == 0:
        state.cross = np.empty(0, dtype=np.int64)
        return
    counts = np.bincount(state.slot_edge, minlength=m)
    if not np.all(counts == 2):
        raise ValueError("inconsistent incidence: some edge is not referenced exactly twice")
    lo = np.minimum(state.edge_u, state.edge_v)
    min_side = state.slot_vertex == lo[state.slot_edge]
    if int(min_side.sum()) != m:
        raise ValueError("inconsistent incidence: endpoints and slot owners disagree")
    idx = np.arange(2 * m, dtype=np.int64)
    cross = np.empty(2 * m, dtype=np.int64)

    targets = state.slot_edge[min_side]
    state.scratch[targets] = idx[min_side]
    if log is not None:
        log.record("cross/min-writes", "edge.scratch", targets)
    cross[~min_side] = state.scratch[state.slot_edge[~min_side]]
    if log is not None:
        log.record("cross/max-reads", "slot.cross", idx[~min_side])

    targets = state.slot_edge[~min_side]
    state.scratch[targets] = idx[~min_side]
    if log is not None:
        log.record("cross/max-writes", "edge.scratch", targets)
    cross[min_side] = state.scratch[state.slot_edge[min_side]]
    if log is not None:
        log.record("cross/min-reads", "slot.cross", idx[min_side])
    state.cross = cross


def compaction_addresses(delete_flags: np.ndarray) -> np.ndarray:
    """New address of every entry after deleting the flagged ones.

    The inclusive prefix sum d of the flags counts deletions at or before
    each index, and index - d is where a surviving entry lands; addresses
    of deleted entries are meaningless and never used.
    """
    flags = np.asarray(delete_flags, dtype=np.int64)
    return np.arange(flags.size, dtype=np.int64) - np.cumsum(flags)


def segmented_broadcast(state: PramState, per_edge_value: np.ndarray, op=np.maximum) -> np.ndarray:
    """Reduce a per-edge value over each vertex's incident edges and deliver
    the segment total to every slot of the segment.

    Segments are the per-vertex slot ranges given by the offsets; ``op``
    must be an associative numpy ufunc (max, add, ...).
    """
    if state.num_slots == 0:
        return np.empty(0, dtype=per_edge_value.dtype)
    slot_val = per_edge_value[state.slot_edge]
    lengths = np.diff(state.offsets)
    nonempty = lengths > 0
    seg_totals = op.reduceat(slot_val, state.offsets[:-1][nonempty])
    return np.repeat(seg_totals, lengths[nonempty])


def pram_phase(
    state: PramState,
    round_seed_value: int,
    log: WriteLog | None = None,
) -> np.ndarray:
    """One parallel local max phase; returns the matched original edge ids.

    Steps: (1) per-edge keys, (2) per-vertex heaviest edge by segmented max
    broadcast, (3) the smaller-id endpoint matches an edge that is heaviest
    on both sides (partner checked through the cross pointer) and flags it,
    (4) deletion flags spread over all edges of matched vertices, (5)
    prefix sums over edge and slot deletion flags give every survivor its
    compacted address (old index minus deletions before it), (6) survivors
    copy over, slot pointers are rewritten, offsets are rebuilt from the
    surviving degrees and cross pointers recomputed.
    """
    m = state.num_edges
    if m == 0:
        return np.empty(0, dtype=np.int64)
    idx = np.arange(2 * m, dtype=np.int64)

    # step 1: per-edge tie-breaking keys, encoded as dense ranks
    salts = edge_salts(round_seed_value, state.edge_orig)
    ranks = key_ranks(state.edge_weight, salts, state.edge_orig)

    # step 2: heaviest incident edge at every vertex, delivered per slot
    best = segmented_broadcast(state, ranks, np.maximum)

    # step 3: match edges that are heaviest at both endpoints
    lo = np.minimum(state.edge_u, state.edge_v)
    min_side = state.slot_vertex == lo[state.slot_edge]
    slot_rank = ranks[state.slot_edge]
    wins_here = best == slot_rank
    wins_there = best[state.cross] == slot_rank  # concurrent read, exclusive write
    winner_slots = min_side & wins_here & wins_there
    state.flags[:] = 0
    matched_edges = state.slot_edge[winner_slots]
    state.flags[matched_edges] = 1
    if log is not None:
        log.record("match/flag-writes", "edge.flag", matched_edges)
    matched_orig = state.edge_orig[matched_edges]

    # step 4: spread deletion over every edge incident to a matched vertex
    spread = segmented_broadcast(state, state.flags, np.maximum)
    min_slots = idx[min_side]
    dead_edge = np.zeros(m, dtype=bool)
    dead_edge[state.slot_edge[min_slots]] = (
        spread[min_slots] | spread[state.cross[min_slots]]
    ).astype(bool)
    if log is not None:
        log.record("spread/edge-writes", "edge.flag", state.slot_edge[min_slots])

    # step 5: prefix sums give each survivor its new address
    dead_slot = dead_edge[state.slot_edge]
    new_edge_index = compaction_addresses(dead_edge)
    new_slot_index = compaction_addresses(dead_slot)

    # step 6: compact edges and slots, rewrite pointers
    keep_e = ~dead_edge
    if log is not None:
        log.record("compact/edge-copies", "edge.records", new_edge_index[keep_e])
    state.edge_u = state.edge_u[keep_e]
    state.edge_v = state.edge_v[keep_e]
    state.edge_weight = state.edge_weight[keep_e]
    state.edge_orig = state.edge_orig[keep_e]
    state.scratch = np.full(state.edge_u.size, -1, dtype=np.int64)
    state.flags = np.zeros(state.edge_u.size, dtype=np.int64)

    keep_s = ~dead_slot
    if log is not None:
        log.record("compact/slot-copies", "slot.records", new_slot_index[keep_s])
    state.slot_vertex = state.slot_vertex[keep_s]
    state.slot_edge = new_edge_index[state.slot_edge[keep_s]]

    surviving_deg = np.bincount(state.slot_vertex, minlength=state.num_vertices)
    state.offsets = np.concatenate([[0], np.cumsum(surviving_deg)]).astype(np.int64)
    compute_cross_pointers(state, log)
    return matched_orig


def pram_local_max(
    g: Graph,
    seed: int,
    checked: bool = False,
    rerandomize: bool = True,
) -> tuple[Matching, PhaseTrace]:
    """Parallel-phase local max; the matching equals the sequential one.

    In checked mode the run also records every simulated step's writes
    (``trace.write_log``) and validates the full array layout after every
    phase. ``trace.slot_ops`` charges one unit per live edge and per live
    incidence slot per phase (each phase makes a constant number of passes
    over them) plus the one-off setup, so it grows like the geometric sum
    of surviving edges: the linear-work evidence.
    """
    t0 = time.perf_counter()
    state = PramState.from_graph(g)
    log = WriteLog() if checked else None
    trace = PhaseTrace(write_log=log)
    slot_ops = g.num_vertices + 3 * g.num_edges  # initial layout + first cross pass
    compute_cross_pointers(state, log)
    if checked:
        state.check_consistent()
    matched_parts: list[np.ndarray] = []
    round_index = 0
    while state.num_edges:
        before = state.num_edges
        slot_ops += state.num_edges + state.num_slots
        matched = pram_phase(state, round_seed(seed, round_index, rerandomize), log)
        if checked:
            state.check_consistent()
        matched_parts.append(matched)
        trace.rounds.append(RoundStats(before, matched.size, before - state.num_edges))
        round_index += 1
    all_matched = (
        np.concatenate(matched_parts) if matched_parts else np.empty(0, dtype=np.int64)
    )
    trace.slot_ops = int(slot_ops)
    trace.wall_millis = (time.perf_counter() - t0) * 1000.0
    return matching_from_edge_ids(g, all_matched), trace

"""Deterministic tie-breaking keys shared by every matching engine.

Edges are ordered by the triple (weight, salt, edge id), compared
lexicographically. The salt is a 64-bit value derived from a counter-based
hash of (experiment seed, round number, edge id), so the same edge gets the
same salt in the sequential, PRAM and bulk-synchronous engines regardless of
scheduling. Because the edge id is part of the key, no two edges ever
compare equal, even when weights and salts collide.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

_UINT64_MASK = 0xFFFFFFFFFFFFFFFF

# SplitMix64 constants.
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX_A = np.uint64(0xBF58476D1CE4E5B9)
_MIX_B = np.uint64(0x94D049BB133111EB)

# Stream tag keeping per-vertex coin flips decorrelated from edge salts.
_COIN_STREAM = np.uint64(0xD6E8FEB86659FD93)


def mix64(values: np.ndarray) -> np.ndarray:
    """SplitMix64 finalizer over a uint64 array (wrapping arithmetic)."""
    with np.errstate(over="ignore"):
        x = values + _GOLDEN
        x ^= x >> np.uint64(30)
        x *= _MIX_A
        x ^= x >> np.uint64(27)
        x *= _MIX_B
        x ^= x >> np.uint64(31)
    return x


def round_seed(seed: int, round_index: int, rerandomize: bool = True) -> int:
    """Derive the per-round seed that keys all salts drawn in one round.

    With ``rerandomize`` disabled every round collapses onto round 0, so
    salts stay fixed for the whole run.
    """
    if round_index < 0:
        raise ValueError(f"round_index must be nonnegative, got {round_index}")
    r = round_index if rerandomize else 0
    base = np.array([seed & _UINT64_MASK], dtype=np.uint64)
    with np.errstate(over="ignore"):
        mixed = mix64(mix64(base) ^ np.uint64(r))
    return int(mixed[0])


def edge_salts(round_seed_value: int, edge_ids) -> np.ndarray:
    """Per-edge uint64 salts for one round, deterministic in (seed, round, id)."""
    ids = np.asarray(edge_ids, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return mix64(ids ^ np.uint64(round_seed_value & _UINT64_MASK))


def vertex_coins(round_seed_value: int, vertex_ids) -> np.ndarray:
    """Fair per-vertex coin flips for one round (True = blue, False = red).

    Drawn from a stream independent of :func:`edge_salts` so a vertex's
    colour never correlates with the salt of the same-numbered edge.
    """
    ids = np.asarray(vertex_ids, dtype=np.uint64)
    with np.errstate(over="ignore"):
        h = mix64(ids ^ np.uint64(round_seed_value & _UINT64_MASK) ^ _COIN_STREAM)
    return (h & np.uint64(1)).astype(bool)


class TieKey(NamedTuple):
    """Strict-total-order key for a single edge; compares lexicographically."""

    weight: float
    salt: int
    edge_id: int


#: Orders below every real edge; stands in for the uninitialized candidate.
DUMMY_KEY = TieKey(float("-inf"), 0, -1)


def tie_key(edge_id: int, weight: float, round_seed_value: int) -> TieKey:
    """The tie-breaking key of one edge under a given per-round seed."""
    salt = int(edge_salts(round_seed_value, np.array([edge_id], dtype=np.uint64))[0])
    return TieKey(float(weight), salt, int(edge_id))


def key_ranks(weights: np.ndarray, salts: np.ndarray, edge_ids: np.ndarray) -> np.ndarray:
    """Dense ranks of (weight, salt, id) keys; rank order equals key order.

    Ranks are only meaningful within the edge set they were computed for,
    but any two subsets containing the same edges agree on their relative
    order, which is what the engine-equivalence guarantees rest on.
    """
    order = np.lexsort((edge_ids, salts, weights))
    ranks = np.empty(order.size, dtype=np.int64)
    ranks[order] = np.arange(order.size, dtype=np.int64)
    return ranks


def weight_bits(weights: np.ndarray) -> np.ndarray:
    """Order-preserving uint64 encoding of nonnegative float weights.

    Nonnegative IEEE doubles compare exactly like their bit patterns, so
    per-vertex key maxima can be taken with integer scatter-max instead of
    sorting. Adding +0.0 first maps a possible -0.0 onto +0.0.
    """
    w = np.asarray(weights, dtype=np.float64) + 0.0
    return w.view(np.uint64)

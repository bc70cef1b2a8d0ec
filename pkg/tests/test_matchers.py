"""Sequential matcher semantics: hand-traceable cases plus properties."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from locmax import (
    build_graph,
    gen_random,
    gen_rgg,
    max_weight_matching_bruteforce,
    validate_matching,
)
from locmax.matchers import MATCHERS, gpa, greedy, hem, local_max_seq, rbm
from locmax.tiebreak import round_seed, tie_key, vertex_coins

from conftest import random_graph_edges


def _weights(g, matching):
    return matching.weight(g)


# ---------------------------------------------------------------- local max

def test_local_max_triangle_one_round(triangle):
    matching, trace = local_max_seq(triangle, seed=0)
    assert matching.edges == {2}  # the weight-3 edge dominates both others
    assert trace.total_rounds == 1


def test_local_max_path_takes_middle(path4):
    matching, _ = local_max_seq(path4, seed=0)
    assert matching.edges == {1}
    opt = max_weight_matching_bruteforce(path4).opt_weight
    assert opt == 4.0
    ratio = _weights(path4, matching) / opt
    assert ratio == 0.75
    assert ratio >= 0.5


def test_local_max_star_resolves_in_one_round(star9):
    matching, trace = local_max_seq(star9, seed=3)
    assert trace.total_rounds == 1
    assert trace.rounds[0].edges_matched == 1
    assert trace.rounds[0].edges_removed == 8
    assert len(matching.edges) == 1


def test_local_max_trace_accounts_for_every_edge():
    g = gen_random(128, 4, seed=2)
    _, trace = local_max_seq(g, seed=5)
    assert sum(r.edges_removed for r in trace.rounds) == g.num_edges
    for r in trace.rounds:
        assert r.edges_removed >= r.edges_matched


def test_local_max_round_bound():
    for seed in range(5):
        g = gen_random(1024, 4, seed=seed)
        _, trace = local_max_seq(g, seed=seed)
        assert trace.total_rounds <= 4 * math.log2(g.num_edges + 2)


def test_local_max_rerandomize_off_still_maximal_and_close():
    diffs = []
    for seed in range(5):
        g = gen_rgg(10, seed)
        m_on, _ = local_max_seq(g, seed, rerandomize=True)
        m_off, _ = local_max_seq(g, seed, rerandomize=False)
        for m in (m_on, m_off):
            check = validate_matching(g, m)
            assert check.valid and check.maximal
        w_on, w_off = _weights(g, m_on), _weights(g, m_off)
        diffs.append(abs(w_on - w_off) / w_on)
    assert sum(diffs) / len(diffs) <= 0.03


# ------------------------------------------------------------------- greedy

def test_greedy_path_takes_heaviest(path4):
    matching, _ = greedy(path4, seed=0)
    assert matching.edges == {1}
    assert _weights(path4, matching) == 3.0


def test_greedy_triangle(triangle):
    matching, _ = greedy(triangle, seed=0)
    assert matching.edges == {2}


def test_greedy_all_equal_weights_maximal():
    g = gen_random(64, 4, seed=1)
    unit = build_graph(
        [(u, v, 1.0) for u, v in zip(g.edge_u.tolist(), g.edge_v.tolist())],
        num_vertices=g.num_vertices,
    )
    for seed in range(3):
        matching, _ = greedy(unit, seed)
        check = validate_matching(unit, matching)
        assert check.valid and check.maximal


# ---------------------------------------------------------------------- gpa

def test_gpa_path_dp_beats_greedy(path4):
    matching, _ = gpa(path4, seed=0)
    assert matching.edges == {0, 2}  # dp picks the two outer edges: 2+2 > 3
    assert _weights(path4, matching) == 4.0


def test_gpa_even_cycle_dp():
    g = build_graph([(0, 1, 5.0), (1, 2, 1.0), (2, 3, 5.0), (3, 0, 1.0)])
    matching, _ = gpa(g, seed=0)
    assert _weights(g, matching) == 10.0
    assert matching.edges == {0, 2}


def test_gpa_rejects_odd_cycle(triangle):
    # scan order 3, 2, 1: the weight-1 edge would close a triangle
    matching, _ = gpa(triangle, seed=0)
    assert matching.edges == {2}
    check = validate_matching(triangle, matching)
    assert check.valid and check.maximal


def test_gpa_sweep_restores_maximality():
    # path a-b-c-d-e (10,1,1,10) plus a chord c-f (0.5) rejected for degree:
    # the path dp alone returns {ab, de} and leaves c-f addable
    g = build_graph(
        [(0, 1, 10.0), (1, 2, 1.0), (2, 3, 1.0), (3, 4, 10.0), (2, 5, 0.5)]
    )
    matching, _ = gpa(g, seed=0)
    check = validate_matching(g, matching)
    assert check.valid and check.maximal
    assert matching.edges == {0, 3, 4}
    assert _weights(g, matching) == 20.5


def test_gpa_never_below_oracle_half():
    for seed in range(30):
        rng = np.random.default_rng(seed)
        g = build_graph(random_graph_edges(rng, 10, 16), num_vertices=10)
        matching, _ = gpa(g, seed)
        opt = max_weight_matching_bruteforce(g).opt_weight
        if opt > 0:
            assert _weights(g, matching) / opt >= 0.5 - 1e-9


# ---------------------------------------------------------------------- hem

def test_hem_input_order_both_outer_edges(path4):
    # visiting a first: a grabs ab(2), then c grabs cd(2)
    matching, _ = hem(path4, seed=0)
    assert matching.edges == {0, 2}
    assert _weights(path4, matching) == 4.0


def test_hem_center_first_takes_heaviest():
    # same path relabeled so the inner vertex b comes first: b grabs bc(3)
    g = build_graph([(1, 0, 2.0), (0, 2, 3.0), (2, 3, 2.0)])
    matching, _ = hem(g, seed=0)
    assert matching.edges == {1}
    assert _weights(g, matching) == 3.0


def test_hem_isolated_vertex_skipped():
    g = build_graph([(1, 2, 1.0)], num_vertices=3)
    matching, _ = hem(g, seed=0)
    assert matching.edges == {0}


def test_hem_random_order_still_maximal():
    g = gen_random(256, 4, seed=4)
    for seed in range(3):
        matching, _ = hem(g, seed, randomize_order=True)
        check = validate_matching(g, matching)
        assert check.valid and check.maximal


# ---------------------------------------------------------------------- rbm

def _find_seed(predicate, limit=500):
    for seed in range(limit):
        if predicate(seed):
            return seed
    raise AssertionError("no seed with the requested colour pattern in range")


def test_rbm_single_edge_blue_red_matches_first_round():
    g = build_graph([(0, 1, 1.0)])

    def blue_red(seed):
        coins = vertex_coins(round_seed(seed, 0), np.array([0, 1]))
        return bool(coins[0]) != bool(coins[1])

    seed = _find_seed(blue_red)
    matching, trace = rbm(g, seed)
    assert matching.edges == {0}
    assert trace.total_rounds == 1


def test_rbm_single_edge_same_colour_defers():
    g = build_graph([(0, 1, 1.0)])

    def same(seed):
        coins = vertex_coins(round_seed(seed, 0), np.array([0, 1]))
        return bool(coins[0]) == bool(coins[1])

    seed = _find_seed(same)
    matching, trace = rbm(g, seed)
    assert trace.rounds[0].edges_matched == 0
    assert trace.total_rounds > 1
    assert matching.edges == {0}  # matched eventually


def test_rbm_star_center_accepts_heaviest_blue_proposal():
    weights = [0.3, 0.9, 0.5, 0.7]
    g = build_graph([(0, leaf, w) for leaf, w in zip(range(1, 5), weights)])

    def center_red_some_blue(seed):
        coins = vertex_coins(round_seed(seed, 0), np.arange(5))
        return (not coins[0]) and any(coins[1:])

    seed = _find_seed(center_red_some_blue)
    coins = vertex_coins(round_seed(seed, 0), np.arange(5))
    rs = round_seed(seed, 0)
    blue_edges = [k for k in range(4) if coins[k + 1]]
    expected = max(blue_edges, key=lambda k: tie_key(k, weights[k], rs))
    matching, trace = rbm(g, seed)
    assert trace.rounds[0].edges_matched == 1
    assert expected in matching.edges


def test_rbm_terminates_within_logarithmic_rounds():
    g = gen_random(128, 4, seed=0)
    bound = 64 * math.log2(g.num_edges + 2)
    for seed in range(100):
        matching, trace = rbm(g, seed)
        assert trace.total_rounds <= bound
        check = validate_matching(g, matching)
        assert check.valid and check.maximal
    single = build_graph([(0, 1, 1.0)])
    sbound = 64 * math.log2(3)
    for seed in range(100):
        _, trace = rbm(single, seed)
        assert trace.total_rounds <= sbound


# ------------------------------------------------------------ all matchers

@pytest.mark.parametrize("name", sorted(MATCHERS))
def test_every_matcher_handles_empty_graph(name):
    g = build_graph([], num_vertices=4)
    matching, trace = MATCHERS[name](g, 0)
    assert matching.edges == frozenset()
    check = validate_matching(g, matching)
    assert check.valid and check.maximal


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_all_matchers_valid_and_maximal(data):
    n = data.draw(st.integers(2, 16))
    m = data.draw(st.integers(0, min(24, n * (n - 1) // 2)))
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32)))
    g = build_graph(random_graph_edges(rng, n, m), num_vertices=n)
    seed = data.draw(st.integers(0, 10_000))
    for name, matcher in MATCHERS.items():
        matching, trace = matcher(g, seed)
        check = validate_matching(g, matching)
        assert check.valid and check.maximal, f"{name}: {check.detail}"
        assert sum(r.edges_removed for r in trace.rounds) == g.num_edges
        for r in trace.rounds:
            assert r.edges_removed >= r.edges_matched


def test_local_max_first_round_candidates_match_python_loop():
    # independent oracle for the candidate mechanism: an edge is matched in
    # round 1 iff python-loop maxima over both endpoints' incident keys
    # select it
    for seed in range(10):
        rng = np.random.default_rng(seed + 50)
        g = build_graph(random_graph_edges(rng, 12, 20), num_vertices=12)
        rs = round_seed(seed, 0)
        keys = {k: tie_key(k, float(g.edge_weight[k]), rs) for k in range(g.num_edges)}

        def candidate(v):
            incident = g.incident_edges(v).tolist()
            return max(incident, key=keys.__getitem__) if incident else None

        expect = {
            k
            for k in range(g.num_edges)
            if candidate(g.edge_u[k]) == k and candidate(g.edge_v[k]) == k
        }
        _, trace = local_max_seq(g, seed)
        matching, _ = local_max_seq(g, seed)
        if g.num_edges:
            got_round1 = trace.rounds[0].edges_matched
            assert got_round1 == len(expect)
            assert expect <= matching.edges


def test_all_zero_weights_still_maximal():
    g = build_graph([(0, 1, 0.0), (1, 2, 0.0), (2, 3, 0.0), (3, 0, 0.0)])
    for name, matcher in MATCHERS.items():
        matching, _ = matcher(g, 5)
        check = validate_matching(g, matching)
        assert check.valid and check.maximal, name
        assert len(matching.edges) == 2  # a 4-cycle always pairs off fully


def test_localmax_and_greedy_between_half_opt_and_opt():
    for seed in range(40):
        rng = np.random.default_rng(seed + 1000)
        g = build_graph(random_graph_edges(rng, 9, 14), num_vertices=9)
        opt = max_weight_matching_bruteforce(g).opt_weight
        if opt == 0:
            continue
        for alg in ("localmax", "greedy"):
            w = _weights(g, MATCHERS[alg](g, seed)[0])
            assert 0.5 * opt - 1e-9 <= w <= opt + 1e-9

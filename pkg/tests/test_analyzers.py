from itertools import combinations, product

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wcgames.analyzers import (CapExceeded, ClauseSet, Hypergraph, block_occurrences, chromatic_number,
                               clique_number, independence_number, is_one_degenerate, is_proper_coloring,
                               is_r_colorable, is_satisfiable, lll_degree_bound, lll_degree_condition,
                               lll_occurrence_condition, max_degree, maximum_independent_set, satisfies)
from wcgames.boards import ClauseBoard, HypergraphBoard

FANO = [(0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 5)]


def complete(n, k):
    return Hypergraph(n, k, tuple(combinations(range(n), k)))


def brute_colorable(H, r):
    return any(is_proper_coloring(H, c) for c in product(range(r), repeat=H.n))


def brute_sat(C):
    return any(satisfies(C, a) for a in product((0, 1), repeat=C.n))


def scc_two_sat(C):
    G = nx.DiGraph()
    G.add_nodes_from(range(2 * C.n))
    for c in C.clauses:
        a, b = c if len(c) == 2 else (c[0], c[0])
        G.add_edge(a ^ 1, b)
        G.add_edge(b ^ 1, a)
    comp = {}
    for i, scc in enumerate(nx.strongly_connected_components(G)):
        for v in scc:
            comp[v] = i
    return all(comp[2 * i] != comp[2 * i + 1] for i in range(C.n))


def hypergraphs(max_n=7):
    @st.composite
    def build(draw):
        n = draw(st.integers(2, max_n))
        k = draw(st.integers(2, n))
        all_edges = list(combinations(range(n), k))
        edges = draw(st.lists(st.sampled_from(all_edges), max_size=12))
        return Hypergraph(n, k, tuple(edges))
    return build()


def test_triangle_and_single_edge():
    K3 = complete(3, 2)
    assert not is_r_colorable(K3, 2)[0]
    ok, col = is_r_colorable(K3, 3)
    assert ok and is_proper_coloring(K3, col)
    for k in (2, 3, 5):
        assert is_r_colorable(Hypergraph(k, k, (tuple(range(k)),)), 2)[0]


def test_fano_not_two_colorable():
    H = Hypergraph(7, 3, tuple(FANO))
    assert not brute_colorable(H, 2)
    assert not is_r_colorable(H, 2)[0]
    assert is_r_colorable(H, 3)[0]


def test_k5_parameters():
    K5 = complete(5, 2)
    assert (chromatic_number(K5), independence_number(K5), clique_number(K5)) == (5, 1, 5)
    assert max_degree(complete(4, 2)) == 3


def test_edgeless_conventions():
    H = Hypergraph(6, 3, ())
    assert chromatic_number(H) == 1
    assert independence_number(H) == 6
    assert clique_number(H) == 2 and H.num_edges == 0
    assert max_degree(H) == 0
    assert block_occurrences(ClauseSet(4, ())) == [0, 0, 0, 0]


@settings(max_examples=150, deadline=None)
@given(hypergraphs())
def test_colorability_matches_brute_force(H):
    for r in (2, 3):
        ok, col = is_r_colorable(H, r)
        assert ok == brute_colorable(H, r)
        if ok:
            assert is_proper_coloring(H, col)


@settings(max_examples=100, deadline=None)
@given(hypergraphs())
def test_independence_and_clique_brute_force(H):
    edges = set(H.edges)
    alpha = max(len(S) for r in range(H.n + 1) for S in combinations(range(H.n), r)
                if not any(e in edges for e in combinations(S, H.k)))
    assert independence_number(H) == alpha
    mis = maximum_independent_set(H)
    assert len(mis) == alpha and not any(set(e) <= set(mis) for e in H.edges)
    omega = max(len(S) for r in range(H.n + 1) for S in combinations(range(H.n), r)
                if all(e in edges for e in combinations(S, H.k)))
    assert clique_number(H) == omega


@settings(max_examples=100, deadline=None)
@given(hypergraphs())
def test_chi_times_alpha_at_least_n(H):
    assert chromatic_number(H) * independence_number(H) >= H.n


def test_random_three_uniform_chi_alpha():
    rng = np.random.default_rng(0)
    allE = list(combinations(range(7), 3))
    for _ in range(30):
        H = Hypergraph(7, 3, tuple(e for e in allE if rng.random() < 0.5))
        assert chromatic_number(H) * independence_number(H) >= 7


def test_sat_examples():
    all4 = ClauseSet(2, ((0, 2), (0, 3), (1, 2), (1, 3)))
    assert not is_satisfiable(all4)[0]
    ok, a = is_satisfiable(ClauseSet(3, ((1, 4),)))
    assert ok and satisfies(ClauseSet(3, ((1, 4),)), a)
    assert is_satisfiable(ClauseSet(3, ()))[0]
    assert not is_satisfiable(ClauseSet(1, ((0,), (1,))))[0]


def test_sat_matches_truth_table_at_n10():
    board = ClauseBoard(10, 2)
    rng = np.random.default_rng(1)
    for _ in range(200):
        m = int(rng.integers(1, 25))
        C = ClauseSet.from_board(board, rng.choice(board.size, m, replace=False).tolist())
        ok, a = is_satisfiable(C)
        assert ok == brute_sat(C)
        if ok:
            assert satisfies(C, a)


@pytest.mark.parametrize("k", [3, 4])
def test_sat_matches_truth_table_wider(k):
    board = ClauseBoard(9, k)
    rng = np.random.default_rng(k)
    for _ in range(100):
        m = int(rng.integers(1, 60))
        C = ClauseSet.from_board(board, rng.choice(board.size, m, replace=False).tolist())
        assert is_satisfiable(C)[0] == brute_sat(C)


def test_two_sat_matches_scc_at_scale():
    board = ClauseBoard(120, 2)
    rng = np.random.default_rng(2)
    for _ in range(60):
        m = int(rng.integers(80, 200))
        C = ClauseSet.from_board(board, rng.choice(board.size, m, replace=False).tolist())
        assert is_satisfiable(C, max_vars=120)[0] == scc_two_sat(C)


def test_caps():
    with pytest.raises(CapExceeded):
        is_satisfiable(ClauseSet(41, ()))
    with pytest.raises(CapExceeded):
        is_r_colorable(Hypergraph(30, 2, ()), 2)


def test_block_occurrences_recount():
    board = ClauseBoard(6, 3)
    rng = np.random.default_rng(4)
    for _ in range(20):
        ids = rng.choice(board.size, 15, replace=False).tolist()
        C = ClauseSet.from_board(board, ids)
        recount = [sum(1 for c in ids if v in board.variables(c)) for v in range(6)]
        assert block_occurrences(C) == recount


def test_lll_conditions():
    assert lll_degree_bound(7) == pytest.approx(128 / 56)
    H7 = Hypergraph(14, 7, ((0, 1, 2, 3, 4, 5, 6), (0, 7, 8, 9, 10, 11, 12)))
    assert max_degree(H7) == 2 and lll_degree_condition(H7)
    assert not lll_degree_condition(Hypergraph(2, 2, ((0, 1),)))
    assert lll_occurrence_condition(ClauseSet(8, ((0, 2, 4, 6, 8, 10),)), 6)
    assert not lll_occurrence_condition(ClauseSet(4, ((0, 2), (1, 4))), 2)


def test_degeneracy_examples():
    forest = Hypergraph(6, 2, ((0, 1), (1, 2), (1, 3), (4, 5)))
    ok, order = is_one_degenerate(forest)
    assert ok and sorted(order) == list(range(6))
    assert not is_one_degenerate(complete(3, 2))[0]


def universal_degenerate(H):
    """Every nonempty vertex subset has a vertex in at most one induced edge."""
    for r in range(1, H.n + 1):
        for S in combinations(range(H.n), r):
            inside = [e for e in H.edges if set(e) <= set(S)]
            if all(sum(v in e for e in inside) >= 2 for v in S):
                return False
    return True


def test_degeneracy_matches_subset_definition_exhaustively():
    allE = list(combinations(range(5), 3))
    for m in range(5):
        for edges in combinations(allE, m):
            H = Hypergraph(5, 3, edges)
            ok, order = is_one_degenerate(H)
            assert ok == universal_degenerate(H)
            if ok:
                for i, v in enumerate(order):
                    later = set(order[i:])
                    assert sum(1 for e in H.edges if v in e and set(e) <= later) <= 1


def test_hypergraph_validation():
    with pytest.raises(ValueError):
        Hypergraph(3, 2, ((0, 3),))
    with pytest.raises(ValueError):
        ClauseSet(2, ((0, 1),))


def test_from_board():
    board = HypergraphBoard(5, 2)
    H = Hypergraph.from_board(board, [0, 1, 2])
    assert H.edges == ((0, 1), (0, 2), (1, 2))

from itertools import combinations
from math import comb

import pytest
from hypothesis import given, strategies as st

from wcgames.boards import (CLIENT, WAITER, ClauseBoard, HypergraphBoard, OwnedSets, PlainBoard,
                            board_from_description, elements_of, literal, literal_str, mask_of,
                            rank_subset, unrank_subset)


def colex_order(n, k):
    # independent oracle: sort k-subsets by their reversed tuples
    return sorted(combinations(range(n), k), key=lambda s: tuple(reversed(s)))


def test_first_edge_and_count():
    b = HypergraphBoard(5, 2)
    assert b.unrank_edge(0) == (0, 1)
    assert b.edge_count == 10


@pytest.mark.parametrize("n,k", [(6, 3), (5, 2), (8, 4), (7, 7)])
def test_ranking_matches_colex_enumeration(n, k):
    b = HypergraphBoard(n, k)
    expected = colex_order(n, k)
    assert [b.unrank_edge(i) for i in range(b.edge_count)] == expected
    assert all(b.rank_edge(e) == i for i, e in enumerate(expected))


@pytest.mark.parametrize("n", range(2, 9))
def test_ranking_bijective_up_to_eight(n):
    for k in range(2, n + 1):
        b = HypergraphBoard(n, k)
        seen = {b.unrank_edge(i) for i in range(b.edge_count)}
        assert len(seen) == comb(n, k)
        assert all(b.rank_edge(b.unrank_edge(i)) == i for i in range(b.edge_count))


@given(st.sets(st.integers(0, 60), min_size=1, max_size=8))
def test_rank_unrank_roundtrip(s):
    assert unrank_subset(rank_subset(s), len(s)) == tuple(sorted(s))


def test_edges_at_vertex():
    assert len(HypergraphBoard(5, 2).edges_at_vertex(0)) == 4
    b = HypergraphBoard(6, 3)
    brute = [i for i, e in enumerate(b.edges) if 2 in e]
    assert b.edges_at_vertex(2) == brute and len(brute) == 10


@pytest.mark.parametrize("n,k", [(6, 3), (7, 2), (5, 5)])
def test_incidence_degree_and_double_counting(n, k):
    b = HypergraphBoard(n, k)
    hits = [0] * b.edge_count
    for v in range(n):
        lst = b.edges_at_vertex(v)
        assert len(lst) == comb(n - 1, k - 1)
        for e in lst:
            hits[e] += 1
    assert hits == [k] * b.edge_count


def test_board_needs_k_at_least_two():
    with pytest.raises(ValueError):
        HypergraphBoard(4, 1)


def test_rank_edge_rejects_bad_input():
    b = HypergraphBoard(5, 2)
    with pytest.raises(ValueError):
        b.rank_edge([0, 0])
    with pytest.raises(ValueError):
        b.rank_edge([1, 5])
    with pytest.raises(ValueError):
        b.unrank_edge(10)


def test_clause_board_counts_and_first_id():
    assert ClauseBoard(3, 2).clause_count == 12
    assert ClauseBoard(2, 2).encode_clause([literal(0), literal(1)]) == 0


@pytest.mark.parametrize("n,k", [(3, 2), (4, 3), (5, 2), (6, 3)])
def test_clause_roundtrip_exhaustive(n, k):
    b = ClauseBoard(n, k)
    seen = set()
    for c in range(b.clause_count):
        lits = b.decode_clause(c)
        assert b.encode_clause(lits) == c
        assert len({l >> 1 for l in lits}) == k
        seen.add(lits)
    assert len(seen) == 2 ** k * comb(n, k)


def test_clauses_with_block():
    b = ClauseBoard(3, 2)
    brute = [c for c in range(12) if 1 in {l >> 1 for l in b.decode_clause(c)}]
    assert b.clauses_with_block(1) == brute and len(brute) == 8
    assert ClauseBoard(2, 2).clauses_with_block(1) == [0, 1, 2, 3]


@pytest.mark.parametrize("n,k", [(4, 2), (5, 3), (6, 2)])
def test_block_incidence(n, k):
    b = ClauseBoard(n, k)
    hits = [0] * b.clause_count
    for i in range(n):
        lst = b.clauses_with_block(i)
        assert len(lst) == 2 ** k * comb(n - 1, k - 1)
        for c in lst:
            hits[c] += 1
    assert hits == [k] * b.clause_count


def test_encode_rejects_complementary_literals():
    b = ClauseBoard(3, 2)
    with pytest.raises(ValueError):
        b.encode_clause([literal(0), literal(0, True)])
    with pytest.raises(ValueError):
        b.encode_clause([literal(0)])


def test_literal_names():
    assert literal_str(literal(0)) == "x1"
    assert literal_str(literal(2, True)) == "~x3"
    assert ClauseBoard(2, 2).clause_str(3) == "(~x1 | ~x2)"


def test_describe_roundtrip():
    for b in (PlainBoard(7), HypergraphBoard(5, 3), ClauseBoard(4, 2)):
        assert board_from_description(b.describe()) == b


@given(st.integers(1, 40), st.lists(st.tuples(st.integers(0, 39), st.booleans()), max_size=60))
def test_owned_sets_partition(size, moves):
    owned = OwnedSets(size)
    for e, to_client in moves:
        if e < size and owned.owner(e) == 0:
            owned.claim(e, CLIENT if to_client else WAITER)
    c, w, f = owned.client_elements(), owned.waiter_elements(), set(owned.free_elements())
    assert not (c & w) and not (c & f) and not (w & f)
    assert c | w | f == set(range(size))
    assert owned.free_count == len(f)


def test_owned_sets_rejects_double_claim():
    owned = OwnedSets(3)
    owned.claim(1, CLIENT)
    with pytest.raises(ValueError):
        owned.claim(1, WAITER)
    with pytest.raises(ValueError):
        OwnedSets(3, 1, 1)


@given(st.sets(st.integers(0, 100)))
def test_masks(s):
    assert elements_of(mask_of(s)) == sorted(s)

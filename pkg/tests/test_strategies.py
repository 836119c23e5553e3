import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wcgames.boards import CLIENT, WAITER, ClauseBoard, HypergraphBoard, OwnedSets, PlainBoard
from wcgames.engine import GameRules, GameState, Kind, play
from wcgames.families import clique_family, explicit_family, phi_potential
from wcgames.solver import Solver
from wcgames.strategies import (AnchorIncidence, CWClientPotential, CWWaiterBatch, DangerGreedyWaiter,
                                GreedyDegreeClient, PotentialLedger, RandomClient, RandomWaiter,
                                WCClientPotential, WCWaiterPotential, make_client, make_waiter)

# greedy-danger offer loses this instance (criterion value 0.4727 < 1/2) to a best-response Client
GREEDY_COUNTEREXAMPLE = (9, 1, [[1, 2, 5], [0, 1, 2, 3, 4, 5, 6, 8], [2, 4, 7], [0, 1, 3, 4, 5, 6, 7, 8],
                                [0, 2, 3, 5, 6, 7], [0, 2, 3, 5, 7], [0, 2, 3, 4, 5, 6, 8], [0, 1, 6, 7, 8],
                                [0, 2, 3, 4, 5, 6, 7, 8], [0, 6, 8]])


def state_for(board, family, kind, q, client=(), waiter=()):
    owned = OwnedSets(board.size, sum(1 << e for e in client), sum(1 << e for e in waiter))
    return GameState(board, family, GameRules(kind, q), owned)


def ready(strategy, state, seed=0):
    strategy.reset(state, np.random.default_rng(seed))
    return strategy


# oracles computed straight from the definitions

def avoid_value(family, client, waiter, q):
    return math.fsum((q + 1.0) ** -len(A - client) for A in family if not A & waiter)


def hit_value(family, client, waiter, base):
    return math.fsum(base ** len(A - waiter) for A in family if not A & client)


def test_wc_client_examples():
    F = explicit_family([{0, 1}])
    s = state_for(PlainBoard(3), F, Kind.WC, 1)
    assert ready(WCClientPotential(), s).pick(s, (0, 2)) == 2
    G = explicit_family([{0}])
    s = state_for(PlainBoard(2), G, Kind.WC, 1)
    assert ready(WCClientPotential(), s).pick(s, (0, 1)) == 1


@settings(max_examples=80, deadline=None)
@given(st.integers(3, 6), st.integers(1, 3), st.data())
def test_wc_client_pick_beats_average(X, q, data):
    sets = data.draw(st.lists(st.sets(st.integers(0, X - 1), min_size=1), min_size=1, max_size=8))
    F = explicit_family(sets)
    taken = data.draw(st.lists(st.integers(0, X - 1), unique=True, max_size=X - 1))
    split = data.draw(st.integers(0, len(taken)))
    client, waiter = set(taken[:split]), set(taken[split:])
    free = [e for e in range(X) if e not in taken]
    t = min(q + 1, len(free))
    offer = tuple(data.draw(st.permutations(free))[:t])
    s = state_for(PlainBoard(X), F, Kind.WC, q, client, waiter)
    x = ready(WCClientPotential(), s).pick(s, offer)
    after = {y: avoid_value(F, client | {y}, waiter | (set(offer) - {y}), q) for y in offer}
    assert after[x] <= sum(after.values()) / len(after) + 1e-9
    assert after[x] <= min(after.values()) + 1e-9
    if t == q + 1:
        assert after[x] <= avoid_value(F, client, waiter, q) + 1e-9


def test_cw_client_examples():
    F = explicit_family([{0, 1}, {2}])
    s = state_for(PlainBoard(3), F, Kind.CW, 1)
    c = ready(CWClientPotential(), s)
    post = c.post_potentials(s, (0, 2))
    assert post == {0: pytest.approx(1.0), 2: pytest.approx(0.5)}
    assert c.pick(s, (0, 2)) == 2
    G = explicit_family([{0}])
    for q in (1, 3):
        s = state_for(PlainBoard(4), G, Kind.CW, q)
        assert ready(CWClientPotential(), s).pick(s, (3, 0, 2)) == 0


def test_cw_client_tie_goes_to_lowest_id():
    F = explicit_family([{0, 3}, {1, 4}])
    s = state_for(PlainBoard(5), F, Kind.CW, 1)
    assert ready(CWClientPotential(), s).pick(s, (1, 0)) == 0


@settings(max_examples=80, deadline=None)
@given(st.integers(3, 7), st.integers(1, 3), st.data())
def test_cw_client_potential_never_rises(X, q, data):
    sets = data.draw(st.lists(st.sets(st.integers(0, X - 1), min_size=1), min_size=1, max_size=8))
    F = explicit_family(sets)
    free = list(range(X))
    t = data.draw(st.integers(1, q + 1))
    offer = tuple(data.draw(st.permutations(free))[:t])
    s = state_for(PlainBoard(X), F, Kind.CW, q)
    x = ready(CWClientPotential(), s).pick(s, offer)
    base = q / (q + 1)
    before = hit_value(F, set(), set(), base)
    after = hit_value(F, {x}, set(offer) - {x}, base)
    assert after <= before + 1e-9


def test_cw_client_hits_all_sets_when_criterion_holds():
    rng = np.random.default_rng(3)
    checked = 0
    while checked < 25:
        X, q = int(rng.integers(4, 8)), int(rng.integers(1, 3))
        F = explicit_family([set(rng.choice(X, int(rng.integers(1, 5)), replace=False).tolist())
                             for _ in range(int(rng.integers(1, 5)))])
        if hit_value(F, set(), set(), q / (q + 1)) >= 1:
            continue
        checked += 1
        s = Solver(PlainBoard(X), F, GameRules(Kind.CW, q), "transversal",
                   client_policy=CWClientPotential(F))
        assert s.goal(0, 0)


def test_wc_waiter_examples():
    F = explicit_family([{0}, {1}])
    s = state_for(PlainBoard(4), F, Kind.WC, 1)
    assert sorted(ready(WCWaiterPotential(), s).offer(s)) == [0, 1]
    board = HypergraphBoard(4, 2)
    singles = clique_family(board, 2)
    solver = Solver(board, singles, GameRules(Kind.WC, 1), "contain", waiter_policy=WCWaiterPotential(singles))
    assert solver.solve().winner == "waiter"


def test_minimax_offer_fixes_greedy_counterexample():
    X, q, sets = GREEDY_COUNTEREXAMPLE
    F = explicit_family(sets)
    assert math.fsum(2.0 ** (-len(A) / (2 * q - 1)) for A in F) < 0.5
    good = Solver(PlainBoard(X), F, GameRules(Kind.WC, q), "transversal", waiter_policy=WCWaiterPotential(F))
    assert good.goal(0, 0)
    greedy = Solver(PlainBoard(X), F, GameRules(Kind.WC, q), "transversal", waiter_policy=DangerGreedyWaiter(F))
    assert not greedy.goal(0, 0)


def test_wc_waiter_offer_size_and_budget():
    F = explicit_family([set(range(i, i + 4)) for i in range(0, 20, 2)])
    s = state_for(PlainBoard(24), F, Kind.WC, 3)
    w = ready(WCWaiterPotential(F, offer_budget=50), s)
    assert len(w.candidates(s)) < 24
    off = w.offer(s)
    assert len(off) == 4 and len(set(off)) == 4


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 12), st.sampled_from(["avoid", "hit"]), st.data())
def test_ledger_incremental_matches_recompute(X, mode, data):
    sets = data.draw(st.lists(st.sets(st.integers(0, X - 1), min_size=1), max_size=10))
    F = explicit_family(sets)
    base = data.draw(st.sampled_from([0.5, 2 / 3, 2 ** (-1 / 3)]))
    led = PotentialLedger(F, base, X, mode)
    owned = OwnedSets(X)
    for e in data.draw(st.permutations(list(range(X)))):
        owned.claim(e, data.draw(st.sampled_from([CLIENT, WAITER])))
        led.sync(owned)
        client, waiter = owned.client_elements(), owned.waiter_elements()
        if mode == "avoid":
            direct = math.fsum(base ** len(A - client) for A in F if not A & waiter)
        else:
            direct = hit_value(F, client, waiter, base)
        assert led.value == pytest.approx(direct, abs=1e-9)
        assert led.recompute() == pytest.approx(direct, abs=1e-12)


def test_ledger_rebuilds_on_non_extension():
    F = explicit_family([{0, 1}, {2}])
    led = PotentialLedger(F, 0.5, 3, "avoid")
    led.sync(OwnedSets(3, client=0b001))
    led.sync(OwnedSets(3, waiter=0b100))
    assert led.value == pytest.approx(0.25)


def test_batch_offer_example():
    # q=5, k=2: Client's edge {0,1}; exactly two free edges left at each end
    board = HypergraphBoard(6, 2)
    e01 = board.rank_edge((0, 1))
    keep_free = {board.rank_edge(e) for e in [(0, 2), (0, 3), (1, 4), (1, 5), (2, 3), (4, 5)]}
    waiter = [e for e in range(board.size) if e != e01 and e not in keep_free]
    s = state_for(board, None, Kind.CW, 5, client=[e01], waiter=waiter)
    w = ready(CWWaiterBatch(), s)
    w.observe(s, (e01,), e01)
    off = w.offer(s)
    assert sorted(off) == sorted(board.rank_edge(e) for e in [(0, 2), (0, 3), (1, 4), (1, 5)])


def test_batch_offer_takes_floor_of_bias_over_k():
    board = HypergraphBoard(8, 2)
    e = board.rank_edge((2, 5))
    s = state_for(board, None, Kind.CW, 5, client=[e])
    w = ready(CWWaiterBatch(), s)
    w.observe(s, (e,), e)
    off = w.offer(s)
    at2 = [x for x in off if 2 in board.unrank_edge(x)]
    at5 = [x for x in off if 5 in board.unrank_edge(x)]
    assert len(off) == 6 and len(at2) == 3 and len(at5) == 3


@pytest.mark.parametrize("board,q", [(HypergraphBoard(7, 2), 5), (HypergraphBoard(7, 3), 8),
                                     (ClauseBoard(5, 2), 7)])
def test_batches_disjoint_incident_and_exhaustive(board, q):
    inc = AnchorIncidence(board)
    for g in range(5):
        waiter = CWWaiterBatch()
        s = GameState(board, None, GameRules(Kind.CW, q))
        client = RandomClient()
        waiter.reset(s, np.random.default_rng(g))
        client.reset(s, np.random.default_rng(100 + g))
        offered = set()
        while not s.finished:
            if waiter.claims:
                src = waiter.claims[-1]
                free = s.owned.free
                batches = waiter.batches(src, free, (q + 1) // board.k)
                flat = [x for b in batches for x in b]
                assert len(flat) == len(set(flat))
                for a, b in zip(inc.anchors(src), batches):
                    assert all(a in inc.anchors(x) for x in b)
            off = waiter.offer(s)
            assert 1 <= len(off) <= q + 1
            offered |= set(off)
            pick = client.pick(s, off)
            s.apply(off, pick)
            waiter.observe(s, off, pick)
        assert offered == set(range(board.size))


def test_random_strategies_are_seeded():
    F = explicit_family([{0}])
    s = state_for(PlainBoard(12), F, Kind.CW, 3)
    a = ready(RandomWaiter(), s, 5).offer(s)
    b = ready(RandomWaiter(), s, 5).offer(s)
    assert a == b
    assert ready(RandomClient(), s, 9).pick(s, a) == ready(RandomClient(), s, 9).pick(s, a)


def test_random_client_uniform():
    s = state_for(PlainBoard(5), explicit_family([]), Kind.WC, 4)
    c = ready(RandomClient(), s, 42)
    offer = (0, 1, 2, 3, 4)
    counts = np.bincount([c.pick(s, offer) for _ in range(10_000)], minlength=5)
    chi2 = float(((counts - 2000) ** 2 / 2000).sum())
    assert chi2 < 18.47  # 99.9% quantile, 4 degrees of freedom
    sigma = math.sqrt(10_000 * 0.2 * 0.8)
    assert np.all(np.abs(counts - 2000) < 3 * sigma)


@pytest.mark.parametrize("X,q", [(12, 1), (12, 2), (12, 3), (20, 4)])
def test_random_vs_random_client_size(X, q):
    for g in range(5):
        t = play(PlainBoard(X), explicit_family([]), GameRules(Kind.WC, q), RandomWaiter(), RandomClient(),
                 seed=3, game_index=g)
        assert len(t.client_final) == X // (q + 1)


def test_greedy_degree_client_prefers_loaded_anchor():
    board = HypergraphBoard(6, 2)
    e = board.rank_edge((0, 1))
    s = state_for(board, None, Kind.CW, 3, client=[e])
    c = ready(GreedyDegreeClient(), s)
    offer = (board.rank_edge((2, 3)), board.rank_edge((1, 4)), board.rank_edge((4, 5)))
    assert c.pick(s, offer) == board.rank_edge((1, 4))


def test_registry():
    F = explicit_family([{0}])
    assert make_waiter("wc-waiter-potential", F).family is F
    assert make_client("cw-client-potential", F).name == "cw-client-potential"
    with pytest.raises(KeyError):
        make_waiter("nope")
    with pytest.raises(KeyError):
        make_client("nope")


def test_wc_client_potential_guarantee_against_best_response():
    rng = np.random.default_rng(8)
    checked = 0
    while checked < 25:
        X, q = int(rng.integers(4, 9)), int(rng.integers(1, 3))
        F = explicit_family([set(rng.choice(X, int(rng.integers(2, 5)), replace=False).tolist())
                             for _ in range(int(rng.integers(1, 6)))])
        if phi_potential(F, q) >= 1:
            continue
        checked += 1
        s = Solver(PlainBoard(X), F, GameRules(Kind.WC, q), "contain", client_policy=WCClientPotential(F))
        assert not s.goal(0, 0)  # Waiter cannot force a fully claimed set

"""Invariant checks run by ``wcgames verify`` and the acceptance tests.

Each ``check_*`` function returns a :class:`CheckReport`.  ``scale`` < 1
shrinks the instance counts for quick runs.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement

import numpy as np

from .analyzers import (ClauseSet, Hypergraph, chromatic_number, clique_number,
                        independence_number, is_one_degenerate, is_proper_coloring,
                        is_r_colorable, is_satisfiable, lll_degree_bound,
                        lll_occurrence_bound, satisfies)
from .boards import ClauseBoard, HypergraphBoard, PlainBoard
from .bounds import all_bounds, gap_factor
from .engine import GameRules, Kind, play
from .experiments import property_objective, random_baseline
from .extraction import ExtractionFailed, extract_assignment, greedy_two_coloring
from .families import (client_cw_criterion, explicit_family, local_density_family,
                       phi_potential, waiter_wc_criterion)
from .solver import BudgetExceeded, MonotonicityError, Solver, exact_threshold_bias
from .strategies import (AnchorIncidence, CWClientPotential, CWWaiterBatch, DangerGreedyWaiter,
                         GreedyDegreeClient, LowestWaiter, RandomClient, RandomWaiter,
                         WCClientPotential, WCWaiterPotential)

TOL = 1e-9
DEGREE_CAP_CONFIGS = (("hypergraph", 8, 2, 16), ("hypergraph", 9, 3, 30),
                      ("hypergraph", 7, 2, 12), ("clauses", 6, 2, 16))


@dataclass
class CheckReport:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    failures: list = field(default_factory=list)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:>2}. {self.name}: {self.detail} ({self.seconds:.1f}s)"


def _count(n, scale):
    return max(1, int(round(n * scale)))


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        rep = fn(*args, **kwargs)
        rep.seconds = time.perf_counter() - t0
        return rep
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# --- potentials -----------------------------------------------------------

def avoid_potential(family, client, waiter, q) -> float:
    """sum over sets untouched by Waiter of (q+1)^-(elements Client lacks)."""
    return math.fsum((q + 1.0) ** -(m & ~client).bit_count()
                     for m in family.masks if not m & waiter)


def random_family(rng, X, max_sets, max_size, min_size=1):
    count = int(rng.integers(1, max_sets + 1))
    sets = []
    for _ in range(count):
        size = int(rng.integers(min(min_size, X), min(max_size, X) + 1))
        sets.append(frozenset(int(e) for e in rng.choice(X, size, replace=False)))
    return explicit_family(sets)


def potential_games(games=500, seed=0):
    """Yield (family, q, transcript) for WC games with the potential Client."""
    rng = np.random.default_rng(seed)
    waiters = (RandomWaiter, LowestWaiter, DangerGreedyWaiter)
    for g in range(games):
        X = int(rng.integers(4, 31))
        q = int(rng.integers(1, 4))
        family = random_family(rng, X, 40, min(X, 10))
        waiter = waiters[g % len(waiters)]
        waiter = waiter(family) if waiter is DangerGreedyWaiter else waiter()
        t = play(PlainBoard(X), family, GameRules(Kind.WC, q), waiter, WCClientPotential(family),
                 seed=seed, game_index=g)
        yield family, q, t


@_timed
def check_potential_monotonicity(games=500, seed=0) -> CheckReport:
    """WC Client potential never rises across a round; claimed sets <= Phi."""
    failures = []
    for family, q, t in potential_games(games, seed):
        client = waiter = 0
        prev = phi = avoid_potential(family, 0, 0, q)
        if abs(phi - phi_potential(family, q)) > TOL:
            failures.append(("initial", t.game_index))
        for r in t.rounds:
            for e in r.offer:
                if e == r.pick:
                    client |= 1 << e
                else:
                    waiter |= 1 << e
            cur = avoid_potential(family, client, waiter, q)
            logged = r.diagnostics.get("potential")
            if cur > prev + TOL or (logged is not None and abs(logged - cur) > 1e-6):
                failures.append(("round", t.game_index, r.round, prev, cur))
            prev = cur
        claimed = sum(m & client == m for m in family.masks)
        if claimed > phi + TOL:
            failures.append(("count", t.game_index, claimed, phi))
    return CheckReport(1, "potential monotonicity", not failures,
                       f"{games} WC games, {len(failures)} violations", failures=failures[:10])


# --- transversal guarantees ----------------------------------------------

def cw_profiles(max_sets=6, max_size=4, qs=(1, 2)):
    """(q, sizes) for every size multiset with the CW Client criterion true."""
    out = []
    for q in qs:
        base = q / (q + 1)
        for count in range(1, max_sets + 1):
            for sizes in combinations_with_replacement(range(1, max_size + 1), count):
                if math.fsum(base ** s for s in sizes) < 1:
                    out.append((q, sizes))
    return out


def cw_instances(placements=(4, 6, 8, 10), per_size=1, seed=0):
    """Criterion instances for the CW transversal guarantee."""
    rng = np.random.default_rng(seed)
    out = []
    for q, sizes in cw_profiles():
        for X in placements:
            for _ in range(per_size):
                family = explicit_family([frozenset(int(e) for e in rng.choice(X, s, replace=False))
                                          for s in sizes])
                if client_cw_criterion(family, q).holds:
                    out.append((X, q, family))
    return out


@_timed
def check_cw_transversal(placements=(4, 6, 8, 10), per_size=1, seed=0) -> CheckReport:
    """CW potential Client against every Waiter reply hits all winning sets."""
    failures = []
    instances = cw_instances(placements, per_size, seed)
    for X, q, family in instances:
        s = Solver(PlainBoard(X), family, GameRules(Kind.CW, q), "transversal",
                   budget=10 ** 8, client_policy=CWClientPotential(family))
        if not s.goal(0, 0):
            failures.append((X, q, [sorted(A) for A in family]))
    return CheckReport(2, "CW transversal guarantee", not failures,
                       f"{len(instances)} instances, {len(failures)} failures", failures=failures[:10])


def wc_instances(count=10000, seed=0, min_value=0.25):
    """Random families on |X| <= 10 with the WC Waiter criterion true,
    biased toward values close to the 1/2 threshold."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        X = int(rng.integers(3, 11))
        q = int(rng.integers(1, 3))
        lo = 2 if q == 1 else 4
        family = random_family(rng, X, 16, X, min_size=lo)
        c = waiter_wc_criterion(family, q)
        if c.holds and (c.value >= min_value or rng.random() < 0.2):
            out.append((X, q, family))
    return out


@_timed
def check_wc_transversal(count=10000, seed=0) -> CheckReport:
    """WC potential Waiter against every Client reply forces a transversal."""
    failures = []
    instances = wc_instances(count, seed)
    for X, q, family in instances:
        s = Solver(PlainBoard(X), family, GameRules(Kind.WC, q), "transversal",
                   budget=10 ** 8, waiter_policy=WCWaiterPotential(family))
        if not s.goal(0, 0):
            failures.append((X, q, [sorted(A) for A in family]))
    return CheckReport(3, "WC transversal forcing", not failures,
                       f"{len(instances)} instances, {len(failures)} failures", failures=failures[:10])


# --- degree caps -----------------------------------------------------------

def stated_cap(kind, n, k, q) -> float:
    b = (q + 1) // k
    per = math.comb(n - 1, k - 1) * (2 ** k if kind == "clauses" else 1)
    return per / b + 1


def provable_cap(kind, n, k, q) -> int:
    """Load cap the batch strategy guarantees: ceil((D-1)/b) + 1 with D the
    number of elements at an anchor and b = floor((q+1)/k)."""
    b = (q + 1) // k
    per = math.comb(n - 1, k - 1) * (2 ** k if kind == "clauses" else 1)
    return -(-(per - 1) // b) + 1


def degree_cap_games(kind, n, k, q, random_games=200, seed=0):
    board = HypergraphBoard(n, k) if kind == "hypergraph" else ClauseBoard(n, k)
    clients = [RandomClient() for _ in range(random_games)] + [GreedyDegreeClient()]
    objective = property_objective("non2col" if kind == "hypergraph" else "ksat", board)
    for g, client in enumerate(clients):
        t = play(board, None, GameRules(Kind.CW, q), CWWaiterBatch(), client, seed=seed, game_index=g,
                 objective=objective)
        yield board, t


@_timed
def check_degree_caps(random_games=200, seed=0, configs=DEGREE_CAP_CONFIGS) -> CheckReport:
    """Batch Waiter keeps every anchor load within the stated cap."""
    failures, notes = [], []
    provable_ok = True
    for kind, n, k, q in configs:
        cap, proof = stated_cap(kind, n, k, q), provable_cap(kind, n, k, q)
        worst = 0
        for board, t in degree_cap_games(kind, n, k, q, random_games, seed):
            load = max(AnchorIncidence(board).loads(t.client_final))
            worst = max(worst, load)
            if load > cap:
                failures.append((kind, n, k, q, t.game_index, load))
        provable_ok &= worst <= proof
        notes.append(f"{kind[0]}({n},{k},{q}) max={worst} stated<={cap:.2f} provable<={proof}")
    detail = "; ".join(notes) + f"; provable caps {'hold' if provable_ok else 'VIOLATED'}"
    return CheckReport(4, "degree/occurrence caps", not failures, detail, failures=failures[:10])


# --- extraction ------------------------------------------------------------

def blocks_degenerate(C: ClauseSet) -> bool:
    """Every nonempty block set has a block with at most one literal among
    the clauses living on that set (checked over all subsets)."""
    for r in range(1, C.n + 1):
        for S in combinations(range(C.n), r):
            Sset = set(S)
            present = {i: set() for i in S}
            for c in C.clauses:
                if all((l >> 1) in Sset for l in c):
                    for l in c:
                        present[l >> 1].add(l)
            if all(len(p) >= 2 for p in present.values()):
                return False
    return True


def _extract(board, ids, guaranteed):
    """None if fine, else a failure description."""
    if isinstance(board, HypergraphBoard):
        H = Hypergraph.from_board(board, ids)
        try:
            col = greedy_two_coloring(H)
        except ExtractionFailed:
            return "no coloring" if guaranteed else None
        return None if is_proper_coloring(H, col) else "bad coloring"
    C = ClauseSet.from_board(board, ids)
    try:
        a = extract_assignment(C)
    except ExtractionFailed:
        return "no assignment" if guaranteed else None
    return None if satisfies(C, a) else "bad assignment"


def density_games(seed=0, games=60):
    """WC games with the potential Client steering by the local-density family."""
    rng = np.random.default_rng(seed)
    boards = [HypergraphBoard(6, 2), ClauseBoard(4, 2)]
    fams = [local_density_family(b) for b in boards]
    for g in range(games):
        i = g % 2
        q = int(rng.integers(1, 6))
        t = play(boards[i], fams[i], GameRules(Kind.WC, q), RandomWaiter(), WCClientPotential(fams[i]),
                 seed=seed, game_index=g)
        yield boards[i], fams[i], t


@_timed
def check_extraction(random_games=200, density=60, seed=0) -> CheckReport:
    """Greedy colouring / assignment extraction succeeds when guaranteed and
    its witness always checks out."""
    failures = []
    attempts = guaranteed = 0
    for kind, n, k, q in DEGREE_CAP_CONFIGS:
        for board, t in degree_cap_games(kind, n, k, q, random_games, seed):
            ids = sorted(t.client_final)
            if kind == "hypergraph":
                g = is_one_degenerate(Hypergraph.from_board(board, ids))[0]
            else:
                g = blocks_degenerate(ClauseSet.from_board(board, ids))
            attempts += 1
            guaranteed += g
            err = _extract(board, ids, g)
            if err:
                failures.append((kind, n, k, q, t.game_index, err))
    for board, fam, t in density_games(seed, density):
        client = sum(1 << e for e in t.client_final)
        g = not any(m & client == m for m in fam.masks)
        attempts += 1
        guaranteed += g
        err = _extract(board, sorted(t.client_final), g)
        if err:
            failures.append((board.describe(), t.game_index, err))
    return CheckReport(5, "extraction soundness", not failures,
                       f"{attempts} games, {guaranteed} with the guarantee, {len(failures)} failures",
                       failures=failures[:10])


# --- solver ----------------------------------------------------------------

def solver_instances(count=240, seed=0, max_X=8):
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        X = int(rng.integers(3, max_X + 1))
        family = random_family(rng, X, 5, 4)
        kind = (Kind.WC, Kind.CW)[i % 2]
        objective = ("contain", "transversal")[(i // 2) % 2]
        out.append((X, kind, objective, family))
    return out


@_timed
def check_solver(count=240, seed=0) -> CheckReport:
    """Memo/no-memo agreement at q=1; winner monotone in q; one flip at most."""
    failures = []
    skipped = 0
    for X, kind, objective, family in solver_instances(count, seed):
        board = PlainBoard(X)
        rules = GameRules(kind, 1)
        a = Solver(board, family, rules, objective).goal(0, 0)
        try:
            b = Solver(board, family, rules, objective, memo=False, budget=3_000_000).goal(0, 0)
        except BudgetExceeded:
            skipped += 1
            b = a
        if a != b:
            failures.append(("memo", X, kind.value, objective, [sorted(A) for A in family]))
        try:
            exact_threshold_bias(board, family, kind, X, objective)
        except MonotonicityError as exc:
            failures.append(("monotone", X, kind.value, objective, exc.winners))
    detail = f"{count} instances, {len(failures)} violations"
    if skipped:
        detail += f", {skipped} without a no-memo answer"
    return CheckReport(6, "exact-solver consistency", not failures and not skipped, detail,
                       failures=failures[:10])


# --- lemmas ------------------------------------------------------------------

def lll_hypergraphs(count=500, seed=0):
    """Random k-uniform hypergraphs (n <= 18) with max degree <= 2^k/(8k)."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        k = int(rng.integers(2, 13))
        n = int(rng.integers(k, 19))
        cap = int(lll_degree_bound(k))
        deg = [0] * n
        edges = set()
        for _ in range(int(rng.integers(1, 4 * n))):
            e = tuple(sorted(int(v) for v in rng.choice(n, k, replace=False)))
            if e not in edges and all(deg[v] < cap for v in e):
                edges.add(e)
                for v in e:
                    deg[v] += 1
        out.append(Hypergraph(n, k, tuple(edges)))
    return out


def lll_clause_sets(count=500, seed=0):
    """Random k-CNFs (n <= 20) with every variable in <= 2^(k-2)/k clauses."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        k = int(rng.integers(2, 10))
        n = int(rng.integers(k, 21))
        cap = int(lll_occurrence_bound(k))
        occ = [0] * n
        clauses = set()
        for _ in range(int(rng.integers(1, 4 * n))):
            vs = sorted(int(v) for v in rng.choice(n, k, replace=False))
            c = tuple(2 * v + int(rng.integers(0, 2)) for v in vs)
            if c not in clauses and all(occ[v] < cap for v in vs):
                clauses.add(c)
                for v in vs:
                    occ[v] += 1
        out.append((k, ClauseSet(n, tuple(clauses))))
    return out


@_timed
def check_lemmas(count=500, seed=0) -> CheckReport:
    """Degree-bounded hypergraphs are 2-colourable; occurrence-bounded CNFs satisfiable."""
    failures = []
    edges = clauses = 0
    for H in lll_hypergraphs(count, seed):
        edges += H.num_edges
        if not is_r_colorable(H, 2)[0]:
            failures.append(("hypergraph", H))
    for k, C in lll_clause_sets(count, seed + 1):
        clauses += len(C.clauses)
        if not is_satisfiable(C)[0]:
            failures.append(("cnf", C))
    return CheckReport(7, "local-lemma conformance", not failures,
                       f"{count} hypergraphs ({edges} edges), {count} CNFs ({clauses} clauses), "
                       f"{len(failures)} failures", failures=failures[:10])


# --- identities -------------------------------------------------------------

@_timed
def check_identities(count=200, seed=0) -> CheckReport:
    """omega(H_W) = alpha(H_C) on complete partitions; chi * alpha >= n."""
    rng = np.random.default_rng(seed)
    failures = []
    for _ in range(count):
        n = int(rng.integers(2, 8))
        k = int(rng.integers(2, n + 1))
        board = HypergraphBoard(n, k)
        mine = rng.random(board.size) < rng.random()
        client = [e for e in range(board.size) if mine[e]]
        waiter = [e for e in range(board.size) if not mine[e]]
        HC, HW = Hypergraph.from_board(board, client), Hypergraph.from_board(board, waiter)
        if clique_number(HW) != independence_number(HC):
            failures.append(("omega-alpha", n, k, client))
    for _ in range(count):
        n = int(rng.integers(1, 8))
        k = int(rng.integers(2, max(n, 2) + 1))
        if k > n:
            H = Hypergraph(n, k, ())
        else:
            board = HypergraphBoard(n, k)
            H = Hypergraph.from_board(board, [e for e in range(board.size) if rng.random() < 0.5])
        if chromatic_number(H) * independence_number(H) < n:
            failures.append(("chi-alpha", H))
    return CheckReport(8, "clique/independence identities", not failures,
                       f"{2 * count} hypergraphs, {len(failures)} violations", failures=failures[:10])


# --- bounds -------------------------------------------------------------------

def high_precision_bound(game, version, side, n, k):
    """Independent 50-digit recomputation of a bound (mpmath)."""
    import mpmath as mp
    mp.mp.dps = 50
    C = mp.binomial(n, k)
    half = mp.binomial(mp.ceil(mp.mpf(n) / 2), k)
    ln2, e = mp.log(2), mp.e
    if game == "non2col":
        if version == "WC":
            return (half * ln2 / (2 * ((1 + ln2) * n + ln2)) if side == "below"
                    else mp.power(2, mp.mpf(k) / 2) * mp.power(e, mp.mpf(k) / 2 + 1) * k * C / n)
        return half * ln2 / ((1 + ln2) * n) if side == "below" else k ** 3 * mp.power(2, 5 - k) * C / n
    if version == "WC":
        return C / (2 * n) if side == "below" else mp.power(2, mp.mpf(3 * k) / 2) * mp.power(e, mp.mpf(k) / 2 + 1) * k * C / n
    return C / n if side == "below" else 16 * k ** 3 * C / n


@_timed
def check_bounds() -> CheckReport:
    worst = 0.0
    failures = []
    for k in range(2, 7):
        for n in range(k, 61):
            for b in all_bounds(n, k):
                ref = high_precision_bound(b.game, b.version, b.side, n, k)
                err = float(abs(b.value - ref) / abs(ref)) if ref else abs(b.value)
                worst = max(worst, err)
                if err > 1e-12:
                    failures.append((b.formula, n, k, err))
        g = gap_factor("ksat", "CW", k)
        if not (isinstance(g, int) and g == 16 * k ** 3):
            failures.append(("gap", k, g))
    return CheckReport(9, "bound evaluators", not failures,
                       f"worst relative error {worst:.2e}, {len(failures)} failures", failures=failures[:10])


# --- baseline -----------------------------------------------------------------

BASELINE_DENSITIES = tuple(round(0.5 + 0.1 * i, 1) for i in range(11))


@_timed
def check_baseline(n=200, reps=200, seed=0, densities=BASELINE_DENSITIES, window=(0.85, 1.15),
                   workers=1) -> CheckReport:
    """Random 2-SAT unsatisfiability crosses 1/2 near one clause per variable."""
    board = ClauseBoard(n, 2)
    res = random_baseline(board, "unsat", [int(round(d * n)) for d in densities], reps, seed, workers=workers)
    x = res.crossing_density
    ok = x is not None and window[0] <= x <= window[1]
    profile = ", ".join(f"{r['density']:.2f}:{r['fraction']:.3f}" for r in res.rows)
    shown = "none" if x is None else f"{x:.3f}"
    return CheckReport(10, "random 2-SAT baseline", ok,
                       f"crossing m/n={shown}, window {window}; profile {profile}")


ALL_CHECKS = (check_potential_monotonicity, check_cw_transversal, check_wc_transversal,
              check_degree_caps, check_extraction, check_solver, check_lemmas,
              check_identities, check_bounds, check_baseline)


def run_all(scale: float = 1.0, seed: int = 0, stream=None, workers: int = 1) -> list[CheckReport]:
    """Run every check; ``scale`` shrinks instance counts for a quick pass."""
    quick = scale < 1
    plan = [
        lambda: check_potential_monotonicity(_count(500, scale), seed),
        lambda: check_cw_transversal((4, 6, 8) if quick else (4, 6, 8, 10), 1, seed),
        lambda: check_wc_transversal(_count(10000, scale), seed),
        lambda: check_degree_caps(_count(200, scale), seed),
        lambda: check_extraction(_count(200, scale), _count(60, scale), seed),
        lambda: check_solver(max(_count(240, scale), 2), seed),
        lambda: check_lemmas(_count(500, scale), seed),
        lambda: check_identities(_count(200, scale), seed),
        check_bounds,
        lambda: check_baseline(reps=_count(200, scale), seed=seed, workers=workers),
    ]
    reports = []
    for step in plan:
        rep = step()
        reports.append(rep)
        if stream is not None:
            print(rep.line(), file=stream, flush=True)
    return reports

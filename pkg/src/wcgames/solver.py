"""Exhaustive minimax solver for tiny boards.

Positions are keyed by the ownership pair (Client mask, Waiter mask); the
side to move is always Waiter at a key (Client's pick is expanded inside the
Waiter node).  Either side may be pinned to a fixed strategy, which turns
the search into a best response against that strategy.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .boards import OwnedSets, elements_of
from .engine import (ClientStrategy, GameRules, GameState, Kind, WaiterStrategy,
                     as_objective, game_rngs)

DEFAULT_BUDGET = 2_000_000


class BudgetExceeded(RuntimeError):
    def __init__(self, nodes: int):
        super().__init__(f"solver budget exceeded after {nodes} nodes")
        self.nodes = nodes


class MonotonicityError(RuntimeError):
    def __init__(self, winners: dict):
        super().__init__(f"winner is not monotone in q: {winners}")
        self.winners = winners


@dataclass
class SolveResult:
    instance: dict
    winner: str
    goal_reached: bool
    nodes: int
    principal: list = field(default_factory=list)  # [(offer, pick or None), ...]

    def to_text(self) -> str:
        lines = ["# wcgames-solve version=1",
                 "# instance " + " ".join(f"{k}={v}" for k, v in self.instance.items()),
                 f"winner={self.winner} goal_reached={int(self.goal_reached)} nodes={self.nodes}"]
        for i, (offer, pick) in enumerate(self.principal, 1):
            lines.append(f"{i}\t{' '.join(map(str, offer))}\t{'-' if pick is None else pick}")
        return "\n".join(lines) + "\n"


class Solver:
    """Decides whether the objective (Client's final set contains a winning
    set, or meets all of them) is reached under optimal play.

    ``waiter_policy`` / ``client_policy`` pin a side to a strategy whose
    decisions must depend on the position only.
    """

    def __init__(self, board, family, rules: GameRules, objective="contain",
                 budget: int = DEFAULT_BUDGET, memo: bool = True,
                 waiter_policy: WaiterStrategy | None = None,
                 client_policy: ClientStrategy | None = None):
        self.board = board
        self.family = family
        self.rules = rules
        self.objective = as_objective(objective)
        self.budget = budget
        self.memo = memo
        self.table: dict[tuple[int, int], bool] = {}
        self.nodes = 0
        self.size = board.size
        self.full = (1 << self.size) - 1
        self.waiter_policy = waiter_policy
        self.client_policy = client_policy
        rng_w, rng_c = game_rngs(0)
        start = GameState(board, family, rules)
        if waiter_policy is not None:
            waiter_policy.reset(start, rng_w)
        if client_policy is not None:
            client_policy.reset(start, rng_c)

    # goal = objective reached; WC: Waiter wants it, CW: Client wants it
    @property
    def waiter_wants_goal(self) -> bool:
        return self.rules.kind is Kind.WC

    def _state(self, client, waiter) -> GameState:
        return GameState(self.board, self.family, self.rules, OwnedSets(self.size, client, waiter))

    def offers(self, client, waiter):
        if self.waiter_policy is not None:
            yield tuple(self.waiter_policy.offer(self._state(client, waiter)))
            return
        free = elements_of(self.full & ~(client | waiter))
        q = self.rules.q
        if self.rules.kind is Kind.WC:
            yield from combinations(free, q + 1)
        else:
            for t in range(1, min(q + 1, len(free)) + 1):
                yield from combinations(free, t)

    def picks(self, client, waiter, offer):
        if self.client_policy is not None:
            return (self.client_policy.pick(self._state(client, waiter), offer),)
        return offer

    def terminal(self, client, waiter) -> bool | None:
        d = self.objective.decided(client, waiter, self.family)
        if d is not None:
            return d
        free = self.full & ~(client | waiter)
        if free == 0 or (self.rules.kind is Kind.WC and free.bit_count() < self.rules.q + 1):
            return self.objective.reached(client, self.family)[0]
        return None

    def goal(self, client: int, waiter: int) -> bool:
        """Whether the objective is reached from this position under optimal play."""
        t = self.terminal(client, waiter)
        if t is not None:
            return t
        key = (client, waiter)
        if self.memo and key in self.table:
            return self.table[key]
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(self.nodes)
        val = self._expand(client, waiter)[0]
        if self.memo:
            self.table[key] = val
        return val

    def _child(self, client, waiter, offer, pick):
        rest = 0
        for e in offer:
            if e != pick:
                rest |= 1 << e
        return client | (1 << pick), waiter | rest

    def _offer_value(self, client, waiter, offer):
        """(goal reached after the best pick for Client, that pick)."""
        client_wants = not self.waiter_wants_goal
        picks = self.picks(client, waiter, offer)
        for x in picks:
            v = self.goal(*self._child(client, waiter, offer, x))
            if v == client_wants:
                return v, x
        return (not client_wants), picks[0]

    def _expand(self, client, waiter):
        """(value, best offer, best pick) at a Waiter-to-move position."""
        waiter_wants = self.waiter_wants_goal
        first = None
        for offer in self.offers(client, waiter):
            v, x = self._offer_value(client, waiter, offer)
            if first is None:
                first = (v, offer, x)
            if v == waiter_wants:
                return v, offer, x
        if first is None:
            raise RuntimeError("no legal offer in a non-terminal position")
        return first

    def best_offer(self, owned: OwnedSets):
        """(offer, whether it wins for Waiter)."""
        v, offer, _ = self._expand(owned.client, owned.waiter)
        return offer, v == self.waiter_wants_goal

    def best_pick(self, owned: OwnedSets, offer):
        """(pick, whether it wins for Client)."""
        v, x = self._offer_value(owned.client, owned.waiter, tuple(offer))
        return x, v != self.waiter_wants_goal

    def winner_from_goal(self, reached: bool) -> str:
        if self.rules.kind is Kind.WC:
            return "waiter" if reached else "client"
        return "client" if reached else "waiter"

    def solve(self) -> SolveResult:
        reached = self.goal(0, 0)
        principal = []
        client = waiter = 0
        while self.terminal(client, waiter) is None:
            _, offer, pick = self._expand(client, waiter)
            principal.append((tuple(offer), pick))
            client, waiter = self._child(client, waiter, offer, pick)
        free = self.full & ~(client | waiter)
        if free and self.rules.kind is Kind.WC and free.bit_count() < self.rules.q + 1:
            principal.append((tuple(elements_of(free)), None))
        inst = {**self.board.describe(), "kind": self.rules.kind.value, "q": self.rules.q,
                "objective": self.objective.name, "sets": 0 if self.family is None else len(self.family)}
        return SolveResult(inst, self.winner_from_goal(reached), reached, self.nodes, principal)


def solve(board, family, rules: GameRules, objective="contain", budget: int = DEFAULT_BUDGET,
          memo: bool = True) -> SolveResult:
    return Solver(board, family, rules, objective, budget, memo).solve()


@dataclass
class ThresholdResult:
    q_star: int | None
    winners: dict


def exact_threshold_bias(board, family, kind, q_max: int, objective="contain",
                         budget: int = DEFAULT_BUDGET) -> ThresholdResult:
    """Smallest q at which the optimal-play winner switches to the side that
    benefits from a large bias (Client in WC, Waiter in CW)."""
    kind = Kind(kind)
    high = "client" if kind is Kind.WC else "waiter"
    winners = {q: solve(board, family, GameRules(kind, q), objective, budget).winner
               for q in range(1, q_max + 1)}
    seq = [winners[q] for q in range(1, q_max + 1)]
    first_high = next((i for i, w in enumerate(seq) if w == high), None)
    if first_high is not None and any(w != high for w in seq[first_high:]):
        raise MonotonicityError(winners)
    if first_high is None or first_high == 0:
        return ThresholdResult(None, winners)
    return ThresholdResult(first_high + 1, winners)


class _SolverWaiter(WaiterStrategy):
    def __init__(self, solver):
        self.solver = solver
        self.name = "best-response"

    def offer(self, state):
        return list(self.solver.best_offer(state.owned)[0])


class _SolverClient(ClientStrategy):
    def __init__(self, solver):
        self.solver = solver
        self.name = "best-response"

    def pick(self, state, offer):
        return self.solver.best_pick(state.owned, offer)[0]


def best_response_strategy(solver: Solver, role: str):
    """Strategy playing optimally for ``role`` through the engine interface.

    If the solver pins the opposite side to a policy, play is a best response
    to that policy; otherwise it is minimax-optimal.
    """
    if role == "waiter":
        return _SolverWaiter(solver)
    if role == "client":
        return _SolverClient(solver)
    raise ValueError("role must be 'waiter' or 'client'")

"""Waiter and Client strategies.

The potential strategies keep a :class:`PotentialLedger` in sync with the
game position.  Their decisions depend only on the current position and
offer, so the exact solver can query them at arbitrary positions.
"""
from __future__ import annotations

import math
from collections import defaultdict
from itertools import combinations

from .boards import CLIENT, WAITER, OwnedSets, elements_of, mask_of
from .engine import ClientStrategy, GameState, Kind, WaiterStrategy

TOL = 1e-9
RECOMPUTE_EVERY = 64

ALIVE, DEAD, SATISFIED = 0, 1, 2


class PotentialLedger:
    """Sum over live winning sets of ``base ** free_count``.

    In ``"avoid"`` mode (Client tries not to complete sets) a Waiter claim
    kills a set and a Client claim shrinks its free count.  In ``"hit"``
    mode (Client tries to meet every set) a Client claim satisfies the set
    and a Waiter claim shrinks its free count.
    """

    def __init__(self, family, base: float, size: int, mode: str):
        if mode not in ("avoid", "hit"):
            raise ValueError("mode must be 'avoid' or 'hit'")
        self.masks = list(family.masks)
        self.base = base
        self.size = size
        self.mode = mode
        index = defaultdict(list)
        for i, A in enumerate(family.sets):
            for e in A:
                index[e].append(i)
        self.index = dict(index)
        self.rebuild(OwnedSets(size))

    def rebuild(self, owned: OwnedSets) -> None:
        self.client, self.waiter = owned.client, owned.waiter
        self.rounds = 0
        free = owned.free
        self.status = []
        self.free_count = []
        for m in self.masks:
            if self.mode == "avoid":
                st = DEAD if m & owned.waiter else ALIVE
            else:
                st = SATISFIED if m & owned.client else ALIVE
            self.status.append(st)
            self.free_count.append((m & free).bit_count())
        self.value = self.recompute()

    def term(self, i: int) -> float:
        return self.base ** self.free_count[i] if self.status[i] == ALIVE else 0.0

    def recompute(self) -> float:
        return math.fsum(self.term(i) for i in range(len(self.masks)))

    def live(self) -> list[int]:
        return [i for i, st in enumerate(self.status) if st == ALIVE]

    def _advance(self, i):
        old = self.term(i)
        self.free_count[i] -= 1
        self.value += self.term(i) - old

    def _remove(self, i, status):
        self.value -= self.term(i)
        self.status[i] = status

    def claim(self, e: int, player: int) -> None:
        advance_on = CLIENT if self.mode == "avoid" else WAITER
        for i in self.index.get(e, ()):
            if self.status[i] != ALIVE:
                continue
            if player == advance_on:
                self._advance(i)
            else:
                self._remove(i, DEAD if self.mode == "avoid" else SATISFIED)
        bit = 1 << e
        if player == CLIENT:
            self.client |= bit
        else:
            self.waiter |= bit

    def sync(self, owned: OwnedSets) -> None:
        """Bring the ledger to ``owned``: incremental when it extends the
        current position, from scratch otherwise."""
        if (owned.client, owned.waiter) == (self.client, self.waiter):
            return
        if self.client & ~owned.client or self.waiter & ~owned.waiter:
            self.rebuild(owned)
            return
        for e in elements_of(owned.client & ~self.client):
            self.claim(e, CLIENT)
        for e in elements_of(owned.waiter & ~self.waiter):
            self.claim(e, WAITER)
        self.rounds += 1
        if self.rounds % RECOMPUTE_EVERY == 0:
            self.value = self.recompute()

    def sets_meeting(self, offer) -> list[int]:
        seen = set()
        for e in offer:
            for i in self.index.get(e, ()):
                if self.status[i] == ALIVE:
                    seen.add(i)
        return sorted(seen)


def _argmin(values: dict[int, float]) -> int:
    best, best_val = None, math.inf
    for e in sorted(values):
        if values[e] < best_val - TOL:
            best, best_val = e, values[e]
    return best


class _LedgerStrategy:
    mode = "avoid"

    def __init__(self, family=None):
        self.family = family
        self.ledger = None

    def base(self, q: int) -> float:
        raise NotImplementedError

    def _ensure(self, state: GameState) -> PotentialLedger:
        fam = self.family if self.family is not None else state.family
        led = self.ledger
        if led is None or led.size != state.board.size or led.base != self.base(state.rules.q):
            led = self.ledger = PotentialLedger(fam, self.base(state.rules.q), state.board.size, self.mode)
        led.sync(state.owned)
        return led

    def reset(self, state, rng):
        self.rng = rng
        self.ledger = None
        self._ensure(state)

    def observe(self, state, offer, pick):
        self._ensure(state)

    def diagnostics(self):
        return {"potential": self.ledger.value} if self.ledger is not None else {}


class WCClientPotential(_LedgerStrategy, ClientStrategy):
    """Client in a WC game who keeps the number of fully claimed sets below
    the initial potential sum((q+1)^-|A|)."""

    name = "wc-client-potential"
    mode = "avoid"

    def base(self, q):
        return 1.0 / (q + 1)

    def post_potentials(self, state, offer) -> dict[int, float]:
        """Ledger value after the round, for each possible pick."""
        led = self._ensure(state)
        om = mask_of(offer)
        met = led.sets_meeting(offer)
        lost = math.fsum(led.term(i) for i in met)
        gain = dict.fromkeys(offer, 0.0)
        for i in met:
            inter = led.masks[i] & om
            if inter & (inter - 1) == 0:  # the set meets the offer in one element
                gain[inter.bit_length() - 1] += led.term(i) / led.base
        return {x: led.value - lost + gain[x] for x in offer}

    def pick(self, state, offer):
        if not offer:
            raise ValueError("empty offer")
        return _argmin(self.post_potentials(state, offer))


class CWClientPotential(_LedgerStrategy, ClientStrategy):
    """Client in a CW game trying to meet every winning set; potential
    sum((q/(q+1))^free) over sets not yet met."""

    name = "cw-client-potential"
    mode = "hit"

    def base(self, q):
        return q / (q + 1.0)

    def post_potentials(self, state, offer) -> dict[int, float]:
        led = self._ensure(state)
        om = mask_of(offer)
        met = led.sets_meeting(offer)
        rest = led.value - math.fsum(led.term(i) for i in met)
        out = {}
        for x in offer:
            bit = 1 << x
            grown = math.fsum(led.term(i) * led.base ** -(led.masks[i] & om).bit_count()
                              for i in met if not led.masks[i] & bit)
            out[x] = rest + grown
        return out

    def pick(self, state, offer):
        if not offer:
            raise ValueError("empty offer")
        return _argmin(self.post_potentials(state, offer))


class WCWaiterPotential(_LedgerStrategy, WaiterStrategy):
    """Waiter in a WC game forcing Client to meet every winning set.

    The potential is the sum of lambda^-free(A) over sets A not yet met,
    with lambda = 2^(1/(2q-1)).  Each round Waiter offers the (q+1)-set whose
    worst pick for him leaves the smallest potential.  When there are more
    than ``offer_budget`` candidate offers, only the highest-danger free
    elements are combined.
    """

    name = "wc-waiter-potential"
    mode = "hit"

    def __init__(self, family=None, offer_budget: int = 5000):
        super().__init__(family)
        self.offer_budget = offer_budget

    def base(self, q):
        return 2.0 ** (-1.0 / (2 * q - 1))

    def dangers(self, state) -> dict[int, float]:
        """Sum of live-set terms through each free element."""
        led = self._ensure(state)
        out = {}
        for e in elements_of(state.owned.free):
            out[e] = math.fsum(led.term(i) for i in led.index.get(e, ()) if led.status[i] == ALIVE)
        return out

    def worst_increase(self, led: PotentialLedger, offer) -> float:
        """Largest potential change over Client's possible picks."""
        om = mask_of(offer)
        met = led.sets_meeting(offer)
        worst = -math.inf
        for x in offer:
            bit = 1 << x
            delta = 0.0
            for i in met:
                m = led.masks[i]
                if m & bit:
                    delta -= led.term(i)
                else:
                    delta += led.term(i) * (led.base ** -(m & om).bit_count() - 1.0)
            worst = max(worst, delta)
        return worst

    def candidates(self, state) -> list[int]:
        free = state.free_elements()
        t = min(state.rules.q + 1, len(free))
        if math.comb(len(free), t) <= self.offer_budget:
            return free
        d = self.dangers(state)
        pool = len(free)
        while pool > t and math.comb(pool, t) > self.offer_budget:
            pool -= 1
        return sorted(sorted(free, key=lambda e: (-d[e], e))[:pool])

    def offer(self, state):
        if state.owned.free == 0:
            raise ValueError("no free elements")
        led = self._ensure(state)
        t = min(state.rules.q + 1, state.owned.free_count)
        best, best_val = None, math.inf
        for O in combinations(self.candidates(state), t):
            v = self.worst_increase(led, O)
            if v < best_val - TOL:
                best, best_val = O, v
        return list(best)


class DangerGreedyWaiter(WCWaiterPotential):
    """Baseline: offer the q+1 free elements of largest danger.

    Loses to a best-response Client on some instances where the WC
    transversal criterion holds; kept for comparison.
    """

    name = "wc-waiter-danger"

    def offer(self, state):
        if state.owned.free == 0:
            raise ValueError("no free elements")
        size = min(state.rules.q + 1, state.owned.free_count)
        d = self.dangers(state)
        ranked = sorted(d, key=lambda e: (-d[e], e))
        return sorted(ranked[:size])


class AnchorIncidence:
    """Anchor (vertex or variable block) incidence of a structured board."""

    def __init__(self, board):
        self.board = board
        self.k = board.k
        self.at_anchor = [board.elements_at_anchor(a) for a in range(board.anchor_count)]

    def anchors(self, e: int) -> tuple[int, ...]:
        return self.board.anchors(e)

    def loads(self, elements) -> list[int]:
        """Per-anchor count of the given elements."""
        out = [0] * len(self.at_anchor)
        for e in elements:
            for a in self.anchors(e):
                out[a] += 1
        return out


class CWWaiterBatch(WaiterStrategy):
    """Waiter in a CW game on a hypergraph or clause board capping every
    anchor's Client load.

    After each Client claim, offers disjoint batches of up to floor((q+1)/k)
    free elements at each anchor of that claim.
    """

    name = "cw-waiter-batch"

    def reset(self, state, rng):
        self.rng = rng
        self.incidence = AnchorIncidence(state.board)
        self.claims: list[int] = []
        self.last_offer_source = None

    def observe(self, state, offer, pick):
        if pick is not None:
            self.claims.append(pick)

    def batches(self, claim: int, free: int, b: int) -> list[list[int]]:
        used = 0
        out = []
        for a in self.incidence.anchors(claim):
            avail = [e for e in self.incidence.at_anchor[a] if (free >> e) & 1 and not (used >> e) & 1]
            take = avail[:b]
            used |= mask_of(take)
            out.append(take)
        return out

    def offer(self, state):
        owned = state.owned
        if owned.free == 0:
            raise ValueError("no free elements")
        q, k = state.rules.q, self.incidence.k
        b = (q + 1) // k
        free = owned.free
        if self.claims and b > 0:
            candidates = [self.claims[-1]] + self.claims[:-1]
            for c in candidates:
                union = sorted(e for batch in self.batches(c, free, b) for e in batch)
                if union:
                    self.last_offer_source = c
                    return union
        self.last_offer_source = None
        return owned.free_elements()[: min(q + 1, owned.free_count)]

    def diagnostics(self):
        return {"source": -1 if self.last_offer_source is None else self.last_offer_source}


class RandomWaiter(WaiterStrategy):
    name = "random"

    def offer(self, state):
        free = state.free_elements()
        q = state.rules.q
        if state.rules.kind is Kind.WC:
            t = min(q + 1, len(free))
        else:
            t = int(self.rng.integers(1, min(q + 1, len(free)) + 1))
        return sorted(int(e) for e in self.rng.choice(free, size=t, replace=False))


class RandomClient(ClientStrategy):
    name = "random"

    def pick(self, state, offer):
        return offer[int(self.rng.integers(len(offer)))]


class LowestWaiter(WaiterStrategy):
    name = "lowest"

    def offer(self, state):
        free = state.free_elements()
        t = min(state.rules.q + 1, len(free))
        return free[:t]


class LowestClient(ClientStrategy):
    name = "lowest"

    def pick(self, state, offer):
        return min(offer)


class GreedyDegreeClient(ClientStrategy):
    """Adversary for anchor-load caps: picks the offered element that raises
    the largest anchor load, breaking ties by total load then lowest id."""

    name = "greedy-degree"

    def reset(self, state, rng):
        self.rng = rng
        self.incidence = AnchorIncidence(state.board)

    def pick(self, state, offer):
        loads = self.incidence.loads(elements_of(state.owned.client))

        def score(e):
            ls = [loads[a] for a in self.incidence.anchors(e)]
            return (-max(ls), -sum(ls), e)

        return min(offer, key=score)


WAITERS = {
    "random": RandomWaiter,
    "lowest": LowestWaiter,
    "wc-waiter-potential": WCWaiterPotential,
    "wc-waiter-danger": DangerGreedyWaiter,
    "cw-waiter-batch": CWWaiterBatch,
}

CLIENTS = {
    "random": RandomClient,
    "lowest": LowestClient,
    "wc-client-potential": WCClientPotential,
    "cw-client-potential": CWClientPotential,
    "greedy-degree": GreedyDegreeClient,
}


def make_waiter(key: str, family=None) -> WaiterStrategy:
    try:
        cls = WAITERS[key]
    except KeyError:
        raise KeyError(f"unknown waiter strategy {key!r}; choose from {sorted(WAITERS)}") from None
    return cls(family) if issubclass(cls, _LedgerStrategy) else cls()


def make_client(key: str, family=None) -> ClientStrategy:
    try:
        cls = CLIENTS[key]
    except KeyError:
        raise KeyError(f"unknown client strategy {key!r}; choose from {sorted(CLIENTS)}") from None
    return cls(family) if issubclass(cls, _LedgerStrategy) else cls()

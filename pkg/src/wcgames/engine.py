"""Rules and execution of biased (1:q) Waiter-Client and Client-Waiter games."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .boards import CLIENT, WAITER, OwnedSets, board_from_description, elements_of, mask_of

TRANSCRIPT_VERSION = 1


class Kind(str, enum.Enum):
    WC = "WC"
    CW = "CW"


@dataclass(frozen=True)
class GameRules:
    kind: Kind
    q: int

    def __post_init__(self):
        if not isinstance(self.kind, Kind):
            object.__setattr__(self, "kind", Kind(str(self.kind).upper()))
        if int(self.q) != self.q or self.q < 1:
            raise ValueError(f"bias q must be a positive integer, got {self.q!r}")


class IllegalMoveError(RuntimeError):
    def __init__(self, side: str, message: str):
        super().__init__(f"illegal move by {side}: {message}")
        self.side = side


class NonTerminationError(RuntimeError):
    pass


# --- objectives -----------------------------------------------------------

class Objective:
    """What Client's final set is tested for.

    ``reached`` is the condition that makes Waiter win a WC game and Client
    win a CW game.  ``decided`` may report the answer before the board is
    exhausted (used by the solver for cutoffs): True/False, or None.
    """

    name = "objective"

    def reached(self, client: int, family) -> tuple[bool, frozenset | None]:
        raise NotImplementedError

    def decided(self, client: int, waiter: int, family) -> bool | None:
        return None


class ContainObjective(Objective):
    """Client fully claims some winning set."""

    name = "contain"

    def reached(self, client, family):
        for A, m in zip(family.sets, family.masks):
            if m & client == m:
                return True, A
        return False, None

    def decided(self, client, waiter, family):
        alive = False
        for m in family.masks:
            if m & client == m:
                return True
            if not m & waiter:
                alive = True
        return None if alive else False


class TransversalObjective(Objective):
    """Client's set meets every winning set (a member of the transversal family)."""

    name = "transversal"

    def reached(self, client, family):
        for A, m in zip(family.sets, family.masks):
            if not m & client:
                return False, A
        return True, frozenset(elements_of(client))

    def decided(self, client, waiter, family):
        done = True
        for m in family.masks:
            if not m & client:
                if m & waiter == m:
                    return False
                done = False
        return True if done else None


class PropertyObjective(Objective):
    """Arbitrary monotone predicate on Client's element set."""

    def __init__(self, predicate: Callable[[frozenset], bool], name: str = "property"):
        self.predicate = predicate
        self.name = name

    def reached(self, client, family):
        elems = frozenset(elements_of(client))
        ok = bool(self.predicate(elems))
        return ok, (elems if ok else None)


def as_objective(objective) -> Objective:
    if isinstance(objective, Objective):
        return objective
    if objective in (None, "contain"):
        return ContainObjective()
    if objective == "transversal":
        return TransversalObjective()
    raise ValueError(f"unknown objective {objective!r}")


class Outcome(NamedTuple):
    winner: str  # "waiter" | "client"
    witness: frozenset | None
    goal_reached: bool


def winner_of_final_position(owned: OwnedSets, family, kind, objective="contain") -> Outcome:
    if owned.free:
        raise ValueError("position still has free elements")
    reached, witness = as_objective(objective).reached(owned.client, family)
    if Kind(kind) is Kind.WC:
        winner = "waiter" if reached else "client"
    else:
        winner = "client" if reached else "waiter"
    return Outcome(winner, witness, reached)


# --- state and strategies -------------------------------------------------

class GameState:
    """Everything a strategy may look at: board, family, rules and ownership."""

    def __init__(self, board, family, rules: GameRules, owned: OwnedSets | None = None, round_=0):
        self.board = board
        self.family = family
        self.rules = rules
        self.owned = owned if owned is not None else OwnedSets(board.size)
        self.round = round_

    @property
    def finished(self) -> bool:
        return self.owned.free == 0

    def free_elements(self) -> list[int]:
        return self.owned.free_elements()

    def apply(self, offer: Sequence[int], pick: int | None) -> None:
        for e in offer:
            self.owned.claim(e, CLIENT if e == pick else WAITER)
        self.round += 1


class Strategy:
    name = "strategy"

    def reset(self, state: GameState, rng: np.random.Generator) -> None:
        self.rng = rng

    def observe(self, state: GameState, offer: Sequence[int], pick: int | None) -> None:
        pass

    def diagnostics(self) -> dict:
        return {}


class WaiterStrategy(Strategy):
    def offer(self, state: GameState) -> Sequence[int]:
        raise NotImplementedError


class ClientStrategy(Strategy):
    def pick(self, state: GameState, offer: Sequence[int]) -> int:
        raise NotImplementedError


def offer_error(owned: OwnedSets, rules: GameRules, offer: Sequence[int]) -> str | None:
    """Why ``offer`` is illegal in this position, or None if it is legal."""
    if owned.free == 0:
        return "game is finished"
    om = mask_of(offer)
    if om.bit_count() != len(offer):
        return "offer contains duplicates"
    if om & ~owned.free:
        return "offer contains elements that are not free"
    free_count = owned.free_count
    q = rules.q
    if rules.kind is Kind.WC:
        if free_count < q + 1:
            if om != owned.free:
                return f"only {free_count} free elements remain; the offer must be all of them"
        elif len(offer) != q + 1:
            return f"WC offers must have exactly {q + 1} elements, got {len(offer)}"
    elif not 1 <= len(offer) <= q + 1:
        return f"CW offers must have 1..{q + 1} elements, got {len(offer)}"
    return None


def legal_offer(state_or_owned, rules: GameRules, offer: Sequence[int]) -> bool:
    owned = state_or_owned.owned if isinstance(state_or_owned, GameState) else state_or_owned
    return offer_error(owned, rules, offer) is None


def is_short_round(owned: OwnedSets, rules: GameRules) -> bool:
    """WC final round in which Waiter takes every remaining element."""
    return rules.kind is Kind.WC and 0 < owned.free_count < rules.q + 1


def game_rngs(seed: int, game_index: int = 0) -> tuple[np.random.Generator, np.random.Generator]:
    """Independent (waiter, client) generators derived from (seed, game index)."""
    ss = np.random.SeedSequence([int(seed), int(game_index)])
    w, c = ss.spawn(2)
    return np.random.default_rng(w), np.random.default_rng(c)


# --- transcripts ----------------------------------------------------------

@dataclass
class RoundRecord:
    round: int
    offer: tuple[int, ...]
    pick: int | None
    diagnostics: dict = field(default_factory=dict)


@dataclass
class Transcript:
    rules: GameRules
    board: dict
    rounds: list[RoundRecord]
    outcome: Outcome
    client_final: frozenset
    waiter_final: frozenset
    seed: int = 0
    game_index: int = 0
    objective: str = "contain"
    players: tuple[str, str] = ("?", "?")
    initial_diagnostics: dict = field(default_factory=dict)

    @property
    def winner(self) -> str:
        return self.outcome.winner

    def replay(self, family=None, objective=None) -> tuple[OwnedSets, Outcome | None]:
        """Re-apply the recorded rounds; recompute the outcome if a family or
        an objective is given (property objectives are not stored by name)."""
        owned = OwnedSets(int(self.board["size"]))
        for rec in self.rounds:
            err = offer_error(owned, self.rules, rec.offer)
            if err:
                raise IllegalMoveError("transcript", f"round {rec.round}: {err}")
            short = is_short_round(owned, self.rules)
            if short != (rec.pick is None):
                raise IllegalMoveError("transcript", f"round {rec.round}: pick does not match round type")
            if rec.pick is not None and rec.pick not in rec.offer:
                raise IllegalMoveError("transcript", f"round {rec.round}: pick not in offer")
            for e in rec.offer:
                owned.claim(e, CLIENT if e == rec.pick else WAITER)
        outcome = None
        if family is not None or objective is not None:
            outcome = winner_of_final_position(owned, family, self.rules.kind, objective or self.objective)
        return owned, outcome

    def to_text(self) -> str:
        def kv(d):
            return " ".join(f"{k}={_fmt(v)}" for k, v in d.items())

        lines = [
            f"# wcgames-transcript version={TRANSCRIPT_VERSION}",
            f"# rules kind={self.rules.kind.value} q={self.rules.q}",
            "# board " + kv(self.board),
            f"# players waiter={self.players[0]} client={self.players[1]}",
            f"# run seed={self.seed} game_index={self.game_index} objective={self.objective}",
        ]
        if self.initial_diagnostics:
            lines.append("# initial " + kv(self.initial_diagnostics))
        for rec in self.rounds:
            pick = "-" if rec.pick is None else str(rec.pick)
            lines.append("\t".join([str(rec.round), " ".join(map(str, rec.offer)), pick,
                                    kv(rec.diagnostics)]).rstrip("\t"))
        witness = "-" if self.outcome.witness is None else " ".join(map(str, sorted(self.outcome.witness)))
        lines += [
            f"# outcome winner={self.outcome.winner} goal_reached={int(self.outcome.goal_reached)}",
            f"# witness {witness}",
            "# client " + " ".join(map(str, sorted(self.client_final))),
            "# waiter " + " ".join(map(str, sorted(self.waiter_final))),
        ]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Transcript":
        meta: dict[str, str] = {}
        rounds = []
        for line in text.splitlines():
            if not line.strip():
                continue
            if line.startswith("#"):
                tag, _, rest = line[2:].partition(" ")
                meta[tag] = rest
                continue
            parts = line.split("\t")
            diag = _parse_kv(parts[3]) if len(parts) > 3 else {}
            rounds.append(RoundRecord(int(parts[0]), tuple(int(t) for t in parts[1].split()),
                                      None if parts[2] == "-" else int(parts[2]), diag))
        head = _parse_kv(meta.get("wcgames-transcript", ""))
        if int(head.get("version", -1)) != TRANSCRIPT_VERSION:
            raise ValueError("unsupported or missing transcript version")
        rules_kv = _parse_kv(meta["rules"])
        run = _parse_kv(meta["run"])
        players = _parse_kv(meta.get("players", ""))
        out = _parse_kv(meta["outcome"])
        witness = None if meta["witness"].strip() == "-" else frozenset(int(t) for t in meta["witness"].split())
        board = {k: v for k, v in _parse_kv(meta["board"]).items()}
        board_from_description(board)  # validates
        return cls(
            rules=GameRules(Kind(rules_kv["kind"]), int(rules_kv["q"])),
            board=board,
            rounds=rounds,
            outcome=Outcome(out["winner"], witness, bool(int(out["goal_reached"]))),
            client_final=frozenset(int(t) for t in meta.get("client", "").split()),
            waiter_final=frozenset(int(t) for t in meta.get("waiter", "").split()),
            seed=int(run["seed"]),
            game_index=int(run["game_index"]),
            objective=run["objective"],
            players=(players.get("waiter", "?"), players.get("client", "?")),
            initial_diagnostics=_parse_kv(meta.get("initial", "")),
        )


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _parse_kv(s: str) -> dict:
    out = {}
    for tok in s.split():
        k, _, v = tok.partition("=")
        try:
            out[k] = int(v)
        except ValueError:
            try:
                out[k] = float(v)
            except ValueError:
                out[k] = v
    return out


# --- play -----------------------------------------------------------------

def play(board, family, rules: GameRules, waiter: WaiterStrategy, client: ClientStrategy,
         seed: int = 0, game_index: int = 0, objective="contain") -> Transcript:
    """Run one game to exhaustion of the board and return its transcript."""
    obj = as_objective(objective)
    state = GameState(board, family, rules)
    rng_w, rng_c = game_rngs(seed, game_index)
    waiter.reset(state, rng_w)
    client.reset(state, rng_c)
    initial = {**waiter.diagnostics(), **client.diagnostics()}
    rounds = []
    while not state.finished:
        if state.round >= board.size:
            raise NonTerminationError(f"no termination after {state.round} rounds")
        if is_short_round(state.owned, rules):
            offer, pick = tuple(state.free_elements()), None
        else:
            offer = tuple(waiter.offer(state))
            err = offer_error(state.owned, rules, offer)
            if err:
                raise IllegalMoveError(f"waiter ({waiter.name})", err)
            pick = client.pick(state, offer)
            if pick not in offer:
                raise IllegalMoveError(f"client ({client.name})", f"picked {pick!r}, not in offer {offer}")
        state.apply(offer, pick)
        waiter.observe(state, offer, pick)
        client.observe(state, offer, pick)
        diag = {**waiter.diagnostics(), **client.diagnostics()}
        rounds.append(RoundRecord(state.round, offer, pick, diag))
    outcome = winner_of_final_position(state.owned, family, rules.kind, obj)
    return Transcript(
        rules=rules, board=board.describe(), rounds=rounds, outcome=outcome,
        client_final=state.owned.client_elements(), waiter_final=state.owned.waiter_elements(),
        seed=seed, game_index=game_index, objective=obj.name,
        players=(waiter.name, client.name), initial_diagnostics=initial,
    )

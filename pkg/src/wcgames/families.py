"""Winning-set families and the criterion sums evaluated over them."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product
from typing import Iterable, NamedTuple

from .boards import ClauseBoard, HypergraphBoard, board_from_description, mask_of

DEFAULT_CAP = 250_000

SOURCES = ("clique-transversal", "local-density", "monochromatic-clause", "explicit")


class FamilyTooLarge(ValueError):
    """Raised when an explicit family would exceed the configured cap."""


class Criterion(NamedTuple):
    value: float
    holds: bool


@dataclass(frozen=True)
class SetFamily:
    sets: tuple[frozenset[int], ...]
    source: str = "explicit"
    board: object = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "sets", tuple(frozenset(s) for s in self.sets))
        size = getattr(self.board, "size", None)
        if size is not None:
            for s in self.sets:
                if s and (min(s) < 0 or max(s) >= size):
                    raise ValueError(f"set {sorted(s)} has ids outside the board")

    def __len__(self):
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(mask_of(s) for s in self.sets)

    @cached_property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.sets)

    def to_text(self) -> str:
        header = {"source": self.source}
        if self.board is not None:
            header.update(self.board.describe())
        lines = ["# family " + " ".join(f"{k}={v}" for k, v in header.items())]
        lines += [" ".join(map(str, sorted(s))) for s in self.sets]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "SetFamily":
        lines = text.splitlines()
        if not lines or not lines[0].startswith("# family"):
            raise ValueError("missing '# family' header line")
        header = dict(tok.split("=", 1) for tok in lines[0].split()[2:])
        source = header.pop("source", "explicit")
        board = board_from_description(header) if "board" in header else None
        sets = [frozenset(int(t) for t in line.split()) for line in lines[1:] if not line.startswith("#")]
        return cls(tuple(sets), source, board)


def explicit_family(sets: Iterable[Iterable[int]], board=None) -> SetFamily:
    return SetFamily(tuple(frozenset(s) for s in sets), "explicit", board)


def clique_family(board: HypergraphBoard, m: int) -> SetFamily:
    """Edge sets of all m-vertex cliques of the complete board."""
    if not board.k <= m <= board.n:
        raise ValueError(f"clique size m={m} must satisfy k <= m <= n")
    sets = [frozenset(board.rank_edge(e) for e in combinations(S, board.k))
            for S in combinations(range(board.n), m)]
    return SetFamily(tuple(sets), "clique-transversal", board)


def _density_size(s: int, k: int) -> int:
    return -(-2 * s // k)


def local_density_family(board, cap: int = DEFAULT_CAP) -> SetFamily:
    """Sets of ceil(2|S|/k) elements living inside some anchor set S.

    On a hypergraph board S ranges over vertex subsets and the sets are edge
    subsets of K_n^(k)[S]; on a clause board S ranges over variable subsets
    and the sets are clause subsets over those variables.  Duplicates arising
    from different S are emitted once.
    """
    n, k = board.n, board.k
    per_anchor_set = (lambda s: math.comb(s, k)) if isinstance(board, HypergraphBoard) \
        else (lambda s: math.comb(s, k) << k)
    bound = sum(math.comb(n, s) * math.comb(per_anchor_set(s), _density_size(s, k))
                for s in range(1, n + 1))
    if bound > cap:
        raise FamilyTooLarge(f"local-density family has up to {bound} sets (cap {cap})")
    seen = set()
    sets = []
    for s in range(1, n + 1):
        f = _density_size(s, k)
        for S in combinations(range(n), s):
            inside = _elements_inside(board, S)
            for F in combinations(inside, f):
                fs = frozenset(F)
                if fs not in seen:
                    seen.add(fs)
                    sets.append(fs)
    return SetFamily(tuple(sets), "local-density", board)


def _elements_inside(board, S) -> list[int]:
    if isinstance(board, HypergraphBoard):
        return sorted(board.rank_edge(e) for e in combinations(S, board.k))
    if isinstance(board, ClauseBoard):
        out = []
        for vs in combinations(S, board.k):
            base = board.encode_clause([2 * v for v in vs])
            out.extend(range(base, base + (1 << board.k)))
        return sorted(out)
    raise TypeError("local-density family needs a hypergraph or clause board")


def monochromatic_clause_family(board: ClauseBoard, cap: int = DEFAULT_CAP) -> SetFamily:
    """One set per choice of one literal from every block: the C(n,k) clauses
    built from the chosen literals."""
    if (1 << board.n) > cap:
        raise FamilyTooLarge(f"monochromatic-clause family has {1 << board.n} sets (cap {cap})")
    sets = []
    for signs in product((0, 1), repeat=board.n):
        chosen = [2 * v + s for v, s in enumerate(signs)]
        sets.append(frozenset(board.encode_clause(c) for c in combinations(chosen, board.k)))
    return SetFamily(tuple(sets), "monochromatic-clause", board)


def _check_q(q):
    if q < 1:
        raise ValueError("bias q must be a positive integer")


def waiter_wc_criterion(family, q: int) -> Criterion:
    """Sum of 2^(-|A|/(2q-1)); below 1/2 certifies a Waiter win in the WC
    transversal game."""
    _check_q(q)
    total = math.fsum(2.0 ** (-len(A) / (2 * q - 1)) for A in family)
    return Criterion(total, total < 0.5)


def client_cw_criterion(family, q: int) -> Criterion:
    """Sum of (q/(q+1))^|A|; below 1 certifies a Client win in the CW
    transversal game."""
    _check_q(q)
    base = q / (q + 1)
    total = math.fsum(base ** len(A) for A in family)
    return Criterion(total, total < 1.0)


def phi_potential(family, q: int) -> float:
    _check_q(q)
    return math.fsum((q + 1.0) ** -len(A) for A in family)

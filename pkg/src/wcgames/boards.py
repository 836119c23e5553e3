"""Game boards: indexed universes of elements with incidence queries.

Three board types are provided:

* :class:`PlainBoard` -- an abstract ground set ``{0, ..., size-1}``.
* :class:`HypergraphBoard` -- the edges of the complete k-uniform hypergraph
  on ``n`` vertices, indexed in colexicographic order.
* :class:`ClauseBoard` -- all k-clauses over ``n`` boolean variables.

Boards are immutable descriptors.  Ownership lives in :class:`OwnedSets`,
which stores the Client and Waiter holdings as integer bitmasks.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

FREE, CLIENT, WAITER = 0, 1, 2


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        m |= 1 << e
    return m


def elements_of(mask: int) -> list[int]:
    """Element ids set in ``mask``, ascending."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def rank_subset(subset: Sequence[int]) -> int:
    """Colex rank of a set of distinct non-negative integers."""
    return sum(comb(c, i) for i, c in enumerate(sorted(subset), start=1))


def unrank_subset(r: int, k: int) -> tuple[int, ...]:
    """Inverse of :func:`rank_subset` for k-subsets."""
    out = []
    for i in range(k, 0, -1):
        c = i - 1
        while comb(c + 1, i) <= r:
            c += 1
        out.append(c)
        r -= comb(c, i)
    return tuple(reversed(out))


@dataclass(frozen=True)
class PlainBoard:
    """Abstract board with element ids ``0..size-1`` and no structure."""

    size: int

    def __post_init__(self):
        if self.size < 0:
            raise ValueError("board size must be non-negative")

    def describe(self) -> dict:
        return {"board": "plain", "size": self.size}


@dataclass(frozen=True)
class HypergraphBoard:
    """Edge set of the complete k-uniform hypergraph on n vertices.

    Edge ids are colex ranks of the vertex sets, so the first edges are
    ``{0,1,..,k-1}``, ``{0,1,..,k-2,k}``, ...
    """

    n: int
    k: int

    def __post_init__(self):
        if not 2 <= self.k <= self.n:
            raise ValueError(f"need 2 <= k <= n, got n={self.n}, k={self.k}")

    @property
    def edge_count(self) -> int:
        return comb(self.n, self.k)

    @property
    def size(self) -> int:
        return self.edge_count

    @property
    def anchor_count(self) -> int:
        return self.n

    def describe(self) -> dict:
        return {"board": "hypergraph", "n": self.n, "k": self.k, "size": self.size}

    def rank_edge(self, vertices: Iterable[int]) -> int:
        vs = sorted(set(vertices))
        if len(vs) != self.k:
            raise ValueError(f"edge must have exactly {self.k} distinct vertices, got {vertices!r}")
        if vs[0] < 0 or vs[-1] >= self.n:
            raise ValueError(f"vertex out of range [0, {self.n}) in {vertices!r}")
        return rank_subset(vs)

    def unrank_edge(self, edge_id: int) -> tuple[int, ...]:
        if not 0 <= edge_id < self.edge_count:
            raise ValueError(f"edge id {edge_id} out of range")
        return self.edges[edge_id]

    @cached_property
    def edges(self) -> tuple[tuple[int, ...], ...]:
        """All edges as sorted vertex tuples, indexed by edge id."""
        return tuple(unrank_subset(r, self.k) for r in range(self.edge_count))

    def edges_at_vertex(self, v: int) -> list[int]:
        if not 0 <= v < self.n:
            raise ValueError(f"vertex {v} out of range")
        return list(_edges_at_vertex(self.n, self.k, v))

    def anchors(self, edge_id: int) -> tuple[int, ...]:
        """The k vertices of an edge (ascending)."""
        return self.edges[edge_id]

    def elements_at_anchor(self, v: int) -> list[int]:
        return self.edges_at_vertex(v)


@lru_cache(maxsize=None)
def _edges_at_vertex(n: int, k: int, v: int) -> tuple[int, ...]:
    others = [u for u in range(n) if u != v]
    return tuple(sorted(rank_subset((v,) + rest) for rest in combinations(others, k - 1)))


def literal(var: int, negated: bool = False) -> int:
    """Literal id: ``2*var`` for x_{var+1}, ``2*var+1`` for its negation."""
    return 2 * var + int(negated)


def literal_str(lit: int) -> str:
    return ("~" if lit & 1 else "") + f"x{lit // 2 + 1}"


@dataclass(frozen=True)
class ClauseBoard:
    """All 2^k * C(n,k) k-clauses over n variables.

    A clause id is ``rank(variable set) * 2**k + pattern`` where bit i of
    ``pattern`` is set iff the i-th variable (ascending) appears negated.
    """

    n: int
    k: int

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise ValueError(f"need 1 <= k <= n, got n={self.n}, k={self.k}")

    @property
    def clause_count(self) -> int:
        return (1 << self.k) * comb(self.n, self.k)

    @property
    def size(self) -> int:
        return self.clause_count

    @property
    def anchor_count(self) -> int:
        return self.n

    def describe(self) -> dict:
        return {"board": "clauses", "n": self.n, "k": self.k, "size": self.size}

    def encode_clause(self, literals: Iterable[int]) -> int:
        lits = sorted(set(literals))
        if len(lits) != self.k:
            raise ValueError(f"clause must have exactly {self.k} literals, got {literals!r}")
        if lits[0] < 0 or lits[-1] >= 2 * self.n:
            raise ValueError(f"literal out of range in {literals!r}")
        vars_ = [lit >> 1 for lit in lits]
        if len(set(vars_)) != self.k:
            raise ValueError(f"complementary or repeated variables in {literals!r}")
        pattern = 0
        for i, lit in enumerate(lits):  # sorted literals are sorted by variable too
            pattern |= (lit & 1) << i
        return rank_subset(vars_) * (1 << self.k) + pattern

    def decode_clause(self, clause_id: int) -> tuple[int, ...]:
        """Literals of a clause, ordered by variable."""
        if not 0 <= clause_id < self.clause_count:
            raise ValueError(f"clause id {clause_id} out of range")
        r, pattern = divmod(clause_id, 1 << self.k)
        vars_ = unrank_subset(r, self.k)
        return tuple(2 * v + ((pattern >> i) & 1) for i, v in enumerate(vars_))

    @cached_property
    def clauses(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.decode_clause(c) for c in range(self.clause_count))

    def variables(self, clause_id: int) -> tuple[int, ...]:
        return unrank_subset(clause_id >> self.k, self.k)

    def clauses_with_block(self, i: int) -> list[int]:
        """Ids of clauses containing x_{i+1} or its negation."""
        if not 0 <= i < self.n:
            raise ValueError(f"variable {i} out of range")
        return list(_clauses_with_block(self.n, self.k, i))

    def anchors(self, clause_id: int) -> tuple[int, ...]:
        """The k variables (blocks) of a clause, ascending."""
        return self.variables(clause_id)

    def elements_at_anchor(self, i: int) -> list[int]:
        return self.clauses_with_block(i)

    def clause_str(self, clause_id: int) -> str:
        return "(" + " | ".join(literal_str(l) for l in self.decode_clause(clause_id)) + ")"


@lru_cache(maxsize=None)
def _clauses_with_block(n: int, k: int, i: int) -> tuple[int, ...]:
    width = 1 << k
    out = []
    for r in _edges_at_vertex(n, k, i) if k >= 2 else (i,):
        out.extend(range(r * width, (r + 1) * width))
    return tuple(out)


Board = PlainBoard | HypergraphBoard | ClauseBoard


def board_from_description(desc: dict):
    kind = desc["board"]
    if kind == "plain":
        return PlainBoard(int(desc["size"]))
    if kind == "hypergraph":
        return HypergraphBoard(int(desc["n"]), int(desc["k"]))
    if kind == "clauses":
        return ClauseBoard(int(desc["n"]), int(desc["k"]))
    raise ValueError(f"unknown board type {kind!r}")


class OwnedSets:
    """Partition of a board's ids into Client, Waiter and free elements."""

    __slots__ = ("size", "client", "waiter")

    def __init__(self, size: int, client: int = 0, waiter: int = 0):
        if client & waiter:
            raise ValueError("an element cannot be owned by both players")
        if (client | waiter) >> size:
            raise ValueError("owned element outside the board")
        self.size = size
        self.client = client
        self.waiter = waiter

    @property
    def full(self) -> int:
        return (1 << self.size) - 1

    @property
    def free(self) -> int:
        return self.full & ~(self.client | self.waiter)

    @property
    def free_count(self) -> int:
        return self.size - self.client.bit_count() - self.waiter.bit_count()

    def free_elements(self) -> list[int]:
        return elements_of(self.free)

    def client_elements(self) -> frozenset[int]:
        return frozenset(elements_of(self.client))

    def waiter_elements(self) -> frozenset[int]:
        return frozenset(elements_of(self.waiter))

    def owner(self, e: int) -> int:
        bit = 1 << e
        if self.client & bit:
            return CLIENT
        if self.waiter & bit:
            return WAITER
        return FREE

    def claim(self, e: int, player: int) -> None:
        bit = 1 << e
        if not 0 <= e < self.size:
            raise ValueError(f"element {e} out of range")
        if (self.client | self.waiter) & bit:
            raise ValueError(f"element {e} is already claimed")
        if player == CLIENT:
            self.client |= bit
        elif player == WAITER:
            self.waiter |= bit
        else:
            raise ValueError("player must be CLIENT or WAITER")

    def copy(self) -> "OwnedSets":
        return OwnedSets(self.size, self.client, self.waiter)

    def key(self) -> tuple[int, int]:
        return self.client, self.waiter

    def __eq__(self, other):
        if not isinstance(other, OwnedSets):
            return NotImplemented
        return (self.size, self.client, self.waiter) == (other.size, other.client, other.waiter)

    def __repr__(self):
        return (f"OwnedSets(client={sorted(self.client_elements())}, "
                f"waiter={sorted(self.waiter_elements())}, free={self.free_elements()})")

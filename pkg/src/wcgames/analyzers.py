"""Exact checkers used as verification oracles.

Everything here is plain backtracking meant for desk-scale instances.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .boards import ClauseBoard, HypergraphBoard, mask_of

DEFAULT_COLOR_CAP = 24
DEFAULT_SAT_CAP = 40


class CapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class Hypergraph:
    """k-uniform hypergraph on vertex set ``range(n)``."""

    n: int
    k: int
    edges: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        edges = tuple(sorted({tuple(sorted(e)) for e in self.edges}))
        for e in edges:
            if len(e) != self.k or len(set(e)) != self.k or e[0] < 0 or e[-1] >= self.n:
                raise ValueError(f"invalid edge {e} for n={self.n}, k={self.k}")
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_board(cls, board: HypergraphBoard, edge_ids: Iterable[int]) -> "Hypergraph":
        return cls(board.n, board.k, tuple(board.unrank_edge(i) for i in edge_ids))

    @cached_property
    def edge_masks(self) -> tuple[int, ...]:
        return tuple(mask_of(e) for e in self.edges)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degrees(self) -> list[int]:
        d = [0] * self.n
        for e in self.edges:
            for v in e:
                d[v] += 1
        return d

    def induced(self, vertices: Iterable[int]) -> "Hypergraph":
        S = mask_of(vertices)
        return Hypergraph(self.n, self.k, tuple(e for e, m in zip(self.edges, self.edge_masks) if m & S == m))


@dataclass(frozen=True)
class ClauseSet:
    """Clauses over variables ``0..n-1``; literal ``2i`` is x_{i+1}, ``2i+1`` its negation."""

    n: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        cl = tuple(tuple(sorted(c)) for c in self.clauses)
        for c in cl:
            if not c or c[0] < 0 or c[-1] >= 2 * self.n:
                raise ValueError(f"invalid clause {c}")
            if len({l >> 1 for l in c}) != len(c):
                raise ValueError(f"clause {c} repeats a variable")
        object.__setattr__(self, "clauses", cl)

    @classmethod
    def from_board(cls, board: ClauseBoard, clause_ids: Iterable[int]) -> "ClauseSet":
        return cls(board.n, tuple(board.decode_clause(i) for i in clause_ids))

    @property
    def k(self) -> int:
        return max((len(c) for c in self.clauses), default=0)


def satisfies(clauses: ClauseSet, assignment: Sequence[int]) -> bool:
    return all(any(assignment[l >> 1] != (l & 1) for l in c) for c in clauses.clauses)


def is_proper_coloring(H: Hypergraph, coloring: Sequence[int]) -> bool:
    """No edge is monochromatic."""
    return len(coloring) == H.n and all(len({coloring[v] for v in e}) > 1 for e in H.edges)


def _edges_ending_at(H: Hypergraph) -> list[list[int]]:
    out = [[] for _ in range(H.n)]
    for e, m in zip(H.edges, H.edge_masks):
        out[e[-1]].append(m)
    return out


# --- coloring -------------------------------------------------------------

def is_r_colorable(H: Hypergraph, r: int, cap: int = DEFAULT_COLOR_CAP):
    """Exact weak r-colorability.  Returns ``(decision, coloring or None)``."""
    if r < 1:
        raise ValueError("r must be >= 1")
    if H.n > cap:
        raise CapExceeded(f"n={H.n} exceeds colorability cap {cap}")
    ending = _edges_ending_at(H)
    classes = [0] * r
    colors = [0] * H.n

    def extend(v, used):
        if v == H.n:
            return True
        bit = 1 << v
        for c in range(min(r, used + 1)):  # new colors are interchangeable
            cm = classes[c] | bit
            if any(m & cm == m for m in ending[v]):
                continue
            classes[c] = cm
            colors[v] = c
            if extend(v + 1, max(used, c + 1)):
                return True
            classes[c] ^= bit
        return False

    if extend(0, 0):
        coloring = list(colors)
        assert is_proper_coloring(H, coloring) or H.n == 0
        return True, coloring
    return False, None


def chromatic_number(H: Hypergraph, cap: int = DEFAULT_COLOR_CAP) -> int:
    if H.n == 0:
        return 0
    for r in range(1, H.n + 1):
        if is_r_colorable(H, r, cap)[0]:
            return r
    raise ValueError("hypergraph has no proper coloring (edges of size 1?)")


def maximum_independent_set(H: Hypergraph, cap: int = DEFAULT_COLOR_CAP) -> list[int]:
    if H.n > cap:
        raise CapExceeded(f"n={H.n} exceeds cap {cap}")
    ending = _edges_ending_at(H)
    best = [0, 0]  # size, mask

    def grow(v, S, size):
        if size + (H.n - v) <= best[0]:
            return
        if v == H.n:
            best[0], best[1] = size, S
            return
        T = S | (1 << v)
        if not any(m & T == m for m in ending[v]):
            grow(v + 1, T, size + 1)
        grow(v + 1, S, size)

    grow(0, 0, 0)
    return [v for v in range(H.n) if best[1] >> v & 1]


def independence_number(H: Hypergraph, cap: int = DEFAULT_COLOR_CAP) -> int:
    return len(maximum_independent_set(H, cap))


def clique_number(H: Hypergraph, cap: int = DEFAULT_COLOR_CAP) -> int:
    """Largest l such that some l vertices have all their k-subsets as edges.

    Vertex sets smaller than k are vacuously cliques, so an edgeless
    hypergraph reports ``k - 1`` (check ``H.num_edges`` for the no-edge case).
    """
    if H.n > cap:
        raise CapExceeded(f"n={H.n} exceeds cap {cap}")
    edges = set(H.edge_masks)
    k = H.k
    best = [min(H.n, k - 1)]

    def grow(v, members):
        if len(members) + (H.n - v) <= best[0]:
            return
        if v == H.n:
            best[0] = len(members)
            return
        bit = 1 << v
        if len(members) < k - 1 or all((mask_of(T) | bit) in edges for T in combinations(members, k - 1)):
            grow(v + 1, members + [v])
        grow(v + 1, members)

    grow(0, [])
    return best[0]


def max_degree(H: Hypergraph) -> int:
    return max(H.degrees(), default=0)


def block_occurrences(C: ClauseSet) -> list[int]:
    """Number of clauses mentioning each variable."""
    out = [0] * C.n
    for c in C.clauses:
        for l in c:
            out[l >> 1] += 1
    return out


def lll_degree_bound(k: int) -> float:
    return 2.0 ** k / (8 * k)


def lll_occurrence_bound(k: int) -> float:
    return 2.0 ** (k - 2) / k


def lll_degree_condition(H: Hypergraph) -> bool:
    """Max degree at most 2^k/(8k): sufficient for 2-colorability."""
    return max_degree(H) <= lll_degree_bound(H.k)


def lll_occurrence_condition(C: ClauseSet, k: int | None = None) -> bool:
    """No variable in more than 2^(k-2)/k clauses: sufficient for satisfiability."""
    k = C.k if k is None else k
    return max(block_occurrences(C), default=0) <= lll_occurrence_bound(k)


def is_one_degenerate(H: Hypergraph):
    """Every sub-hypergraph has a vertex in at most one of its edges.

    Returns ``(decision, ordering)``; the ordering lists vertices in removal
    order (each lies in at most one edge among itself and later vertices).
    """
    alive = set(range(H.n))
    live_edges = list(H.edges)
    deg = H.degrees()
    order = []
    while alive:
        v = min(alive, key=lambda u: (deg[u], u))
        if deg[v] >= 2:
            return False, None
        order.append(v)
        alive.discard(v)
        keep = []
        for e in live_edges:
            if v in e:
                for u in e:
                    deg[u] -= 1
            else:
                keep.append(e)
        live_edges = keep
    return True, order


# --- satisfiability -------------------------------------------------------

def is_satisfiable(C: ClauseSet, max_vars: int = DEFAULT_SAT_CAP):
    """DPLL with unit propagation.  Returns ``(decision, assignment or None)``.

    A branch whose propagation touches no clause without satisfying it is an
    autarky: if the rest fails, the other branch fails too, so it is skipped.
    This keeps width-2 instances polynomial.
    """
    n = C.n
    if n > max_vars:
        raise CapExceeded(f"n={n} exceeds satisfiability cap {max_vars}")
    clauses = C.clauses
    occ = [[] for _ in range(2 * n)]
    for ci, c in enumerate(clauses):
        for l in c:
            occ[l].append(ci)
    value = [-1] * n  # -1 unassigned, else 0/1
    trail: list[int] = []  # true literals, in assignment order

    def lit_val(l):
        v = value[l >> 1]
        return -1 if v < 0 else int(v != (l & 1))

    def assign(l):
        value[l >> 1] = 1 - (l & 1)
        trail.append(l)

    def propagate(start):
        i = start
        while i < len(trail):
            false_lit = trail[i] ^ 1
            i += 1
            for ci in occ[false_lit]:
                unassigned = None
                count = 0
                sat = False
                for l in clauses[ci]:
                    lv = lit_val(l)
                    if lv == 1:
                        sat = True
                        break
                    if lv < 0:
                        count += 1
                        unassigned = l
                if sat:
                    continue
                if count == 0:
                    return False
                if count == 1:
                    assign(unassigned)
        return True

    def undo(mark):
        while len(trail) > mark:
            value[trail.pop() >> 1] = -1

    def is_autarky(mark):
        for l in trail[mark:]:
            for ci in occ[l ^ 1]:
                if not any(lit_val(x) == 1 for x in clauses[ci]):
                    return False
        return True

    def choose():
        best, best_free = None, None
        for c in clauses:
            free = []
            for l in c:
                lv = lit_val(l)
                if lv == 1:
                    break
                if lv < 0:
                    free.append(l)
            else:
                if best is None or len(free) < len(best_free):
                    best, best_free = c, free
                    if len(free) <= 1:
                        break
        return best_free

    def search():
        free = choose()
        if free is None:
            return True
        if not free:
            return False
        l = free[0]
        for lit in (l, l ^ 1):
            mark = len(trail)
            assign(lit)
            if propagate(mark):
                aut = is_autarky(mark)
                if search():
                    return True
                undo(mark)
                if aut:
                    return False
            else:
                undo(mark)
        return False

    # unit clauses first
    for c in clauses:
        if len(c) == 1:
            lv = lit_val(c[0])
            if lv == 0:
                return False, None
            if lv < 0:
                mark = len(trail)
                assign(c[0])
                if not propagate(mark):
                    return False, None
    if not search():
        return False, None
    assignment = [max(v, 0) for v in value]
    assert satisfies(C, assignment)
    return True, assignment

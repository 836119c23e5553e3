"""Post-game certificates for Client's hypergraph and clause set."""
from __future__ import annotations

from .analyzers import ClauseSet, Hypergraph


class ExtractionFailed(RuntimeError):
    """The structural guarantee behind the extraction does not hold."""


def greedy_two_coloring(H: Hypergraph) -> list[int]:
    """2-color a hypergraph in which every sub-hypergraph has a vertex of
    degree at most one.

    Vertices are peeled off in order v_1..v_n (each in at most one edge of
    the hypergraph induced by itself and the later vertices, lowest id
    first), then colored from v_n back to v_1.
    """
    remaining = set(range(H.n))
    edges = [set(e) for e in H.edges]
    order = []
    own_edge = {}
    while remaining:
        live = [e for e in edges if e <= remaining]
        deg = {v: 0 for v in remaining}
        for e in live:
            for v in e:
                deg[v] += 1
        v = min((u for u in remaining if deg[u] <= 1), default=None)
        if v is None:
            raise ExtractionFailed(f"not 1-degenerate: {sorted(remaining)} has minimum degree >= 2")
        own_edge[v] = next((e for e in live if v in e), None)
        order.append(v)
        remaining.discard(v)
    color = [0] * H.n
    for v in reversed(order):
        e = own_edge[v]
        if e is not None:
            others = {color[u] for u in e if u != v}
            if others == {0}:
                color[v] = 1
    return color


def extract_assignment(C: ClauseSet) -> list[int]:
    """Satisfying assignment for a clause set in which every set of blocks
    has a block with at most one of its literals occurring.

    Repeatedly takes the lowest variable for which at most one literal occurs
    among the clauses over the remaining variables, makes that literal true
    (x=1 if neither occurs) and drops the variable.
    """
    remaining = set(range(C.n))
    clauses = [c for c in C.clauses]
    value = [0] * C.n
    while remaining:
        present = {}
        for c in clauses:
            if all((l >> 1) in remaining for l in c):
                for l in c:
                    present.setdefault(l >> 1, set()).add(l)
        pick = next((i for i in sorted(remaining) if len(present.get(i, ())) <= 1), None)
        if pick is None:
            raise ExtractionFailed(f"every remaining block {sorted(remaining)} has both literals present")
        lits = present.get(pick)
        value[pick] = 1 - (next(iter(lits)) & 1) if lits else 1
        remaining.discard(pick)
    return value

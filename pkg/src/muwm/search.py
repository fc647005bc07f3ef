"""Combinatorial search kernels: cliques over bitset graphs, exact cover and
maximum set packing.

Graphs are adjacency lists of Python ints used as bitsets (bit ``j`` of
``adj[i]`` set iff ``i ~ j``). All searches are sequential and deterministic:
vertices and candidate sets are always explored in increasing index order, so
the first solution reported is the lexicographically first one reachable under
the documented branching rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import SearchTimeout

DEFAULT_NODE_BUDGET = 10**9


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bitset_graph(n: int, adjacent) -> list[int]:
    """Build bitset adjacency for vertices ``0..n-1`` from a predicate."""
    adj = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if adjacent(i, j):
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return adj


def cliques_of_size(adj: Sequence[int], size: int) -> list[tuple[int, ...]]:
    """All cliques with exactly ``size`` vertices, each sorted, in lexicographic order."""
    n = len(adj)
    out: list[tuple[int, ...]] = []
    if size <= 0:
        return [()]

    def extend(clique: list[int], cand: int) -> None:
        need = size - len(clique)
        if need == 0:
            out.append(tuple(clique))
            return
        while cand:
            if cand.bit_count() < need:
                return
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            clique.append(v)
            extend(clique, cand & adj[v])
            clique.pop()

    extend([], (1 << n) - 1)
    return out


@dataclass
class CliqueResult:
    size: int
    witness: tuple[int, ...]
    nodes: int


def max_clique(adj: Sequence[int], stop_at: int | None = None,
               budget: int = DEFAULT_NODE_BUDGET) -> CliqueResult:
    """Exact maximum clique by branch and bound with a greedy-colouring bound.

    ``stop_at`` ends the search as soon as a clique of that size is found (it
    is then known to be maximum by an outside argument, e.g. the rank).
    """
    n = len(adj)
    best: list[int] = []
    nodes = 0

    def colour_order(cand: int) -> list[tuple[int, int]]:
        # sequential greedy colouring; returns (vertex, colour) by increasing colour
        order: list[tuple[int, int]] = []
        uncoloured = cand
        colour = 0
        while uncoloured:
            colour += 1
            avail = uncoloured
            while avail:
                low = avail & -avail
                v = low.bit_length() - 1
                avail &= ~low & ~adj[v]
                uncoloured &= ~low
                order.append((v, colour))
        return order

    def expand(clique: list[int], cand: int) -> bool:
        nonlocal best, nodes
        nodes += 1
        if nodes > budget:
            raise SearchTimeout(f"clique search exceeded node budget {budget}", nodes)
        order = colour_order(cand)
        for idx in range(len(order) - 1, -1, -1):
            v, colour = order[idx]
            if len(clique) + colour <= len(best):
                return False
            clique.append(v)
            new = cand & adj[v]
            if new:
                if expand(clique, new):
                    return True
            elif len(clique) > len(best):
                best = list(clique)
                if stop_at is not None and len(best) >= stop_at:
                    return True
            clique.pop()
            cand &= ~(1 << v)
        return False

    if n:
        expand([], (1 << n) - 1)
    return CliqueResult(len(best), tuple(sorted(best)), nodes)


@dataclass
class PackingResult:
    """Outcome of a set-packing search.

    ``chosen`` indexes into the candidate list. ``optimal`` is True when the
    count is proven maximum (it met the counting bound, or the search space was
    exhausted).
    """

    chosen: tuple[int, ...]
    optimal: bool
    upper_bound: int
    nodes: int
    method: str
    stats: dict = field(default_factory=dict)

    @property
    def count(self) -> int:
        return len(self.chosen)


def exact_cover(n_items: int, candidates: Sequence[Sequence[int]],
                budget: int = DEFAULT_NODE_BUDGET) -> tuple[tuple[int, ...] | None, int]:
    """Algorithm X over dict-of-sets columns.

    Branches on the uncovered item with fewest live candidates (ties: lowest
    index), trying candidates in index order. Returns ``(solution, nodes)``
    where ``solution`` is None when the search space is exhausted.
    """
    cols: dict[int, set[int]] = {i: set() for i in range(n_items)}
    for r, cand in enumerate(candidates):
        for i in cand:
            cols[i].add(r)
    partial: list[int] = []
    nodes = 0

    def select(r: int) -> list[set[int]]:
        removed = []
        for i in candidates[r]:
            for other in cols[i]:
                for j in candidates[other]:
                    if j != i:
                        cols[j].discard(other)
            removed.append(cols.pop(i))
        return removed

    def deselect(r: int, removed: list[set[int]]) -> None:
        for i in reversed(candidates[r]):
            cols[i] = removed.pop()
            for other in cols[i]:
                for j in candidates[other]:
                    if j != i:
                        cols[j].add(other)

    def solve() -> bool:
        nodes_inc()
        if not cols:
            return True
        item = min(cols, key=lambda i: (len(cols[i]), i))
        for r in sorted(cols[item]):
            partial.append(r)
            removed = select(r)
            if solve():
                return True
            deselect(r, removed)
            partial.pop()
        return False

    def nodes_inc() -> None:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise SearchTimeout(f"exact-cover search exceeded node budget {budget}", nodes)

    found = solve()
    return (tuple(sorted(partial)) if found else None), nodes


def max_packing(n_items: int, candidates: Sequence[Sequence[int]], part_size: int,
                budget: int = DEFAULT_NODE_BUDGET) -> PackingResult:
    """Maximum number of pairwise disjoint candidates, each of ``part_size`` items.

    First tries an exact cover when the counting bound ``n_items // part_size``
    could be met by one; otherwise (or when no exact cover exists) runs a
    branch and bound over the lowest undecided item: either some candidate
    containing it is taken, or the item is left uncovered.
    """
    upper = n_items // part_size if part_size else 0
    if not candidates:
        return PackingResult((), True, upper, 0, "no-candidates")
    nodes_used = 0
    if n_items % part_size == 0:
        sol, nodes_used = exact_cover(n_items, candidates, budget)
        if sol is not None:
            return PackingResult(sol, True, upper, nodes_used, "exact-cover")

    masks = [sum(1 << i for i in c) for c in candidates]
    by_item: list[list[int]] = [[] for _ in range(n_items)]
    for r, c in enumerate(candidates):
        by_item[min(c)].append(r)
    best: list[int] = []
    chosen: list[int] = []
    nodes = nodes_used

    def bound_ok(undecided: int) -> bool:
        return len(chosen) + undecided.bit_count() // part_size > len(best)

    def search(undecided: int) -> bool:
        nonlocal nodes, best
        nodes += 1
        if nodes > budget:
            raise SearchTimeout(f"packing search exceeded node budget {budget}", nodes)
        if len(chosen) > len(best):
            best = list(chosen)
            if len(best) == upper:
                return True
        if not undecided or not bound_ok(undecided):
            return False
        low = undecided & -undecided
        item = low.bit_length() - 1
        # candidates whose least item is this one; smaller items are decided already
        for r in by_item[item]:
            if masks[r] & undecided == masks[r]:
                chosen.append(r)
                if search(undecided & ~masks[r]):
                    return True
                chosen.pop()
        return search(undecided & ~low)

    search((1 << n_items) - 1)
    return PackingResult(tuple(sorted(best)), True, upper, nodes, "branch-and-bound")

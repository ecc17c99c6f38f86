"""Bipartite graph combinatorics on incidence graphs.

Left vertices are variables, right vertices are clause copies. The routines
here are the constructive sunflower search for K_{a,b}-free graphs, the
low-degree witness and an exact K_{a,b}-freeness test.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from itertools import combinations
from math import comb

from .cnf import DEFAULT_BUDGET, BudgetExceeded, Formula


@dataclass(frozen=True)
class Bigraph:
    n_left: int
    n_right: int
    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        adj = tuple(tuple(sorted(set(nbrs))) for nbrs in self.adjacency)
        if len(adj) != self.n_left:
            raise ValueError("adjacency must list every left vertex")
        for nbrs in adj:
            if nbrs and (nbrs[0] < 0 or nbrs[-1] >= self.n_right):
                raise ValueError("right vertex id out of range")
        object.__setattr__(self, "adjacency", adj)

    @classmethod
    def from_edges(cls, n_left: int, n_right: int, edges: Iterable[tuple[int, int]]) -> Bigraph:
        adj: list[set[int]] = [set() for _ in range(n_left)]
        for u, v in edges:
            adj[u].add(v)
        return cls(n_left, n_right, tuple(tuple(s) for s in adj))

    def neighbors(self, u: int) -> tuple[int, ...]:
        return self.adjacency[u]

    def left_degree(self, u: int) -> int:
        return len(self.adjacency[u])

    def right_adjacency(self) -> list[list[int]]:
        radj: list[list[int]] = [[] for _ in range(self.n_right)]
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                radj[v].append(u)
        return radj

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, nbrs in enumerate(self.adjacency) for v in nbrs]


@dataclass(frozen=True)
class Sunflower:
    petals: frozenset[int]
    core: frozenset[int]


def is_sunflower(g: Bigraph, petals: Iterable[int], core: Iterable[int]) -> bool:
    """Direct pairwise check that all petal neighbourhoods meet exactly in ``core``."""
    core = set(core)
    petals = list(petals)
    return all(
        set(g.neighbors(u)) & set(g.neighbors(v)) == core for u, v in combinations(petals, 2)
    )


def find_sunflower(g: Bigraph, w: int) -> Sunflower | None:
    """Search for a sunflower with at least ``w`` petals.

    Greedily collects left vertices with pairwise disjoint neighbourhoods in
    ascending id order. If fewer than ``w`` are found, the right vertex touching
    them with the most left neighbours joins the core and the search continues
    inside its neighbourhood, with that right vertex removed.

    Guaranteed to succeed when ``g`` is K_{a,b}-free, every left degree is at
    most ``l`` and ``g.n_left >= a * ((w - 1) * l) ** b``.
    """
    if w < 1:
        raise ValueError("w must be >= 1")
    radj = g.right_adjacency()
    alive = list(range(g.n_left))
    removed: set[int] = set()
    core: list[int] = []
    while alive:
        used: set[int] = set()
        disjoint = []
        for u in alive:
            nbrs = set(g.neighbors(u)) - removed
            if not nbrs & used:
                disjoint.append(u)
                used |= nbrs
                if len(disjoint) == w:
                    return Sunflower(frozenset(disjoint), frozenset(core))
        alive_set = set(alive)
        best, best_count = None, -1
        for v in sorted(used):
            count = sum(1 for u in radj[v] if u in alive_set)
            if count > best_count:
                best, best_count = v, count
        if best is None or best_count < w:
            return None
        core.append(best)
        removed.add(best)
        alive = [u for u in radj[best] if u in alive_set]
    return None


def find_low_degree_left(g: Bigraph, d: int) -> int | None:
    """Smallest left vertex of degree at most ``d``, if any."""
    for u, nbrs in enumerate(g.adjacency):
        if len(nbrs) <= d:
            return u
    return None


def is_kab_free(g: Bigraph, a: int, b: int, budget: int | None = None) -> bool:
    """True iff ``g`` has no K_{a,b} with ``a`` left and ``b`` right vertices.

    Counts, for every b-set of right vertices lying inside some left
    neighbourhood, how many left vertices contain it (or symmetrically from the
    right side, whichever enumeration is smaller).
    """
    if a < 1 or b < 1:
        raise ValueError("a and b must be positive")
    budget = DEFAULT_BUDGET if budget is None else budget
    radj = g.right_adjacency()
    cost_left = sum(comb(len(n), b) for n in g.adjacency)
    cost_right = sum(comb(len(n), a) for n in radj)
    if min(cost_left, cost_right) > budget:
        raise BudgetExceeded(f"freeness check needs {min(cost_left, cost_right)} subsets")
    if cost_left <= cost_right:
        side, need, limit = g.adjacency, b, a
    else:
        side, need, limit = radj, a, b
    counts: Counter = Counter()
    for nbrs in side:
        for sub in combinations(nbrs, need):
            counts[sub] += 1
            if counts[sub] >= limit:
                return False
    return True


def formula_is_kab_free(phi: Formula, a: int, b: int, budget: int | None = None) -> bool:
    """K_{a,b}-freeness of the incidence graph without expanding multiplicities.

    A K_{a,b} exists iff some a-set of variables lies in at least ``b`` clause
    copies, so each distinct clause adds its multiplicity to every a-subset of
    its variables.
    """
    if a < 1 or b < 1:
        raise ValueError("a and b must be positive")
    budget = DEFAULT_BUDGET if budget is None else budget
    cost = sum(comb(len(c.variables), a) for c in phi.clauses)
    if cost > budget:
        raise BudgetExceeded(f"freeness check needs {cost} subsets")
    counts: Counter = Counter()
    for clause, mult in phi.items():
        for sub in combinations(sorted(clause.variables), a):
            counts[sub] += mult
            if counts[sub] >= b:
                return False
    return True


def incidence_graph(phi: Formula) -> Bigraph:
    """Variables on the left, clause copies on the right (expanded by multiplicity)."""
    adj: list[list[int]] = [[] for _ in range(phi.n_vars)]
    r = 0
    for clause, mult in phi.items():
        for _ in range(mult):
            for v in clause.variables:
                adj[v].append(r)
            r += 1
    return Bigraph(phi.n_vars, r, tuple(tuple(a) for a in adj))


def induced_left(g: Bigraph, left: Sequence[int]) -> Bigraph:
    """Subgraph on the listed left vertices (renumbered 0..len-1), all right vertices kept."""
    return Bigraph(len(left), g.n_right, tuple(g.adjacency[u] for u in left))

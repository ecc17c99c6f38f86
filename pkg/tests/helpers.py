from __future__ import annotations

import itertools

from hypothesis import strategies as st

from kabkernel.cnf import Clause, Formula


@st.composite
def formulas(draw, max_vars=6, max_clauses=8, max_mult=5, max_width=3, monotone=False):
    n = draw(st.integers(1, max_vars))
    clauses = {}
    for _ in range(draw(st.integers(0, max_clauses))):
        vs = draw(st.sets(st.integers(0, n - 1), min_size=1, max_size=min(max_width, n)))
        neg = set() if monotone else draw(st.sets(st.sampled_from(sorted(vs))))
        c = Clause(frozenset(vs) - neg, frozenset(neg))
        clauses[c] = clauses.get(c, 0) + draw(st.integers(1, max_mult))
    return Formula(n, clauses)


def naive_val(phi: Formula, y) -> int:
    """Clause-by-clause evaluation over the expanded multiset."""
    total = 0
    for c, mult in phi.clauses.items():
        for _ in range(mult):
            if any(v in y for v in c.pos) or any(v not in y for v in c.neg):
                total += 1
    return total


def subsets_upto(universe, k):
    universe = sorted(universe)
    for size in range(min(k, len(universe)) + 1):
        yield from itertools.combinations(universe, size)


def naive_opt(phi: Formula, k: int) -> tuple[tuple[int, ...], int]:
    top = max(naive_val(phi, set(y)) for y in subsets_upto(phi.variables, k))
    best = min(y for y in subsets_upto(phi.variables, k) if naive_val(phi, set(y)) == top)
    return best, top

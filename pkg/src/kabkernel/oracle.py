"""Polynomial-time lower-bound solvers used for solution lifting and for the
optimum estimate in clause scaling.

Documented ratios: ``EXACT`` is optimal (exhaustive, budgeted), ``GREEDY`` is a
(1 - 1/e)-approximation on monotone formulas only, ``BEST_OF`` has no proven
general ratio. Every kind returns a feasible solution, so its value never
exceeds the optimum.
"""

from __future__ import annotations

import enum

from .cnf import Formula, brute_force_opt, val


class OracleKind(enum.Enum):
    EXACT = "exact"
    GREEDY = "greedy"
    BEST_OF = "best-of"


def _marginal_tables(phi: Formula):
    # per-variable clause lists let a gain be computed from touched clauses only
    touching: dict[int, list] = {v: [] for v in phi.variables}
    for clause, mult in phi.items():
        for v in clause.variables:
            touching[v].append((clause, mult))
    return touching


def greedy(phi: Formula, k: int) -> tuple[frozenset[int], int]:
    touching = _marginal_tables(phi)
    y: set[int] = set()
    current = val(phi, y)
    for _ in range(k):
        best_gain, best_v = 0, None
        for v in sorted(phi.variables - y):
            y_plus = y | {v}
            gain = sum(
                mult * (c.is_satisfied(y_plus) - c.is_satisfied(y)) for c, mult in touching[v]
            )
            if best_v is None or gain > best_gain:
                best_gain, best_v = gain, v
        if best_v is None or best_gain <= 0:
            break
        y.add(best_v)
        current += best_gain
    return frozenset(y), current


def approx_solve(
    phi: Formula, k: int, kind: OracleKind = OracleKind.BEST_OF, budget: int | None = None
) -> tuple[frozenset[int], int]:
    kind = OracleKind(kind)
    if kind is OracleKind.EXACT:
        return brute_force_opt(phi, k, budget)
    g_sol, g_val = greedy(phi, k)
    if kind is OracleKind.GREEDY:
        return g_sol, g_val
    candidates = [frozenset()]
    if k >= 1:
        candidates += [frozenset({v}) for v in sorted(phi.variables)]
    best_sol, best_val = frozenset(), val(phi, frozenset())
    for sol in candidates[1:]:
        v = val(phi, sol)
        if v > best_val:
            best_sol, best_val = sol, v
    if g_val > best_val:
        best_sol, best_val = g_sol, g_val
    return best_sol, best_val

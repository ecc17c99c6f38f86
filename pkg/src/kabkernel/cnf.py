"""Cardinality-constrained CNF instances: clauses, formulas, evaluation and the
exhaustive optimum oracle.

Variables are dense 0-based integers internally. The text format (extended
DIMACS) uses 1-based signed literals and a per-clause multiplicity::

    c a comment
    p mksat <n_vars> <n_distinct_clauses>
    <multiplicity> <lit> ... <lit> 0

A formula additionally carries its variable set, which may be a strict subset
of ``range(n_vars)`` once variables have been deleted. Such a set is written as
a ``c vars <id> ...`` line so that kernels round-trip through files.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from math import comb
from types import MappingProxyType

import numpy as np

DEFAULT_BUDGET = 2_000_000
_CHUNK = 4096


class ParseError(ValueError):
    """Raised on malformed extended-DIMACS input."""


class BudgetExceeded(RuntimeError):
    """Raised when an exhaustive enumeration would exceed its budget."""


@dataclass(frozen=True)
class Clause:
    pos: frozenset[int] = frozenset()
    neg: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "pos", frozenset(self.pos))
        object.__setattr__(self, "neg", frozenset(self.neg))
        if self.pos & self.neg:
            raise ValueError(f"tautological clause on variables {sorted(self.pos & self.neg)}")

    @classmethod
    def from_literals(cls, lits: Iterable[int]) -> Clause:
        """Build from 1-based signed literals, e.g. ``[1, -3]``."""
        pos, neg = set(), set()
        for lit in lits:
            if lit == 0:
                raise ValueError("literal 0 is not a variable")
            (pos if lit > 0 else neg).add(abs(lit) - 1)
        return cls(frozenset(pos), frozenset(neg))

    @property
    def variables(self) -> frozenset[int]:
        return self.pos | self.neg

    def __len__(self) -> int:
        return len(self.pos) + len(self.neg)

    def literals(self) -> list[int]:
        """1-based signed literals sorted by variable."""
        return [v + 1 if v in self.pos else -(v + 1) for v in sorted(self.variables)]

    def sort_key(self) -> tuple[tuple[int, int], ...]:
        return tuple((v, 0 if v in self.pos else 1) for v in sorted(self.variables))

    def is_satisfied(self, true_vars: frozenset[int] | set[int]) -> bool:
        return bool(self.pos & true_vars) or not self.neg <= true_vars

    def without(self, removed: frozenset[int] | set[int]) -> Clause:
        return Clause(self.pos - removed, self.neg - removed)

    def __repr__(self) -> str:
        return "(" + " ∨ ".join(f"x{l}" if l > 0 else f"¬x{-l}" for l in self.literals()) + ")"


@dataclass(frozen=True)
class Formula:
    """A multiset of clauses over a variable set.

    ``clauses`` maps each distinct clause to its multiplicity. Empty clauses are
    dropped on construction: no assignment satisfies them.
    """

    n_vars: int
    clauses: Mapping[Clause, int] = field(default_factory=dict)
    variables: frozenset[int] | None = None

    def __post_init__(self):
        if self.n_vars < 0:
            raise ValueError("n_vars must be non-negative")
        variables = (
            frozenset(range(self.n_vars)) if self.variables is None else frozenset(self.variables)
        )
        if any(v < 0 or v >= self.n_vars for v in variables):
            raise ValueError("variable id out of range")
        merged: dict[Clause, int] = {}
        for clause, mult in self.clauses.items():
            if mult != int(mult) or mult < 1:
                raise ValueError(f"multiplicity of {clause!r} must be a positive integer, got {mult}")
            if not clause.variables <= variables:
                raise ValueError(f"clause {clause!r} uses a variable outside the formula")
            if len(clause):
                merged[clause] = merged.get(clause, 0) + int(mult)
        ordered = dict(sorted(merged.items(), key=lambda kv: kv[0].sort_key()))
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "clauses", MappingProxyType(ordered))

    def __eq__(self, other):
        if not isinstance(other, Formula):
            return NotImplemented
        return (
            self.n_vars == other.n_vars
            and self.variables == other.variables
            and dict(self.clauses) == dict(other.clauses)
        )

    def __hash__(self):
        return hash((self.n_vars, self.variables, frozenset(self.clauses.items())))

    @property
    def m(self) -> int:
        """Total clause count, multiplicities included."""
        return sum(self.clauses.values())

    @property
    def n_distinct(self) -> int:
        return len(self.clauses)

    @property
    def neg_mass(self) -> int:
        """Total multiplicity of clauses with at least one negative literal."""
        return sum(mult for c, mult in self.clauses.items() if c.neg)

    def items(self) -> Iterator[tuple[Clause, int]]:
        return iter(self.clauses.items())

    def with_clauses(self, clauses: Mapping[Clause, int]) -> Formula:
        return Formula(self.n_vars, clauses, self.variables)


def formula_from_lists(n_vars: int, clauses: Iterable[tuple[int, Iterable[int]]]) -> Formula:
    """Convenience constructor from ``(multiplicity, literals)`` pairs."""
    acc: dict[Clause, int] = {}
    for mult, lits in clauses:
        c = Clause.from_literals(lits)
        acc[c] = acc.get(c, 0) + mult
    return Formula(n_vars, acc)


def parse_formula(text: str) -> Formula:
    n_vars = None
    declared = None
    variables = None
    acc: dict[Clause, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            parts = line.split()
            if parts[0] == "c" and len(parts) >= 2 and parts[1] == "vars":
                try:
                    variables = {int(tok) - 1 for tok in parts[2:]}
                except ValueError:
                    raise ParseError(f"line {lineno}: bad variable list") from None
            continue
        if line.startswith("p"):
            parts = line.split()
            if n_vars is not None:
                raise ParseError(f"line {lineno}: duplicate header")
            if len(parts) != 4 or parts[1] != "mksat":
                raise ParseError(f"line {lineno}: expected 'p mksat <n_vars> <n_clauses>'")
            try:
                n_vars, declared = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"line {lineno}: non-integer header field") from None
            if n_vars < 0 or declared < 0:
                raise ParseError(f"line {lineno}: negative header field")
            continue
        if n_vars is None:
            raise ParseError(f"line {lineno}: clause before header")
        try:
            toks = [int(tok) for tok in line.split()]
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer token") from None
        if len(toks) < 2 or toks[-1] != 0:
            raise ParseError(f"line {lineno}: clause line must be '<mult> <lit>... 0'")
        mult, lits = toks[0], toks[1:-1]
        if mult < 1:
            raise ParseError(f"line {lineno}: multiplicity must be >= 1")
        if 0 in lits:
            raise ParseError(f"line {lineno}: 0 inside clause")
        if any(abs(l) > n_vars for l in lits):
            raise ParseError(f"line {lineno}: literal refers to a variable beyond {n_vars}")
        try:
            clause = Clause.from_literals(lits)
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
        acc[clause] = acc.get(clause, 0) + mult
    if n_vars is None:
        raise ParseError("missing 'p mksat' header")
    try:
        return Formula(n_vars, acc, variables)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def serialize_formula(phi: Formula, comments: Iterable[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p mksat {phi.n_vars} {phi.n_distinct}")
    if phi.variables != frozenset(range(phi.n_vars)):
        lines.append("c vars " + " ".join(str(v + 1) for v in sorted(phi.variables)))
    for clause, mult in phi.items():
        lines.append(" ".join(map(str, [mult, *clause.literals(), 0])))
    return "\n".join(lines) + "\n"


def read_formula(path) -> Formula:
    with open(path) as f:
        return parse_formula(f.read())


def write_formula(phi: Formula, path, comments: Iterable[str] = ()) -> None:
    with open(path, "w") as f:
        f.write(serialize_formula(phi, comments))


def val(phi: Formula, y: Iterable[int]) -> int:
    """Number of clause copies of ``phi`` satisfied when exactly ``y`` is true."""
    y = frozenset(y)
    return sum(mult for c, mult in phi.items() if c.is_satisfied(y))


def degree(phi: Formula, v: int) -> int:
    return sum(mult for c, mult in phi.items() if v in c.pos or v in c.neg)


def degrees(phi: Formula) -> dict[int, int]:
    """Degree of every variable of ``phi`` (zero for isolated ones)."""
    deg = dict.fromkeys(phi.variables, 0)
    for c, mult in phi.items():
        for v in c.variables:
            deg[v] += mult
    return deg


def negative_vars(phi: Formula) -> frozenset[int]:
    return frozenset().union(*(c.neg for c in phi.clauses))


def positive_vars(phi: Formula) -> frozenset[int]:
    """Variables of ``phi`` never occurring negated (isolated ones included)."""
    return phi.variables - negative_vars(phi)


def delete_variables(phi: Formula, removed: Iterable[int]) -> Formula:
    """Drop variables and all their literals; clauses that become equal merge."""
    removed = frozenset(removed)
    acc: dict[Clause, int] = {}
    for c, mult in phi.items():
        c2 = c.without(removed)
        acc[c2] = acc.get(c2, 0) + mult
    return Formula(phi.n_vars, acc, phi.variables - removed)


def count_solutions(n: int, k: int) -> int:
    return sum(comb(n, i) for i in range(min(n, k) + 1))


def _check_budget(n: int, k: int, budget: int | None) -> None:
    budget = DEFAULT_BUDGET if budget is None else budget
    total = count_solutions(n, k)
    if total > budget:
        raise BudgetExceeded(f"{total} candidate solutions exceed the budget of {budget}")


class ValueTable:
    """Vectorised evaluation of ``val`` over batches of candidate solutions.

    Solutions are rows of a boolean matrix whose columns follow ``universe``.
    Variables of ``universe`` absent from the formula are simply ignored.
    """

    def __init__(self, phi: Formula, universe: list[int]):
        self.universe = universe
        col = {v: i for i, v in enumerate(universe)}
        c = phi.n_distinct
        self.pos = np.zeros((len(universe), c), dtype=np.int32)
        self.neg = np.zeros((len(universe), c), dtype=np.int32)
        neg_count = np.zeros(c, dtype=np.int32)
        weights = []
        for j, (clause, mult) in enumerate(phi.items()):
            for v in clause.pos:
                if v in col:
                    self.pos[col[v], j] = 1
            # a negated variable outside the universe is always false
            outside = [v for v in clause.neg if v not in col]
            for v in clause.neg:
                if v in col:
                    self.neg[col[v], j] = 1
            neg_count[j] = len(clause.neg) if not outside else -1
            weights.append(mult)
        self.neg_count = neg_count
        dtype = np.int64 if sum(weights) < 2**62 else object
        self.weights = np.array(weights, dtype=dtype)

    def values(self, z: np.ndarray):
        z = z.astype(np.int32, copy=False)
        pos_hit = (z @ self.pos) > 0
        neg_all_true = (z @ self.neg) == self.neg_count
        sat = pos_hit | ~neg_all_true
        return sat.astype(self.weights.dtype) @ self.weights


def iter_solution_batches(universe: list[int], k: int) -> Iterator[tuple[list[tuple[int, ...]], np.ndarray]]:
    """Yield all subsets of ``universe`` of size <= k in batches.

    Within a batch, subsets come in the order of ``itertools.combinations``
    by increasing size, so sorted tuples appear in lexicographic order per size.
    """
    n = len(universe)
    for size in range(min(n, k) + 1):
        combos = itertools.combinations(range(n), size)
        while True:
            chunk = list(itertools.islice(combos, _CHUNK))
            if not chunk:
                break
            z = np.zeros((len(chunk), n), dtype=bool)
            for r, idx in enumerate(chunk):
                z[r, list(idx)] = True
            yield [tuple(universe[i] for i in idx) for idx in chunk], z
            if size == 0:
                break


def all_values(
    formulas: list[Formula], k: int, universe: Iterable[int], budget: int | None = None
) -> tuple[list[tuple[int, ...]], list[np.ndarray]]:
    """Evaluate several formulas on every solution over ``universe`` with |Y| <= k."""
    universe = sorted(universe)
    _check_budget(len(universe), k, budget)
    tables = [ValueTable(phi, universe) for phi in formulas]
    sols: list[tuple[int, ...]] = []
    parts: list[list[np.ndarray]] = [[] for _ in formulas]
    for batch, z in iter_solution_batches(universe, k):
        sols.extend(batch)
        for t, acc in zip(tables, parts):
            acc.append(t.values(z))
    return sols, [np.concatenate(p) if p else np.zeros(0, dtype=np.int64) for p in parts]


def brute_force_opt(phi: Formula, k: int, budget: int | None = None) -> tuple[frozenset[int], int]:
    """Exact optimum over all solutions of size at most ``k``.

    Ties go to the lexicographically smallest sorted tuple of true variables.
    """
    universe = sorted(phi.variables)
    _check_budget(len(universe), k, budget)
    table = ValueTable(phi, universe)
    best_val, best_sol = None, None
    for batch, z in iter_solution_batches(universe, k):
        vals = table.values(z)
        top = vals.max()
        # first occurrence is the lexicographically smallest within one size
        cand = batch[int(np.flatnonzero(vals == top)[0])]
        if best_val is None or top > best_val or (top == best_val and cand < best_sol):
            best_val, best_sol = top, cand
    return frozenset(best_sol), int(best_val)

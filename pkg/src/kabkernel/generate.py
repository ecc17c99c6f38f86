"""Seeded generators for K_{a,b}-free formulas and bipartite graphs."""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import asdict, dataclass
from fractions import Fraction
from itertools import combinations

from .cnf import Clause, Formula
from .graphs import Bigraph, formula_is_kab_free


class GenerationError(RuntimeError):
    pass


@dataclass(frozen=True)
class GenSpec:
    n: int
    m: int
    k: int = 2
    a: int = 2
    b: int = 2
    eps: Fraction = Fraction(1, 8)
    max_width: int = 3
    max_mult: int = 5
    neg_prob: float = 0.3
    seed: int = 0
    attempts: int = 20_000

    def header(self) -> list[str]:
        d = asdict(self)
        d["eps"] = f"{self.eps.numerator}/{self.eps.denominator}" if isinstance(self.eps, Fraction) else str(self.eps)
        return ["generated " + " ".join(f"{key}={d[key]}" for key in d)]


def generate_formula(spec: GenSpec) -> Formula:
    """Sample ``spec.m`` distinct clauses keeping the incidence graph K_{a,b}-free.

    Clauses are drawn one by one; a clause whose copies would complete a
    K_{a,b} has its multiplicity lowered to the largest safe value, and is
    rejected outright when no copy fits. The result is checked once more with
    :func:`formula_is_kab_free` before it is returned.
    """
    if spec.n < 1 and spec.m > 0:
        raise GenerationError("need at least one variable")
    rng = random.Random(spec.seed)
    # number of clause copies containing each a-set of variables; must stay < b
    shared: Counter = Counter()
    clauses: dict[Clause, int] = {}
    tries = 0
    while len(clauses) < spec.m:
        tries += 1
        if tries > spec.attempts:
            raise GenerationError(f"only {len(clauses)} of {spec.m} clauses after {spec.attempts} attempts")
        width = rng.randint(1, min(spec.max_width, spec.n))
        vs = sorted(rng.sample(range(spec.n), width))
        neg = {v for v in vs if rng.random() < spec.neg_prob}
        clause = Clause(frozenset(vs) - neg, frozenset(neg))
        if clause in clauses:
            continue
        mult = rng.randint(1, spec.max_mult)
        subsets = list(combinations(vs, spec.a))
        if subsets:
            mult = min(mult, spec.b - 1 - max(shared[s] for s in subsets))
        if mult < 1:
            continue
        for s in subsets:
            shared[s] += mult
        clauses[clause] = mult
    phi = Formula(spec.n, clauses)
    if not formula_is_kab_free(phi, spec.a, spec.b):
        raise GenerationError("internal error: generated instance is not K_{a,b}-free")
    return phi


def generate_monotone(n: int, m: int, seed: int, max_width: int = 3, max_mult: int = 5) -> Formula:
    """Random monotone (coverage) instance, no freeness requirement."""
    rng = random.Random(seed)
    clauses: dict[Clause, int] = {}
    for _ in range(m):
        width = rng.randint(1, min(max_width, n))
        c = Clause(frozenset(rng.sample(range(n), width)))
        clauses[c] = clauses.get(c, 0) + rng.randint(1, max_mult)
    return Formula(n, clauses)


def random_kab_free_bigraph(
    n_left: int, n_right: int, a: int, b: int, max_degree: int, rng: random.Random, min_degree: int = 0
) -> Bigraph:
    """Left vertices are added one at a time with random neighbourhoods.

    A proposed neighbourhood is shrunk one vertex at a time until no b-set in
    it is shared by ``a`` left vertices; degrees thus end up between 0 and
    ``max_degree`` and ``min_degree`` is only a target.
    """
    shared: Counter = Counter()
    adj = []
    for _ in range(n_left):
        d = rng.randint(min(min_degree, max_degree, n_right), min(max_degree, n_right))
        nbrs = rng.sample(range(n_right), d)
        while True:
            bad = [s for s in combinations(sorted(nbrs), b) if shared[s] >= a - 1]
            if not bad:
                break
            nbrs.remove(rng.choice(bad[0]))
        for s in combinations(sorted(nbrs), b):
            shared[s] += 1
        adj.append(tuple(sorted(nbrs)))
    return Bigraph(n_left, n_right, tuple(adj))

"""Approximate kernelization for K_{a,b}-free Max k-Weight SAT.

The reduction runs four stages, each a pure function ``Formula -> (Formula,
trace)``:

0. delete clauses with at least k+1 negative literals (always satisfied);
1. shrink the set of negative variables by thresholding normalized negative
   degrees;
2. shrink the set of positive variables, keeping top-degree ones, or pruning
   low-degree ones with sunflowers when degrees are small;
3. scale down clause multiplicities by a common factor ``s`` and round down.

Stages 1-3 each get a third of the error budget ``eps``. Solutions of the
kernel are valid for the input (variables only disappear, ``k`` never
changes), so lifting is the best of the kernel solution, an oracle solution
and the empty assignment.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .cnf import Clause, Formula, brute_force_opt, degrees, delete_variables, negative_vars, positive_vars, val
from .graphs import Bigraph, find_sunflower
from .oracle import OracleKind, approx_solve

EPS_UPPER = Fraction(1, 4)


class EpsilonOutOfRange(ValueError):
    pass


def as_fraction(x) -> Fraction:
    """Parse ``"p/q"``, a decimal string, an int or a Fraction exactly."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("pass eps as a string or Fraction to keep it exact")
    return Fraction(str(x).strip())


def frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def harmonic(n: int) -> Fraction:
    return sum((Fraction(1, i) for i in range(1, n + 1)), Fraction(0))


def ceil_frac(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def floor_frac(x: Fraction) -> int:
    return x.numerator // x.denominator


@dataclass(frozen=True)
class PipelineParams:
    k: int
    eps: Fraction
    a: int = 2
    b: int = 2

    def __post_init__(self):
        object.__setattr__(self, "eps", as_fraction(self.eps))
        if self.k < 0:
            raise ValueError("k must be non-negative")
        if self.a < 1 or self.b < 1:
            raise ValueError("a and b must be positive")
        if not 0 < self.eps < EPS_UPPER:
            raise EpsilonOutOfRange(f"eps must lie in (0, 1/4), got {self.eps}")

    @property
    def stage_eps(self) -> Fraction:
        return self.eps / 3


@dataclass(frozen=True)
class Stage1Trace:
    tau: Fraction
    picked: tuple[int, ...]
    deleted_clause_mass: int
    neg_mass: int
    # i_fin < 2k * H(k+1) / eps1, and i_fin * tau < neg_mass * H(k+1)
    count_bound: Fraction | None


@dataclass(frozen=True)
class Stage2Trace:
    case: str  # "I", "II" or "none" when there are at most q positive variables
    q: int
    tau2: int | None
    neg_count: int
    deleted: tuple[int, ...]
    opt_tilde: int | None = None
    var_bound: int = 0


@dataclass(frozen=True)
class Stage3Trace:
    s: Fraction
    applied: bool
    opt_tilde: int
    mass_before: int
    mass_after: int
    mass_bound: int


@dataclass(frozen=True)
class KernelTrace:
    params: PipelineParams
    oracle: OracleKind
    stage0_deleted: int
    stage1: Stage1Trace
    stage2: Stage2Trace
    stage3: Stage3Trace
    input_vars: frozenset[int]
    kernel_vars: frozenset[int]
    timings: dict = field(default_factory=dict, compare=False)


def drop_heavy_negative_clauses(phi: Formula, k: int) -> tuple[Formula, int]:
    """Remove clauses with more than ``k`` negated variables.

    Any solution leaves one of them false, so ``val`` drops by exactly the
    removed mass for every solution.
    """
    kept, removed = {}, 0
    for c, mult in phi.items():
        if len(c.neg) >= k + 1:
            removed += mult
        else:
            kept[c] = mult
    return phi.with_clauses(kept), removed


def nndeg(phi: Formula, live, v: int) -> Fraction:
    """Normalized negative degree of ``v`` with respect to the live set."""
    live = set(live)
    total = Fraction(0)
    for c, mult in phi.items():
        if v in c.neg:
            total += Fraction(mult, len(c.neg & live))
    return total


def step1_reduce_negative(phi: Formula, k: int, eps1) -> tuple[Formula, Stage1Trace]:
    eps1 = as_fraction(eps1)
    if any(len(c.neg) > k for c in phi.clauses):
        raise ValueError("clauses with more than k negative literals must be removed first")
    neg_mass = phi.neg_mass
    if neg_mass == 0:
        return phi, Stage1Trace(Fraction(0), (), 0, 0, None)
    tau = eps1 * neg_mass / (2 * k)

    live = set(phi.variables)
    live_neg = {c: len(c.neg) for c in phi.clauses if c.neg}
    by_var: dict[int, list[Clause]] = {}
    score: dict[int, Fraction] = {}
    for c in live_neg:
        share = Fraction(phi.clauses[c], len(c.neg))
        for v in c.neg:
            by_var.setdefault(v, []).append(c)
            score[v] = score.get(v, Fraction(0)) + share

    picked = []
    while True:
        # highest score first, smallest id on ties
        best = min((v for v in score if v in live and score[v] > tau), key=lambda v: (-score[v], v), default=None)
        if best is None:
            break
        picked.append(best)
        live.discard(best)
        for c in by_var[best]:
            d = live_neg[c]
            live_neg[c] = d - 1
            if d > 1:
                delta = Fraction(phi.clauses[c], d - 1) - Fraction(phi.clauses[c], d)
                for u in c.neg:
                    if u in live:
                        score[u] += delta

    kept = {c: m for c, m in phi.items() if not (c.neg & live)}
    deleted = phi.m - sum(kept.values())
    bound = 2 * k * harmonic(k + 1) / eps1
    return phi.with_clauses(kept), Stage1Trace(tau, tuple(picked), deleted, neg_mass, bound)


def positive_threshold_count(k: int, a: int, b: int, eps2: Fraction) -> int:
    """Number of top-degree positive variables kept: k + ceil(a (2bk/eps)^b)."""
    return k + ceil_frac(a * (Fraction(2 * b * k) / eps2) ** b)


def _low_degree_bigraph(phi: Formula, low: list[int]) -> Bigraph:
    # right side: only clause copies that touch a low-degree variable
    index = {v: i for i, v in enumerate(low)}
    adj: list[list[int]] = [[] for _ in low]
    r = 0
    for c, mult in phi.items():
        hits = [index[v] for v in c.variables if v in index]
        if not hits:
            continue
        for _ in range(mult):
            for i in hits:
                adj[i].append(r)
            r += 1
    return Bigraph(len(low), r, tuple(tuple(x) for x in adj))


def step2_reduce_positive(phi: Formula, k: int, a: int, b: int, eps2) -> tuple[Formula, Stage2Trace]:
    eps2 = as_fraction(eps2)
    pos = positive_vars(phi)
    t = len(negative_vars(phi))
    q = positive_threshold_count(k, a, b, eps2)
    if len(pos) <= q:
        return phi, Stage2Trace("none", q, None, t, (), None, t + len(pos))

    deg = degrees(phi)
    top = sorted(pos, key=lambda v: (-deg[v], v))[:q]
    tau2 = min((deg[v] for v in top), default=None)

    # with q == 0 the top set is empty and its minimum degree is +inf
    if tau2 is None or tau2 >= Fraction(2 * b) / eps2:
        removed = tuple(sorted(pos - set(top)))
        return delete_variables(phi, removed), Stage2Trace("I", q, tau2, t, removed, None, t + q)

    opt_tilde = ceil_frac(k * tau2 / eps2)
    deleted = []
    cur = phi
    while True:
        deg = degrees(cur)
        low = sorted(v for v in positive_vars(cur) if deg[v] <= tau2)
        flower = find_sunflower(_low_degree_bigraph(cur, low), opt_tilde + 1)
        if flower is None:
            break
        victim = min((low[i] for i in flower.petals), key=lambda v: (deg[v], v))
        deleted.append(victim)
        cur = delete_variables(cur, [victim])
    bound = t + q + a * (opt_tilde * tau2) ** b
    return cur, Stage2Trace("II", q, tau2, t, tuple(deleted), opt_tilde, bound)


def scaling_factor(opt_tilde: int, n: int, a: int, b: int, eps3: Fraction) -> Fraction:
    if n == 0:
        return Fraction(0)
    return eps3 * opt_tilde / (10 * b * (2 * n) ** a)


def step3_reduce_clauses(
    phi: Formula, k: int, a: int, b: int, eps3, oracle=OracleKind.BEST_OF, budget: int | None = None
) -> tuple[Formula, Stage3Trace]:
    eps3 = as_fraction(eps3)
    _, opt_tilde = approx_solve(phi, k, oracle, budget)
    s = scaling_factor(opt_tilde, len(phi.variables), a, b, eps3)
    m = phi.m
    if s <= 1:
        return phi, Stage3Trace(s, False, opt_tilde, m, m, m)
    scaled = {}
    for c, mult in phi.items():
        copies = floor_frac(mult / s)
        if copies:
            scaled[c] = copies
    out = phi.with_clauses(scaled)
    return out, Stage3Trace(s, True, opt_tilde, m, out.m, floor_frac(m / s))


def run_kernel(
    phi: Formula, params: PipelineParams, oracle=OracleKind.BEST_OF, budget: int | None = None
) -> tuple[Formula, KernelTrace]:
    oracle = OracleKind(oracle)
    k, a, b, e = params.k, params.a, params.b, params.stage_eps
    timings = {}

    t0 = time.perf_counter()
    phi0, heavy = drop_heavy_negative_clauses(phi, k)
    t1 = time.perf_counter()
    phi1, tr1 = step1_reduce_negative(phi0, k, e)
    t2 = time.perf_counter()
    phi2, tr2 = step2_reduce_positive(phi1, k, a, b, e)
    t3 = time.perf_counter()
    phi3, tr3 = step3_reduce_clauses(phi2, k, a, b, e, oracle, budget)
    t4 = time.perf_counter()
    timings = {"stage0": t1 - t0, "stage1": t2 - t1, "stage2": t3 - t2, "stage3": t4 - t3}

    trace = KernelTrace(params, oracle, heavy, tr1, tr2, tr3, phi.variables, phi3.variables, timings)
    return phi3, trace


def lift_solution(
    trace: KernelTrace,
    y_kernel,
    phi_original: Formula,
    k: int | None = None,
    oracle=OracleKind.EXACT,
    budget: int | None = None,
) -> frozenset[int]:
    """Best of the kernel solution, the oracle's solution and the empty set."""
    k = trace.params.k if k is None else k
    y = frozenset(y_kernel)
    unknown = y - trace.kernel_vars
    if unknown:
        raise ValueError(f"kernel solution uses variables not in the kernel: {sorted(v + 1 for v in unknown)}")
    if len(y) > k:
        raise ValueError(f"kernel solution has {len(y)} > k = {k} true variables")
    best, best_val = y, val(phi_original, y)
    for cand in (approx_solve(phi_original, k, oracle, budget)[0], frozenset()):
        v = val(phi_original, cand)
        if v > best_val:
            best, best_val = cand, v
    return best


@dataclass(frozen=True)
class SolveResult:
    solution: frozenset[int]
    value: int
    kernel: Formula
    trace: KernelTrace
    kernel_solution: frozenset[int]
    kernel_value: int


def solve_with_kernel(
    phi: Formula,
    params: PipelineParams,
    oracle=OracleKind.BEST_OF,
    lift_oracle=OracleKind.EXACT,
    budget: int | None = None,
) -> SolveResult:
    kernel, trace = run_kernel(phi, params, oracle, budget)
    y_kernel, kernel_value = brute_force_opt(kernel, params.k, budget)
    y = lift_solution(trace, y_kernel, phi, params.k, lift_oracle, budget)
    return SolveResult(y, val(phi, y), kernel, trace, y_kernel, kernel_value)


def fptas_solve(
    phi: Formula,
    params: PipelineParams,
    oracle=OracleKind.BEST_OF,
    lift_oracle=OracleKind.EXACT,
    budget: int | None = None,
) -> frozenset[int]:
    """Kernelize, solve the kernel exhaustively and lift back."""
    return solve_with_kernel(phi, params, oracle, lift_oracle, budget).solution


def set_replication(k: int, eps) -> int:
    return max(1, ceil_frac(Fraction(k) / as_fraction(eps)))


def to_set_instance(phi: Formula, k: int, eps) -> Formula:
    """Turn the clause multiset into a set of pairwise distinct clauses.

    Every clause copy is repeated ceil(k/eps) times and each repetition gets
    its own fresh positive variable (ids ``n_vars``, ``n_vars + 1``, ...).
    """
    reps = set_replication(k, eps)
    fresh = phi.n_vars
    out: dict[Clause, int] = {}
    for c, mult in phi.items():
        for _ in range(mult * reps):
            out[Clause(c.pos | {fresh}, c.neg)] = 1
            fresh += 1
    variables = phi.variables | frozenset(range(phi.n_vars, fresh))
    return Formula(fresh, out, variables)


def lift_from_set_instance(y, phi: Formula) -> frozenset[int]:
    """Drop the fresh variables from a solution of :func:`to_set_instance`."""
    return frozenset(y) & phi.variables


def trace_to_dict(trace: KernelTrace) -> dict:
    p, s1, s2, s3 = trace.params, trace.stage1, trace.stage2, trace.stage3
    one_based = lambda vs: [v + 1 for v in vs]  # noqa: E731
    return {
        "params": {"k": p.k, "eps": frac_str(p.eps), "a": p.a, "b": p.b},
        "oracle": trace.oracle.value,
        "stage0_deleted": trace.stage0_deleted,
        "stage1": {
            "tau": frac_str(s1.tau),
            "picked": one_based(s1.picked),
            "deleted_clause_mass": s1.deleted_clause_mass,
            "neg_mass": s1.neg_mass,
            "count_bound": None if s1.count_bound is None else frac_str(s1.count_bound),
        },
        "stage2": {
            "case": s2.case,
            "q": s2.q,
            "tau2": s2.tau2,
            "neg_count": s2.neg_count,
            "deleted": one_based(s2.deleted),
            "opt_tilde": s2.opt_tilde,
            "var_bound": s2.var_bound,
        },
        "stage3": {
            "s": frac_str(s3.s),
            "applied": s3.applied,
            "opt_tilde": s3.opt_tilde,
            "mass_before": s3.mass_before,
            "mass_after": s3.mass_after,
            "mass_bound": s3.mass_bound,
        },
        "input_vars": one_based(sorted(trace.input_vars)),
        "kernel_vars": one_based(sorted(trace.kernel_vars)),
    }


def trace_from_dict(d: dict) -> KernelTrace:
    zero_based = lambda vs: tuple(v - 1 for v in vs)  # noqa: E731
    p, s1, s2, s3 = d["params"], d["stage1"], d["stage2"], d["stage3"]
    return KernelTrace(
        PipelineParams(p["k"], as_fraction(p["eps"]), p["a"], p["b"]),
        OracleKind(d["oracle"]),
        d["stage0_deleted"],
        Stage1Trace(
            as_fraction(s1["tau"]),
            zero_based(s1["picked"]),
            s1["deleted_clause_mass"],
            s1["neg_mass"],
            None if s1["count_bound"] is None else as_fraction(s1["count_bound"]),
        ),
        Stage2Trace(
            s2["case"], s2["q"], s2["tau2"], s2["neg_count"], zero_based(s2["deleted"]), s2["opt_tilde"], s2["var_bound"]
        ),
        Stage3Trace(
            as_fraction(s3["s"]), s3["applied"], s3["opt_tilde"], s3["mass_before"], s3["mass_after"], s3["mass_bound"]
        ),
        frozenset(zero_based(d["input_vars"])),
        frozenset(zero_based(d["kernel_vars"])),
    )


def ln_bound(k: int) -> float:
    """ln(k+1) + 1, the closed form the harmonic sum H(k+1) never exceeds."""
    return math.log(k + 1) + 1

"""Per-stage guarantee checks on a single instance by full enumeration.

Each check is reported as PASS, FAIL (with a witness) or SKIPPED when its
guarantee depends on K_{a,b}-freeness and the instance is not free.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cnf import BudgetExceeded, Formula, all_values, brute_force_opt, delete_variables, negative_vars, val
from .graphs import formula_is_kab_free
from .kernel import (
    KernelTrace,
    PipelineParams,
    drop_heavy_negative_clauses,
    harmonic,
    lift_solution,
    step1_reduce_negative,
    step2_reduce_positive,
    step3_reduce_clauses,
    trace_from_dict,
    trace_to_dict,
)
from .oracle import OracleKind

PASS, FAIL, SKIPPED = "PASS", "FAIL", "SKIPPED"


@dataclass
class CheckResult:
    name: str
    status: str
    detail: str = ""

    def line(self) -> str:
        return f"{self.status:8s} {self.name}" + (f"  ({self.detail})" if self.detail else "")


def _fmt(y) -> str:
    return "{" + ",".join(f"x{v + 1}" for v in sorted(y)) + "}"


@dataclass
class StageRun:
    """All intermediate formulas of one pipeline run, evaluated on every |Y| <= k."""

    params: PipelineParams
    formulas: list[Formula]  # input, after stage 0, 1, 2, 3
    heavy: int
    tr1: object
    tr2: object
    tr3: object
    solutions: list[tuple[int, ...]]
    values: list[np.ndarray]

    @property
    def opts(self) -> list[int]:
        return [int(v.max()) for v in self.values]


def run_stages(
    phi: Formula, params: PipelineParams, oracle=OracleKind.BEST_OF, budget: int | None = None
) -> StageRun:
    k, a, b, e = params.k, params.a, params.b, params.stage_eps
    phi0, heavy = drop_heavy_negative_clauses(phi, k)
    phi1, tr1 = step1_reduce_negative(phi0, k, e)
    phi2, tr2 = step2_reduce_positive(phi1, k, a, b, e)
    phi3, tr3 = step3_reduce_clauses(phi2, k, a, b, e, oracle, budget)
    formulas = [phi, phi0, phi1, phi2, phi3]
    sols, vals = all_values(formulas, k, phi.variables, budget)
    return StageRun(params, formulas, heavy, tr1, tr2, tr3, sols, vals)


def check_stage0(run: StageRun) -> CheckResult:
    v, v0 = run.values[0], run.values[1]
    bad = np.flatnonzero(v != v0 + run.heavy)
    if bad.size:
        i = bad[0]
        return CheckResult("stage0 exactness", FAIL, f"Y={_fmt(run.solutions[i])}: {v[i]} != {v0[i]} + {run.heavy}")
    return CheckResult("stage0 exactness", PASS, f"h={run.heavy}")


def check_stage1_deviation(run: StageRun) -> CheckResult:
    """|val_before - val_after - h| <= (eps1/2) OPT_before for every solution."""
    v0, v1 = run.values[1], run.values[2]
    h = run.tr1.deleted_clause_mass
    dev = v0 - v1 - h
    name = "stage1 deviation"
    if dev.size and dev.max() > 0:
        i = int(np.argmax(dev))
        return CheckResult(name, FAIL, f"Y={_fmt(run.solutions[i])} gains {dev[i]} over the deleted mass")
    worst = int(-dev.min()) if dev.size else 0
    eps1 = run.params.stage_eps
    limit = eps1 / 2 * run.opts[1]
    unsat_limit = eps1 / 2 * run.tr1.neg_mass
    if worst > limit or worst > unsat_limit:
        i = int(np.argmin(dev))
        return CheckResult(name, FAIL, f"Y={_fmt(run.solutions[i])}: deviation {worst} > {limit}")
    return CheckResult(name, PASS, f"max deviation {worst} <= {float(limit):.4g}")


def check_stage1_count(run: StageRun) -> CheckResult:
    tr, k = run.tr1, run.params.k
    i_fin = len(tr.picked)
    name = "stage1 picked-count bound"
    if tr.neg_mass == 0:
        return CheckResult(name, PASS, "no negative clauses")
    lhs = i_fin * tr.tau
    rhs = tr.neg_mass * harmonic(k + 1)
    negs = len(negative_vars(run.formulas[2]))
    if not lhs < rhs:
        return CheckResult(name, FAIL, f"i_fin*tau = {lhs} >= |C_neg| H(k+1) = {rhs}")
    if not i_fin < tr.count_bound:
        return CheckResult(name, FAIL, f"i_fin = {i_fin} >= {float(tr.count_bound):.4g}")
    if negs > i_fin:
        return CheckResult(name, FAIL, f"{negs} negative variables remain but only {i_fin} were picked")
    return CheckResult(name, PASS, f"i_fin={i_fin}, i_fin*tau={float(lhs):.4g} < {float(rhs):.4g}")


def check_stage2_opt(run: StageRun, free: bool | None) -> CheckResult:
    name = "stage2 optimum preservation"
    if not free:
        return CheckResult(name, SKIPPED, "needs a K_{a,b}-free input")
    before, after = run.opts[2], run.opts[3]
    if after < (1 - run.params.stage_eps) * before:
        return CheckResult(name, FAIL, f"OPT {before} -> {after} ({run.tr2.case})")
    return CheckResult(name, PASS, f"case {run.tr2.case}: OPT {before} -> {after}")


def check_stage2_sunflower_steps(run: StageRun, free: bool | None, budget=None) -> CheckResult:
    """In the small-optimum regime every single sunflower deletion keeps OPT."""
    name = "stage2 sunflower deletions keep OPT"
    tr = run.tr2
    if tr.case != "II":
        return CheckResult(name, PASS, "not in case II")
    if not free:
        return CheckResult(name, SKIPPED, "needs a K_{a,b}-free input")
    k = run.params.k
    cur = run.formulas[2]
    opt = brute_force_opt(cur, k, budget)[1]
    if opt > tr.opt_tilde:
        return CheckResult(name, PASS, f"OPT {opt} > estimate {tr.opt_tilde}; equality not required")
    for v in tr.deleted:
        cur = delete_variables(cur, [v])
        nxt = brute_force_opt(cur, k, budget)[1]
        if nxt != opt:
            return CheckResult(name, FAIL, f"deleting x{v + 1} changed OPT {opt} -> {nxt}")
    return CheckResult(name, PASS, f"{len(tr.deleted)} deletions, OPT stays {opt}")


def check_stage2_size(run: StageRun, free: bool | None) -> CheckResult:
    name = "stage2 variable bound"
    n_after = len(run.formulas[3].variables)
    if run.tr2.case == "II" and not free:
        return CheckResult(name, SKIPPED, "case II bound needs a K_{a,b}-free input")
    if n_after > run.tr2.var_bound:
        return CheckResult(name, FAIL, f"{n_after} variables > bound {run.tr2.var_bound}")
    return CheckResult(name, PASS, f"{n_after} <= {run.tr2.var_bound}")


def check_stage3(run: StageRun, free: bool | None) -> list[CheckResult]:
    tr = run.tr3
    phi2, phi3 = run.formulas[3], run.formulas[4]
    out = []
    if not tr.applied:
        ok = phi3 == phi2
        out.append(CheckResult("stage3 deviation", PASS if ok else FAIL, "not applied (s <= 1)"))
        out.append(CheckResult("stage3 mass bound", PASS if ok else FAIL, "not applied"))
        return out
    eps3 = run.params.stage_eps
    opt2 = run.opts[3]
    limit = eps3 / 2 * opt2
    # the deviation is at most s * (#distinct clauses); freeness is only used to bound that count
    if not free and tr.s * phi2.n_distinct > limit:
        out.append(CheckResult("stage3 deviation", SKIPPED, "too many distinct clauses for a non-free input"))
    else:
        v2, v3 = run.values[3], run.values[4]
        s = tr.s
        dev = [abs(Fraction(int(x)) - s * int(y)) for x, y in zip(v2, v3)]
        i = max(range(len(dev)), key=dev.__getitem__)
        if dev[i] > limit:
            out.append(CheckResult("stage3 deviation", FAIL, f"Y={_fmt(run.solutions[i])}: {dev[i]} > {limit}"))
        else:
            out.append(CheckResult("stage3 deviation", PASS, f"max {float(dev[i]):.4g} <= {float(limit):.4g}"))
    if phi3.m > tr.mass_bound or tr.mass_bound * tr.s > tr.mass_before:
        out.append(CheckResult("stage3 mass bound", FAIL, f"mass {phi3.m} vs bound {tr.mass_bound}"))
    else:
        out.append(CheckResult("stage3 mass bound", PASS, f"{phi3.m} <= floor(m/s) = {tr.mass_bound}"))
    return out


def check_end_to_end(phi: Formula, trace: KernelTrace, kernel: Formula, free, budget=None) -> list[CheckResult]:
    p = trace.params
    out = []
    subset = trace.kernel_vars <= trace.input_vars and kernel.variables == trace.kernel_vars
    out.append(CheckResult("variable sets only shrink", PASS if subset else FAIL))
    if not free:
        out.append(CheckResult("end-to-end (1-eps)", SKIPPED, "needs a K_{a,b}-free input"))
        return out
    opt = brute_force_opt(phi, p.k, budget)[1]
    y_kernel, _ = brute_force_opt(kernel, p.k, budget)
    identity = val(phi, y_kernel)
    lifted = val(phi, lift_solution(trace, y_kernel, phi, p.k, OracleKind.EXACT, budget))
    if identity < (1 - p.eps) * opt or lifted < (1 - p.eps) * opt:
        out.append(CheckResult("end-to-end (1-eps)", FAIL, f"kernel optimum lifts to {identity} < (1-eps)*{opt}"))
    else:
        out.append(CheckResult("end-to-end (1-eps)", PASS, f"kernel optimum scores {identity}, OPT {opt}"))
    return out


def check_trace(expected: KernelTrace | dict, actual: KernelTrace) -> CheckResult:
    """Compare a stored trace with a recomputed one, reporting the first differing field."""
    exp = expected if isinstance(expected, dict) else trace_to_dict(expected)
    act = trace_to_dict(actual)
    try:
        trace_from_dict(exp)
    except (KeyError, TypeError, ValueError) as exc:
        return CheckResult("stored trace matches", FAIL, f"unreadable trace: {exc!r}")

    def diff(x, y, path):
        if isinstance(x, dict) and isinstance(y, dict):
            for key in sorted(set(x) | set(y)):
                d = diff(x.get(key), y.get(key), f"{path}.{key}" if path else key)
                if d:
                    return d
            return None
        return None if x == y else f"{path}: stored {x!r}, recomputed {y!r}"

    d = diff(exp, act, "")
    return CheckResult("stored trace matches", FAIL if d else PASS, d or "")


def verify_instance(
    phi: Formula,
    params: PipelineParams,
    oracle=OracleKind.BEST_OF,
    budget: int | None = None,
    stored_trace: dict | None = None,
) -> list[CheckResult]:
    from .kernel import run_kernel

    try:
        free = formula_is_kab_free(phi, params.a, params.b, budget)
    except BudgetExceeded:
        free = None
    run = run_stages(phi, params, oracle, budget)
    kernel, trace = run_kernel(phi, params, oracle, budget)
    results = [
        CheckResult(
            "input K_{a,b}-free",
            PASS if free else SKIPPED,
            {True: "free", False: "not free: conditional checks skipped", None: "too large to check"}[free],
        ),
        check_stage0(run),
        check_stage1_deviation(run),
        check_stage1_count(run),
        check_stage2_opt(run, free),
        check_stage2_sunflower_steps(run, free, budget),
        check_stage2_size(run, free),
        *check_stage3(run, free),
        *check_end_to_end(phi, trace, kernel, free, budget),
    ]
    if stored_trace is not None:
        results.append(check_trace(stored_trace, trace))
    return results

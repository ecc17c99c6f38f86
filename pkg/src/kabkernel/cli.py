"""Command-line front end.

Exit codes: 0 success, 1 a verification or freeness check failed, 2 unreadable
or malformed input, 3 eps outside (0, 1/4), 4 enumeration budget exceeded,
5 generator gave up.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .cnf import (
    BudgetExceeded,
    Formula,
    ParseError,
    brute_force_opt,
    negative_vars,
    read_formula,
    serialize_formula,
    val,
    write_formula,
)
from .checks import FAIL, verify_instance
from .generate import GenerationError, GenSpec, generate_formula
from .graphs import formula_is_kab_free
from .kernel import (
    EpsilonOutOfRange,
    PipelineParams,
    as_fraction,
    frac_str,
    lift_solution,
    run_kernel,
    solve_with_kernel,
    trace_from_dict,
    trace_to_dict,
)
from .oracle import OracleKind

EXIT_CHECK, EXIT_PARSE, EXIT_EPS, EXIT_BUDGET, EXIT_GEN = 1, 2, 3, 4, 5


def formula_stats(phi: Formula) -> dict:
    return {
        "n": len(phi.variables),
        "m": phi.m,
        "distinct": phi.n_distinct,
        "neg_mass": phi.neg_mass,
        "negative_vars": len(negative_vars(phi)),
    }


def make_report(phi, kernel, trace, solution=None, value=None, opt=None) -> dict:
    d = trace_to_dict(trace)
    report = {
        "input": formula_stats(phi),
        "trace": d,
        "kernel": formula_stats(kernel),
        "bounds": {
            "negative_vars_lt": d["stage1"]["count_bound"],
            "picked": len(trace.stage1.picked),
            "vars_le": trace.stage2.var_bound,
            "mass_le": trace.stage3.mass_bound,
        },
        "seconds": {name: round(t, 6) for name, t in trace.timings.items()},
    }
    if solution is not None:
        report["solution"] = [v + 1 for v in sorted(solution)]
        report["value"] = value
    if opt is not None:
        report["opt"] = opt
    return report


def _params(args) -> PipelineParams:
    return PipelineParams(args.k, as_fraction(args.eps), args.a, args.b)


def _dump(obj, path=None):
    text = json.dumps(obj, indent=2, sort_keys=True)
    if path:
        Path(path).write_text(text + "\n")
    else:
        print(text)


def cmd_kernelize(args) -> int:
    phi = read_formula(args.input)
    params = _params(args)
    kernel, trace = run_kernel(phi, params, OracleKind(args.oracle), args.budget)
    out = args.output or str(Path(args.input).with_suffix(".kernel.cnf"))
    write_formula(kernel, out, [f"kernel k={params.k} eps={frac_str(params.eps)} a={params.a} b={params.b}"])
    report = make_report(phi, kernel, trace)
    report_path = args.report or str(Path(out).with_suffix(".json"))
    _dump(report, report_path)
    if args.json:
        _dump(report)
    else:
        print(f"kernel: {len(kernel.variables)} variables, {kernel.m} clauses -> {out}")
    return 0


def cmd_solve(args) -> int:
    phi = read_formula(args.input)
    params = _params(args)
    res = solve_with_kernel(phi, params, OracleKind(args.oracle), OracleKind(args.lift_oracle), args.budget)
    opt = brute_force_opt(phi, params.k, args.budget)[1] if args.verify_exact else None
    if args.json:
        _dump(make_report(phi, res.kernel, res.trace, res.solution, res.value, opt))
    else:
        print("solution: " + " ".join(str(v + 1) for v in sorted(res.solution)))
        print(f"value: {res.value}")
        if opt is not None:
            print(f"opt: {opt}")
    return 0


def cmd_lift(args) -> int:
    phi = read_formula(args.input)
    trace = trace_from_dict(_load_trace(args.trace))
    y = frozenset(int(tok) - 1 for tok in args.solution.replace(",", " ").split())
    lifted = lift_solution(trace, y, phi, trace.params.k, OracleKind(args.oracle), args.budget)
    print("solution: " + " ".join(str(v + 1) for v in sorted(lifted)))
    print(f"value: {val(phi, lifted)}")
    return 0


def cmd_generate(args) -> int:
    spec = GenSpec(
        n=args.n,
        m=args.m,
        k=args.k,
        a=args.a,
        b=args.b,
        eps=as_fraction(args.eps),
        max_width=args.width,
        max_mult=args.max_mult,
        neg_prob=args.neg_prob,
        seed=args.seed,
        attempts=args.attempts,
    )
    phi = generate_formula(spec)
    if args.output:
        write_formula(phi, args.output, spec.header())
    else:
        sys.stdout.write(serialize_formula(phi, spec.header()))
    return 0


def cmd_verify(args) -> int:
    phi = read_formula(args.input)
    stored = _load_trace(args.trace) if args.trace else None
    if stored is not None and args.k is None:
        params = trace_from_dict(stored).params
    elif args.k is None:
        raise SystemExit("error: --k is required unless --trace is given")
    else:
        params = _params(args)
    results = verify_instance(phi, params, OracleKind(args.oracle), args.budget, stored)
    if args.json:
        _dump([{"check": r.name, "status": r.status, "detail": r.detail} for r in results])
    else:
        for r in results:
            print(r.line())
    return EXIT_CHECK if any(r.status == FAIL for r in results) else 0


def cmd_check_free(args) -> int:
    phi = read_formula(args.input)
    free = formula_is_kab_free(phi, args.a, args.b, args.budget)
    print(f"K_{{{args.a},{args.b}}}-free: {'yes' if free else 'no'}")
    return 0 if free else EXIT_CHECK


def _load_trace(path) -> dict:
    d = json.loads(Path(path).read_text())
    # accept either a bare trace or a full report
    return d.get("trace", d)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kabkernel", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_k=True):
        p.add_argument("--k", type=int, required=need_k, help="maximum number of true variables")
        p.add_argument("--eps", default="1/8", help="accuracy, as p/q or decimal, in (0, 1/4)")
        p.add_argument("--a", type=int, default=2)
        p.add_argument("--b", type=int, default=2)
        p.add_argument("--budget", type=int, default=None, help="enumeration budget (candidate solutions)")
        p.add_argument("--json", action="store_true")

    oracles = [o.value for o in OracleKind]

    p = sub.add_parser("kernelize", help="reduce an instance to its kernel")
    p.add_argument("input")
    common(p)
    p.add_argument("--oracle", choices=oracles, default="best-of")
    p.add_argument("-o", "--output")
    p.add_argument("--report")
    p.set_defaults(func=cmd_kernelize)

    p = sub.add_parser("solve", help="approximation scheme: kernelize, enumerate, lift")
    p.add_argument("input")
    common(p)
    p.add_argument("--oracle", choices=oracles, default="best-of")
    p.add_argument("--lift-oracle", choices=oracles, default="exact")
    p.add_argument("--verify-exact", action="store_true", help="also compute the exact optimum")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("lift", help="lift a kernel solution back to the input instance")
    p.add_argument("input", help="original instance")
    p.add_argument("--trace", required=True, help="trace or report JSON written by kernelize")
    p.add_argument("--solution", required=True, help="1-based true variables, e.g. '1 4'")
    p.add_argument("--oracle", choices=oracles, default="exact")
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("generate", help="sample a K_{a,b}-free instance")
    common(p, need_k=False)
    p.set_defaults(k=2)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True, help="number of distinct clauses")
    p.add_argument("--width", type=int, default=3, help="maximum clause width")
    p.add_argument("--max-mult", type=int, default=5)
    p.add_argument("--neg-prob", type=float, default=0.3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--attempts", type=int, default=20_000)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="check every per-stage guarantee by enumeration")
    p.add_argument("input")
    common(p, need_k=False)
    p.add_argument("--oracle", choices=oracles, default="best-of")
    p.add_argument("--trace", help="stored trace to compare against")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("check-free", help="test K_{a,b}-freeness of the incidence graph")
    p.add_argument("input")
    p.add_argument("--a", type=int, default=2)
    p.add_argument("--b", type=int, default=2)
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(func=cmd_check_free)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except EpsilonOutOfRange as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EPS
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except GenerationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GEN
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())

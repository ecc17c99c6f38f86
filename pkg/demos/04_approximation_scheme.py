"""
Approximation scheme: kernelize, enumerate, lift
================================================

The kernel is small enough to search exhaustively. Its optimum is lifted back
to the input and compared with the true optimum.
"""

from __future__ import annotations

from fractions import Fraction

from kabkernel import PipelineParams, brute_force_opt, solve_with_kernel, val
from kabkernel.generate import GenSpec, generate_formula

eps = Fraction(1, 8)
worst = Fraction(1)
for seed in range(20):
    phi = generate_formula(GenSpec(n=16, m=40, k=3, max_mult=20, neg_prob=0.3, seed=seed))
    params = PipelineParams(3, eps)
    res = solve_with_kernel(phi, params)
    opt = brute_force_opt(phi, 3)[1]
    ratio = Fraction(res.value, opt) if opt else Fraction(1)
    worst = min(worst, ratio)
    print(f"seed {seed:2d}: kernel {len(res.kernel.variables):2d} vars, value {res.value:4d}, "
          f"OPT {opt:4d}, kernel optimum scores {val(phi, res.kernel_solution):4d}")
print(f"worst ratio {float(worst):.4f} >= 1 - eps = {float(1 - eps):.4f}")

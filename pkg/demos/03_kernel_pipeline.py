"""
The kernel pipeline, stage by stage
===================================

Each stage runs with eps/3. Stage 0 drops clauses with more than k negative
literals, stage 1 caps the number of negative variables, stage 2 caps the
positive ones, and stage 3 rescales large multiplicities.
"""

from __future__ import annotations

import json
from fractions import Fraction

from kabkernel import Formula, PipelineParams, run_kernel
from kabkernel.cnf import Clause, formula_from_lists
from kabkernel.generate import GenSpec, generate_formula
from kabkernel.kernel import trace_to_dict

# A generated K_{2,2}-free instance: at desk scale only stage 1 acts.
phi = generate_formula(GenSpec(n=12, m=30, k=2, max_mult=20, neg_prob=0.4, seed=3))
kernel, trace = run_kernel(phi, PipelineParams(2, Fraction(1, 5)))
print("stage 1 threshold", trace.stage1.tau, "picked", [v + 1 for v in trace.stage1.picked])
print("negative mass before/after", phi.neg_mass, kernel.neg_mass)

# Width-two positive clauses over 100 variables: K_{3,1}-free, and more
# positive variables than the q = 91 kept by stage 2.
clauses = {Clause(frozenset({v, (v + 1) % 100})): 1 for v in range(0, 100, 2)}
clauses.update({Clause(frozenset({v})): 2 for v in range(0, 100, 7)})
wide = Formula(100, clauses)
kernel, trace = run_kernel(wide, PipelineParams(1, Fraction(1, 5), a=3, b=1))
s2 = trace.stage2
print(f"stage 2 case {s2.case}: q={s2.q}, tau2={s2.tau2}, estimate {s2.opt_tilde}, "
      f"{len(s2.deleted)} sunflower deletions, {len(kernel.variables)} <= {s2.var_bound} variables")

# Huge multiplicities on two variables: stage 3 divides them by s.
heavy = formula_from_lists(2, [(9_000_000, [1]), (4_000_000, [-2]), (700_000, [1, 2])])
kernel, trace = run_kernel(heavy, PipelineParams(1, Fraction(1, 8), a=3, b=1))
s3 = trace.stage3
print(f"stage 3: s={s3.s} ({float(s3.s):.1f}), mass {s3.mass_before} -> {s3.mass_after} <= {s3.mass_bound}")

# The trace is plain JSON, with 1-based variables and exact rationals as "p/q".
print(json.dumps(trace_to_dict(trace)["stage3"], indent=2))

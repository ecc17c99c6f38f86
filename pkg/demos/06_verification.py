"""
Checking every stage guarantee on one instance
==============================================

verify_instance enumerates all solutions of size at most k and compares each
stage's output with its input. Guarantees that rely on K_{a,b}-freeness are
skipped on inputs that are not free.
"""

from __future__ import annotations

from fractions import Fraction

from kabkernel import PipelineParams, formula_from_lists
from kabkernel.checks import verify_instance
from kabkernel.generate import GenSpec, generate_formula

phi = generate_formula(GenSpec(n=10, m=20, k=2, max_mult=20, neg_prob=0.4, seed=11))
for result in verify_instance(phi, PipelineParams(2, Fraction(1, 5))):
    print(result.line())

print()
# two copies of (x1 or x2) form a K_{2,2}
dense = formula_from_lists(3, [(3, [1, 2]), (2, [1, 2, -3]), (4, [-1, -2])])
for result in verify_instance(dense, PipelineParams(2, Fraction(1, 5))):
    print(result.line())

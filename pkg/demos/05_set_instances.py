"""
From clause multisets to clause sets
====================================

Every clause copy is repeated ceil(k/eps) times and each repetition gets a
fresh positive variable, so all clauses become distinct. The optimum grows by
that factor plus at most k, and dropping the fresh variables from a solution
loses at most an eps fraction.
"""

from __future__ import annotations

from fractions import Fraction

from kabkernel import brute_force_opt, formula_from_lists, lift_from_set_instance, to_set_instance, val
from kabkernel.kernel import set_replication

phi = formula_from_lists(3, [(2, [1, -2]), (1, [3]), (1, [-1, -3])])
k, eps = 2, Fraction(1, 2)
reps = set_replication(k, eps)
out = to_set_instance(phi, k, eps)
print(f"{phi.m} clause copies x {reps} repetitions -> {out.n_distinct} distinct clauses, "
      f"max multiplicity {max(out.clauses.values())}")

y_set, opt_set = brute_force_opt(out, k)
opt = brute_force_opt(phi, k)[1]
print(f"OPT {opt}, set OPT {opt_set} in [{reps * opt}, {reps * opt + k}]")
lifted = lift_from_set_instance(y_set, phi)
print(f"lifted solution {sorted(v + 1 for v in lifted)} scores {val(phi, lifted)} >= {float((1 - eps) * opt)}")

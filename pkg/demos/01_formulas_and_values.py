"""
Formulas, multiplicities and the value of a solution
=====================================================

A formula is a multiset of clauses over variables x1..xn. A solution is the
set Y of variables set to true, with |Y| <= k. A clause is satisfied when it
has a positive literal in Y or a negative literal outside Y.
"""

from __future__ import annotations

from kabkernel import brute_force_opt, parse_formula, serialize_formula, val

# Clause lines are "multiplicity literal ... 0"; the header gives n and the
# number of distinct clause lines.
text = """\
c a small example
p mksat 3 3
3 -1 2 0
2 1 0
1 2 3 0
"""
phi = parse_formula(text)
print(f"{len(phi.variables)} variables, {phi.n_distinct} distinct clauses, mass {phi.m}")

# With Y = {x2}, the first clause holds through x2 and the third through x2,
# while (x1) is false: 3 + 1 = 4 clauses.
print("val({x2}) =", val(phi, {1}))

# The empty solution satisfies exactly the clauses with a negative literal.
print("val({}) =", val(phi, set()), "= negative mass", phi.neg_mass)

# Exhaustive search over |Y| <= k, lexicographically smallest optimum on ties.
for k in range(3):
    y, best = brute_force_opt(phi, k)
    print(f"k={k}: OPT={best} with Y={{{', '.join(f'x{v + 1}' for v in sorted(y))}}}")

# Serialisation is canonical (sorted clauses), so it round-trips exactly.
assert parse_formula(serialize_formula(phi)) == phi
print(serialize_formula(phi, ["canonical form"]))

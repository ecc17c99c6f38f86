"""
Sunflowers in K_{a,b}-free bipartite graphs
============================================

A set of left vertices is a sunflower when every pair of neighbourhoods meets
in the same core. In a K_{a,b}-free graph with left degrees at most l, any
a((w-1)l)^b left vertices contain a sunflower of size w, and the search below
finds one.
"""

from __future__ import annotations

import random

from kabkernel import Bigraph, find_low_degree_left, find_sunflower, is_kab_free, is_sunflower
from kabkernel.generate import random_kab_free_bigraph

# Three vertices share right vertex 5 and have private vertices 0..2: a sunflower
# with core {5}. Vertex 3 touches every private vertex and spoils disjointness.
g = Bigraph(4, 6, ((0, 5), (1, 5), (2, 5), (0, 1, 2)))
sf = find_sunflower(g, 3)
print("petals", sf.petals, "core", sf.core, "valid:", is_sunflower(g, sf.petals, sf.core))

# A random K_{2,2}-free graph at the size threshold: a = 2, l = 3, w = 4 needs
# 2 * (3 * 3)^2 = 162 left vertices.
a, b, l, w = 2, 2, 3, 4
rng = random.Random(0)
g = random_kab_free_bigraph(a * ((w - 1) * l) ** b, 40, a, b, l, rng, min_degree=l)
print(f"{g.n_left} left vertices, K_{{2,2}}-free: {is_kab_free(g, a, b)}")
sf = find_sunflower(g, w)
print("found", len(sf.petals), "petals with core", sf.core)
for u in sf.petals:
    print(f"  left {u}: {g.neighbors(u)}")

# The companion counting fact: with n_L >= a(2 n_R / d)^b left vertices and d >= 2b,
# some left vertex has degree at most d.
n_right, d = 10, 4
g = random_kab_free_bigraph(2 * (2 * n_right // d) ** 2, n_right, 2, 2, n_right, rng, min_degree=d + 1)
u = find_low_degree_left(g, d)
print(f"low-degree witness: left {u} with degree {g.left_degree(u)} <= {d}")

"""Ground truth by brute force: disc-type counts and subgraph counts.

Every estimated quantity in this package has an exact counterpart
computed truth-side, plus an exact identity connecting subgraph counts
to disc-type counts, which we verify on a random instance.
"""

from __future__ import annotations

from fractions import Fraction

from qdisc import RootedGraph, enumerate_catalog, generate
from qdisc.truth import (
    count_disc_types,
    count_indegree,
    count_subgraph,
    subgraph_identity_sides,
)

g = generate("disc-rich", 500, 2, seed=7, delta=0.1)
catalog = enumerate_catalog(d=2, q=1)

print("in-degree histogram:", count_indegree(g))

counts = count_disc_types(g, catalog)
occupied = {gid: c for gid, c in counts.items() if c}
print(f"{len(occupied)} of {catalog.n_nonempty + 1} disc types occur; "
      f"counts partition the {g.n} vertices: {sum(counts.values()) == g.n}")

two_star = RootedGraph(3, frozenset({(1, 0), (2, 0)}))
print("exact 2-star count:", count_subgraph(g, two_star))

lhs, rhs = subgraph_identity_sides(g, two_star, q=1)
print(f"identity check: direct count {lhs} == "
      f"weighted disc-count combination {rhs} -> {Fraction(lhs) == rhs}")

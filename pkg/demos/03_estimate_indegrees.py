"""Estimate in-degree counts with out-queries only.

The estimator never queries incoming edges: it chains levels of
(simulated) quantum counting and Grover sampling over edge slots, then
inverts the binomial overcount.  The ledger records the charged quantum
query cost and proves no in-queries happened.
"""

from __future__ import annotations

from qdisc import UnidirectionalView, est_vertices, generate
from qdisc.truth import count_indegree

n, d, delta = 2**14, 2, 0.2
g = generate("disc-rich", n, d, seed=0, delta=0.1)
truth = count_indegree(g)
print("truth:", truth)

for mode in ("deterministic-exact", "stochastic"):
    view = UnidirectionalView(g)
    report = est_vertices(view, delta, seed=42, count_mode=mode)
    err = sum(abs(report.estimates[k] - truth[k]) for k in report.estimates)
    print(f"\n{mode}:")
    print("  estimates:", {k: round(v) for k, v in report.estimates.items()})
    print(f"  |error|_1 = {err:.0f}  (tolerance delta*n = {delta * n:.0f})")
    print(f"  ledger: {report.ledger}  <- classical_in stays 0")

"""Reproduce the sublinear query exponent empirically.

For the d=2 in-degree estimator the charged quantum cost should scale
as n^(1/2 - 1/(2(2^d - 1))) = n^(1/3).  We sweep n, average the ledger
cost, and fit the log-log slope (with a bootstrap confidence interval).
"""

from __future__ import annotations

import numpy as np

from qdisc import UnidirectionalView, est_vertices, fit_exponent, generate

pairs = []
for p in range(10, 21, 2):
    n = 2**p
    g = generate("disc-rich", n, 2, seed=1, delta=0.1)
    costs = []
    for s in range(20):
        report = est_vertices(UnidirectionalView(g), 0.2, seed=s)
        costs.append(report.ledger["quantum_cost"])
        pairs.append((n, costs[-1]))
    print(f"n = 2^{p:<2d}  mean quantum cost = {np.mean(costs):.3e}")

slope, (lo, hi) = fit_exponent(pairs)
print(f"\nfitted slope: {slope:.4f}  (bootstrap CI [{lo:.4f}, {hi:.4f}])")
print(f"predicted exponent for d=2: 1/2 - 1/6 = {1/3:.4f}")

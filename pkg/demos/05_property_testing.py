"""Test k-star-freeness: quantum frequency tester vs classical baseline.

Hard instances come from a function-collision reduction: f: [N] -> [R]
becomes a digraph whose k-collisions are k-stars.  The quantum tester
estimates disc-type frequencies with out-queries only and thresholds the
probability that k sampled discs witness a star; the classical baseline
needs in-queries.
"""

from __future__ import annotations

from qdisc import UnidirectionalView
from qdisc.testers import (
    build_reduction_instance,
    classical_bidirectional_star_test,
    reduction_disc_catalog,
    star_family,
    test_property,
)

N, k, eps = 2**13, 2, 0.05
family = star_family(k, catalog=reduction_disc_catalog(k, radius=60), k_discs=60)
print(f"witness types (root in-degree >= {k}): {sorted(family.witness_ids)}")

for kind in ("far", "free"):
    inst = build_reduction_instance(
        kind, N, k, seed=3, eps=eps if kind == "far" else None
    )
    view = UnidirectionalView(inst.digraph())
    verdict = test_property(view, family, seed=9, sample_scale=64)
    print(f"\n{kind} instance (n = {inst.n}, R/N = {float(inst.c):.2f}):")
    print(f"  quantum tester: est-sum {verdict.est_sum:.3f} -> "
          f"{'accept' if verdict.accept else 'reject'}"
          f"  (in-queries: {verdict.report.ledger['classical_in']})")
    accept, ledger = classical_bidirectional_star_test(
        inst.digraph(), k, eps, seed=9
    )
    print(f"  classical baseline: {'accept' if accept else 'reject'}"
          f"  (in-queries: {ledger.classical_in}, quantum cost: "
          f"{ledger.quantum_cost})")

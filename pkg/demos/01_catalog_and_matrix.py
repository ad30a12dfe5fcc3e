"""Enumerate a disc-type catalog and inspect its overcount matrix.

A q-disc is the subgraph induced by all vertices within undirected
distance q of a root.  The catalog lists every isomorphism type a
d-bounded digraph can realize, each with a fixed edge ordering whose
prefixes are themselves catalog types.  The upper-triangular matrix M
counts how often a type is spanned inside a larger one; inverting it
turns raw containment counts into exact per-type counts.
"""

from __future__ import annotations

from qdisc import enumerate_catalog

catalog = enumerate_catalog(d=1, q=1)
print(f"catalog for d=1, q=1: {catalog.n_nonempty} nonempty types, "
      f"max edges {catalog.m}")
print()
print("id | edges | canonical edge set | prefix chain")
print(catalog.dump())

matrix = catalog.matrix()
print("overcount matrix (rows/cols in id order):")
print(matrix.dump_csv())
print(f"|M^-1|_1 = {matrix.inv_one_norm()} "
      "(amplifies estimation error when solving M cnt = x)")

big = enumerate_catalog(d=2, q=1)
print(f"\nfor d=2, q=1 the catalog already has {big.n_nonempty} nonempty "
      f"types with up to {big.m} edges")

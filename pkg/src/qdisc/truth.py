"""Exact brute-force oracles: ground truth for every estimated quantity."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .digraph import Digraph, bfs_disc
from .isotypes import (
    DiscType,
    Encoding,
    RootedGraph,
    TypeCatalog,
    canonical_encoding,
    make_disc_type,
    mu_of,
    unrooted_automorphism_orbit_of_root,
)

MAX_PATTERN_VERTICES = 6


class CatalogIncompleteError(RuntimeError):
    """A vertex's disc type is missing from the catalog."""


@dataclass
class TruthReport:
    cnt: dict[int, int] = field(default_factory=dict)
    indegree_hist: dict[int, int] = field(default_factory=dict)
    subgraph_counts: dict[str, int] = field(default_factory=dict)

    def to_csv(self) -> str:
        lines = ["kind,key,count"]
        lines.extend(f"disc,{k},{v}" for k, v in sorted(self.cnt.items()))
        lines.extend(f"indegree,{k},{v}" for k, v in sorted(self.indegree_hist.items()))
        lines.extend(f"subgraph,{k},{v}" for k, v in sorted(self.subgraph_counts.items()))
        return "\n".join(lines) + "\n"


def count_indegree(g: Digraph) -> dict[int, int]:
    """Exact histogram of in-degrees 0..d."""
    hist = {k: 0 for k in range(g.d + 1)}
    for tails in g.in_adj:
        hist[len(tails)] += 1
    return hist


def disc_histogram(g: Digraph, q: int) -> dict[Encoding, int]:
    """Count vertices by canonical q-disc encoding (no catalog required)."""
    hist: dict[Encoding, int] = {}
    relabel_cache: dict[tuple[int, tuple], Encoding] = {}
    for v in range(g.n):
        s, edges = bfs_disc(g, v, q).relabel()
        key = (s, edges)
        enc = relabel_cache.get(key)
        if enc is None:
            enc = canonical_encoding(RootedGraph(s, frozenset(edges)))
            relabel_cache[key] = enc
        hist[enc] = hist.get(enc, 0) + 1
    return hist


def count_disc_types(g: Digraph, catalog: TypeCatalog) -> dict[int, int]:
    """cnt_Gamma for every catalog type (including Gamma_0); the counts
    partition the vertex set."""
    counts = {t.id: 0 for t in catalog.types}
    for enc, c in disc_histogram(g, catalog.q).items():
        if enc not in catalog._by_encoding:
            raise CatalogIncompleteError(
                f"disc type {enc} not in catalog (d={catalog.d}, q={catalog.q})"
            )
        counts[catalog._by_encoding[enc]] += c
    return counts


def _unrooted_automorphism_count(h: RootedGraph) -> int:
    edges = h.edges
    return sum(
        1
        for perm in itertools.permutations(range(h.s))
        if all((perm[u], perm[v]) in edges for u, v in edges)
    )


def count_subgraph(g: Digraph, h: RootedGraph) -> int:
    """Exact number of (not necessarily induced) subgraphs of g isomorphic
    to h, counted as unlabeled instances.

    Counts injective edge-preserving maps by backtracking in a connected
    order, then divides by the number of automorphisms of h ignoring the
    root (maps with the same image differ by exactly one automorphism).
    """
    if h.s > MAX_PATTERN_VERTICES:
        raise ValueError(f"pattern capped at {MAX_PATTERN_VERTICES} vertices")
    if h.s == 0:
        return 0
    adj = h.undirected_adj()
    order = [0]
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for u in frontier:
            for w in sorted(adj[u]):
                if w not in seen:
                    seen.add(w)
                    order.append(w)
                    nxt.append(w)
        frontier = nxt
    if len(order) < h.s:
        raise ValueError("pattern must be connected")

    out_req: dict[int, list[tuple[int, int]]] = {p: [] for p in range(h.s)}
    for u, v in h.edges:
        out_req[u].append((u, v))

    n_maps = 0
    assign: dict[int, int] = {}
    used: set[int] = set()

    def consistent(p: int, x: int) -> bool:
        for u, v in h.edges:
            if u == p and v in assign and assign[v] not in g.out_adj[x]:
                return False
            if v == p and u in assign and x not in g.out_adj[assign[u]]:
                return False
        return True

    def candidates(p: int):
        for u, v in h.edges:
            if v == p and u in assign:
                return list(g.out_adj[assign[u]])
            if u == p and v in assign:
                return list(g.in_adj[assign[v]])
        return range(g.n)

    def backtrack(pos: int) -> None:
        nonlocal n_maps
        if pos == len(order):
            n_maps += 1
            return
        p = order[pos]
        for x in candidates(p):
            if x in used or not consistent(p, x):
                continue
            assign[p] = x
            used.add(x)
            backtrack(pos + 1)
            used.discard(x)
            del assign[p]

    backtrack(0)
    return n_maps // _unrooted_automorphism_count(h)


def choose_pattern_root(h: RootedGraph, q: int) -> int:
    """A vertex within undirected distance q of all of V(h), or raise."""
    adj = h.undirected_adj()
    best = None
    for v in range(h.s):
        dist = {v: 0}
        frontier = [v]
        while frontier:
            nxt = []
            for u in frontier:
                for w in adj[u]:
                    if w not in dist:
                        dist[w] = dist[u] + 1
                        nxt.append(w)
            frontier = nxt
        if len(dist) == h.s:
            ecc = max(dist.values())
            if ecc <= q and (best is None or (ecc, v) < best):
                best = (ecc, v)
    if best is None:
        raise ValueError(f"pattern has no root of eccentricity <= {q}")
    return best[1]


def rooted_at(h: RootedGraph, v: int) -> RootedGraph:
    """Re-root h at vertex v (relabeled so v becomes 0)."""
    order = [v] + [u for u in range(h.s) if u != v]
    idx = {u: i for i, u in enumerate(order)}
    return RootedGraph(h.s, frozenset((idx[a], idx[b]) for a, b in h.edges))


def subgraph_identity_sides(
    g: Digraph, h: RootedGraph, q: int
) -> tuple[int, Fraction]:
    """Both sides of the subgraph-count identity

        #H = (1/c_H) * sum over Gamma' >= Gamma_H of
             (mu_{Gamma_H,Gamma'} / mu_{Gamma_H,Gamma_H}) * cnt_{Gamma'}

    computed independently and exactly.  Only disc types that occur in g
    contribute, so no catalog enumeration is needed.
    """
    root = choose_pattern_root(h, q)
    rooted = rooted_at(h, root)
    gamma_h = make_disc_type(rooted, q)
    c_h = unrooted_automorphism_orbit_of_root(rooted)
    mu_hh = mu_of(gamma_h, gamma_h.canon)
    acc = Fraction(0)
    for enc, cnt in disc_histogram(g, q).items():
        gp = RootedGraph(enc[0], frozenset(enc[1]))
        if len(gp.edges) < gamma_h.n_edges:
            continue
        m = mu_of(gamma_h, gp)
        if m:
            acc += Fraction(m * cnt)
    rhs = acc / (c_h * mu_hh)
    lhs = count_subgraph(g, h)
    return lhs, rhs


def verify_obs_identity(
    g: Digraph, h: RootedGraph, q: int, catalog: Optional[TypeCatalog] = None
) -> bool:
    """Exact check of the subgraph-count identity; ``catalog`` only pins q."""
    if catalog is not None:
        q = catalog.q
    lhs, rhs = subgraph_identity_sides(g, h, q)
    return Fraction(lhs) == rhs


def truth_report(
    g: Digraph,
    catalog: Optional[TypeCatalog] = None,
    patterns: dict[str, RootedGraph] | None = None,
) -> TruthReport:
    report = TruthReport(indegree_hist=count_indegree(g))
    if catalog is not None:
        report.cnt = count_disc_types(g, catalog)
    for name, h in (patterns or {}).items():
        report.subgraph_counts[name] = count_subgraph(g, h)
    return report

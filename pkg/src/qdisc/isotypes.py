"""Rooted-graph isomorphism types: canonical forms, catalogs, tuple classes,
the overcount coefficients mu, and the correction matrix M.

A disc type Gamma is a rooted digraph (root = vertex 0 after
canonicalization) in which every vertex lies within undirected distance q
of the root and all in-/out-degrees are bounded.  Types are compared under
root-preserving isomorphism.  Each type carries a fixed edge ordering built
iteratively: a type with i edges extends a chosen (i-1)-edge predecessor by
one edge, and the prefix spanned by the first j ordered edges is itself a
type Gamma_[j].

For a pair Gamma <= Gamma' the W-tuples are the (root, e_1..e_i) sequences
of distinct edges of Gamma' whose prefixes sequentially span Gamma_[1..j];
mu_{Gamma,Gamma'} = |W_{Gamma,Gamma'}| is the overcount multiplicity and
fills the upper-triangular correction matrix M.  All mu/kappa/M arithmetic
is exact (big integers and rationals).
"""

from __future__ import annotations

import itertools
import math
import os
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Optional, Sequence

Edge = tuple[int, int]
Encoding = tuple[int, tuple[Edge, ...]]

DEFAULT_ENUM_CAP = 20000
ENUM_CAP_ENV = "QDISC_ENUM_CAP"


class EnumerationCapError(RuntimeError):
    """Raised when a catalog would exceed the configured enumeration cap."""

    def __init__(self, cap: int):
        super().__init__(
            f"catalog enumeration exceeded the cap of {cap} types; "
            f"override with the {ENUM_CAP_ENV} environment variable"
        )
        self.cap = cap


@dataclass(frozen=True)
class RootedGraph:
    """Rooted digraph on vertices 0..s-1 with vertex 0 as root."""

    s: int
    edges: frozenset[Edge]

    def encode(self) -> Encoding:
        return (self.s, tuple(sorted(self.edges)))

    def out_degree(self, v: int) -> int:
        return sum(1 for u, _ in self.edges if u == v)

    def in_degree(self, v: int) -> int:
        return sum(1 for _, w in self.edges if w == v)

    def undirected_adj(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.s)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def distances_from_root(self) -> list[float]:
        adj = self.undirected_adj()
        dist = [math.inf] * self.s
        dist[0] = 0
        frontier = [0]
        step = 0
        while frontier:
            step += 1
            nxt = []
            for u in frontier:
                for w in adj[u]:
                    if dist[w] == math.inf:
                        dist[w] = step
                        nxt.append(w)
            frontier = nxt
        return dist

    def radius_ok(self, q: int) -> bool:
        return all(d <= q for d in self.distances_from_root())

    def degrees_ok(self, d_in: int, d_out: int) -> bool:
        indeg = [0] * self.s
        outdeg = [0] * self.s
        for u, v in self.edges:
            outdeg[u] += 1
            indeg[v] += 1
        return max(indeg, default=0) <= d_in and max(outdeg, default=0) <= d_out


SINGLE_VERTEX = RootedGraph(1, frozenset())


# -- canonical form ----------------------------------------------------


def _stable_partition(s: int, edges: frozenset[Edge]) -> list[list[int]]:
    """Iterated-invariant partition of the vertices; root isolated first.

    Class order is derived from invariant signatures only, so it is
    identical for isomorphic inputs.  Canonical search and automorphism
    search permute vertices only within classes.
    """
    out_nb: list[list[int]] = [[] for _ in range(s)]
    in_nb: list[list[int]] = [[] for _ in range(s)]
    for u, v in edges:
        out_nb[u].append(v)
        in_nb[v].append(u)
    color = [0 if v == 0 else 1 for v in range(s)]
    while True:
        sig = [
            (
                color[v],
                tuple(sorted(color[w] for w in out_nb[v])),
                tuple(sorted(color[w] for w in in_nb[v])),
            )
            for v in range(s)
        ]
        order = sorted(set(sig))
        new_color = [order.index(sig[v]) for v in range(s)]
        if new_color == color:
            break
        color = new_color
    classes: dict[int, list[int]] = defaultdict(list)
    for v in range(s):
        classes[color[v]].append(v)
    return [classes[c] for c in sorted(classes)]


def _assignments(classes: list[list[int]]):
    """All vertex->label maps permuting within classes, deterministic order."""
    label_blocks = []
    offset = 0
    for cls in classes:
        label_blocks.append(list(range(offset, offset + len(cls))))
        offset += len(cls)
    per_class = [
        [list(zip(cls, perm)) for perm in itertools.permutations(labels)]
        for cls, labels in zip(classes, label_blocks)
    ]
    for combo in itertools.product(*per_class):
        mapping = {}
        for block in combo:
            for v, lab in block:
                mapping[v] = lab
        yield mapping


@lru_cache(maxsize=200000)
def _canonical_with_perm(encoding: Encoding) -> tuple[Encoding, tuple[int, ...]]:
    s, edge_tuple = encoding
    edges = frozenset(edge_tuple)
    classes = _stable_partition(s, edges)
    best: Optional[tuple[Edge, ...]] = None
    best_map: Optional[dict] = None
    for mapping in _assignments(classes):
        cand = tuple(sorted((mapping[u], mapping[v]) for u, v in edges))
        if best is None or cand < best:
            best = cand
            best_map = mapping
    assert best is not None and best_map is not None
    perm = tuple(best_map[v] for v in range(s))
    assert perm[0] == 0, "root must stay at label 0"
    return (s, best), perm


def canonicalize(g: RootedGraph) -> RootedGraph:
    """Canonical representative: lexicographically minimal edge encoding over
    all relabelings that fix the root.  Two rooted graphs canonicalize equal
    iff they are isomorphic via a root-preserving map."""
    enc, _ = _canonical_with_perm(g.encode())
    return RootedGraph(enc[0], frozenset(enc[1]))


def canonical_encoding(g: RootedGraph) -> Encoding:
    return _canonical_with_perm(g.encode())[0]


def canonical_perm(g: RootedGraph) -> tuple[int, ...]:
    """The relabeling (original -> canonical label) realizing the minimum."""
    return _canonical_with_perm(g.encode())[1]


@lru_cache(maxsize=50000)
def _automorphisms_cached(encoding: Encoding) -> tuple[tuple[int, ...], ...]:
    s, edge_tuple = encoding
    edges = frozenset(edge_tuple)
    classes = _stable_partition(s, edges)
    auts = []
    for mapping in _assignments(classes):
        if all((mapping[u], mapping[v]) in edges for u, v in edges):
            auts.append(tuple(mapping[v] for v in range(s)))
    return tuple(auts)


def automorphisms(g: RootedGraph) -> tuple[tuple[int, ...], ...]:
    """All root-preserving self-isomorphisms, found within invariant classes.

    Sound because automorphisms preserve the iterated invariants; the root
    is a singleton class, so every returned permutation fixes it.
    """
    return _automorphisms_cached(g.encode())


def unrooted_automorphism_orbit_of_root(g: RootedGraph) -> int:
    """|{phi(root)}| over automorphisms of g *ignoring* the root marking
    (the c_H constant of the subgraph-count identity)."""
    edges = g.edges
    orbit = set()
    for perm in itertools.permutations(range(g.s)):
        if all((perm[u], perm[v]) in edges for u, v in edges):
            orbit.add(perm[0])
    return len(orbit)


# -- disc types and catalogs ------------------------------------------


def _span_subgraph(root: int, edges: Iterable[Edge]) -> RootedGraph:
    """Rooted graph spanned by the root plus the given edges, relabeled so
    the root is 0 and the remaining vertices follow in sorted-id order."""
    edges = list(edges)
    verts = {root}
    for u, v in edges:
        verts.add(u)
        verts.add(v)
    order = [root] + sorted(verts - {root})
    idx = {v: i for i, v in enumerate(order)}
    return RootedGraph(len(order), frozenset((idx[u], idx[v]) for u, v in edges))


@dataclass(frozen=True)
class DiscType:
    """A canonical isomorphism type with its fixed edge ordering.

    ``edge_order`` lists the edges of ``canon`` in the iterative
    construction order; ``prefix_encodings[j]`` is the canonical encoding of
    the type spanned by the first j ordered edges (Gamma_[j]).
    """

    canon: RootedGraph
    edge_order: tuple[Edge, ...]
    prefix_encodings: tuple[Encoding, ...]
    id: Optional[int] = None
    prefix_ids: Optional[tuple[int, ...]] = None

    @property
    def n_edges(self) -> int:
        return len(self.edge_order)

    def encode(self) -> Encoding:
        return self.canon.encode()

    def check_prefix_soundness(self) -> None:
        for j in range(len(self.edge_order) + 1):
            sub = _span_subgraph(0, self.edge_order[:j])
            if canonical_encoding(sub) != self.prefix_encodings[j]:
                raise AssertionError(
                    f"prefix {j} of {self.encode()} does not span its prefix type"
                )


EMPTY_TYPE = DiscType(
    canon=SINGLE_VERTEX,
    edge_order=(),
    prefix_encodings=(SINGLE_VERTEX.encode(),),
)


def _predecessor_candidates(g: RootedGraph, q: int):
    """(pruned predecessor, removed edge) pairs: remove one edge, drop any
    non-root vertex left isolated, keep only radius-valid results."""
    for e in sorted(g.edges):
        rest = g.edges - {e}
        touched = {0}
        for u, v in rest:
            touched.add(u)
            touched.add(v)
        keep = sorted(v for v in range(g.s) if v in touched)
        idx = {v: i for i, v in enumerate(keep)}
        if 0 not in idx or idx[0] != 0:
            continue
        pred = RootedGraph(len(keep), frozenset((idx[u], idx[v]) for u, v in rest))
        if pred.radius_ok(q):
            yield pred, e


def make_disc_type(g: RootedGraph, q: int) -> DiscType:
    """Build a DiscType (edge ordering + prefix chain) for a standalone
    rooted graph, using the same deterministic predecessor rule as catalog
    enumeration: smallest (vertex count, encoding) predecessor, then the
    lexicographically smallest removed edge in canonical labels."""
    canon = canonicalize(g)
    if not canon.radius_ok(q):
        raise ValueError("graph has vertices beyond distance q of the root")
    if not canon.edges:
        return EMPTY_TYPE
    best = None
    for pred, e in _predecessor_candidates(canon, q):
        pred_enc = canonical_encoding(pred)
        key = (pred_enc[0], pred_enc, e)
        if best is None or key < best[0]:
            best = (key, pred, e)
    if best is None:
        raise ValueError("no valid predecessor; graph is not a disc type")
    _, pred, removed = best
    pred_type = make_disc_type(pred, q)
    edge_order = _lift_edge_order(canon, pred_type, removed)
    return DiscType(
        canon=canon,
        edge_order=edge_order,
        prefix_encodings=pred_type.prefix_encodings + (canon.encode(),),
    )


def _lift_edge_order(
    canon: RootedGraph, pred_type: DiscType, removed: Edge
) -> tuple[Edge, ...]:
    """Map the predecessor's edge ordering into ``canon``'s labels and append
    the removed edge."""
    rest = canon.edges - {removed}
    touched = {0}
    for u, v in rest:
        touched.add(u)
        touched.add(v)
    keep = sorted(touched)
    idx = {v: i for i, v in enumerate(keep)}  # canon label -> compact label
    back = {i: v for v, i in idx.items()}
    sub = RootedGraph(len(keep), frozenset((idx[u], idx[v]) for u, v in rest))
    perm = canonical_perm(sub)  # compact label -> canonical label
    inv = {perm[i]: i for i in range(sub.s)}  # canonical label -> compact
    assert canonical_encoding(sub) == pred_type.encode()
    lifted = tuple(
        (back[inv[u]], back[inv[v]]) for u, v in pred_type.edge_order
    )
    return lifted + (removed,)


@dataclass
class TypeCatalog:
    """The enumerated set D_{d,q} in a fixed linear extension of <=.

    ``types[0]`` is the single-vertex type Gamma_0; ``by_edges[i]`` lists the
    ids with i edges.  ``m`` is the maximum edge count realized by the
    catalog (the algorithms iterate i = 1..m); ``m_bound``/``s_bound`` are
    the a-priori 2d*s_{d,q} and s_{d,q} limits.
    """

    d: int
    q: int
    d_in: int
    d_out: int
    types: list[DiscType]
    by_edges: dict[int, list[int]]
    _by_encoding: dict[Encoding, int] = field(default_factory=dict)
    _matrix: Optional["CorrectionMatrix"] = None

    @property
    def s_bound(self) -> int:
        return sum((2 * self.d) ** j for j in range(self.q + 1))

    @property
    def m_bound(self) -> int:
        return 2 * self.d * self.s_bound

    @property
    def m(self) -> int:
        return max(self.by_edges)

    @property
    def n_nonempty(self) -> int:
        """D_{d,q}: the number of nonempty types (Gamma_0 excluded)."""
        return len(self.types) - 1

    def id_of(self, g: RootedGraph) -> int:
        enc = canonical_encoding(g)
        if enc not in self._by_encoding:
            raise KeyError(f"type {enc} not in catalog (d={self.d}, q={self.q})")
        return self._by_encoding[enc]

    def __contains__(self, g: RootedGraph) -> bool:
        return canonical_encoding(g) in self._by_encoding

    def matrix(self) -> "CorrectionMatrix":
        if self._matrix is None:
            self._matrix = build_matrix(self)
        return self._matrix

    def dump(self) -> str:
        lines = []
        for t in self.types:
            edges = ";".join(f"{u}->{v}" for u, v in sorted(t.canon.edges))
            chain = ",".join(str(i) for i in (t.prefix_ids or ()))
            lines.append(f"{t.id} | {t.n_edges} | {edges or '-'} | {chain or '-'}")
        return "\n".join(lines) + "\n"


def _enum_cap() -> int:
    return int(os.environ.get(ENUM_CAP_ENV, DEFAULT_ENUM_CAP))


def enumerate_catalog(
    d: int,
    q: int,
    d_out: Optional[int] = None,
    admit: Optional[Callable[[RootedGraph], bool]] = None,
    cap: Optional[int] = None,
) -> TypeCatalog:
    """Enumerate every isomorphism type of rooted digraphs with radius <= q
    and bounded degrees, by levelwise single-edge extension.

    Completeness: every valid type with i >= 1 edges has an edge whose
    removal (pruning at most one isolated endpoint) leaves a valid
    (i-1)-edge type -- take a non-tree edge of an undirected BFS tree from
    the root, or a deepest leaf edge if the graph is a tree.  So extending
    each (i-1)-edge type by one edge reaches all of level i.

    ``d_out`` restricts out-degrees separately (default d); ``admit``
    optionally restricts the catalog to a structurally closed sub-family
    (used for reduction-instance testing, where the full catalog at the
    required radius would be astronomically large).
    """
    d_in = d
    d_out = d if d_out is None else d_out
    cap = cap if cap is not None else _enum_cap()
    if admit is None:
        admit = lambda g: True

    levels: list[list[RootedGraph]] = [[SINGLE_VERTEX]]
    seen: set[Encoding] = {SINGLE_VERTEX.encode()}
    total = 1
    while True:
        new: dict[Encoding, RootedGraph] = {}
        for g in levels[-1]:
            for ext in _extensions(g, d_in, d_out, q):
                enc = canonical_encoding(ext)
                if enc in seen or enc in new:
                    continue
                cand = RootedGraph(enc[0], frozenset(enc[1]))
                if not admit(cand):
                    continue
                new[enc] = cand
                total += 1
                if total > cap:
                    raise EnumerationCapError(cap)
        if not new:
            break
        batch = sorted(new.values(), key=lambda g: (g.s, g.encode()))
        levels.append(batch)
        seen.update(new)

    # Assign ids in a linear extension: sort key (edge count, vertex count,
    # encoding).  Edge count alone already forces upper-triangularity of M.
    types: list[DiscType] = [
        DiscType(
            canon=SINGLE_VERTEX,
            edge_order=(),
            prefix_encodings=(SINGLE_VERTEX.encode(),),
            id=0,
            prefix_ids=(0,),
        )
    ]
    by_encoding = {SINGLE_VERTEX.encode(): 0}
    by_edges: dict[int, list[int]] = {0: [0]}
    next_id = 1
    for level_idx in range(1, len(levels)):
        by_edges[level_idx] = []
        for g in levels[level_idx]:
            # Deterministic predecessor: smallest catalog id among the
            # (i-1)-edge types below g, then smallest removed edge.
            best = None
            for pred, e in _predecessor_candidates(g, q):
                enc = canonical_encoding(pred)
                if enc not in by_encoding:
                    continue  # predecessor pruned by `admit`
                key = (by_encoding[enc], e)
                if best is None or key < best[0]:
                    best = (key, enc, e)
            if best is None:
                raise RuntimeError(f"no admitted predecessor for {g.encode()}")
            (pred_id, removed) = best[0]
            pred_type = types[pred_id]
            edge_order = _lift_edge_order(g, pred_type, removed)
            t = DiscType(
                canon=g,
                edge_order=edge_order,
                prefix_encodings=pred_type.prefix_encodings + (g.encode(),),
                id=next_id,
                prefix_ids=(pred_type.prefix_ids or ()) + (next_id,),
            )
            t.check_prefix_soundness()
            types.append(t)
            by_encoding[g.encode()] = next_id
            by_edges[level_idx].append(next_id)
            next_id += 1

    return TypeCatalog(
        d=d,
        q=q,
        d_in=d_in,
        d_out=d_out,
        types=types,
        by_edges=by_edges,
        _by_encoding=by_encoding,
    )


def _extensions(g: RootedGraph, d_in: int, d_out: int, q: int):
    indeg = [g.in_degree(v) for v in range(g.s)]
    outdeg = [g.out_degree(v) for v in range(g.s)]
    # New edge between existing vertices.
    for u in range(g.s):
        if outdeg[u] >= d_out:
            continue
        for v in range(g.s):
            if u == v or indeg[v] >= d_in or (u, v) in g.edges:
                continue
            cand = RootedGraph(g.s, g.edges | {(u, v)})
            if cand.radius_ok(q):
                yield cand
    # New edge to/from a fresh vertex.
    nv = g.s
    for u in range(g.s):
        if outdeg[u] < d_out and d_in >= 1:
            cand = RootedGraph(g.s + 1, g.edges | {(u, nv)})
            if cand.radius_ok(q):
                yield cand
        if indeg[u] < d_in and d_out >= 1:
            cand = RootedGraph(g.s + 1, g.edges | {(nv, u)})
            if cand.radius_ok(q):
                yield cand


def make_star_type(k: int) -> DiscType:
    """The k-star type: k sources, one edge each into the root."""
    g = RootedGraph(k + 1, frozenset((j, 0) for j in range(1, k + 1)))
    return make_disc_type(g, 1)


# -- W-tuples, kappa, mu ----------------------------------------------


@dataclass
class TupleClassTable:
    """W-tuple levels for a pair Gamma <= Gamma', with automorphism classes
    and the kappa transition counts.

    ``levels[j]`` lists the tuples of W_{Gamma_[j],Gamma'} as edge
    sequences (the root component is always rt(Gamma') = 0).
    ``class_of[j]`` maps each tuple to its class index; ``class_members[j]``
    lists the classes.  ``kappa[(j, c1, c2)]`` counts edges extending any
    representative of class c1 at level j-1 into class c2 at level j.
    """

    gamma: DiscType
    gamma_prime: RootedGraph
    levels: list[list[tuple[Edge, ...]]]
    class_of: list[dict[tuple[Edge, ...], int]]
    class_members: list[list[list[tuple[Edge, ...]]]]
    kappa: dict[tuple[int, int, int], int]

    @property
    def mu(self) -> int:
        return len(self.levels[-1])


def _tuple_table(gamma: DiscType, gamma_prime: RootedGraph) -> TupleClassTable:
    gp = canonicalize(gamma_prime)
    i = gamma.n_edges
    edge_list = sorted(gp.edges)
    span_cache: dict[frozenset[Edge], Encoding] = {}

    def span_enc(edges: tuple[Edge, ...]) -> Encoding:
        key = frozenset(edges)
        if key not in span_cache:
            span_cache[key] = canonical_encoding(_span_subgraph(0, key))
        return span_cache[key]

    levels: list[list[tuple[Edge, ...]]] = [[()]]
    for j in range(1, i + 1):
        want = gamma.prefix_encodings[j]
        nxt = []
        for tup in levels[-1]:
            used = set(tup)
            for e in edge_list:
                if e in used:
                    continue
                cand = tup + (e,)
                if span_enc(cand) == want:
                    nxt.append(cand)
        levels.append(nxt)

    auts = automorphisms(gp)

    def act(perm: tuple[int, ...], tup: tuple[Edge, ...]) -> tuple[Edge, ...]:
        return tuple((perm[u], perm[v]) for u, v in tup)

    class_of: list[dict[tuple[Edge, ...], int]] = []
    class_members: list[list[list[tuple[Edge, ...]]]] = []
    for j in range(i + 1):
        mapping: dict[tuple[Edge, ...], int] = {}
        members: list[list[tuple[Edge, ...]]] = []
        level_set = set(levels[j])
        for tup in levels[j]:
            if tup in mapping:
                continue
            orbit = {act(p, tup) for p in auts}
            if not orbit <= level_set:
                raise AssertionError("automorphism orbit left the W-level")
            cid = len(members)
            ordered = sorted(orbit)
            members.append(ordered)
            for o in ordered:
                mapping[o] = cid
        class_of.append(mapping)
        class_members.append(members)

    kappa: dict[tuple[int, int, int], int] = {}
    for j in range(1, i + 1):
        level_set = set(levels[j])
        for c1, members in enumerate(class_members[j - 1]):
            per_rep: Optional[dict[int, int]] = None
            for rep in members:
                counts: dict[int, int] = defaultdict(int)
                used = set(rep)
                for e in edge_list:
                    if e in used:
                        continue
                    ext = rep + (e,)
                    if ext in level_set:
                        counts[class_of[j][ext]] += 1
                counts = dict(counts)
                if per_rep is None:
                    per_rep = counts
                elif per_rep != counts:
                    raise AssertionError("kappa not well-defined on a class")
            for c2, cnt in (per_rep or {}).items():
                kappa[(j, c1, c2)] = cnt

    return TupleClassTable(
        gamma=gamma,
        gamma_prime=gp,
        levels=levels,
        class_of=class_of,
        class_members=class_members,
        kappa=kappa,
    )


def build_tuple_table(catalog: TypeCatalog, gamma_id: int, gamma_prime_id: int) -> TupleClassTable:
    gamma = catalog.types[gamma_id]
    gamma_prime = catalog.types[gamma_prime_id]
    table = _tuple_table(gamma, gamma_prime.canon)
    if table.mu == 0:
        raise ValueError(
            f"type {gamma_id} does not precede type {gamma_prime_id} (mu = 0)"
        )
    return table


def tuple_table_for(gamma: DiscType, gamma_prime: RootedGraph) -> TupleClassTable:
    """Tuple table for standalone types (no catalog required)."""
    return _tuple_table(gamma, gamma_prime)


def mu(catalog: TypeCatalog, gamma_id: int, gamma_prime_id: int) -> int:
    """mu_{Gamma,Gamma'}; 0 when Gamma does not precede Gamma'."""
    gamma = catalog.types[gamma_id]
    gamma_prime = catalog.types[gamma_prime_id]
    return mu_of(gamma, gamma_prime.canon)


def mu_of(gamma: DiscType, gamma_prime: RootedGraph) -> int:
    if gamma.n_edges > len(gamma_prime.edges):
        return 0
    return _tuple_table(gamma, gamma_prime).mu


def verify_factor_identity(table: TupleClassTable) -> bool:
    """Check the telescoping class identity

        sum over (W_0..W_i) of prod_j kappa([W_{j-1}],[W_j]) / |[W_j]|
        == mu_{Gamma,Gamma'}

    with exact rationals.  Enumerates the full tuple product when small;
    otherwise folds level by level over classes (each tuple of a class
    contributes identically, so grouping by class is an exact rewrite).
    """
    i = len(table.levels) - 1
    total_combos = 1
    for lvl in table.levels:
        total_combos *= max(1, len(lvl))
    if total_combos <= 200000:
        acc = Fraction(0)
        for combo in itertools.product(*table.levels):
            term = Fraction(1)
            for j in range(1, i + 1):
                c1 = table.class_of[j - 1][combo[j - 1]]
                c2 = table.class_of[j][combo[j]]
                k = table.kappa.get((j, c1, c2), 0)
                if k == 0:
                    term = Fraction(0)
                    break
                term *= Fraction(k, len(table.class_members[j][c2]))
            acc += term
        return acc == Fraction(table.mu)
    # Class-folded evaluation: S_j(c) = sum over tuple chains ending in any
    # tuple of class c of the partial product; summing tuples of class c
    # multiplies by |c|, which cancels the 1/|[W_j]| factor.
    state = {c: Fraction(len(m)) for c, m in enumerate(table.class_members[0])}
    for j in range(1, i + 1):
        nxt: dict[int, Fraction] = defaultdict(Fraction)
        for c1, val in state.items():
            for c2, members in enumerate(table.class_members[j]):
                k = table.kappa.get((j, c1, c2), 0)
                if k:
                    nxt[c2] += val * k
        state = dict(nxt)
    return sum(state.values(), Fraction(0)) == Fraction(table.mu)


# -- correction matrix -------------------------------------------------


class CorrectionMatrix:
    """Upper-triangular integer matrix M over the nonempty types, with
    [M]_{Gamma,Gamma'} = mu_{Gamma,Gamma'}; exact rational inverse."""

    def __init__(self, ids: Sequence[int], entries: list[list[int]]):
        self.ids = list(ids)  # catalog ids, in linear-extension order
        self.M = entries
        self._inv: Optional[list[list[Fraction]]] = None

    @property
    def size(self) -> int:
        return len(self.ids)

    def entry(self, r: int, c: int) -> int:
        return self.M[r][c]

    def row_sum(self, r: int) -> int:
        """mu_Gamma = sum over successors of mu_{Gamma,Gamma'}."""
        return sum(self.M[r])

    def inverse(self) -> list[list[Fraction]]:
        if self._inv is None:
            n = self.size
            inv = [[Fraction(0)] * n for _ in range(n)]
            for col in range(n):
                e = [Fraction(1) if r == col else Fraction(0) for r in range(n)]
                x = self._back_substitute(e)
                for r in range(n):
                    inv[r][col] = x[r]
            self._inv = inv
        return self._inv

    def _back_substitute(self, b: list[Fraction]) -> list[Fraction]:
        n = self.size
        x = [Fraction(0)] * n
        for r in range(n - 1, -1, -1):
            acc = b[r]
            for c in range(r + 1, n):
                if self.M[r][c]:
                    acc -= self.M[r][c] * x[c]
            x[r] = acc / self.M[r][r]
        return x

    def solve(self, b: Sequence[Fraction]) -> list[Fraction]:
        """Exact solution of M x = b by back-substitution."""
        return self._back_substitute([Fraction(v) for v in b])

    def inv_one_norm(self) -> Fraction:
        inv = self.inverse()
        return max(
            sum(abs(inv[r][c]) for r in range(self.size)) for c in range(self.size)
        )

    def dump_csv(self) -> str:
        return "\n".join(",".join(str(v) for v in row) for row in self.M) + "\n"


def build_matrix(catalog: TypeCatalog) -> CorrectionMatrix:
    ids = [t.id for t in catalog.types[1:]]
    n = len(ids)
    entries = [[0] * n for _ in range(n)]
    for r, gid in enumerate(ids):
        gamma = catalog.types[gid]
        for c, gpid in enumerate(ids):
            gp = catalog.types[gpid]
            if gamma.n_edges > gp.n_edges:
                continue
            entries[r][c] = mu_of(gamma, gp.canon)
    mat = CorrectionMatrix(ids, entries)
    for r in range(n):
        if mat.M[r][r] < 1:
            raise AssertionError("correction matrix diagonal must be >= 1")
        for c in range(r):
            if mat.M[r][c] != 0:
                raise AssertionError("correction matrix must be upper-triangular")
    return mat


# -- closed forms used by the warm-up analysis -------------------------


def star_matrix(d: int) -> list[list[int]]:
    """M_ij = C(j,i) * i! for i,j in [d] (the star warm-up case)."""
    return [
        [math.comb(j, i) * math.factorial(i) for j in range(1, d + 1)]
        for i in range(1, d + 1)
    ]


def binomial_matrix(d: int) -> list[list[int]]:
    """A_ij = C(j,i) for i,j in [d]."""
    return [[math.comb(j, i) for j in range(1, d + 1)] for i in range(1, d + 1)]


def binomial_inverse_closed_form(d: int) -> list[list[int]]:
    """[A^{-1}]_ij = (-1)^{j-i} C(j,i)."""
    return [
        [(-1) ** (j - i) * math.comb(j, i) for j in range(1, d + 1)]
        for i in range(1, d + 1)
    ]

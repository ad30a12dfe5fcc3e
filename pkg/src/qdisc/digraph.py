"""Bounded-degree digraphs, the two query oracles, and query-cost accounting.

A digraph is ``d``-bounded if every vertex has in-degree and out-degree at
most ``d``.  Access models:

* unidirectional -- the algorithm may ask only for the i-th *out*-neighbor
  of a vertex (``out_query``);
* bidirectional -- both ``out_query`` and ``in_query`` are available.

Every query goes through a :class:`QueryLedger` so that experiments can
account classical queries and simulated quantum query cost separately.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

#: Distinguished "no such neighbor" answer of the oracles.
BOTTOM = None


class QueryLedger:
    """Counters for classical out-/in-queries and simulated quantum cost.

    ``quantum_cost`` accumulates exact rationals (square-root charges are
    converted from floats, which is lossless); it is rounded only when a
    report is emitted.
    """

    __slots__ = ("classical_out", "classical_in", "quantum_cost")

    def __init__(self) -> None:
        self.classical_out = 0
        self.classical_in = 0
        self.quantum_cost = Fraction(0)

    def charge_quantum(self, amount: float | Fraction) -> None:
        amount = Fraction(amount)
        if amount < 0:
            raise ValueError("quantum charges must be nonnegative")
        self.quantum_cost += amount

    def snapshot(self) -> dict:
        return {
            "classical_out": self.classical_out,
            "classical_in": self.classical_in,
            "quantum_cost": float(self.quantum_cost),
        }

    def __repr__(self) -> str:  # pragma: no cover
        return (
            f"QueryLedger(out={self.classical_out}, in={self.classical_in}, "
            f"quantum={float(self.quantum_cost):.3f})"
        )


class Digraph:
    """Immutable ``d``-bounded digraph with ordered adjacency lists.

    Slot order of out-neighbors is the construction order and is part of
    the instance (the oracle is indexed by slot).  Self-loops and parallel
    edges are rejected: the disc-type machinery treats edge sets as sets
    of vertex pairs.
    """

    __slots__ = ("n", "d", "out_adj", "in_adj", "_out_matrix")

    def __init__(self, n: int, d: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0 or d < 1:
            raise ValueError("need n >= 0 and d >= 1")
        self.n = n
        self.d = d
        out: list[list[int]] = [[] for _ in range(n)]
        inn: list[list[int]] = [[] for _ in range(n)]
        seen: set[tuple[int, int]] = set()
        for u, v in edges:
            u = int(u)
            v = int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range")
            if u == v:
                raise ValueError(f"self-loop ({u},{u}) rejected")
            if (u, v) in seen:
                raise ValueError(f"parallel edge ({u},{v}) rejected")
            seen.add((u, v))
            out[u].append(v)
            inn[v].append(u)
            if len(out[u]) > d or len(inn[v]) > d:
                raise ValueError(f"degree bound {d} violated at edge ({u},{v})")
        self.out_adj: tuple[tuple[int, ...], ...] = tuple(tuple(a) for a in out)
        self.in_adj: tuple[tuple[int, ...], ...] = tuple(tuple(a) for a in inn)
        self._out_matrix: Optional[np.ndarray] = None

    @property
    def m(self) -> int:
        """Number of edges."""
        return sum(len(a) for a in self.out_adj)

    def edges(self) -> Iterable[tuple[int, int]]:
        for u, heads in enumerate(self.out_adj):
            for v in heads:
                yield (u, v)

    def out_matrix(self) -> np.ndarray:
        """(n, d) int array of out-neighbors; -1 where no slot.

        Truth-side cache used by the quantum-emulation internals; oracle
        queries never read it directly.
        """
        if self._out_matrix is None:
            mat = np.full((self.n, self.d), -1, dtype=np.int64)
            for u, heads in enumerate(self.out_adj):
                mat[u, : len(heads)] = heads
            self._out_matrix = mat
        return self._out_matrix

    # -- oracles -------------------------------------------------------

    def out_query(self, ledger: QueryLedger, v: int, i: int):
        """i-th out-neighbor of v (1-indexed), or BOTTOM; charges one out-query."""
        if not (0 <= v < self.n):
            raise IndexError(f"vertex {v} out of range")
        if not (1 <= i <= self.d):
            raise IndexError(f"slot {i} out of range [1..{self.d}]")
        ledger.classical_out += 1
        heads = self.out_adj[v]
        return heads[i - 1] if i <= len(heads) else BOTTOM

    def in_query(self, ledger: QueryLedger, v: int, i: int):
        """i-th in-neighbor of v (1-indexed), or BOTTOM; charges one in-query."""
        if not (0 <= v < self.n):
            raise IndexError(f"vertex {v} out of range")
        if not (1 <= i <= self.d):
            raise IndexError(f"slot {i} out of range [1..{self.d}]")
        ledger.classical_in += 1
        tails = self.in_adj[v]
        return tails[i - 1] if i <= len(tails) else BOTTOM

    # -- serialization -------------------------------------------------

    def to_text(self) -> str:
        lines = [f"{self.n} {self.d}"]
        lines.extend(f"{u} {v}" for u, v in self.edges())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Digraph":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        n, d = map(int, lines[0].split())
        edges = [tuple(map(int, ln.split())) for ln in lines[1:]]
        return cls(n, d, edges)


@dataclass(frozen=True)
class EdgeRef:
    """The (v, s) form of an edge: tail vertex plus out-slot in [1..d]."""

    tail: int
    slot: int

    def head(self, g: Digraph) -> int:
        return g.out_adj[self.tail][self.slot - 1]


class UnidirectionalView:
    """Out-query-only capability handed to the quantum estimators.

    The estimator code path receives this object, not the graph, so the
    absence of in-query capability is enforced at the API level.  The
    underlying graph is reachable only through ``_graph``, which the
    quantum-emulation internals use to evaluate oracle predicates in bulk
    (the stand-in for evaluating f in superposition); those reads are
    charged as quantum cost, not as classical in-queries.
    """

    __slots__ = ("_graph", "ledger")

    def __init__(self, g: Digraph, ledger: Optional[QueryLedger] = None):
        self._graph = g
        self.ledger = ledger if ledger is not None else QueryLedger()

    @property
    def n(self) -> int:
        return self._graph.n

    @property
    def d(self) -> int:
        return self._graph.d

    def out_query(self, v: int, i: int):
        return self._graph.out_query(self.ledger, v, i)


@dataclass
class RootedSubgraph:
    """A concrete disc: root, vertex set, and induced edges, original ids."""

    root: int
    vertices: frozenset[int]
    edges: frozenset[tuple[int, int]]

    def relabel(self) -> tuple[int, tuple[tuple[int, int], ...]]:
        """Deterministic relabeling to 0..s-1 with the root at 0.

        Non-root vertices take increasing labels in sorted-id order.  The
        result is *a* labeling, not the canonical form; canonicalization
        lives in the isotypes module.
        """
        order = [self.root] + sorted(self.vertices - {self.root})
        idx = {v: i for i, v in enumerate(order)}
        edges = tuple(sorted((idx[u], idx[v]) for u, v in self.edges))
        return len(order), edges


def bfs_disc(g: Digraph, v: int, q: int) -> RootedSubgraph:
    """The q-disc at v: subgraph induced by vertices at undirected distance <= q.

    Truth-side traversal (no ledger charges); a ledger-charging variant for
    tester use is ``bfs_disc_queried``.
    """
    if not (0 <= v < g.n) or q < 0:
        raise ValueError("need 0 <= v < n and q >= 0")
    frontier = {v}
    reached = {v}
    for _ in range(q):
        nxt = set()
        for u in frontier:
            for w in g.out_adj[u]:
                if w not in reached:
                    nxt.add(w)
            for w in g.in_adj[u]:
                if w not in reached:
                    nxt.add(w)
        reached |= nxt
        frontier = nxt
        if not frontier:
            break
    edges = frozenset(
        (u, w) for u in reached for w in g.out_adj[u] if w in reached
    )
    return RootedSubgraph(root=v, vertices=frozenset(reached), edges=edges)


def bfs_disc_queried(g: Digraph, ledger: QueryLedger, v: int, q: int) -> RootedSubgraph:
    """Like bfs_disc but going through both oracles (bidirectional testers)."""
    frontier = {v}
    reached = {v}
    for _ in range(q):
        nxt = set()
        for u in frontier:
            for i in range(1, g.d + 1):
                w = g.out_query(ledger, u, i)
                if w is BOTTOM:
                    break
                if w not in reached:
                    nxt.add(w)
            for i in range(1, g.d + 1):
                w = g.in_query(ledger, u, i)
                if w is BOTTOM:
                    break
                if w not in reached:
                    nxt.add(w)
        reached |= nxt
        frontier = nxt
        if not frontier:
            break
    # final pass: the disc is the *induced* subgraph, so edges between two
    # boundary vertices must be collected too
    edges: set[tuple[int, int]] = set()
    for u in reached:
        for i in range(1, g.d + 1):
            w = g.out_query(ledger, u, i)
            if w is BOTTOM:
                break
            if w in reached:
                edges.add((u, w))
    return RootedSubgraph(root=v, vertices=frozenset(reached), edges=frozenset(edges))


# -- generators --------------------------------------------------------


def generate_uniform_bounded(
    n: int, d: int, seed, target_edges: Optional[int] = None
) -> Digraph:
    """Random simple digraph with all in-/out-degrees <= d."""
    rng = np.random.default_rng(seed)
    if target_edges is None:
        target_edges = (d * n) // 3
    out_deg = np.zeros(n, dtype=np.int64)
    in_deg = np.zeros(n, dtype=np.int64)
    edges: set[tuple[int, int]] = set()
    attempts = 0
    max_attempts = 20 * target_edges + 100
    while len(edges) < target_edges and attempts < max_attempts:
        attempts += 1
        u = int(rng.integers(n))
        v = int(rng.integers(n))
        if u == v or (u, v) in edges:
            continue
        if out_deg[u] >= d or in_deg[v] >= d:
            continue
        edges.add((u, v))
        out_deg[u] += 1
        in_deg[v] += 1
    return Digraph(n, d, sorted(edges))


def generate_planted_stars(n: int, d: int, k: int, count: int, seed) -> Digraph:
    """Graph with >= count vertex-disjoint k-stars (k sources into a center)."""
    if k > d:
        raise ValueError("k-star needs degree bound d >= k")
    if count * (k + 1) > n:
        raise ValueError(f"need n >= count*(k+1) = {count * (k + 1)}")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    edges = []
    pos = 0
    for _ in range(count):
        center = int(perm[pos])
        for j in range(1, k + 1):
            edges.append((int(perm[pos + j]), center))
        pos += k + 1
    return Digraph(n, d, edges)


def generate_disc_rich_indegree(
    n: int,
    d: int,
    delta: float,
    seed,
    margin: float = 0.02,
    extra_top: float = 0.16,
) -> Digraph:
    """Graph where cnt_k >= delta*n for every in-degree class k in [d].

    Plants ceil((delta+margin)*n) vertices of each in-degree k < d and a
    larger share of in-degree d, so the top class dominates the edge mass
    (which tightens the warm-up estimator's sampling concentration).
    """
    fracs = {k: delta + margin for k in range(1, d + 1)}
    fracs[d] += extra_top
    if sum(fracs.values()) > 0.95:
        raise ValueError("disc-rich fractions exceed vertex budget")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    counts = {k: int(np.ceil(fracs[k] * n)) for k in fracs}
    heads_needed = sum(counts.values())
    if heads_needed > n:
        raise ValueError("infeasible disc-rich spec")
    edges = []
    pos = 0
    head_groups: dict[int, np.ndarray] = {}
    for k in sorted(counts):
        head_groups[k] = perm[pos : pos + counts[k]]
        pos += counts[k]
    # Tails cycle through the whole vertex set (skipping the head itself);
    # each vertex tails at most d edges because total edge mass <= 0.95*d*n/d.
    tail_perm = rng.permutation(n)
    out_used = np.zeros(n, dtype=np.int64)
    tp = 0

    def next_tail(avoid: set[int]) -> int:
        nonlocal tp
        for _ in range(2 * n):
            cand = int(tail_perm[tp % n])
            tp += 1
            if cand not in avoid and out_used[cand] < d:
                return cand
        raise RuntimeError("ran out of out-capacity while planting edges")

    for k, heads in head_groups.items():
        for h in heads:
            h = int(h)
            avoid = {h}
            for _ in range(k):
                t = next_tail(avoid)
                avoid.add(t)
                out_used[t] += 1
                edges.append((t, h))
    return Digraph(n, d, edges)


def generate_disc_rich_paths(n: int, delta: float, seed, margin: float = 0.01) -> Digraph:
    """d=1 graph of disjoint 2-paths a->b->c; each of the three 1-disc types
    (out-edge, in-edge, in+out) gets count >= delta*n."""
    frac = delta + margin
    gadgets = int(np.ceil(frac * n))
    if 3 * gadgets > n:
        raise ValueError(f"delta={delta} too large for 2-path gadgets")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    edges = []
    for i in range(gadgets):
        a, b, c = (int(perm[3 * i]), int(perm[3 * i + 1]), int(perm[3 * i + 2]))
        edges.append((a, b))
        edges.append((b, c))
    return Digraph(n, 1, edges)


def generate(kind: str, n: int, d: int, seed, **params) -> Digraph:
    """Generator dispatch; ``kind`` matches the CLI generator-spec names."""
    if kind == "uniform-bounded":
        return generate_uniform_bounded(n, d, seed, params.get("target_edges"))
    if kind == "planted-stars":
        return generate_planted_stars(n, d, int(params["k"]), int(params["count"]), seed)
    if kind == "disc-rich":
        delta = float(params.get("delta", 0.1))
        if params.get("targets", "indegree") == "two-paths":
            return generate_disc_rich_paths(n, delta, seed)
        return generate_disc_rich_indegree(n, d, delta, seed)
    raise ValueError(f"unknown generator kind {kind!r}")


def parse_generator_spec(spec: str) -> tuple[str, dict]:
    """Parse 'kind:key=val,key=val' generator specs used by the CLI."""
    if ":" in spec:
        kind, rest = spec.split(":", 1)
        params = {}
        for item in rest.split(","):
            if not item:
                continue
            key, _, val = item.partition("=")
            key = key.strip().replace("-", "_")
            try:
                params[key] = int(val)
            except ValueError:
                try:
                    params[key] = float(val)
                except ValueError:
                    params[key] = val
        return kind.strip(), params
    return spec.strip(), {}

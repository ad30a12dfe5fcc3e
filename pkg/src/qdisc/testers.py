"""Property testing of k-star-freeness: the frequency-vector tester built
on the disc estimators, a classical bidirectional baseline, and the
function-collision reduction that produces hard instances.

A k-star is k source vertices each with one edge into a common center.
The reduction maps a function f: [N] -> [R] to the digraph G_f with
vertices v_1..v_{N+R} and edges (v_i, v_{N+j}) iff f(i) = j, so k-collisions
of f become k-stars of G_f and every out-query costs at most one f-lookup.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Callable, Optional

import numpy as np

from .digraph import BOTTOM, Digraph, QueryLedger, UnidirectionalView
from .estimators import EstimateReport, est_disc_star
from .isotypes import RootedGraph, TypeCatalog, enumerate_catalog
from .quantumsim import CostModel

DEFAULT_FAMILY_RADIUS = 3
CLASSICAL_SAMPLE_CONSTANT = 4


# -- reduction instances -----------------------------------------------


@dataclass
class ReductionInstance:
    """A function table f: [N] -> [R] plus its derived digraph G_f."""

    f: np.ndarray
    N: int
    R: int
    k: int
    kind: str
    f_lookups: int = 0
    _graph: Optional[Digraph] = None

    @property
    def n(self) -> int:
        return self.N + self.R

    @property
    def c(self) -> Fraction:
        """The recorded ratio R/N."""
        return Fraction(self.R, self.N)

    def out_query(self, ledger: QueryLedger, v: int, i: int):
        """Out-neighbor query on G_f, simulated from the f table.

        Sources (v < N) cost exactly one f-lookup; value vertices have no
        out-edges and cost none.
        """
        ledger.classical_out += 1
        if v < self.N and i == 1:
            self.f_lookups += 1
            return self.N + int(self.f[v])
        return BOTTOM

    def digraph(self) -> Digraph:
        if self._graph is None:
            edges = [(i, self.N + int(self.f[i])) for i in range(self.N)]
            self._graph = Digraph(self.n, self.k, edges)
        return self._graph

    def fiber_sizes(self) -> np.ndarray:
        return np.bincount(self.f, minlength=self.R)


def build_reduction_instance(
    kind: str,
    N: int,
    k: int,
    seed,
    R: Optional[int] = None,
    eps: Optional[float] = None,
) -> ReductionInstance:
    """Build a free-kind (no value with exactly k preimages, all fibers
    < k) or far-kind instance (>= ceil(eps*N) values with exactly k
    preimages; eps=None saturates every value).
    """
    rng = np.random.default_rng(seed)
    if kind == "free":
        if R is None:
            R = math.ceil(N / max(1, k - 1))
        if R * (k - 1) < N:
            raise ValueError("free kind needs R*(k-1) >= N")
        slots = np.repeat(np.arange(R), k - 1)
        rng.shuffle(slots)
        f = slots[:N].copy()
    elif kind == "far":
        if eps is None:
            if N % k:
                raise ValueError("saturated far kind needs k | N")
            if R is None:
                R = N // k
            if R * k != N:
                raise ValueError("saturated far kind needs R*k = N")
            f = np.repeat(np.arange(R), k)
        else:
            hot = math.ceil(eps * N)
            if hot * k > N:
                raise ValueError("far kind needs ceil(eps*N)*k <= N")
            if R is None:
                R = hot + math.ceil((N - hot * k) / max(1, k - 1))
            rest = N - hot * k
            if (R - hot) * (k - 1) < rest:
                raise ValueError("not enough cold values for the k-1 cap")
            cold = np.repeat(np.arange(hot, R), k - 1)
            rng.shuffle(cold)
            f = np.concatenate([np.repeat(np.arange(hot), k), cold[:rest]])
        rng.shuffle(f)
    else:
        raise ValueError(f"unknown reduction kind {kind!r}")

    inst = ReductionInstance(f=f.astype(np.int64), N=N, R=R, k=k, kind=kind)
    sizes = inst.fiber_sizes()
    if kind == "free":
        assert int(sizes.max(initial=0)) < k
    else:
        want = math.ceil((eps or 1.0) * N) if eps is not None else R
        assert int((sizes == k).sum()) >= want
    return inst


# -- disc families and the tester --------------------------------------


def is_substar(k: int) -> Callable[[RootedGraph], bool]:
    """Admission predicate for catalogs over reduction graphs: every
    connected rooted subgraph of a G_f is a sub-k-star (at most k edges,
    all sharing one head that is not among the tails)."""

    def admit(g: RootedGraph) -> bool:
        if not g.edges:
            return True
        if len(g.edges) > k:
            return False
        heads = {v for _, v in g.edges}
        tails = {u for u, _ in g.edges}
        return len(heads) == 1 and not (heads & tails)

    return admit


@lru_cache(maxsize=None)
def reduction_disc_catalog(k: int, radius: int = DEFAULT_FAMILY_RADIUS) -> TypeCatalog:
    """The disc-type catalog over reduction graphs: in-degree bound k,
    out-degree bound 1, restricted to sub-k-stars.  (The unrestricted
    catalog at this radius is astronomically large; the restriction is
    exhaustive for graphs of the G_f shape.)"""
    return enumerate_catalog(d=k, q=radius, d_out=1, admit=is_substar(k))


def _generalized_binomial(x: float, k: int) -> float:
    """Falling-factorial binomial, zero when x < k."""
    if x < k:
        return 0.0
    acc = 1.0
    for j in range(k):
        acc *= x - j
    return acc / math.factorial(k)


@dataclass
class DiscFamily:
    """A family F_n of k-multisets of disc types, represented by the
    witness types: F_n = all multisets containing at least one witness."""

    catalog: TypeCatalog
    k_discs: int
    witness_ids: frozenset[int]

    def members(self):
        """Explicit multisets (sorted id tuples), for small catalogs."""
        ids = [t.id for t in self.catalog.types]
        return [
            ms
            for ms in combinations_with_replacement(ids, self.k_discs)
            if any(i in self.witness_ids for i in ms)
        ]

    def est_member(self, ms, counts: dict[int, float], n: int) -> float:
        """est(F) = prod_i C(X_i, x_i) / C(n, k) for one multiset."""
        acc = 1.0
        for gid in set(ms):
            acc *= _generalized_binomial(counts[gid], ms.count(gid))
        return acc / math.comb(n, self.k_discs)

    def est_sum(self, estimates: dict[int, float], n: int) -> float:
        """sum over F of est(F), via the Vandermonde complement

            [ C(sum_all X, k) - C(sum_non-witness X, k) ] / C(n, k)

        with each X clamped to [0, n] and the empty-disc mass inferred as
        n - sum of the nonempty estimates.
        """
        clamped = {g: min(float(n), max(0.0, x)) for g, x in estimates.items()}
        nonempty = sum(clamped.values())
        clamped[0] = max(0.0, n - nonempty)
        s_all = min(float(n), sum(clamped.values()))
        s_non = min(
            s_all, sum(x for g, x in clamped.items() if g not in self.witness_ids)
        )
        k = self.k_discs
        return (
            _generalized_binomial(s_all, k) - _generalized_binomial(s_non, k)
        ) / math.comb(n, k)


def star_family(
    k: int, catalog: Optional[TypeCatalog] = None, k_discs: int = DEFAULT_FAMILY_RADIUS
) -> DiscFamily:
    """The family whose witnesses are the disc types with root in-degree
    >= k (i.e. the discs that exhibit a k-star at the root)."""
    if catalog is None:
        catalog = reduction_disc_catalog(k)
    witnesses = frozenset(
        t.id
        for t in catalog.types[1:]
        if sum(1 for _, v in t.canon.edges if v == 0) >= k
    )
    if not witnesses:
        raise ValueError("catalog contains no k-star witness type")
    return DiscFamily(catalog=catalog, k_discs=k_discs, witness_ids=witnesses)


@dataclass
class TestVerdict:
    accept: bool
    est_sum: float
    delta: float
    report: EstimateReport
    flags: list[str] = field(default_factory=list)


def tester_delta(k_discs: int, m: int) -> float:
    """The fixed error parameter 1/(48 (2 k m)^k) of the tester."""
    return 1.0 / (48.0 * (2 * k_discs * m) ** k_discs)


def test_property(
    view: UnidirectionalView,
    family: DiscFamily,
    seed,
    count_mode: str = "stochastic",
    cost_model: CostModel = CostModel(),
    delta: Optional[float] = None,
    sample_scale: float = 1.0,
) -> TestVerdict:
    """Frequency-vector tester: estimate all disc-type counts at radius
    k_discs, compute sum over F of est(F), accept iff the sum is < 1/2."""
    catalog = family.catalog
    if delta is None:
        delta = tester_delta(family.k_discs, catalog.m)
    report = est_disc_star(
        view, catalog, delta, seed, count_mode=count_mode, cost_model=cost_model,
        sample_scale=sample_scale,
    )
    total = family.est_sum(report.estimates, view.n)
    return TestVerdict(
        accept=total < 0.5,
        est_sum=total,
        delta=delta,
        report=report,
        flags=list(report.flags),
    )


# -- classical bidirectional baseline ----------------------------------


def classical_bidirectional_star_test(
    g: Digraph,
    k: int,
    eps: float,
    seed,
    sample_constant: int = CLASSICAL_SAMPLE_CONSTANT,
) -> tuple[bool, QueryLedger]:
    """One-sided baseline with both query directions: sample C*k/eps
    vertices, query all their in- and out-neighbors, reject iff a sampled
    vertex is (or points into) the center of a k-star."""
    rng = np.random.default_rng(seed)
    ledger = QueryLedger()
    samples = math.ceil(sample_constant * k / eps)
    accept = True
    for _ in range(samples):
        v = int(rng.integers(g.n))
        in_deg = 0
        for i in range(1, g.d + 1):
            if g.in_query(ledger, v, i) is BOTTOM:
                break
            in_deg += 1
        if in_deg >= k:
            accept = False
        for i in range(1, g.d + 1):
            w = g.out_query(ledger, v, i)
            if w is BOTTOM:
                break
            w_in = 0
            for j in range(1, g.d + 1):
                if g.in_query(ledger, w, j) is BOTTOM:
                    break
                w_in += 1
            if w_in >= k:
                accept = False
    assert ledger.quantum_cost == 0
    return accept, ledger

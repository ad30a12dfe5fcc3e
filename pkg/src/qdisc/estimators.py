"""The four estimation algorithms, driven by the simulated quantum subroutines.

All estimators receive a :class:`~qdisc.digraph.UnidirectionalView` (out-query
capability only); a sentinel assertion checks classical_in = 0 after every
run.  Quantum subroutine budgets follow the printed constants times the
cost model's ``constant_scale``; estimates are assembled with exact rational
arithmetic (the correction-matrix solve is exact back-substitution).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .digraph import QueryLedger, UnidirectionalView
from .isotypes import (
    CorrectionMatrix,
    DiscType,
    RootedGraph,
    TypeCatalog,
    canonical_encoding,
    unrooted_automorphism_orbit_of_root,
)
from .quantumsim import (
    EXHAUSTED,
    BooleanOracle,
    CostModel,
    grover_sample,
    quantum_count,
)
from .truth import choose_pattern_root, rooted_at

DEFAULT_REGIME_FLOOR = 4096
DELTA_FLOOR = 1e-9


@dataclass
class EstimateReport:
    """Result of one estimator run: estimates, raw counts, flags, ledger."""

    kind: str
    estimates: dict
    raw_x: dict
    truncated: dict
    delta: float
    seed: object
    ledger: dict
    config: dict
    flags: list[str] = field(default_factory=list)
    delta_i: Optional[float] = None
    delta_index: Optional[int] = None
    exact_estimates: Optional[dict] = None
    cost_events: list = field(default_factory=list)

    @property
    def regime_warning(self) -> bool:
        return "regime-warning" in self.flags

    def to_csv_row(self) -> str:
        est = ";".join(f"{k}:{v:.6g}" for k, v in sorted(self.estimates.items()))
        return ",".join(
            [
                self.kind,
                str(self.seed),
                f"{self.delta:g}",
                est,
                f"{self.ledger['quantum_cost']:.6g}",
                str(self.ledger["classical_out"]),
                str(self.ledger["classical_in"]),
                "|".join(self.flags) or "-",
            ]
        )

    def sidecar(self) -> dict:
        return {
            "kind": self.kind,
            "seed": self.seed,
            "delta": self.delta,
            "delta_i": self.delta_i,
            "delta_index": self.delta_index,
            "config": self.config,
            "flags": self.flags,
            "ledger": self.ledger,
        }


def _round_sample_count(pre: float) -> int:
    """l values: round, but at least 1 whenever the pre-round value is > 0."""
    if pre <= 0:
        return 0
    return max(1, round(pre))


def _t_schedule(n: int, levels: int, sample_scale: float = 1.0) -> list[int]:
    """t_i = max(1, round(n^((2^(levels-i)-1)/(2^levels-1)))) for i in [levels]_0.

    ``sample_scale`` multiplies the intermediate t_i (never t_0 = n), capped
    at n.  The estimator normalizations use the same t_i, so any positive
    scale leaves the estimates consistent; larger scales buy variance at
    desk-scale n for more query cost.
    """
    denom = 2**levels - 1
    out = []
    for i in range(levels + 1):
        t = n ** ((2 ** (levels - i) - 1) / denom)
        if 0 < i:
            t = min(float(n), t * sample_scale)
        out.append(max(1, round(t)))
    return out


def _assert_purity(ledger: QueryLedger) -> None:
    if ledger.classical_in != 0:
        raise AssertionError(
            "unidirectional purity violated: classical_in = "
            f"{ledger.classical_in}"
        )


# -- warm-up: number of vertices of in-degree k ------------------------


@dataclass
class WarmupConfig:
    n: int
    d: int
    delta: float

    def __post_init__(self) -> None:
        d, delta = self.d, self.delta
        self.delta_p = delta / (math.factorial(d) * 2**d * d ** (d + 1))
        self.eps = self.delta_p / (24 * d)
        self.eta = self.delta_p / (16 * d)
        self.t = _t_schedule(self.n, d)
        self.cB = 500.0 * math.log(200 * d)
        self.count_eta = 1.0 / (100 * d)
        self.cM = {
            i: 4.0
            * math.pi
            * math.sqrt(d ** (i + 1) * (1 + self.eps) ** (i - 1))
            / math.sqrt(
                self.delta_p
                * self.eps
                * (1 - self.eps) ** (i - 1)
                * (1 - self.eta) ** (i - 1)
            )
            for i in range(1, d + 1)
        }
        assert self.t[0] == self.n and self.t[d] == 1
        assert all(c > 0 for c in self.cM.values())

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "delta": self.delta,
            "delta_p": self.delta_p,
            "eps": self.eps,
            "eta": self.eta,
            "t": self.t,
        }


def est_vertices(
    view: UnidirectionalView,
    delta: float,
    seed,
    count_mode: str = "stochastic",
    cost_model: CostModel = CostModel(),
    regime_floor: int = DEFAULT_REGIME_FLOOR,
) -> EstimateReport:
    """Estimate cnt_k (vertices of in-degree k) for k in [d] with
    unidirectional access.

    Level i marks the edge slots whose head lies in the support of the
    previous level's sampled heads and which were not sampled before,
    counts them, and Grover-samples l_i = t_i * X_i / t_{i-1} of them.
    The estimates are read off by inverting the binomial overcount:

        cnt_k = sum_{i=k..d} (-1)^(i-k) C(i,k) * (n / (i! t_{i-1})) * X_i.
    """
    g = view._graph
    ledger = view.ledger
    n, d = g.n, g.d
    cfg = WarmupConfig(n, d, delta)
    rng = np.random.default_rng(seed)
    flags: list[str] = []
    if n < regime_floor:
        flags.append("regime-warning")

    out_mat = g.out_matrix()
    heads_flat = out_mat.reshape(-1)
    exists = heads_flat >= 0
    heads_safe = np.clip(heads_flat, 0, None)

    r_support = np.ones(n, dtype=bool)  # R_0 = V
    used = np.zeros(n * d, dtype=bool)
    raw_x: dict[int, float] = {}
    cost_events: list[tuple[str, float]] = []

    for i in range(1, d + 1):
        marked_mask = exists & r_support[heads_safe] & ~used
        marked = np.flatnonzero(marked_mask)
        oracle = BooleanOracle(
            n * d, evaluate=lambda x, mm=marked_mask: bool(mm[x]), marked=marked
        )
        budget = max(
            1.0,
            cfg.cM[i] * math.sqrt(n / cfg.t[i - 1]) * cost_model.constant_scale,
        )
        before = ledger.quantum_cost
        x_tilde = quantum_count(
            oracle, ledger, rng, budget, cfg.count_eta, count_mode, cost_model
        )
        cost_events.append((f"count-{i}", float(ledger.quantum_cost - before)))
        x_tilde = float(min(n * d, max(0.0, x_tilde)))
        raw_x[i] = x_tilde

        ell = _round_sample_count(cfg.t[i] * x_tilde / cfg.t[i - 1])
        sampled: list[int] = []
        before = ledger.quantum_cost
        for _ in range(ell):
            res = None
            for _attempt in range(3):
                res = grover_sample(oracle, ledger, rng, cost_model)
                if res is not EXHAUSTED:
                    break
            if res is EXHAUSTED:
                if "grover-exhausted" not in flags:
                    flags.append("grover-exhausted")
                break
            sampled.append(res)
        cost_events.append((f"grover-{i}", float(ledger.quantum_cost - before)))

        t_edges = np.asarray(sampled, dtype=np.int64)
        used[t_edges] = True
        r_support = np.zeros(n, dtype=bool)
        if len(t_edges):
            r_support[heads_flat[t_edges]] = True

    estimates_exact: dict[int, Fraction] = {}
    for k in range(1, d + 1):
        acc = Fraction(0)
        for i in range(k, d + 1):
            coeff = Fraction(
                (-1) ** (i - k) * math.comb(i, k) * n,
                math.factorial(i) * cfg.t[i - 1],
            )
            acc += coeff * Fraction(raw_x[i])
        estimates_exact[k] = acc

    _assert_purity(ledger)
    return EstimateReport(
        kind="est-vertices",
        estimates={k: float(v) for k, v in estimates_exact.items()},
        raw_x=raw_x,
        truncated={},
        delta=delta,
        seed=seed,
        ledger=ledger.snapshot(),
        config=cfg.as_dict(),
        flags=flags,
        exact_estimates=estimates_exact,
        cost_events=cost_events,
    )


# -- disc-type estimation ----------------------------------------------


@dataclass
class DiscConfig:
    """Constants of the disc estimator for a catalog and error target delta.

    eps_dq and eta_dq depend only on the catalog: eps_dq =
    1/(8 d |M^-1|_1 D (2m)^m); eta_dq is the printed
    1/(2 |M^-1|_1 (D m!)^2 m) lowered, when necessary, to
    d*eps_dq/(2 m D (m!)^2) so that the rarity threshold beta stays
    positive (the printed pair makes beta negative for every catalog;
    shrinking eta only tightens the analysis).
    """

    catalog: TypeCatalog
    n: int
    delta: float
    sample_scale: float = 1.0

    def __post_init__(self) -> None:
        cat = self.catalog
        self.matrix = cat.matrix()
        self.d = cat.d
        self.m = cat.m
        self.D = cat.n_nonempty
        self.inv_norm = float(self.matrix.inv_one_norm())
        m, d, D = self.m, self.d, self.D
        m_fact = math.factorial(m)
        self.eps_dq = 1.0 / (8 * d * self.inv_norm * D * (2 * m) ** m)
        eta_print = 1.0 / (2 * self.inv_norm * (D * m_fact) ** 2 * m)
        eta_beta = d * self.eps_dq / (2 * m * D * m_fact**2)
        self.eta_dq = min(eta_print, eta_beta)
        self.eps = self.eps_dq * self.delta
        self.eta = self.eta_dq * self.delta
        self.t = _t_schedule(self.n, m, self.sample_scale)
        self.cB = 500.0 * math.log(200 * m * D)
        self.count_eta = 1.0 / (100 * m * D)

        # Per-type bounds via the prefix recursion.
        self.c_bar: dict[int, float] = {}
        self.c_under: dict[int, float] = {}
        self.cM: dict[int, float] = {}
        eps = self.eps
        for t in cat.types[1:]:
            i = t.n_edges
            if i == 1:
                c_bar = float(d)
            else:
                pred = t.prefix_ids[i - 1]
                c_bar = m * (self.c_bar[pred] + eps * self.c_under[pred])
            c_under = c_bar * 4 * i * eps * (1 + eps) / ((1 + 2 * eps) ** i * m_fact)
            self.c_bar[t.id] = c_bar
            self.c_under[t.id] = c_under
            self.cM[t.id] = max(
                4 * math.pi * math.sqrt(c_bar * d) / (eps * c_under),
                math.sqrt(2 * math.pi**2 * d / (eps * c_under)),
            )

        ids = self.matrix.ids
        self.mu_gamma = {
            gid: self.matrix.row_sum(r) for r, gid in enumerate(ids)
        }
        # Staggering constants (alpha*delta >= alpha_Gamma >= beta_Gamma >=
        # beta*delta); with the adjusted eta_dq, beta = d*eps_dq/(2 m!) > 0.
        self.alpha_const = (
            4 * d * m * self.eps_dq * (2 * m) ** (m - 1) / m_fact
            + m * D * m_fact * self.eta_dq
        )
        self.beta_const = d * self.eps_dq / (2 * m_fact)
        assert 0 < self.beta_const < self.alpha_const

    def alpha_gamma(self, gid: int) -> float:
        i = self.catalog.types[gid].n_edges
        return self.c_under[gid] / (1 - self.eps) ** (i - 1) + i * self.mu_gamma[
            gid
        ] * self.eta

    def beta_gamma(self, gid: int) -> float:
        i = self.catalog.types[gid].n_edges
        return (1 - 2 * self.eps) * self.c_under[gid] / (1 + self.eps) ** (
            i - 1
        ) - i * self.mu_gamma[gid] * self.eta

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "q": self.catalog.q,
            "m": self.m,
            "D": self.D,
            "delta": self.delta,
            "eps": self.eps,
            "eta": self.eta,
            "inv_norm": self.inv_norm,
            "t": self.t,
        }


class InstanceStore:
    """Collected type instances (root + ordered edges), indexed by vertex."""

    def __init__(self) -> None:
        self.instances: dict[int, list[tuple[int, tuple]]] = {}
        self._by_vertex: dict[int, dict[int, list[int]]] = {}
        self._support: dict[int, dict[tuple, int]] = {}

    def add(self, gid: int, root: int, edges: tuple) -> None:
        lst = self.instances.setdefault(gid, [])
        idx = len(lst)
        lst.append((root, edges))
        vindex = self._by_vertex.setdefault(gid, {})
        verts = {root}
        for u, v in edges:
            verts.add(u)
            verts.add(v)
        for v in verts:
            vindex.setdefault(v, []).append(idx)
        key = (root, frozenset(edges))
        self._support.setdefault(gid, {}).setdefault(key, idx)

    def support(self, gid: int) -> list[tuple[int, tuple]]:
        """Distinct instances (multiset support), in first-seen order."""
        lst = self.instances.get(gid, [])
        return [lst[i] for i in sorted(self._support.get(gid, {}).values())]

    def candidates_at(self, gid: int, vertices) -> list[int]:
        vindex = self._by_vertex.get(gid, {})
        seen: list[int] = []
        have = set()
        for v in vertices:
            for idx in vindex.get(v, ()):
                if idx not in have:
                    have.add(idx)
                    seen.append(idx)
        return seen

    def get(self, gid: int, idx: int) -> tuple[int, tuple]:
        return self.instances[gid][idx]


def _single_edge_root_flags(t: DiscType) -> tuple[bool, bool]:
    """(rooted-at-tail, rooted-at-head) match flags for a 1-edge type."""
    enc = t.encode()
    tail_rooted = canonical_encoding(RootedGraph(2, frozenset({(0, 1)})))
    head_rooted = canonical_encoding(RootedGraph(2, frozenset({(1, 0)})))
    return enc == tail_rooted, enc == head_rooted


def _edge_slot(g, tail: int, head: int) -> int:
    return g.out_adj[tail].index(head) + 1


def _union_matches(
    root: int, h_edges: tuple, new_edge: tuple[int, int], want_enc
) -> bool:
    if new_edge in h_edges:
        return False
    edges = list(h_edges) + [new_edge]
    verts = {root}
    for u, v in edges:
        verts.add(u)
        verts.add(v)
    order = [root] + sorted(verts - {root})
    idx = {v: i for i, v in enumerate(order)}
    rg = RootedGraph(len(order), frozenset((idx[u], idx[v]) for u, v in edges))
    return canonical_encoding(rg) == want_enc


def est_disc(
    view: UnidirectionalView,
    catalog: TypeCatalog,
    delta: float,
    seed,
    count_mode: str = "stochastic",
    cost_model: CostModel = CostModel(),
    regime_floor: int = DEFAULT_REGIME_FLOOR,
    sample_scale: float = 1.0,
) -> EstimateReport:
    """Estimate cnt_Gamma for every nonempty type, assuming delta-explicitness.

    Iterates i = 1..m over the types with i edges; f_Gamma marks the edge
    slots (v,s) for which some collected instance of the prefix type
    extends by (v,s) into Gamma.  Counts, applies the Line-0 rarity
    threshold (truncating all successors on failure), Grover-samples
    l_Gamma edges, combines them into Gamma-instances, and finally returns
    the exact solve of M cnt = x with x_Gamma = (n/t_{i-1}) X_Gamma.
    """
    g = view._graph
    ledger = view.ledger
    n = g.n
    cfg = DiscConfig(catalog, n, delta, sample_scale)
    rng = np.random.default_rng(seed)
    flags: list[str] = []
    if n < regime_floor:
        flags.append("regime-warning")

    d_slots = g.d
    store = InstanceStore()
    raw_x: dict[int, float] = {}
    truncated: dict[int, bool] = {t.id: False for t in catalog.types[1:]}
    cost_events: list[tuple[str, float]] = []
    matrix = cfg.matrix
    row_of = {gid: r for r, gid in enumerate(matrix.ids)}

    all_edges: Optional[np.ndarray] = None

    def existing_edge_indices() -> np.ndarray:
        nonlocal all_edges
        if all_edges is None:
            heads_flat = g.out_matrix().reshape(-1)
            all_edges = np.flatnonzero(heads_flat >= 0)
        return all_edges

    for i in range(1, cfg.m + 1):
        for gid in catalog.by_edges.get(i, []):
            if truncated[gid]:
                raw_x.setdefault(gid, 0.0)
                continue
            t = catalog.types[gid]
            want_enc = t.encode()

            if i == 1:
                marked = existing_edge_indices()
                tail_rooted, head_rooted = _single_edge_root_flags(t)
                if not (tail_rooted or head_rooted):
                    marked = np.asarray([], dtype=np.int64)
            else:
                pred = t.prefix_ids[i - 1]
                marked_set: set[int] = set()
                for root, h_edges in store.support(pred):
                    verts = {root}
                    for u, v in h_edges:
                        verts.add(u)
                        verts.add(v)
                    cands: set[tuple[int, int]] = set()
                    for x in verts:
                        for head in g.out_adj[x]:
                            cands.add((x, head))
                        for tail in g.in_adj[x]:
                            cands.add((tail, x))
                    for tail, head in cands:
                        if _union_matches(root, h_edges, (tail, head), want_enc):
                            marked_set.add(
                                tail * d_slots + _edge_slot(g, tail, head) - 1
                            )
                marked = np.asarray(sorted(marked_set), dtype=np.int64)

            marked_lookup = set(int(x) for x in marked)
            oracle = BooleanOracle(
                n * d_slots,
                evaluate=lambda x, ml=marked_lookup: x in ml,
                marked=marked,
            )
            budget = max(
                1.0,
                cfg.cM[gid]
                * math.sqrt(n / cfg.t[i - 1])
                * cost_model.constant_scale,
            )
            before = ledger.quantum_cost
            x_tilde = quantum_count(
                oracle, ledger, rng, budget, cfg.count_eta, count_mode, cost_model
            )
            cost_events.append((f"count-{gid}", float(ledger.quantum_cost - before)))
            x_tilde = float(min(n * d_slots, max(0.0, x_tilde)))
            raw_x[gid] = x_tilde

            threshold = (1 - cfg.eps) * cfg.c_under[gid] * cfg.t[i - 1]
            if x_tilde < threshold:
                raw_x[gid] = 0.0
                r = row_of[gid]
                for gpid in matrix.ids:
                    if matrix.entry(r, row_of[gpid]) > 0:
                        truncated[gpid] = True
                        if catalog.types[gpid].n_edges > i or gpid == gid:
                            raw_x[gpid] = 0.0
                continue

            ell = _round_sample_count(cfg.t[i] * x_tilde / cfg.t[i - 1])
            before = ledger.quantum_cost
            for _ in range(ell):
                res = None
                for _attempt in range(3):
                    res = grover_sample(oracle, ledger, rng, cost_model)
                    if res is not EXHAUSTED:
                        break
                if res is EXHAUSTED:
                    if "grover-exhausted" not in flags:
                        flags.append("grover-exhausted")
                    break
                tail, slot = divmod(int(res), d_slots)
                head = g.out_adj[tail][slot]
                if i == 1:
                    tail_rooted, _ = _single_edge_root_flags(t)
                    root = tail if tail_rooted else head
                    store.add(gid, root, ((tail, head),))
                else:
                    pred = t.prefix_ids[i - 1]
                    placed = False
                    for idx in store.candidates_at(pred, (tail, head)):
                        root, h_edges = store.get(pred, idx)
                        if _union_matches(root, h_edges, (tail, head), want_enc):
                            store.add(gid, root, h_edges + ((tail, head),))
                            placed = True
                            break
                    if not placed and "combine-miss" not in flags:
                        flags.append("combine-miss")
            cost_events.append((f"grover-{gid}", float(ledger.quantum_cost - before)))

    x_vec = [
        Fraction(raw_x.get(gid, 0.0))
        * Fraction(n, cfg.t[catalog.types[gid].n_edges - 1])
        for gid in matrix.ids
    ]
    solution = matrix.solve(x_vec)
    estimates_exact = {gid: solution[r] for r, gid in enumerate(matrix.ids)}

    _assert_purity(ledger)
    return EstimateReport(
        kind="est-disc",
        estimates={gid: float(v) for gid, v in estimates_exact.items()},
        raw_x=raw_x,
        truncated=truncated,
        delta=delta,
        seed=seed,
        ledger=ledger.snapshot(),
        config=cfg.as_dict(),
        flags=flags,
        exact_estimates=estimates_exact,
        cost_events=cost_events,
    )


def est_disc_star(
    view: UnidirectionalView,
    catalog: TypeCatalog,
    delta: float,
    seed,
    count_mode: str = "stochastic",
    cost_model: CostModel = CostModel(),
    regime_floor: int = DEFAULT_REGIME_FLOOR,
    sample_scale: float = 1.0,
) -> EstimateReport:
    """Estimate cnt_Gamma without the delta-explicitness assumption.

    Draws one of the 100*D staggered error parameters
    delta_j = (beta/alpha)^(j-1) * delta uniformly at random and runs
    est_disc with it; the staggered thresholds make the sampled parameter
    land outside every gray interval with probability >= 99/100.
    """
    cfg = DiscConfig(catalog, view.n, delta)
    ratio = cfg.beta_const / cfg.alpha_const
    rng = np.random.default_rng(seed)
    num = 100 * cfg.D
    j = int(rng.integers(1, num + 1))
    delta_j = (ratio ** (j - 1)) * delta
    clamped = False
    if delta_j < DELTA_FLOOR:
        delta_j = DELTA_FLOOR
        clamped = True
    sub_seed = int(rng.integers(2**63))
    report = est_disc(
        view, catalog, delta_j, sub_seed, count_mode, cost_model, regime_floor,
        sample_scale,
    )
    report.kind = "est-disc-star"
    report.delta = delta
    report.delta_i = delta_j
    report.delta_index = j
    report.seed = seed
    if clamped:
        report.flags.append("delta-clamped")
    return report


def est_subgraph(
    view: UnidirectionalView,
    catalog: TypeCatalog,
    h: RootedGraph,
    delta: float,
    seed,
    count_mode: str = "stochastic",
    cost_model: CostModel = CostModel(),
    sample_scale: float = 1.0,
) -> tuple[float, EstimateReport]:
    """Estimate the number of H-instances via the disc-type estimates:

        #H = (1/c_H) sum over Gamma' >= Gamma_H of
             (mu_{Gamma_H,Gamma'} / mu_{Gamma_H,Gamma_H}) * cnt_{Gamma'}.
    """
    root = choose_pattern_root(h, catalog.q)
    rooted = rooted_at(h, root)
    gamma_id = catalog.id_of(rooted)
    c_h = unrooted_automorphism_orbit_of_root(rooted)
    report = est_disc_star(
        view,
        catalog,
        delta / math.factorial(catalog.m),
        seed,
        count_mode,
        cost_model,
        sample_scale=sample_scale,
    )
    matrix = catalog.matrix()
    row = {gid: r for r, gid in enumerate(matrix.ids)}[gamma_id]
    mu_hh = matrix.entry(row, row)
    acc = Fraction(0)
    for c, gpid in enumerate(matrix.ids):
        m_val = matrix.entry(row, c)
        if m_val:
            acc += Fraction(m_val) * report.exact_estimates[gpid]
    estimate = acc / (c_h * mu_hh)
    report.kind = "est-subgraph"
    report.estimates = {"#H": float(estimate)}
    return float(estimate), report


def classify_type_vector(
    truth_cnt: dict[int, int], catalog: TypeCatalog, cfg: DiscConfig
) -> dict[int, object]:
    """Type vector gamma: per type, 1 if sum mu*cnt >= alpha_Gamma*n,
    0 if <= beta_Gamma*n, else '*' (diagnostic; needs truth counts)."""
    matrix = cfg.matrix
    n = cfg.n
    out: dict[int, object] = {}
    for r, gid in enumerate(matrix.ids):
        w = sum(
            matrix.entry(r, c) * truth_cnt.get(gpid, 0)
            for c, gpid in enumerate(matrix.ids)
        )
        if w >= cfg.alpha_gamma(gid) * n:
            out[gid] = 1
        elif w <= cfg.beta_gamma(gid) * n:
            out[gid] = 0
        else:
            out[gid] = "*"
    return out


def squeeze_bounds(
    report: EstimateReport, catalog: TypeCatalog, cfg: DiscConfig
) -> dict[int, tuple[float, float]]:
    """Diagnostic (x_lower, x_upper) brackets per type.

    For an untruncated Gamma-iteration the bracket scales the raw count by
    t_0/t_{i-1} with the (1 +/- eps)^i concentration slack plus the
    i*mu_Gamma*eta*t_0 instance-contamination slack; a truncated iteration
    is bracketed by [0, m!((1+2eps) c_under t_0/(1-eps)^{i-1} + i mu eta t_0)].
    When the run's success events hold, the bracket contains (M cnt)_Gamma.
    """
    t0 = cfg.t[0]
    m_fact = math.factorial(cfg.m)
    out: dict[int, tuple[float, float]] = {}
    for gid in cfg.matrix.ids:
        i = catalog.types[gid].n_edges
        slack = i * cfg.mu_gamma[gid] * cfg.eta * t0
        if report.truncated.get(gid, False):
            upper = m_fact * (
                (1 + 2 * cfg.eps) * cfg.c_under[gid] * t0 / (1 - cfg.eps) ** (i - 1)
                + slack
            )
            out[gid] = (0.0, upper)
        else:
            x = report.raw_x.get(gid, 0.0) * t0 / cfg.t[i - 1]
            out[gid] = (
                x / (1 + cfg.eps) ** i - slack,
                x / (1 - cfg.eps) ** i + slack,
            )
    return out

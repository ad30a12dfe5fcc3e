from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from qdisc.digraph import Digraph, generate
from qdisc.isotypes import RootedGraph, make_star_type
from qdisc.truth import (
    CatalogIncompleteError,
    choose_pattern_root,
    count_disc_types,
    count_indegree,
    count_subgraph,
    disc_histogram,
    subgraph_identity_sides,
    truth_report,
    verify_obs_identity,
)

TWO_STAR = make_star_type(2).canon
OUT_EDGE = RootedGraph(2, frozenset({(0, 1)}))
TWO_PATH = RootedGraph(3, frozenset({(1, 0), (0, 2)}))


def bounded_digraphs(max_n=40, max_d=3):
    @st.composite
    def build(draw):
        n = draw(st.integers(3, max_n))
        d = draw(st.integers(1, max_d))
        pairs = draw(
            st.lists(
                st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)),
                max_size=2 * n,
            )
        )
        outdeg = [0] * n
        indeg = [0] * n
        edges = []
        seen = set()
        for u, v in pairs:
            if u == v or (u, v) in seen:
                continue
            if outdeg[u] >= d or indeg[v] >= d:
                continue
            seen.add((u, v))
            outdeg[u] += 1
            indeg[v] += 1
            edges.append((u, v))
        return Digraph(n, d, edges)

    return build()


class TestIndegreeAndDiscs:
    def test_indegree_hand_case(self):
        g = Digraph(5, 2, [(0, 2), (1, 2), (3, 4)])
        assert count_indegree(g) == {0: 3, 1: 1, 2: 1}

    @given(bounded_digraphs())
    @settings(max_examples=40, deadline=None)
    def test_indegree_histogram_partitions(self, g):
        assert sum(count_indegree(g).values()) == g.n

    @given(bounded_digraphs(max_n=25), st.integers(1, 2))
    @settings(max_examples=40, deadline=None)
    def test_disc_histogram_partitions(self, g, q):
        assert sum(disc_histogram(g, q).values()) == g.n

    def test_count_disc_types_partitions(self, catalog_d1q1):
        g = generate("disc-rich", 60, 1, seed=1, targets="two-paths", delta=0.1)
        counts = count_disc_types(g, catalog_d1q1)
        assert sum(counts.values()) == g.n

    def test_catalog_incomplete_raises(self, catalog_d1q1):
        g = Digraph(4, 2, [(0, 1), (2, 1)])  # in-degree 2 disc, d=1 catalog
        with pytest.raises(CatalogIncompleteError):
            count_disc_types(g, catalog_d1q1)


class TestSubgraphCounting:
    def test_two_star_hand_case(self):
        g = Digraph(5, 3, [(0, 4), (1, 4), (2, 4)])
        assert count_subgraph(g, TWO_STAR) == 3  # C(3, 2)

    def test_out_edge_counts_edges(self):
        g = Digraph(5, 2, [(0, 1), (1, 2), (3, 2)])
        assert count_subgraph(g, OUT_EDGE) == 3

    def test_two_path_hand_case(self):
        g = Digraph(4, 2, [(0, 1), (1, 2), (1, 3)])
        # center vertex 1: in-edge from 0, out to 2 or 3
        assert count_subgraph(g, TWO_PATH) == 2

    def test_disconnected_pattern_rejected(self):
        bad = RootedGraph(4, frozenset({(0, 1), (2, 3)}))
        with pytest.raises(ValueError):
            count_subgraph(Digraph(4, 2, []), bad)

    def test_pattern_size_cap(self):
        big = RootedGraph(7, frozenset((i, i + 1) for i in range(6)))
        with pytest.raises(ValueError):
            count_subgraph(Digraph(8, 2, []), big)


class TestPatternRoot:
    def test_chooses_min_eccentricity(self):
        assert choose_pattern_root(TWO_PATH, 1) == 0
        assert choose_pattern_root(TWO_STAR, 1) == 0

    def test_raises_when_radius_too_small(self):
        path4 = RootedGraph(4, frozenset({(0, 1), (1, 2), (2, 3)}))
        with pytest.raises(ValueError):
            choose_pattern_root(path4, 1)


class TestSubgraphIdentity:
    @given(bounded_digraphs(max_n=30), st.sampled_from([TWO_STAR, OUT_EDGE, TWO_PATH]))
    @settings(max_examples=60, deadline=None)
    def test_identity_exact(self, g, h):
        assert verify_obs_identity(g, h, q=2)

    def test_identity_sides_agree_on_planted(self):
        g = generate("planted-stars", 50, 2, seed=5, k=2, count=6)
        lhs, rhs = subgraph_identity_sides(g, TWO_STAR, q=1)
        assert lhs == rhs
        assert lhs >= 6


class TestTruthReport:
    def test_report_csv(self, catalog_d1q1):
        g = generate("disc-rich", 40, 1, seed=2, targets="two-paths", delta=0.1)
        rep = truth_report(g, catalog_d1q1, {"out-edge": OUT_EDGE})
        text = rep.to_csv()
        assert text.startswith("kind,key,count")
        assert "subgraph,out-edge," in text

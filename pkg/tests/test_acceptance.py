"""Acceptance suite: one pass/fail line per criterion.

Each criterion prints ``CRITERION n: PASS/FAIL - description`` (also echoed
in the terminal summary) and then asserts.  Success-rate criteria use the
stated trial counts and tolerances; exact criteria use exact arithmetic.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

import conftest
from qdisc.digraph import (
    Digraph,
    QueryLedger,
    UnidirectionalView,
    generate,
)
from qdisc.estimators import est_disc, est_disc_star, est_subgraph, est_vertices
from qdisc.experiments import fit_exponent
from qdisc.isotypes import (
    RootedGraph,
    binomial_inverse_closed_form,
    binomial_matrix,
    build_tuple_table,
    CorrectionMatrix,
    enumerate_catalog,
    make_star_type,
    mu,
    mu_of,
    tuple_table_for,
    verify_factor_identity,
)
from qdisc.quantumsim import (
    BooleanOracle,
    count_error_bound,
    grover_sample,
    median_amplify,
    median_trial_count,
    quantum_count,
)
from qdisc.testers import (
    build_reduction_instance,
    classical_bidirectional_star_test,
    reduction_disc_catalog,
    star_family,
    test_property,
)
from qdisc.truth import count_disc_types, count_indegree, count_subgraph, verify_obs_identity

test_property.__test__ = False


def record(num: int, desc: str, ok: bool, detail: str = "") -> None:
    line = f"CRITERION {num:2d}: {'PASS' if ok else 'FAIL'} - {desc}"
    if detail:
        line += f" [{detail}]"
    conftest.acceptance_lines.append(line)
    print(line)
    assert ok, line


def test_criterion_01_factor_identity():
    cat = enumerate_catalog(d=1, q=1)
    ids = [t.id for t in cat.types[1:]]
    checked = 0
    ok = True
    for gid in ids:
        for gpid in ids:
            if mu(cat, gid, gpid):
                table = build_tuple_table(cat, gid, gpid)
                ok = ok and verify_factor_identity(table)
                checked += 1
    # the star sub-family of 3-bounded 1-discs
    for j in range(1, 4):
        big = make_star_type(j)
        for i in range(1, j + 1):
            table = tuple_table_for(make_star_type(i), big.canon)
            ok = ok and verify_factor_identity(table)
            checked += 1
    record(
        1,
        "factor identity exact on all comparable pairs (full d=1,q=1 "
        "catalog and 3-bounded star sub-family)",
        ok,
        f"{checked} pairs",
    )


def test_criterion_02_warmup_closed_forms():
    ok = True
    for j in range(1, 5):
        big = make_star_type(j)
        for i in range(1, j + 1):
            got = mu_of(make_star_type(i), big.canon)
            ok = ok and got == math.comb(j, i) * math.factorial(i)
    d = 8
    inv = CorrectionMatrix(list(range(d)), binomial_matrix(d)).inverse()
    closed = binomial_inverse_closed_form(d)
    for i in range(d):
        for j in range(d):
            ok = ok and inv[i][j] == closed[i][j]
    record(
        2,
        "star overcount matrix matches C(j,i)*i! up to 4 and the binomial "
        "inverse matches (-1)^(j-i)*C(j,i) up to 8, exactly",
        ok,
    )


PATTERNS = [
    RootedGraph(2, frozenset({(0, 1)})),
    RootedGraph(2, frozenset({(1, 0)})),
    RootedGraph(3, frozenset({(1, 0), (2, 0)})),
    RootedGraph(3, frozenset({(1, 0), (0, 2)})),
    RootedGraph(3, frozenset({(0, 1), (0, 2)})),
    RootedGraph(3, frozenset({(0, 1), (1, 2), (2, 0)})),
    RootedGraph(4, frozenset({(1, 0), (2, 0), (3, 0)})),
    RootedGraph(4, frozenset({(0, 1), (1, 2), (2, 3)})),
    RootedGraph(4, frozenset({(0, 1), (0, 2), (1, 3), (2, 3)})),
]


def test_criterion_03_subgraph_count_identity():
    rng = np.random.default_rng(33)
    checked = 0
    ok = True
    while checked < 220:
        n = int(rng.integers(8, 61))
        d = int(rng.integers(1, 4))
        g = generate("uniform-bounded", n, d, seed=int(rng.integers(2**31)))
        h = PATTERNS[int(rng.integers(len(PATTERNS)))]
        ok = ok and verify_obs_identity(g, h, q=2)
        checked += 1
    record(
        3,
        "subgraph-count identity holds exactly on fuzzed (graph, pattern) pairs",
        ok,
        f"{checked} pairs",
    )


def test_criterion_04_warmup_estimator_accuracy():
    n, d, delta, trials = 2**14, 2, 0.2, 50
    g = generate("disc-rich", n, d, seed=0, delta=0.1)
    truth = count_indegree(g)
    rates = {}
    for mode in ("deterministic-exact", "stochastic"):
        hits = 0
        for s in range(trials):
            rep = est_vertices(
                UnidirectionalView(g), delta, seed=s, count_mode=mode
            )
            err = sum(abs(rep.estimates[k] - truth[k]) for k in rep.estimates)
            hits += err <= delta * n
        rates[mode] = hits / trials
    ok = rates["deterministic-exact"] >= 0.8 and rates["stochastic"] >= 0.6
    record(
        4,
        "in-degree estimator |error|_1 <= delta*n at d=2, n=2^14: "
        ">=80% exact-count mode, >=60% stochastic",
        ok,
        f"exact {rates['deterministic-exact']:.0%}, "
        f"stochastic {rates['stochastic']:.0%}",
    )


def test_criterion_05_disc_estimator_accuracy():
    n, delta, trials = 2**14, 0.25, 50
    cat = enumerate_catalog(d=1, q=1)
    g = generate("disc-rich", n, 1, seed=0, targets="two-paths", delta=0.12)
    truth = count_disc_types(g, cat)
    hits = 0
    for s in range(trials):
        rep = est_disc_star(
            UnidirectionalView(g), cat, delta, seed=s,
            count_mode="deterministic-exact",
        )
        err = sum(abs(rep.estimates[k] - truth[k]) for k in rep.estimates)
        hits += err <= delta * n
    ok = hits / trials >= 0.55
    record(
        5,
        "staggered disc-type estimator |error|_1 <= delta*n at d=1, q=1, "
        "n=2^14 in >=55% of 50 trials",
        ok,
        f"{hits}/{trials}",
    )


def test_criterion_06_query_exponent():
    pairs = []
    for p in range(10, 21, 2):
        n = 2**p
        g = generate("disc-rich", n, 2, seed=1, delta=0.1)
        for s in range(20):
            rep = est_vertices(UnidirectionalView(g), 0.2, seed=s)
            pairs.append((n, rep.ledger["quantum_cost"]))
    slope, (lo, hi) = fit_exponent(pairs)
    ok = abs(slope - 1 / 3) <= 0.08
    record(
        6,
        "log-log slope of mean quantum cost vs n (d=2 warm-up sweep, "
        "2^10..2^20) within 1/3 +/- 0.08",
        ok,
        f"slope {slope:.4f}, CI ({lo:.4f}, {hi:.4f})",
    )


def test_criterion_07_tester_separation():
    N, k, eps, trials = 2**13, 2, 0.05, 100
    family = star_family(k, catalog=reduction_disc_catalog(k, radius=60), k_discs=60)
    q_rej = q_acc = c_rej = c_acc = 0
    for s in range(trials):
        far = build_reduction_instance("far", N, k, seed=s, eps=eps)
        v = test_property(
            UnidirectionalView(far.digraph()), family, seed=10_000 + s,
            sample_scale=64,
        )
        q_rej += not v.accept
        free = build_reduction_instance("free", N, k, seed=s)
        v2 = test_property(
            UnidirectionalView(free.digraph()), family, seed=20_000 + s,
            sample_scale=64,
        )
        q_acc += v2.accept
        acc_far, _ = classical_bidirectional_star_test(
            far.digraph(), k, eps, seed=30_000 + s
        )
        c_rej += not acc_far
        acc_free, _ = classical_bidirectional_star_test(
            free.digraph(), k, eps, seed=40_000 + s
        )
        c_acc += acc_free
    ok = (
        q_rej / trials >= 2 / 3
        and q_acc / trials >= 2 / 3
        and c_acc == trials  # one-sided: zero false rejections
        and c_rej / trials >= 2 / 3
    )
    record(
        7,
        "frequency tester rejects far / accepts free reduction instances "
        "at >=2/3 each; classical baseline one-sided and >=2/3 on far",
        ok,
        f"quantum far {q_rej}/{trials}, free {q_acc}/{trials}; "
        f"classical far {c_rej}/{trials}, free {c_acc}/{trials}",
    )


def test_criterion_08_reduction_soundness():
    rng = np.random.default_rng(88)
    ok = True
    for _ in range(1000):
        k = int(rng.integers(2, 4))
        scale = int(rng.integers(3, 40))
        N = k * scale
        kind = "free" if rng.random() < 0.5 else "far"
        eps = None if kind == "free" or rng.random() < 0.5 else float(
            rng.uniform(0.05, 1 / (2 * k))  # feasibility: ceil(eps*N)*k <= N
        )
        inst = build_reduction_instance(kind, N, k, int(rng.integers(2**31)), eps=eps)
        g = inst.digraph()
        stars = count_subgraph(g, make_star_type(k).canon)
        sizes = inst.fiber_sizes()
        if kind == "free":
            ok = ok and stars == 0
        else:
            want = math.ceil(eps * N) if eps is not None else inst.R
            # the hot fibers give vertex-disjoint k-stars
            ok = ok and int((sizes == k).sum()) >= want and stars >= want
        ledger = QueryLedger()
        before = inst.f_lookups
        for v in range(inst.n):
            inst.out_query(ledger, v, 1)
        ok = ok and inst.f_lookups - before <= ledger.classical_out
    record(
        8,
        "reduction instances: free kind has zero k-stars, far kind has "
        ">= ceil(eps*N) disjoint k-stars, out-queries cost <= 1 lookup",
        ok,
        "1000 fuzzed instances",
    )


def test_criterion_09_quantum_sim_contracts():
    rng = np.random.default_rng(99)

    # Grover uniformity at 5 sigma over 1e5 draws
    domain, marked = 1000, list(range(0, 1000, 20))  # 50 marked
    oracle = BooleanOracle(domain, lambda x: x % 20 == 0, marked=marked)
    ledger = QueryLedger()
    counts = {m: 0 for m in marked}
    draws = 100_000
    for _ in range(draws):
        counts[grover_sample(oracle, ledger, rng)] += 1
    expect = draws / len(marked)
    chi2 = sum((c - expect) ** 2 / expect for c in counts.values())
    df = len(marked) - 1
    grover_ok = chi2 < df + 5 * math.sqrt(2 * df)

    # counting error bound violated at most eta + 3 sigma over 1e4 trials
    n2, t2, m2, eta = 512, 60, 64.0, 0.05
    oracle2 = BooleanOracle(n2, lambda x: x < t2, marked=list(range(t2)))
    bound = count_error_bound(n2, t2, m2)
    trials = 10_000
    viol = sum(
        1
        for _ in range(trials)
        if abs(quantum_count(oracle2, ledger, rng, m2, eta) - t2) > bound + 1e-9
    )
    sigma = math.sqrt(eta * (1 - eta) / trials)
    count_ok = viol / trials <= eta + 3 * sigma

    # median amplification of a 0.6-success runner over 1e4 meta-trials
    # (trial count shortened via constant_scale; the promise must still hold)
    def runner(r):
        return r.random() if r.random() < 0.6 else 50.0

    meta, eta_m, scale = 10_000, 0.25, 0.05
    fails = sum(
        1
        for _ in range(meta)
        if not 0 <= median_amplify(runner, eta_m, rng, scale) <= 1
    )
    median_ok = fails / meta <= eta_m

    ok = grover_ok and count_ok and median_ok
    record(
        9,
        "simulated subroutine contracts: Grover uniformity (chi-square), "
        "counting error bound rate, median amplification",
        ok,
        f"chi2 {chi2:.1f} (df {df}), count violations {viol}/{trials}, "
        f"median fails {fails}/{meta} at k={median_trial_count(eta_m, scale)}",
    )


def test_criterion_10_model_purity():
    cat = enumerate_catalog(d=1, q=1)
    g = generate("disc-rich", 2048, 1, seed=2, targets="two-paths", delta=0.12)
    snapshots = []

    rep = est_vertices(UnidirectionalView(g), 0.25, seed=1)
    snapshots.append(rep.ledger)
    rep = est_disc(UnidirectionalView(g), cat, 0.25, seed=2)
    snapshots.append(rep.ledger)
    rep = est_disc_star(UnidirectionalView(g), cat, 0.25, seed=3)
    snapshots.append(rep.ledger)
    _, rep = est_subgraph(
        UnidirectionalView(g), cat, RootedGraph(2, frozenset({(0, 1)})), 0.25, seed=4
    )
    snapshots.append(rep.ledger)
    inst = build_reduction_instance("far", 1024, 2, seed=5)
    verdict = test_property(
        UnidirectionalView(inst.digraph()), star_family(2), seed=6
    )
    snapshots.append(verdict.report.ledger)

    view = UnidirectionalView(g)
    ok = all(s["classical_in"] == 0 for s in snapshots) and not hasattr(
        view, "in_query"
    )
    record(
        10,
        "every quantum-unidirectional run ends with zero in-queries "
        "(also asserted inside every estimator run in the suite)",
        ok,
        f"{len(snapshots)} runs checked",
    )

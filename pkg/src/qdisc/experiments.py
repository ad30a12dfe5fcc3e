"""Experiment runner: seeded estimator/tester invocations, CSV emission,
and log-log query-cost slope fits.

Every emitted row carries the spec's config hash and the root seed; a run
with identical spec and seed produces a byte-identical CSV.  Plot emission
is data-only (CSV ready for any plotting tool).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field, asdict
from typing import Optional, Sequence

import numpy as np

from .digraph import Digraph, UnidirectionalView, generate, parse_generator_spec
from .estimators import est_disc, est_disc_star, est_subgraph, est_vertices
from .isotypes import RootedGraph, enumerate_catalog, make_star_type
from .quantumsim import COUNT_MODES, CostModel
from .testers import (
    build_reduction_instance,
    classical_bidirectional_star_test,
    star_family,
    test_property,
)
from .truth import count_disc_types, count_indegree, count_subgraph, truth_report

TASKS = (
    "est-vertices",
    "est-disc",
    "est-disc-star",
    "est-subgraph",
    "test-star-free",
    "scaling-sweep",
    "catalog-dump",
    "truth-dump",
)


@dataclass
class ExperimentSpec:
    task: str
    n: tuple[int, ...] = (4096,)
    d: int = 2
    q: int = 1
    k: int = 2
    delta: float = 0.2
    epsilon: float = 0.05
    trials: int = 10
    seed: int = 0
    count_mode: str = "stochastic"
    constant_scale: float = 1.0
    instance: Optional[str] = None
    out: Optional[str] = None

    def __post_init__(self) -> None:
        if self.task not in TASKS:
            raise ValueError(f"unknown task {self.task!r}")
        if self.count_mode not in COUNT_MODES:
            raise ValueError(f"unknown count mode {self.count_mode!r}")
        if isinstance(self.n, int):
            self.n = (self.n,)
        else:
            self.n = tuple(int(x) for x in self.n)

    def config_hash(self) -> str:
        payload = {k: v for k, v in asdict(self).items() if k != "out"}
        blob = json.dumps(payload, sort_keys=True, default=str)
        return hashlib.sha256(blob.encode()).hexdigest()[:12]


CSV_HEADER = [
    "config",
    "task",
    "row_kind",
    "n",
    "trial",
    "seed",
    "value",
    "truth",
    "error",
    "quantum_cost",
    "classical_out",
    "classical_in",
    "flags",
]


def _make_instance(spec: ExperimentSpec, n: int, seed: int) -> Digraph:
    if spec.instance and os.path.isfile(spec.instance):
        with open(spec.instance) as fh:
            return Digraph.from_text(fh.read())
    if spec.instance:
        kind, params = parse_generator_spec(spec.instance)
        return generate(kind, n, spec.d, seed, **params)
    if spec.task in ("est-disc", "est-disc-star") and spec.d == 1:
        return generate("disc-rich", n, 1, seed, targets="two-paths", delta=0.12)
    return generate("disc-rich", n, spec.d, seed, delta=min(0.1, spec.delta / 2))


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.10g}"
    return str(x)


def _estimator_rows(spec: ExperimentSpec, n: int) -> list[list]:
    cost_model = CostModel(constant_scale=spec.constant_scale)
    chash = spec.config_hash()
    rows: list[list] = []
    catalog = None
    if spec.task in ("est-disc", "est-disc-star", "est-subgraph"):
        catalog = enumerate_catalog(spec.d, spec.q)
    pattern = None
    if spec.task == "est-subgraph":
        pattern = make_star_type(spec.k).canon

    ss = np.random.SeedSequence(spec.seed)
    children = ss.spawn(spec.trials)
    g = _make_instance(spec, n, spec.seed)
    if spec.task == "est-vertices":
        truth = count_indegree(g)
    elif spec.task == "est-subgraph":
        truth = {"#H": count_subgraph(g, pattern)}
    else:
        truth = count_disc_types(g, catalog)

    for t, child in enumerate(children):
        trial_seed = int(child.generate_state(1)[0])
        view = UnidirectionalView(g)
        if spec.task == "est-vertices":
            rep = est_vertices(
                view, spec.delta, trial_seed, spec.count_mode, cost_model
            )
            err = sum(abs(rep.estimates[k] - truth[k]) for k in rep.estimates)
            value = sum(rep.estimates.values())
            truth_val = sum(truth[k] for k in rep.estimates)
        elif spec.task == "est-disc":
            rep = est_disc(
                view, catalog, spec.delta, trial_seed, spec.count_mode, cost_model
            )
            err = sum(abs(rep.estimates[k] - truth[k]) for k in rep.estimates)
            value = sum(rep.estimates.values())
            truth_val = sum(truth[k] for k in rep.estimates)
        elif spec.task == "est-disc-star":
            rep = est_disc_star(
                view, catalog, spec.delta, trial_seed, spec.count_mode, cost_model
            )
            err = sum(abs(rep.estimates[k] - truth[k]) for k in rep.estimates)
            value = sum(rep.estimates.values())
            truth_val = sum(truth[k] for k in rep.estimates)
        else:
            value, rep = est_subgraph(
                view, catalog, pattern, spec.delta, trial_seed, spec.count_mode, cost_model
            )
            truth_val = truth["#H"]
            err = abs(value - truth_val)
        rows.append(
            [
                chash,
                spec.task,
                "trial",
                n,
                t,
                trial_seed,
                _fmt(float(value)),
                _fmt(float(truth_val)),
                _fmt(float(err)),
                _fmt(rep.ledger["quantum_cost"]),
                rep.ledger["classical_out"],
                rep.ledger["classical_in"],
                "|".join(rep.flags) or "-",
            ]
        )

    errors = [float(r[8]) for r in rows]
    costs = [float(r[9]) for r in rows]
    ok = sum(1 for e in errors if e <= spec.delta * n)
    rows.append(
        [
            chash,
            spec.task,
            "summary",
            n,
            -1,
            spec.seed,
            _fmt(ok / len(errors)),
            "-",
            _fmt(float(np.mean(errors))),
            _fmt(float(np.mean(costs))),
            "-",
            "-",
            f"p90_cost:{np.percentile(costs, 90):.6g}",
        ]
    )
    return rows


def _tester_rows(spec: ExperimentSpec, n: int) -> list[list]:
    cost_model = CostModel(constant_scale=spec.constant_scale)
    chash = spec.config_hash()
    rows: list[list] = []
    family = star_family(spec.k)
    ss = np.random.SeedSequence(spec.seed)
    children = ss.spawn(spec.trials)
    outcomes = {"far": [], "free": []}
    for t, child in enumerate(children):
        trial_seed = int(child.generate_state(1)[0])
        for kind in ("far", "free"):
            inst = build_reduction_instance(
                kind, n, spec.k, trial_seed, eps=spec.epsilon if kind == "far" else None
            )
            view = UnidirectionalView(inst.digraph())
            verdict = test_property(
                view, family, trial_seed, spec.count_mode, cost_model
            )
            correct = verdict.accept if kind == "free" else not verdict.accept
            outcomes[kind].append(correct)
            rows.append(
                [
                    chash,
                    spec.task,
                    f"trial-{kind}",
                    inst.n,
                    t,
                    trial_seed,
                    "accept" if verdict.accept else "reject",
                    "free" if kind == "free" else "far",
                    _fmt(verdict.est_sum),
                    _fmt(verdict.report.ledger["quantum_cost"]),
                    verdict.report.ledger["classical_out"],
                    verdict.report.ledger["classical_in"],
                    "|".join(verdict.flags) or "-",
                ]
            )
    for kind in ("far", "free"):
        rows.append(
            [
                chash,
                spec.task,
                f"summary-{kind}",
                n,
                -1,
                spec.seed,
                _fmt(float(np.mean(outcomes[kind]))),
                "-",
                "-",
                "-",
                "-",
                "-",
                "-",
            ]
        )
    return rows


def run(spec: ExperimentSpec) -> int:
    """Execute the spec; write CSV artifacts; return a process exit code."""
    try:
        if spec.task == "catalog-dump":
            catalog = enumerate_catalog(spec.d, spec.q)
            text = catalog.dump() + "\n\n" + catalog.matrix().dump_csv()
            _emit(spec.out, text)
            return 0
        if spec.task == "truth-dump":
            catalog = enumerate_catalog(spec.d, spec.q)
            g = _make_instance(spec, spec.n[0], spec.seed)
            _emit(spec.out, truth_report(g, catalog).to_csv())
            return 0

        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        if spec.task == "test-star-free":
            for n in spec.n:
                writer.writerows(_tester_rows(spec, n))
        elif spec.task == "scaling-sweep":
            sub = ExperimentSpec(**{**asdict(spec), "task": "est-vertices"})
            for n in spec.n:
                writer.writerows(_estimator_rows(sub, n))
        else:
            for n in spec.n:
                writer.writerows(_estimator_rows(spec, n))
        _emit(spec.out, buf.getvalue())
        return 0
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        if spec.out and os.path.exists(spec.out):
            os.remove(spec.out)
        return 1


def _emit(out: Optional[str], text: str) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def fit_exponent(
    csv_source, bootstrap: int = 200, seed: int = 0
) -> tuple[float, tuple[float, float]]:
    """Least-squares slope of log(mean quantum cost) vs log(n) from a
    sweep CSV (or an iterable of (n, cost) pairs), with a bootstrap CI.

    Requires >= 5 distinct n values with >= 10 trials each.
    """
    pairs: list[tuple[int, float]] = []
    if isinstance(csv_source, (str, os.PathLike)):
        with open(csv_source) as fh:
            for row in csv.DictReader(fh):
                if row["row_kind"] == "trial":
                    pairs.append((int(row["n"]), float(row["quantum_cost"])))
    else:
        pairs = [(int(n), float(c)) for n, c in csv_source]

    by_n: dict[int, list[float]] = {}
    for n, c in pairs:
        by_n.setdefault(n, []).append(c)
    if len(by_n) < 5 or any(len(v) < 10 for v in by_n.values()):
        raise ValueError(
            "need >= 5 distinct n values with >= 10 trials each; got "
            + str({n: len(v) for n, v in sorted(by_n.items())})
        )

    def slope(samples: dict[int, list[float]]) -> float:
        xs = np.log([n for n in sorted(samples)])
        ys = np.log([np.mean(samples[n]) for n in sorted(samples)])
        return float(np.polyfit(xs, ys, 1)[0])

    point = slope(by_n)
    rng = np.random.default_rng(seed)
    reps = []
    for _ in range(bootstrap):
        resampled = {
            n: list(rng.choice(v, size=len(v), replace=True))
            for n, v in by_n.items()
        }
        reps.append(slope(resampled))
    lo, hi = np.percentile(reps, [2.5, 97.5])
    return point, (float(lo), float(hi))


def _parse_n(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(","))


def main(argv: Optional[Sequence[str]] = None) -> int:
    p = argparse.ArgumentParser(
        prog="qdisc", description="disc-frequency estimation experiments"
    )
    p.add_argument("--task", required=True, choices=TASKS)
    p.add_argument("--n", type=_parse_n, default=(4096,),
                   help="instance size(s), comma-separated")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--delta", type=float, default=0.2)
    p.add_argument("--epsilon", type=float, default=0.05)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count-mode", default="stochastic", choices=COUNT_MODES)
    p.add_argument("--constant-scale", type=float, default=1.0)
    p.add_argument("--instance", default=None,
                   help="generator spec 'kind:key=val,...' or a graph file")
    p.add_argument("--out", default=None)
    args = p.parse_args(argv)
    try:
        spec = ExperimentSpec(
            task=args.task,
            n=args.n,
            d=args.d,
            q=args.q,
            k=args.k,
            delta=args.delta,
            epsilon=args.epsilon,
            trials=args.trials,
            seed=args.seed,
            count_mode=args.count_mode,
            constant_scale=args.constant_scale,
            instance=args.instance,
            out=args.out,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return run(spec)


if __name__ == "__main__":
    sys.exit(main())

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest

from qdisc.digraph import QueryLedger
from qdisc.quantumsim import (
    EXHAUSTED,
    BooleanOracle,
    CostModel,
    count_error_bound,
    grover_sample,
    median_amplify,
    median_trial_count,
    quantum_count,
)


def make_oracle(n, marked):
    marked = set(marked)
    return BooleanOracle(n, evaluate=lambda x: x in marked, marked=sorted(marked))


class TestGrover:
    def test_returns_marked_element(self):
        oracle = make_oracle(100, [3, 17, 42])
        rng = np.random.default_rng(0)
        ledger = QueryLedger()
        for _ in range(50):
            assert grover_sample(oracle, ledger, rng) in {3, 17, 42}

    def test_charge_is_sqrt_ratio(self):
        oracle = make_oracle(64, range(4))
        ledger = QueryLedger()
        grover_sample(oracle, ledger, np.random.default_rng(0))
        assert ledger.quantum_cost == Fraction(math.sqrt(64 / 4))

    def test_scale_multiplies_charge(self):
        oracle = make_oracle(64, range(4))
        ledger = QueryLedger()
        grover_sample(
            oracle, ledger, np.random.default_rng(0), CostModel(constant_scale=0.5)
        )
        assert ledger.quantum_cost == Fraction(0.5) * Fraction(math.sqrt(16))

    def test_empty_marked_set_exhausts_and_charges_budget(self):
        oracle = make_oracle(81, [])
        ledger = QueryLedger()
        res = grover_sample(oracle, ledger, np.random.default_rng(0))
        assert res is EXHAUSTED
        assert ledger.quantum_cost == Fraction(9.0)

    def test_zero_budget_rejected(self):
        oracle = make_oracle(81, [])
        with pytest.raises(ValueError):
            grover_sample(
                oracle, QueryLedger(), np.random.default_rng(0), budget=0
            )

    def test_uniformity_chi_square(self):
        marked = list(range(0, 200, 10))  # 20 marked of 200
        oracle = make_oracle(200, marked)
        rng = np.random.default_rng(7)
        ledger = QueryLedger()
        draws = 20000
        counts = {m: 0 for m in marked}
        for _ in range(draws):
            counts[grover_sample(oracle, ledger, rng)] += 1
        expect = draws / len(marked)
        chi2 = sum((c - expect) ** 2 / expect for c in counts.values())
        df = len(marked) - 1
        assert chi2 < df + 5 * math.sqrt(2 * df)


class TestCount:
    def test_deterministic_exact(self):
        oracle = make_oracle(1000, range(123))
        ledger = QueryLedger()
        got = quantum_count(
            oracle, ledger, np.random.default_rng(0), 50, 0.01, "deterministic-exact"
        )
        assert got == 123.0

    def test_charge_formula(self):
        oracle = make_oracle(100, range(5))
        ledger = QueryLedger()
        quantum_count(oracle, ledger, np.random.default_rng(0), 40, 0.1, "stochastic")
        assert ledger.quantum_cost == Fraction(500.0 * 40 * math.log(2.0 / 0.1))

    def test_adversarial_is_low_biased(self):
        oracle = make_oracle(1000, range(400))
        ledger = QueryLedger()
        got = quantum_count(
            oracle, ledger, np.random.default_rng(0), 30, 0.01, "adversarial"
        )
        b = count_error_bound(1000, 400, 30)
        assert got == max(0.0, 400 - b)

    def test_stochastic_within_bound_at_success_rate(self):
        n, t, m, eta = 512, 60, 64, 0.05
        oracle = make_oracle(n, range(t))
        rng = np.random.default_rng(3)
        ledger = QueryLedger()
        b = count_error_bound(n, t, m)
        trials = 4000
        viol = sum(
            1
            for _ in range(trials)
            if abs(quantum_count(oracle, ledger, rng, m, eta, "stochastic") - t)
            > b + 1e-9
        )
        sigma = math.sqrt(eta * (1 - eta) / trials)
        assert viol / trials <= eta + 3 * sigma

    def test_parameter_validation(self):
        oracle = make_oracle(10, [1])
        rng = np.random.default_rng(0)
        with pytest.raises(ValueError):
            quantum_count(oracle, QueryLedger(), rng, 0.5, 0.1)
        with pytest.raises(ValueError):
            quantum_count(oracle, QueryLedger(), rng, 10, 1.5)
        with pytest.raises(ValueError):
            quantum_count(oracle, QueryLedger(), rng, 10, 0.1, "bogus")


class TestMedianAmplify:
    def test_trial_count(self):
        assert median_trial_count(0.5) == math.ceil(500 * math.log(4))
        assert median_trial_count(0.5, 0.01) == math.ceil(5 * math.log(4))

    def test_boosts_weak_runner(self):
        # runner lands in [0, 1] w.p. 0.6, else at 100
        def runner(rng):
            return rng.random() if rng.random() < 0.6 else 100.0

        rng = np.random.default_rng(11)
        fails = 0
        meta = 300
        for _ in range(meta):
            got = median_amplify(runner, eta=0.2, rng=rng, constant_scale=0.02)
            if not 0 <= got <= 1:
                fails += 1
        assert fails / meta <= 0.2

    def test_returns_actual_trial_value(self):
        vals = iter([5.0, 1.0, 3.0])

        def runner(rng):
            return next(vals)

        assert median_trial_count(0.5, 0.004) == 3
        got = median_amplify(
            runner, eta=0.5, rng=np.random.default_rng(0), constant_scale=0.004
        )
        assert got == 3.0  # the (lower) median of {1, 3, 5}

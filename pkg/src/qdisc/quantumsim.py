"""Classical emulation of Grover search and quantum counting.

The emulation honors two contracts and nothing more: the output
distribution (a uniform marked element; an additive-error count estimate)
and the charged query cost.  Amplitude-level simulation is out of scope.

Count modes:

* ``stochastic`` -- success branch (probability 1-eta) returns t + u with
  u uniform on [-B, +B] where B = 2*pi*sqrt(t(N-t))/M + pi^2*N/M^2; the
  failure branch returns a uniform value in [0, N].
* ``deterministic-exact`` -- returns t with zero noise (debugging).
* ``adversarial`` -- returns t - B clamped to [0, N]: the worst
  deterministic error for the threshold/truncation code path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .digraph import QueryLedger

COUNT_MODES = ("stochastic", "deterministic-exact", "adversarial")

#: Distinguished result of grover_sample on an empty marked set.
EXHAUSTED = object()


@dataclass(frozen=True)
class CostModel:
    """Charged-cost constants.  ``constant_scale`` multiplies every charge
    and every derived budget; experiments that scale it record the value."""

    grover_constant: float = 1.0
    constant_scale: float = 1.0

    def grover_charge(self, N: int, t: int) -> Fraction:
        return Fraction(self.grover_constant) * Fraction(self.constant_scale) * Fraction(
            math.sqrt(N / t)
        )

    def count_charge(self, M: float, eta: float) -> Fraction:
        return Fraction(500.0 * M * math.log(2.0 / eta)) * Fraction(self.constant_scale)


class BooleanOracle:
    """A predicate f over [N] (the V x [d] edge index space).

    ``marked`` may be supplied by the caller when the support is already
    known truth-side (the estimators compute it in bulk as the stand-in for
    superposition evaluation); otherwise it is built by a full scan of
    ``evaluate``.
    """

    def __init__(
        self,
        domain_size: int,
        evaluate: Callable[[int], bool],
        marked: Optional[Sequence[int]] = None,
    ):
        self.domain_size = int(domain_size)
        self.evaluate = evaluate
        self._marked = None if marked is None else np.asarray(marked, dtype=np.int64)

    def marked_indices(self) -> np.ndarray:
        if self._marked is None:
            self._marked = np.asarray(
                [x for x in range(self.domain_size) if self.evaluate(x)],
                dtype=np.int64,
            )
        return self._marked

    @property
    def marked_count_truth(self) -> int:
        """t = |f^{-1}(1)|, truth-side."""
        return int(len(self.marked_indices()))


def grover_sample(
    oracle: BooleanOracle,
    ledger: QueryLedger,
    rng: np.random.Generator,
    cost_model: CostModel = CostModel(),
    budget: Optional[float] = None,
):
    """Uniform sample from f^{-1}(1), charging grover_constant*sqrt(N/t).

    With t = 0 the search cannot terminate; the call charges the budget
    (default sqrt(N)) and returns EXHAUSTED.
    """
    N = oracle.domain_size
    t = oracle.marked_count_truth
    if t == 0:
        if budget is None:
            budget = math.sqrt(N)
        if budget <= 0:
            raise ValueError("zero budget with an empty marked set")
        ledger.charge_quantum(Fraction(budget) * Fraction(cost_model.constant_scale))
        return EXHAUSTED
    ledger.charge_quantum(cost_model.grover_charge(N, t))
    marked = oracle.marked_indices()
    return int(marked[rng.integers(len(marked))])


def count_error_bound(N: int, t: int, M: float) -> float:
    """The additive error promise: 2*pi*sqrt(t(N-t))/M + pi^2*N/M^2."""
    return 2.0 * math.pi * math.sqrt(t * (N - t)) / M + math.pi**2 * N / M**2


def quantum_count(
    oracle: BooleanOracle,
    ledger: QueryLedger,
    rng: np.random.Generator,
    M: float,
    eta: float,
    mode: str = "stochastic",
    cost_model: CostModel = CostModel(),
) -> float:
    """Estimate t = |f^{-1}(1)| with failure probability eta.

    Charges 500*M*ln(2/eta)*constant_scale; on success the estimate lies
    within count_error_bound(N, t, M) of t.
    """
    if M < 1:
        raise ValueError("need query budget M >= 1")
    if not (0 < eta < 1):
        raise ValueError("need 0 < eta < 1")
    if mode not in COUNT_MODES:
        raise ValueError(f"unknown count mode {mode!r}")
    N = oracle.domain_size
    t = oracle.marked_count_truth
    ledger.charge_quantum(cost_model.count_charge(M, eta))
    if mode == "deterministic-exact":
        return float(t)
    B = count_error_bound(N, t, M)
    if mode == "adversarial":
        return float(min(N, max(0.0, t - B)))
    if rng.random() < eta:
        return float(rng.uniform(0.0, N))
    return float(min(N, max(0.0, t + rng.uniform(-B, B))))


def median_trial_count(eta: float, constant_scale: float = 1.0) -> int:
    return max(1, math.ceil(500.0 * math.log(2.0 / eta) * constant_scale))


def median_amplify(
    runner: Callable[[np.random.Generator], float],
    eta: float,
    rng: np.random.Generator,
    constant_scale: float = 1.0,
) -> float:
    """Median of ceil(500*ln(2/eta)) independent trials.

    If each trial lands in a promise interval [a, b] with probability at
    least 0.6, the median lies in [a, b] with probability >= 1 - eta.
    Returns an actual trial value (lower median for even counts).
    """
    k = median_trial_count(eta, constant_scale)
    values = sorted(runner(rng) for _ in range(k))
    return values[(k - 1) // 2]

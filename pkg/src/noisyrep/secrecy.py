"""Secrecy conditions and key rates for states shared through noisy repeaters.

Everything here is a function of four trace norms, those of
``beta_1 eta_1 +/- beta_2 eta_2`` and ``beta_3 eta_3 +/- beta_4 eta_4``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from noisyrep.chain import ChainState
from noisyrep.errors import DomainError, InternalAssertion, MultipleCrossings, NoCrossing
from noisyrep.operator_spectra import trace_norm_combo

ENTROPY_SLACK = 1e-12
LAMBDA_TOL = 1e-10


def binary_entropy(p: float) -> float:
    """Binary Shannon entropy in bits, with ``h(0) = h(1) = 0``."""
    if not -ENTROPY_SLACK <= p <= 1 + ENTROPY_SLACK:
        raise DomainError(f"binary entropy needs p in [0, 1], got {p!r}")
    p = min(max(p, 0.0), 1.0)
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


@dataclass(frozen=True)
class PairNorms:
    """Trace norms of the sum and difference of each weighted Bell pair."""

    plus12: float
    minus12: float
    plus34: float
    minus34: float


def pair_norms(s: ChainState) -> PairNorms:
    # Sums of weighted density operators have trace norm equal to the total
    # weight; using that identity keeps x = beta_1 + beta_2 free of the
    # rounding in long eigenvalue sums.
    b1, e1 = s.weighted(1)
    b2, e2 = s.weighted(2)
    b3, e3 = s.weighted(3)
    b4, e4 = s.weighted(4)
    plus12, plus34 = b1 + b2, b3 + b4
    return PairNorms(
        plus12=plus12,
        minus12=min(trace_norm_combo([b1, -b2], [e1, e2]), plus12),
        plus34=plus34,
        minus34=min(trace_norm_combo([b3, -b4], [e3, e4]), plus34),
    )


@dataclass(frozen=True)
class UntwistResult:
    """Bell spectrum of the untwisted two-qubit state."""

    lam: tuple[float, float, float, float]

    def __getitem__(self, k: int) -> float:
        return self.lam[k - 1]

    def __iter__(self):
        return iter(self.lam)


def _half_pair(plus: float, minus: float) -> tuple[float, float]:
    hi, lo = (plus + minus) / 2, (plus - minus) / 2
    if lo < -LAMBDA_TOL:
        raise InternalAssertion(f"difference norm {minus} exceeds sum norm {plus}")
    return hi, max(lo, 0.0)


def untwist(s: ChainState) -> UntwistResult:
    n = pair_norms(s)
    return UntwistResult(_half_pair(n.plus12, n.minus12) + _half_pair(n.plus34, n.minus34))


def measurement_dist(s: ChainState) -> np.ndarray:
    """Joint distribution ``p[a, b]`` of computational-basis outcomes."""
    b1, b2, b3, b4 = s.beta
    same, diff = (b1 + b2) / 2, (b3 + b4) / 2
    return np.array([[same, diff], [diff, same]])


class EntanglementCheck(NamedTuple):
    entangled: bool
    sufficient: bool


def precondition_entangled(s: ChainState) -> EntanglementCheck:
    """Whether the untwisted state is entangled, plus the cheap sufficient test."""
    n = pair_norms(s)
    b1, b2, b3, b4 = s.beta
    check = EntanglementCheck(n.minus12 > n.plus34, b1 - b2 > b3 + b4)
    if check.sufficient and not check.entangled:
        raise InternalAssertion("sufficient entanglement test passed but exact test failed")
    return check


def twoway_condition(s: ChainState) -> bool:
    """Advantage-distillation criterion for two-way key distillation."""
    n = pair_norms(s)
    return n.minus12**2 > n.plus12 * n.plus34


def fidelity(s: ChainState) -> float:
    """Singlet fidelity of the two-qubit state once repeaters are traced out."""
    return s.beta[1]


@dataclass(frozen=True)
class KeyRateReport:
    x: float
    y1: float
    y3: float
    rate_oneway: float
    precondition_entangled: bool
    sufficient_entangled: bool
    twoway_ok: bool
    fidelity: float
    lambdas: UntwistResult


def _y(plus: float, minus: float) -> tuple[float, float]:
    """``y`` and its entropy weight; a vanishing pair contributes nothing."""
    if plus == 0.0:
        return 1.0, 0.0
    return (1 + minus / plus) / 2, plus


def oneway_rate(s: ChainState) -> KeyRateReport:
    """One-way key rate lower bound with all intermediate quantities.

    A negative rate means the bound is vacuous for this state.
    """
    n = pair_norms(s)
    x = n.plus12
    y1, w1 = _y(n.plus12, n.minus12)
    y3, w3 = _y(n.plus34, n.minus34)
    rate = 1 - binary_entropy(x) - w1 * binary_entropy(y1) - w3 * binary_entropy(y3)
    ent = precondition_entangled(s)
    return KeyRateReport(
        x=x,
        y1=y1,
        y3=y3,
        rate_oneway=rate,
        precondition_entangled=ent.entangled,
        sufficient_entangled=ent.sufficient,
        twoway_ok=n.minus12**2 > n.plus12 * n.plus34,
        fidelity=fidelity(s),
        lambdas=UntwistResult(_half_pair(n.plus12, n.minus12) + _half_pair(n.plus34, n.minus34)),
    )


CRITERIA: dict[str, Callable[[ChainState], bool]] = {
    "oneway": lambda s: oneway_rate(s).rate_oneway > 0,
    "twoway": twoway_condition,
    "precondition": lambda s: precondition_entangled(s).entangled,
}

SCAN_STEP = 0.005
BISECT_TOL = 1e-6


def qber_threshold(
    model: Callable[[float], ChainState],
    criterion: str | Callable[[ChainState], bool],
    q_max: float = 0.5,
    scan_step: float = SCAN_STEP,
    tol: float = BISECT_TOL,
) -> float:
    """Largest QBER at which ``criterion`` still holds for ``model(q)``.

    The criterion must hold at ``q = 0`` and fail at ``q_max``.  A coarse scan
    checks that it changes value exactly once before bisecting.
    """
    test = CRITERIA[criterion] if isinstance(criterion, str) else criterion

    def holds(q: float) -> bool:
        return bool(test(model(q)))

    if not holds(0.0):
        raise NoCrossing("criterion fails already at Q = 0")
    if holds(q_max):
        raise NoCrossing(f"criterion still holds at Q = {q_max}")

    steps = int(math.floor(q_max / scan_step + 1e-9))
    grid = [min(k * scan_step, q_max) for k in range(steps + 1)]
    if grid[-1] < q_max:
        grid.append(q_max)
    flags = [holds(q) for q in grid]
    changes = [k for k in range(1, len(grid)) if flags[k] != flags[k - 1]]
    if len(changes) != 1:
        where = ", ".join(f"{grid[k - 1]:.3f}-{grid[k]:.3f}" for k in changes)
        raise MultipleCrossings(f"criterion changes value {len(changes)} times: {where}")

    lo, hi = grid[changes[0] - 1], grid[changes[0]]
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if holds(mid):
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2

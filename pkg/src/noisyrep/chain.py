"""End-to-end states of repeater chains over Bell-diagonal channels.

A chain with ``N`` repeaters has ``N + 1`` segments.  Segment ``m`` imprints a
Bell error ``i_m`` drawn from its channel distribution.  Swapping runs left to
right, so after repeater ``n`` the pair spanning segments ``1..n+1`` carries
the local index ``c_n = i_1 o i_2 o ... o i_{n+1}`` and repeater ``n`` is left
in ``eta_n(c_n)``.  The honest parties end with ``|phi_j>``, ``j = c_N``,
correlated with the joint repeater state.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Mapping, Sequence

from noisyrep.bell_algebra import BELL_INDICES, BellDiagonalDist, BellIndex, compose
from noisyrep.errors import BadDimension, BadQber, FamilyMismatch, SizeLimit
from noisyrep.operator_spectra import (
    SpectralOperator,
    combine,
    projector_asym,
    projector_sym,
    tensor,
    tensor_power,
    unit_operator,
)

SegmentChannel = BellDiagonalDist

MAX_TUPLES = 4**9


def _as_eta_tuple(eta) -> tuple[SpectralOperator, ...]:
    if isinstance(eta, Mapping):
        return tuple(eta[k] for k in BELL_INDICES)
    return tuple(eta)


@dataclass(frozen=True)
class RepeaterModel:
    """Repeater state ``eta(k)`` left behind when the swap yields ``|phi_k>``."""

    eta: tuple[SpectralOperator, SpectralOperator, SpectralOperator, SpectralOperator]
    name: str = "custom"

    def __post_init__(self):
        eta = _as_eta_tuple(self.eta)
        if len(eta) != 4:
            raise ValueError("a repeater model needs four states")
        for k, op in zip(BELL_INDICES, eta):
            if not op.is_normalized():
                raise ValueError(f"eta({int(k)}) has trace {op.trace()!r}")
        ref = eta[0]
        for op in eta[1:]:
            if op.family != ref.family or op.dim != ref.dim:
                raise FamilyMismatch("repeater states must share one family")
        object.__setattr__(self, "eta", eta)

    def __getitem__(self, k: int) -> SpectralOperator:
        return self.eta[BellIndex(k) - 1]

    @property
    def family(self):
        return self.eta[0].family


@dataclass(frozen=True)
class ShieldParams:
    d: int
    l: int

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise BadDimension(f"shield dimension must be >= 2, got {self.d!r}")
        if int(self.l) != self.l or self.l < 0:
            raise ValueError(f"shield size must be >= 0, got {self.l!r}")

    @property
    def ds(self) -> int:
        return self.d * (self.d + 1) // 2

    @property
    def da(self) -> int:
        return self.d * (self.d - 1) // 2


def shield_repeater(p: ShieldParams) -> RepeaterModel:
    """Phase-error sensitive repeater.

    ``eta_1 = eta_3 = eta_4 = ((rho_s + rho_a)/2)^{x l}`` and
    ``eta_2 = rho_s^{x l}``.
    """
    rho_s, rho_a = projector_sym(p.d), projector_asym(p.d)
    mixed = tensor_power(combine([0.5, 0.5], [rho_s, rho_a]), p.l)
    sym = tensor_power(rho_s, p.l)
    return RepeaterModel((mixed, sym, mixed, mixed), name=f"shield(d={p.d},l={p.l})")


def shield_repeater_orthogonal(p: ShieldParams) -> RepeaterModel:
    """``eta_1 = eta_3 = eta_4 = rho_a^{x l}``, ``eta_2 = rho_s^{x l}``."""
    asym = tensor_power(projector_asym(p.d), p.l)
    sym = tensor_power(projector_sym(p.d), p.l)
    return RepeaterModel((asym, sym, asym, asym), name=f"shield-orthogonal(d={p.d},l={p.l})")


def shield_repeater_asymptotic() -> RepeaterModel:
    """Shield repeater in the limit ``l -> infinity``.

    The phase-error state becomes perfectly distinguishable from the others,
    so it is modelled as living on its own eigenspace.
    """
    family = ("shield-asymptotic",)
    generic = SpectralOperator(((1.0, 1, "generic"),), 2, family)
    sym = SpectralOperator(((1.0, 1, "sym"),), 2, family)
    return RepeaterModel((generic, sym, generic, generic), name="shield-asymptotic")


def trivial_repeater() -> RepeaterModel:
    """A repeater whose state ignores the channel errors."""
    unit = unit_operator()
    return RepeaterModel((unit,) * 4, name="none")


@dataclass(frozen=True)
class ChainState:
    """Classical-quantum state ``sum_k beta_k |phi_k><phi_k| x eta_k``."""

    beta: BellDiagonalDist
    eta: tuple[SpectralOperator, SpectralOperator, SpectralOperator, SpectralOperator]

    def __post_init__(self):
        if not isinstance(self.beta, BellDiagonalDist):
            object.__setattr__(self, "beta", BellDiagonalDist(tuple(self.beta)))
        eta = _as_eta_tuple(self.eta)
        if len(eta) != 4:
            raise ValueError("a chain state needs four repeater states")
        ref = eta[0]
        for op in eta:
            if op.family != ref.family or op.dim != ref.dim:
                raise FamilyMismatch("conditional repeater states must share one family")
            if not op.is_normalized(1e-10):
                raise ValueError(f"repeater state has trace {op.trace()!r}")
        object.__setattr__(self, "eta", eta)

    def weighted(self, k: int) -> tuple[float, SpectralOperator]:
        k = BellIndex(k)
        return self.beta[k], self.eta[k - 1]


def single_repeater_state(
    left: SegmentChannel, right: SegmentChannel, rep: RepeaterModel
) -> ChainState:
    beta = [0.0] * 4
    for i, j in itertools.product(BELL_INDICES, repeat=2):
        beta[compose(i, j) - 1] += left[i] * right[j]
    return ChainState(BellDiagonalDist(tuple(beta)), rep.eta)


def _history_weights(segments: Sequence[SegmentChannel]) -> dict[tuple[BellIndex, ...], float]:
    """Probability of every sequence of local indices ``(c_1, ..., c_N)``."""
    # c_1 = i_1 o i_2 and c_n = c_{n-1} o i_{n+1}; since every element is its
    # own inverse, i_{n+1} = c_{n-1} o c_n and the only free choice is i_1.
    weights: dict[tuple[BellIndex, ...], float] = {}
    first, second, *rest = segments
    for c1 in BELL_INDICES:
        p1 = math.fsum(first[i] * second[compose(i, c1)] for i in BELL_INDICES)
        if p1 > 0:
            weights[(c1,)] = p1
    for seg in rest:
        grown = {}
        for history, w in weights.items():
            for c in BELL_INDICES:
                p = seg[compose(history[-1], c)]
                if p > 0:
                    grown[(*history, c)] = w * p
        weights = grown
    return weights


def chain_state(
    segments: Sequence[SegmentChannel],
    reps: Sequence[RepeaterModel],
    max_tuples: int = MAX_TUPLES,
) -> ChainState:
    """End-to-end state of ``N = len(reps)`` repeaters over ``N + 1`` segments.

    The joint repeater state is tracked exactly (no factorization across
    repeaters).  Where ``beta_j = 0`` the state ``eta_j`` is a placeholder:
    the joint state of the history ``(1, ..., 1, j)``.
    """
    n = len(reps)
    if n < 1:
        raise ValueError("a chain needs at least one repeater")
    if len(segments) != n + 1:
        raise ValueError(f"{n} repeaters need {n + 1} segments, got {len(segments)}")
    if 4 ** (n + 1) > max_tuples:
        raise SizeLimit(f"4^{n + 1} error tuples exceed the cap of {max_tuples}")
    segments = [s if isinstance(s, BellDiagonalDist) else BellDiagonalDist(tuple(s)) for s in segments]

    cache: dict[tuple[BellIndex, ...], SpectralOperator] = {}

    def joint(history: tuple[BellIndex, ...]) -> SpectralOperator:
        if history not in cache:
            cache[history] = tensor(*(rep[c] for rep, c in zip(reps, history)))
        return cache[history]

    by_end: dict[BellIndex, list[tuple[float, tuple[BellIndex, ...]]]] = defaultdict(list)
    for history, w in sorted(_history_weights(segments).items()):
        by_end[history[-1]].append((w, history))

    beta, eta = [], []
    for j in BELL_INDICES:
        terms = by_end.get(j, [])
        total = math.fsum(w for w, _ in terms)
        beta.append(total)
        if total > 0:
            eta.append(combine([w / total for w, _ in terms], [joint(h) for _, h in terms]))
        else:
            eta.append(joint((BellIndex.PHI1,) * (n - 1) + (j,)))
    if n == 1:
        # A single repeater's state depends only on its own index.
        eta = [reps[0][j] for j in BELL_INDICES]
    s = math.fsum(beta)
    return ChainState(BellDiagonalDist(tuple(b / s for b in beta)), tuple(eta))


def bb84_dist(q: float) -> BellDiagonalDist:
    if not 0.0 <= q <= 0.5:
        raise BadQber(f"QBER must lie in [0, 0.5], got {q!r}")
    return BellDiagonalDist(((1 - q) ** 2, q * (1 - q), q * (1 - q), q * q))


def bb84_state(q: float, rep: RepeaterModel) -> ChainState:
    """BB84 entanglement-based state with QBER ``q`` and repeater ``rep``."""
    return ChainState(bb84_dist(q), rep.eta)

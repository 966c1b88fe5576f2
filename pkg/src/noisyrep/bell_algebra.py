"""Bell-state index bookkeeping.

The four Bell states are labelled 1..4::

    |phi_1> = (|00> + |11>)/sqrt(2)
    |phi_2> = (1 x Z)  |phi_1>     phase error
    |phi_3> = (1 x X)  |phi_1>     bit error
    |phi_4> = (1 x iY) |phi_1>     both

Each index is identified with a bit pair ``(z, x)`` and entanglement swapping
composes indices by XOR of the pairs (the Klein four-group).
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Iterable, Sequence

import numpy as np

from noisyrep.errors import EmptyInput, InternalAssertion

SIMPLEX_TOL = 1e-12
PHASE_TOL = 1e-10


class BellIndex(enum.IntEnum):
    PHI1 = 1
    PHI2 = 2
    PHI3 = 3
    PHI4 = 4

    @property
    def bits(self) -> tuple[int, int]:
        """The ``(z, x)`` error pair."""
        return _INDEX_TO_BITS[self.value]

    @classmethod
    def from_bits(cls, z: int, x: int) -> BellIndex:
        return cls(_BITS_TO_INDEX[(z & 1, x & 1)])


_INDEX_TO_BITS = {1: (0, 0), 2: (1, 0), 3: (0, 1), 4: (1, 1)}
_BITS_TO_INDEX = {bits: k for k, bits in _INDEX_TO_BITS.items()}

BELL_INDICES = tuple(BellIndex)


def compose(i: int, j: int) -> BellIndex:
    """Bell index produced by swapping ``|phi_i>`` with ``|phi_j>``."""
    zi, xi = BellIndex(i).bits
    zj, xj = BellIndex(j).bits
    return BellIndex.from_bits(zi ^ zj, xi ^ xj)


def compose_all(indices: Iterable[int]) -> BellIndex:
    return reduce(compose, indices, BellIndex.PHI1)


@dataclass(frozen=True)
class BellDiagonalDist:
    """Probability vector over the four Bell indices."""

    beta: tuple[float, float, float, float]

    def __post_init__(self):
        beta = tuple(float(b) for b in self.beta)
        if len(beta) != 4:
            raise ValueError(f"need 4 Bell weights, got {len(beta)}")
        if any(b < -SIMPLEX_TOL for b in beta):
            raise ValueError(f"negative Bell weight in {beta}")
        if abs(sum(beta) - 1.0) > SIMPLEX_TOL:
            raise ValueError(f"Bell weights sum to {sum(beta)!r}, not 1")
        object.__setattr__(self, "beta", tuple(max(b, 0.0) for b in beta))

    def __getitem__(self, k: int) -> float:
        return self.beta[BellIndex(k) - 1]

    def __iter__(self):
        return iter(self.beta)

    @classmethod
    def point(cls, k: int) -> BellDiagonalDist:
        beta = [0.0] * 4
        beta[BellIndex(k) - 1] = 1.0
        return cls(tuple(beta))

    def as_array(self) -> np.ndarray:
        return np.array(self.beta)


def convolve(dists: Sequence[BellDiagonalDist]) -> BellDiagonalDist:
    """Distribution of the composed index of independent Bell errors."""
    if not dists:
        raise EmptyInput("convolve needs at least one distribution")

    def pair(a: Sequence[float], b: Sequence[float]) -> list[float]:
        out = [0.0] * 4
        for i, j in itertools.product(BELL_INDICES, repeat=2):
            out[compose(i, j) - 1] += a[i - 1] * b[j - 1]
        return out

    beta = reduce(pair, (d.beta for d in dists[1:]), list(dists[0].beta))
    # Guard against drift beyond the simplex tolerance on long lists.
    total = sum(beta)
    return BellDiagonalDist(tuple(b / total for b in beta))


# --- state-vector swapping oracle -------------------------------------------

_PAULI = {
    1: np.eye(2, dtype=complex),
    2: np.array([[1, 0], [0, -1]], dtype=complex),
    3: np.array([[0, 1], [1, 0]], dtype=complex),
    4: np.array([[0, 1], [-1, 0]], dtype=complex),  # iY
}


def bell_matrix(k: int) -> np.ndarray:
    """Amplitudes ``M[a, b]`` of ``|phi_k>`` in the computational basis."""
    phi1 = np.eye(2, dtype=complex) / np.sqrt(2)
    # (1 x P)|phi_1>: amplitude[a, b] = sum_b' P[b, b'] phi1[a, b']
    return phi1 @ _PAULI[BellIndex(k)].T


def identify_bell_state(psi: np.ndarray) -> tuple[BellIndex, float]:
    """Closest Bell state to a normalized two-qubit ``psi`` (2x2 amplitudes)."""
    overlaps = [abs(np.vdot(bell_matrix(k), psi)) for k in BELL_INDICES]
    best = int(np.argmax(overlaps))
    return BELL_INDICES[best], float(overlaps[best])


def _measure(i: int, j: int, m: int) -> tuple[np.ndarray, float]:
    # qubit order A, R1, R2, B
    psi = np.einsum("ar,sb->arsb", bell_matrix(i), bell_matrix(j))
    out = np.einsum("rs,arsb->ab", bell_matrix(m).conj(), psi)
    prob = float(np.vdot(out, out).real)
    return out / np.sqrt(prob), prob


@lru_cache(maxsize=None)
def _corrections() -> dict[int, np.ndarray]:
    # Frozen from the ideal input |phi_1> x |phi_1>: the repeater never learns
    # which errors occurred.
    table = {}
    for m in BELL_INDICES:
        out, _ = _measure(1, 1, m)
        k, ov = identify_bell_state(out)
        if ov < 1 - PHASE_TOL:
            raise InternalAssertion(f"ideal outcome {m} is not a Bell state")
        table[m] = _PAULI[k].conj().T
    return table


@dataclass(frozen=True)
class SwapOutcome:
    outcome: BellIndex
    probability: float
    result: BellIndex
    overlap: float


def swap_outcomes(i: int, j: int) -> list[SwapOutcome]:
    """Simulate swapping ``|phi_i>_{AR1} x |phi_j>_{R2B}`` for every outcome."""
    outcomes = []
    for m in BELL_INDICES:
        out, prob = _measure(i, j, m)
        corrected = out @ _corrections()[m].T
        k, ov = identify_bell_state(corrected)
        outcomes.append(SwapOutcome(m, prob, k, ov))
    return outcomes


def swap_oracle(i: int, j: int) -> BellIndex:
    """End-to-end Bell index from an explicit 4-qubit simulation."""
    outcomes = swap_outcomes(i, j)
    results = {o.result for o in outcomes}
    if len(results) != 1:
        raise InternalAssertion(f"outcomes disagree for ({i}, {j}): {results}")
    worst = min(o.overlap for o in outcomes)
    if worst <= 1 - PHASE_TOL:
        raise InternalAssertion(f"post-measurement state not Bell (overlap {worst})")
    return results.pop()

"""Spectral representation of commuting repeater operators and their trace norms.

Operators that are diagonal in one shared eigenbasis decomposition form a
*family*.  Inside a family an operator is stored as a list of
``(eigenvalue, multiplicity, label)`` entries where the label names an
eigenspace of the shared decomposition.  Zero eigenspaces may be omitted.
Signed combinations of family members are then diagonal too, so their trace
norm is a weighted sum of absolute values and never needs a matrix.

A small dense backend (explicit Hermitian matrices, built independently from
the swap operator) serves as an oracle for the spectral path.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

import numpy as np

from noisyrep.errors import BadDimension, FamilyMismatch, NotHermitian, SizeLimit

Label = Hashable

TRACE_TOL = 1e-12
HERMITIAN_TOL = 1e-12
DENSE_DIM_CAP = 256


@dataclass(frozen=True)
class SpectralOperator:
    """Positive semidefinite operator given by its spectrum in a family basis.

    Attributes:
        entries: ``(eigenvalue, multiplicity, label)`` triples, labels unique.
        dim: dimension of the Hilbert space the operator acts on.
        family: identifier of the shared eigenspace decomposition; operators
            may only be combined with members of the same family.
    """

    entries: tuple[tuple[float, int, Label], ...]
    dim: int
    family: Hashable

    def __post_init__(self):
        entries = tuple((float(ev), int(mult), label) for ev, mult, label in self.entries)
        labels = [label for _, _, label in entries]
        if len(set(labels)) != len(labels):
            raise ValueError("eigenspace labels must be unique")
        for ev, mult, label in entries:
            if ev < 0:
                raise ValueError(f"negative eigenvalue {ev} on {label!r}")
            if mult <= 0:
                raise ValueError(f"non-positive multiplicity {mult} on {label!r}")
        if sum(mult for _, mult, _ in entries) > self.dim:
            raise ValueError("multiplicities exceed the dimension")
        object.__setattr__(self, "entries", entries)

    @property
    def rank(self) -> int:
        return sum(mult for ev, mult, _ in self.entries if ev > 0)

    def trace(self) -> float:
        return math.fsum(ev * mult for ev, mult, _ in self.entries)

    def is_normalized(self, tol: float = TRACE_TOL) -> bool:
        return abs(self.trace() - 1.0) <= tol

    def eigenvalue(self, label: Label) -> float:
        for ev, _, lab in self.entries:
            if lab == label:
                return ev
        return 0.0

    def spectrum(self) -> list[tuple[float, int]]:
        """Eigenvalue multiset as ``(eigenvalue, multiplicity)``, zeros included."""
        out = [(ev, mult) for ev, mult, _ in self.entries]
        free = self.dim - sum(mult for _, mult, _ in self.entries)
        if free:
            out.append((0.0, free))
        return out


def unit_operator(family: Hashable = "unit") -> SpectralOperator:
    """The scalar 1 on a one-dimensional space."""
    return SpectralOperator(((1.0, 1, ()),), 1, family)


def _check_dimension(d: int) -> None:
    if int(d) != d or d < 2:
        raise BadDimension(f"local dimension must be an integer >= 2, got {d!r}")


def projector_sym(d: int) -> SpectralOperator:
    """Normalized projector onto the symmetric subspace of C^d x C^d."""
    _check_dimension(d)
    ds = d * (d + 1) // 2
    return SpectralOperator(((1.0 / ds, ds, "s"),), d * d, ("sym-asym", d))


def projector_asym(d: int) -> SpectralOperator:
    """Normalized projector onto the antisymmetric subspace of C^d x C^d."""
    _check_dimension(d)
    da = d * (d - 1) // 2
    return SpectralOperator(((1.0 / da, da, "a"),), d * d, ("sym-asym", d))


def _align(ops: Sequence[SpectralOperator]) -> dict[Label, tuple[int, list[float]]]:
    """Map each label of a family to its multiplicity and per-operator eigenvalues."""
    if not ops:
        raise ValueError("no operators given")
    family, dim = ops[0].family, ops[0].dim
    for op in ops[1:]:
        if op.family != family or op.dim != dim:
            raise FamilyMismatch(
                f"cannot combine family {op.family!r} (dim {op.dim}) "
                f"with {family!r} (dim {dim})"
            )
    table: dict[Label, tuple[int, list[float]]] = {}
    for pos, op in enumerate(ops):
        for ev, mult, label in op.entries:
            if label not in table:
                table[label] = (mult, [0.0] * len(ops))
            elif table[label][0] != mult:
                raise FamilyMismatch(
                    f"eigenspace {label!r} has multiplicity {mult} "
                    f"but {table[label][0]} elsewhere in the family"
                )
            table[label][1][pos] = ev
    return table


def combine(coeffs: Sequence[float], ops: Sequence[SpectralOperator]) -> SpectralOperator:
    """Nonnegative combination ``sum_m c_m op_m`` as a new family member."""
    if len(coeffs) != len(ops):
        raise ValueError("coeffs and ops differ in length")
    entries = []
    for label, (mult, evs) in _align(ops).items():
        ev = math.fsum(c * e for c, e in zip(coeffs, evs))
        if ev < -TRACE_TOL:
            raise ValueError("combination is not positive semidefinite")
        if ev > 0:
            entries.append((ev, mult, label))
    return SpectralOperator(tuple(entries), ops[0].dim, ops[0].family)


def _label_key(label: Label) -> str:
    return repr(label)


def tensor_power(op: SpectralOperator, l: int) -> SpectralOperator:
    """``op`` tensored with itself ``l`` times.

    Eigenspaces of the power are label words; words that are permutations of
    one another carry equal eigenvalues for every member of the family, so
    they are merged into one class keyed by the letter counts.
    """
    if l < 0:
        raise ValueError(f"tensor power must be >= 0, got {l}")
    family = ("power", op.family, l)
    if l == 0:
        return unit_operator(family)
    letters = sorted(op.entries, key=lambda e: _label_key(e[2]))
    entries = []
    for counts in _compositions(l, len(letters)):
        mult = _multinomial(counts)
        ev = 1.0
        label = []
        for (e, m, lab), c in zip(letters, counts):
            if c:
                mult *= m**c
                ev *= e**c
                label.append((lab, c))
        if ev > 0:
            entries.append((ev, mult, tuple(label)))
    return SpectralOperator(tuple(entries), op.dim**l, family)


def _multinomial(counts: Sequence[int]) -> int:
    out, total = 1, 0
    for c in counts:
        total += c
        out *= math.comb(total, c)
    return out


def _compositions(total: int, parts: int) -> Iterable[tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first, *rest)


def tensor(*ops: SpectralOperator) -> SpectralOperator:
    """Tensor product; a single operator is returned unchanged."""
    if not ops:
        raise ValueError("tensor needs at least one operator")
    if len(ops) == 1:
        return ops[0]
    entries = [(1.0, 1, ())]
    for op in ops:
        entries = [
            (ev * e, mult * m, (*label, lab))
            for ev, mult, label in entries
            for e, m, lab in op.entries
        ]
    return SpectralOperator(
        tuple(entries),
        math.prod(op.dim for op in ops),
        ("product", tuple(op.family for op in ops)),
    )


def trace_norm_combo(coeffs: Sequence[float], ops: Sequence[SpectralOperator]) -> float:
    """Trace norm of ``sum_m c_m op_m`` for commuting family members."""
    if len(coeffs) != len(ops):
        raise ValueError("coeffs and ops differ in length")
    return math.fsum(
        abs(math.fsum(c * e for c, e in zip(coeffs, evs))) * mult
        for mult, evs in _align(ops).values()
    )


def overlap(a: SpectralOperator, b: SpectralOperator) -> float:
    """``tr[a b]``."""
    return math.fsum(mult * ea * eb for mult, (ea, eb) in _align([a, b]).values())


# --- dense oracle backend ---------------------------------------------------


@dataclass(frozen=True)
class DenseHermitian:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {m.shape}")
        if m.shape[0] > DENSE_DIM_CAP:
            raise SizeLimit(f"dense backend limited to dim {DENSE_DIM_CAP}, got {m.shape[0]}")
        dev = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
        if dev > HERMITIAN_TOL:
            raise NotHermitian(f"max |M - M^dagger| = {dev:.3e}")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __add__(self, other: DenseHermitian) -> DenseHermitian:
        return DenseHermitian(self.matrix + other.matrix)

    def __sub__(self, other: DenseHermitian) -> DenseHermitian:
        return DenseHermitian(self.matrix - other.matrix)

    def __rmul__(self, c: float) -> DenseHermitian:
        return DenseHermitian(c * self.matrix)


def trace_norm_dense(m: DenseHermitian) -> float:
    """Sum of absolute eigenvalues."""
    return float(np.sum(np.abs(np.linalg.eigvalsh(m.matrix))))


def dense_overlap(a: DenseHermitian, b: DenseHermitian) -> float:
    return float(np.trace(a.matrix @ b.matrix).real)


def swap_operator(d: int) -> np.ndarray:
    """Unitary exchanging the two factors of C^d x C^d."""
    s = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            s[j * d + i, i * d + j] = 1.0
    return s


def dense_projector_sym(d: int) -> DenseHermitian:
    _check_dimension(d)
    p = (np.eye(d * d) + swap_operator(d)) / 2
    return DenseHermitian(p / np.trace(p))


def dense_projector_asym(d: int) -> DenseHermitian:
    _check_dimension(d)
    p = (np.eye(d * d) - swap_operator(d)) / 2
    return DenseHermitian(p / np.trace(p))


def dense_kron(*mats: DenseHermitian) -> DenseHermitian:
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = np.kron(out, m.matrix)
    return DenseHermitian(out)


def dense_power(m: DenseHermitian, l: int) -> DenseHermitian:
    return dense_kron(*([m] * l))

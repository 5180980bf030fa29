"""Finite unitary representations of the symmetry groups in play.

A system is described by its symmetry group; the group's mutually
commuting (abelian) generators are the independent observables that the
rest of the package measures. Supported groups: spin SU(2) at any
half-integer j, finite cyclic translations, Z2, and products.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    DEGENERACY_TOL,
    degenerate_groups,
    is_hermitian,
    jacobi_eigh,
    max_abs,
)

HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-10
COMMUTATOR_TOL = 1e-10


def _frozen(matrix) -> np.ndarray:
    arr = np.array(matrix, dtype=np.complex128)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class GroupDescriptor:
    """Which symmetry group a representation realizes.

    ``kind`` is one of "su2" (with ``spin`` j), "cyclic" (with ``order``
    L), "z2", or "product" (with ``factors``).
    """

    kind: str
    spin: float | None = None
    order: int | None = None
    factors: tuple["GroupDescriptor", ...] = ()

    def __post_init__(self):
        if self.kind == "su2":
            j = self.spin
            if j is None or j <= 0 or abs(2 * j - round(2 * j)) > 1e-9:
                raise ValueError(f"spin must be a positive half-integer, got {j}")
        elif self.kind == "cyclic":
            if self.order is None or int(self.order) < 2:
                raise ValueError(f"cyclic order must be an integer >= 2, got {self.order}")
        elif self.kind == "z2":
            pass
        elif self.kind == "product":
            if len(self.factors) < 2:
                raise ValueError("product group needs at least 2 factors")
        else:
            raise ValueError(f"unknown group kind {self.kind!r}")

    @classmethod
    def su2(cls, j: float) -> "GroupDescriptor":
        return cls(kind="su2", spin=float(j))

    @classmethod
    def cyclic(cls, order: int) -> "GroupDescriptor":
        return cls(kind="cyclic", order=int(order))

    @classmethod
    def z2(cls) -> "GroupDescriptor":
        return cls(kind="z2")

    @classmethod
    def product(cls, *factors: "GroupDescriptor") -> "GroupDescriptor":
        return cls(kind="product", factors=tuple(factors))

    def label(self) -> str:
        if self.kind == "su2":
            return f"SU2(j={self.spin:g})"
        if self.kind == "cyclic":
            return f"Cyclic({self.order})"
        if self.kind == "z2":
            return "Z2"
        return " x ".join(f.label() for f in self.factors)


@dataclass(frozen=True)
class HermitianOperator:
    """A self-adjoint operator, i.e. an observable."""

    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        arr = _frozen(self.matrix)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("observable matrix must be square")
        if max_abs(arr - arr.conj().T) > HERMITIAN_TOL:
            raise ValueError("matrix is not Hermitian within 1e-12")
        object.__setattr__(self, "matrix", arr)
        object.__setattr__(self, "_eig", None)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def eigensystem(self):
        """Cached (ascending eigenvalues, orthonormal eigenvector columns)."""
        cached = getattr(self, "_eig")
        if cached is None:
            cached = jacobi_eigh(self.matrix)
            object.__setattr__(self, "_eig", cached)
        return cached


@dataclass(frozen=True)
class UnitaryOperator:
    """A norm-preserving evolution or symmetry transformation."""

    matrix: np.ndarray

    def __post_init__(self):
        arr = _frozen(self.matrix)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("unitary matrix must be square")
        d = arr.shape[0]
        if max_abs(arr.conj().T @ arr - np.eye(d)) > UNITARY_TOL:
            raise ValueError("matrix is not unitary within 1e-10")
        object.__setattr__(self, "matrix", arr)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def dagger(self) -> "UnitaryOperator":
        return UnitaryOperator(self.matrix.conj().T)


@dataclass(frozen=True)
class Representation:
    """A finite unitary representation of a symmetry group.

    Carries the Hermitian generators plus the declared maximal abelian
    subset that plays the role of independent observables.
    """

    group: GroupDescriptor
    dim: int
    generators: tuple[np.ndarray, ...]
    abelian_generators: tuple[np.ndarray, ...]
    generator_labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        gens = tuple(_frozen(g) for g in self.generators)
        abelian = tuple(_frozen(g) for g in self.abelian_generators)
        for g in gens + abelian:
            if g.shape != (self.dim, self.dim):
                raise ValueError("generator shape does not match representation dimension")
            if max_abs(g - g.conj().T) > HERMITIAN_TOL:
                raise ValueError("generator is not Hermitian within 1e-12")
        for i, ga in enumerate(abelian):
            for gb in abelian[i + 1 :]:
                if max_abs(commutator(ga, gb)) > COMMUTATOR_TOL:
                    raise ValueError("abelian generators do not commute within 1e-10")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "abelian_generators", abelian)
        if not self.generator_labels:
            object.__setattr__(
                self, "generator_labels", tuple(f"G{i}" for i in range(len(gens)))
            )

    def observable(self, index: int = 0, label: str | None = None) -> HermitianOperator:
        """The index-th abelian generator wrapped as a measurable observable."""
        gen = self.abelian_generators[index]
        if label is None:
            label = f"{self.group.label()}[abelian {index}]"
        return HermitianOperator(gen, label=label)


def commutator(a, b) -> np.ndarray:
    """[A, B] = AB - BA for same-dimension operators or raw matrices."""
    ma = a.matrix if isinstance(a, HermitianOperator) else np.asarray(a)
    mb = b.matrix if isinstance(b, HermitianOperator) else np.asarray(b)
    if ma.shape != mb.shape:
        raise ValueError(f"dimension mismatch: {ma.shape} vs {mb.shape}")
    return ma @ mb - mb @ ma


def spin_representation(j) -> Representation:
    """Spin-j representation from the standard ladder construction.

    Basis is ordered by descending magnetic quantum number, so J_z is
    diag(j, j-1, ..., -j). The abelian generator is J_z.
    """
    j = float(j)
    if j <= 0 or abs(2 * j - round(2 * j)) > 1e-9:
        raise ValueError(f"spin must be a positive half-integer, got {j}")
    d = int(round(2 * j)) + 1
    m = j - np.arange(d)
    jz = np.diag(m).astype(np.complex128)
    jplus = np.zeros((d, d), dtype=np.complex128)
    for i in range(1, d):
        # raising: |m_i> -> |m_i + 1>, which is index i - 1
        jplus[i - 1, i] = np.sqrt(j * (j + 1) - m[i] * (m[i] + 1))
    jminus = jplus.conj().T
    jx = (jplus + jminus) / 2
    jy = (jplus - jminus) / (2j)
    return Representation(
        group=GroupDescriptor.su2(j),
        dim=d,
        generators=(jx, jy, jz),
        abelian_generators=(jz,),
        generator_labels=("J_x", "J_y", "J_z"),
    )


def cyclic_representation(order: int) -> Representation:
    """Cyclic translation group of a given order on position labels.

    Generators are the position label operator N = diag(0, ..., L-1) and
    its Fourier conjugate K; the one-step shift is exp(-2 pi i K / L).
    The abelian generator is N.
    """
    L = int(order)
    if L < 2:
        raise ValueError(f"cyclic order must be >= 2, got {order}")
    n = np.diag(np.arange(L)).astype(np.complex128)
    grid = np.arange(L)
    fourier = np.exp(2j * np.pi * np.outer(grid, grid) / L) / np.sqrt(L)
    k = fourier @ n @ fourier.conj().T
    k = (k + k.conj().T) / 2  # kill roundoff drift
    return Representation(
        group=GroupDescriptor.cyclic(L),
        dim=L,
        generators=(n, k),
        abelian_generators=(n,),
        generator_labels=("N", "K"),
    )


def z2_representation() -> Representation:
    """Two-element swap group, realized as the order-2 cyclic group."""
    rep = cyclic_representation(2)
    return Representation(
        group=GroupDescriptor.z2(),
        dim=2,
        generators=rep.generators,
        abelian_generators=rep.abelian_generators,
        generator_labels=rep.generator_labels,
    )


def shift_unitary(rep: Representation) -> UnitaryOperator:
    """One-step shift |x> -> |x+1 mod L> of a cyclic representation."""
    if rep.group.kind not in ("cyclic", "z2"):
        raise ValueError("shift unitary is defined for cyclic representations")
    L = rep.dim
    k = rep.generators[1]
    return exponentiate(HermitianOperator(k, label="K"), 2 * np.pi / L)


def tensor_product(a: Representation, b: Representation) -> Representation:
    """Composite representation on the product space.

    Generators of each factor are lifted by tensoring with the identity
    of the other; the abelian set is the union of the lifted abelian
    sets.
    """
    ia = np.eye(a.dim)
    ib = np.eye(b.dim)
    gens = tuple(np.kron(g, ib) for g in a.generators) + tuple(
        np.kron(ia, g) for g in b.generators
    )
    abelian = tuple(np.kron(g, ib) for g in a.abelian_generators) + tuple(
        np.kron(ia, g) for g in b.abelian_generators
    )
    labels = tuple(f"{lab} x 1" for lab in a.generator_labels) + tuple(
        f"1 x {lab}" for lab in b.generator_labels
    )
    return Representation(
        group=GroupDescriptor.product(a.group, b.group),
        dim=a.dim * b.dim,
        generators=gens,
        abelian_generators=abelian,
        generator_labels=labels,
    )


def eigensystem(h: HermitianOperator | np.ndarray):
    """Ascending eigenvalues and orthonormal eigenvector columns.

    Rejects non-Hermitian input. Downstream consumers group eigenvalues
    closer than 1e-9 into one degenerate eigenspace via
    :func:`degenerate_eigenspaces`.
    """
    if isinstance(h, HermitianOperator):
        return h.eigensystem()
    arr = np.asarray(h)
    if not is_hermitian(arr, HERMITIAN_TOL):
        raise ValueError("eigensystem requires a Hermitian matrix")
    return jacobi_eigh(arr)


def degenerate_eigenspaces(values, tol: float = DEGENERACY_TOL):
    """Group ascending eigenvalues into (representative value, indices) pairs."""
    groups = degenerate_groups(values, tol)
    return [(float(np.mean([values[i] for i in g])), g) for g in groups]


def exponentiate(h: HermitianOperator | np.ndarray, theta: float) -> UnitaryOperator:
    """U = exp(-i theta H) built from the eigendecomposition of H."""
    values, vectors = eigensystem(h)
    phases = np.exp(-1j * theta * values)
    u = (vectors * phases) @ vectors.conj().T
    return UnitaryOperator(u)

"""Projective state vectors, density operators, and composition.

States are normalized and compared up to a global phase. Composites
carry their factor dimensions so they can be regrouped, partially
traced, and tested for separability through their Schmidt spectrum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import jacobi_eigh, max_abs
from .symmetry import HermitianOperator

NORM_TOL = 1e-12
PROJECTIVE_TOL = 1e-10
SCHMIDT_RANK_TOL = 1e-9


def _frozen_vector(amplitudes) -> np.ndarray:
    arr = np.array(amplitudes, dtype=np.complex128).ravel()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class StateVector:
    """A normalized pure state; global phase carries no meaning."""

    amplitudes: np.ndarray

    def __post_init__(self):
        arr = _frozen_vector(self.amplitudes)
        if arr.size == 0:
            raise ValueError("state must have at least one amplitude")
        norm_sq = float(np.sum(np.abs(arr) ** 2))
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized: sum |a|^2 = {norm_sq!r}")
        object.__setattr__(self, "amplitudes", arr)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def overlap(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def isclose_projective(self, other: "StateVector", tol: float = PROJECTIVE_TOL) -> bool:
        """Equality as rays: |<self|other>| >= 1 - tol."""
        if self.dim != other.dim:
            return False
        return abs(self.overlap(other)) >= 1.0 - tol

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "amplitudes": [[float(a.real), float(a.imag)] for a in self.amplitudes],
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "StateVector":
        amps = np.array([complex(re, im) for re, im in payload["amplitudes"]])
        if len(amps) != int(payload["dim"]):
            raise ValueError("amplitude count does not match declared dim")
        return cls(amps)

    @classmethod
    def basis(cls, dim: int, index: int) -> "StateVector":
        amps = np.zeros(dim, dtype=np.complex128)
        amps[index] = 1.0
        return cls(amps)


def from_amplitudes(raw) -> StateVector:
    """Normalize a raw amplitude vector into a state. Rejects the zero vector."""
    arr = np.array(raw, dtype=np.complex128).ravel()
    norm = float(np.linalg.norm(arr))
    if norm == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return StateVector(arr / norm)


def random_state(dim: int, rng) -> StateVector:
    """Haar-uniform random pure state (rotation-invariant Gaussian draw)."""
    amps = rng.complex_normals(dim)
    return from_amplitudes(amps)


@dataclass(frozen=True)
class CompositeState:
    """A pure state together with the dimensions of its subsystems."""

    state: StateVector
    factor_dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.factor_dims)
        if math.prod(dims) != self.state.dim:
            raise ValueError(
                f"product of factor dims {dims} does not equal state dim {self.state.dim}"
            )
        object.__setattr__(self, "factor_dims", dims)

    @property
    def dim(self) -> int:
        return self.state.dim

    @property
    def n_factors(self) -> int:
        return len(self.factor_dims)

    def group_factors(self, split: int) -> "CompositeState":
        """Bipartition: factors [0, split) vs [split, n). Same amplitudes."""
        if not 0 < split < self.n_factors:
            raise ValueError(f"split index {split} out of range")
        left = math.prod(self.factor_dims[:split])
        right = math.prod(self.factor_dims[split:])
        return CompositeState(self.state, (left, right))

    def amplitude_matrix(self) -> np.ndarray:
        """d_A x d_B amplitude matrix of a bipartite state."""
        if self.n_factors != 2:
            raise ValueError("amplitude matrix requires exactly 2 factors; group factors first")
        da, db = self.factor_dims
        return self.state.amplitudes.reshape(da, db)


@dataclass(frozen=True)
class DensityOperator:
    """Hermitian, unit-trace, positive semidefinite operator."""

    matrix: np.ndarray

    def __post_init__(self):
        arr = np.array(self.matrix, dtype=np.complex128)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("density matrix must be square")
        if max_abs(arr - arr.conj().T) > NORM_TOL:
            raise ValueError("density matrix is not Hermitian within 1e-12")
        trace = complex(np.trace(arr))
        if abs(trace - 1.0) > NORM_TOL:
            raise ValueError(f"density matrix trace is {trace!r}, expected 1")
        values, _ = jacobi_eigh(arr)
        if values[0] < -1e-10:
            raise ValueError(f"density matrix has negative eigenvalue {values[0]!r}")
        arr.flags.writeable = False
        object.__setattr__(self, "matrix", arr)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_state(cls, psi: StateVector) -> "DensityOperator":
        a = psi.amplitudes
        return cls(np.outer(a, a.conj()))

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityOperator":
        return cls(np.eye(dim) / dim)


def tensor_state(a: StateVector, b: StateVector) -> CompositeState:
    """Kronecker product of two pure states."""
    return CompositeState(StateVector(np.kron(a.amplitudes, b.amplitudes)), (a.dim, b.dim))


def symmetrized_composite(a: StateVector, b: StateVector) -> CompositeState:
    """Normalized symmetrization of two same-dimension preparations.

    Builds (|a>|b> + |b>|a>) and normalizes; for identical preparations
    the coefficient on |i>|j> + |j>|i> is proportional to a_i a_j.
    """
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    raw = np.kron(a.amplitudes, b.amplitudes) + np.kron(b.amplitudes, a.amplitudes)
    return CompositeState(from_amplitudes(raw), (a.dim, a.dim))


def partial_trace(rho: DensityOperator, factor_dims, keep: int) -> DensityOperator:
    """Trace out every subsystem except ``keep``.

    ``factor_dims`` lists the subsystem dimensions whose product must
    equal the operator dimension. The reduced operator always has unit
    trace.
    """
    dims = tuple(int(d) for d in factor_dims)
    if math.prod(dims) != rho.dim:
        raise ValueError(f"factor dims {dims} do not multiply to operator dim {rho.dim}")
    n = len(dims)
    if not 0 <= keep < n:
        raise ValueError(f"keep index {keep} out of range for {n} factors")
    tensor = rho.matrix.reshape(dims + dims)
    # trace out factors from the highest index down so axis numbers stay valid
    remaining = n
    for axis in reversed(range(n)):
        if axis == keep:
            continue
        tensor = np.trace(tensor, axis1=axis, axis2=axis + remaining)
        remaining -= 1
    return DensityOperator(tensor)


def reduced_density(psi: CompositeState, keep: int) -> DensityOperator:
    """Reduced operator of a bipartite pure state.

    Works from the amplitude-matrix Gram product, so the full composite
    density matrix is never formed.
    """
    m = psi.amplitude_matrix()
    if keep == 0:
        return DensityOperator(m @ m.conj().T)
    if keep == 1:
        return DensityOperator(m.T @ m.conj())
    raise ValueError("keep must be 0 or 1 for a bipartite state")


def purity(rho: DensityOperator) -> float:
    """tr(rho^2); 1 for pure states, 1/d for maximally mixed."""
    return float(np.trace(rho.matrix @ rho.matrix).real)


def schmidt_coefficients(psi: CompositeState) -> np.ndarray:
    """Descending Schmidt coefficients of a bipartite pure state.

    Computed as square roots of the Gram-matrix spectrum of the
    amplitude matrix, so the whole package shares one eigensolver.
    Gram eigenvalues below the relative machine-noise floor are exact
    zeros; without the floor, rounding noise of order eps would surface
    as spurious coefficients of order sqrt(eps).
    """
    m = psi.amplitude_matrix()
    gram = m @ m.conj().T if m.shape[0] <= m.shape[1] else m.conj().T @ m
    values, _ = jacobi_eigh(gram)
    values = np.clip(values[::-1], 0.0, None)
    values[values < values.max() * 1e-14] = 0.0
    return np.sqrt(values)


def is_separable_pure(psi: CompositeState) -> bool:
    """True iff the bipartite state has Schmidt rank 1."""
    coeffs = schmidt_coefficients(psi)
    return len(coeffs) < 2 or coeffs[1] < SCHMIDT_RANK_TOL


def expectation(rho: DensityOperator | StateVector, a: HermitianOperator) -> float:
    """tr(rho A), or <psi|A|psi> when given a pure state."""
    if isinstance(rho, StateVector):
        if rho.dim != a.dim:
            raise ValueError(f"dimension mismatch: state {rho.dim} vs observable {a.dim}")
        value = complex(np.vdot(rho.amplitudes, a.matrix @ rho.amplitudes))
    else:
        if rho.dim != a.dim:
            raise ValueError(f"dimension mismatch: operator {rho.dim} vs observable {a.dim}")
        value = complex(np.trace(rho.matrix @ a.matrix))
    if abs(value.imag) > 1e-10:
        raise ValueError(f"expectation has non-negligible imaginary part {value.imag!r}")
    return value.real

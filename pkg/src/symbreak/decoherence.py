"""Measurement as entanglement: system -> apparatus -> environment.

A controlled shift copies the pointer index of the system into an
apparatus register and then into a chain of environment qubits. For a
qubit system coupled to environment qubits through branch-conditioned
rotations, the reduced off-diagonal coherence decays as a product of
per-qubit overlaps; the exact full-state evolution is kept around as an
independent check of that closed form.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .states import CompositeState, StateVector
from .symmetry import HermitianOperator, exponentiate

EXACT_ENV_LIMIT = 12

_SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
_SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128)


def _ket0() -> StateVector:
    return StateVector.basis(2, 0)


@dataclass(frozen=True)
class EnvironmentModel:
    """A register of environment qubits and their coupling strengths.

    Each qubit k couples to the system pointer with strength
    ``couplings[k]`` (radians per unit time) and starts in ``initial``
    (|0> unless stated otherwise).
    """

    couplings: tuple[float, ...]
    initial: StateVector = field(default_factory=_ket0)

    def __post_init__(self):
        gs = tuple(float(g) for g in self.couplings)
        if not all(np.isfinite(gs)):
            raise ValueError("couplings must be finite")
        if self.initial.dim != 2:
            raise ValueError("environment qubits are two-dimensional")
        object.__setattr__(self, "couplings", gs)

    @property
    def k(self) -> int:
        return len(self.couplings)


@dataclass(frozen=True)
class DecoherencePoint:
    """Reduced coherence at one time, with its closed-form prediction."""

    time: float
    coherence: float
    analytic: float


@dataclass(frozen=True)
class DecoherenceTrace:
    """Coherence decay over a time grid."""

    times: tuple[float, ...]
    coherence: tuple[float, ...]
    analytic: tuple[float, ...]
    k_used: int

    def __post_init__(self):
        if not (len(self.times) == len(self.coherence) == len(self.analytic)):
            raise ValueError("trace columns must have equal length")

    def rows(self):
        return list(zip(self.times, self.coherence, self.analytic))


def entangle_with_apparatus(psi: StateVector, apparatus_dim: int) -> CompositeState:
    """Controlled shift of the pointer index into a fresh apparatus.

    Sends sum_a s_a |a>|0> to sum_a s_a |a>|a>. The apparatus must have
    at least as many levels as the system so every branch is resolved.
    """
    m = int(apparatus_dim)
    n = psi.dim
    if m < n:
        raise ValueError(f"apparatus dimension {m} cannot resolve {n} system branches")
    amps = np.zeros(n * m, dtype=np.complex128)
    for a in range(n):
        amps[a * m + a] = psi.amplitudes[a]
    return CompositeState(StateVector(amps), (n, m))


def chain_entangle(psi: StateVector, apparatus_dim: int, env: EnvironmentModel) -> CompositeState:
    """Repeat the pointer-copy into apparatus and then k environment qubits.

    Environment registers are two-level, so each records the branch
    index modulo 2 (applied to its initial state by the bit-flip).
    With zero environment qubits this reduces to
    :func:`entangle_with_apparatus`.
    """
    m = int(apparatus_dim)
    n = psi.dim
    if m < n:
        raise ValueError(f"apparatus dimension {m} cannot resolve {n} system branches")
    k = env.k
    chi = env.initial.amplitudes
    flipped = _SIGMA_X @ chi
    shape = (n, m) + (2,) * k
    amps = np.zeros(shape, dtype=np.complex128)
    for a in range(n):
        branch = psi.amplitudes[a] * np.ones((), dtype=np.complex128)
        env_state = np.array([1.0], dtype=np.complex128)
        for _ in range(k):
            env_state = np.kron(env_state, flipped if a % 2 else chi)
        amps[a, a] = (branch * env_state).reshape((2,) * k) if k else branch * env_state[0]
    return CompositeState(StateVector(amps.ravel()), shape)


def _qubit_overlap(g: float, t: float, chi: np.ndarray) -> complex:
    """<chi| exp(-2 i g t sigma_x) |chi>, the per-qubit branch overlap."""
    theta = 2.0 * g * t
    u = np.cos(theta) * np.eye(2) - 1j * np.sin(theta) * _SIGMA_X
    return complex(np.vdot(chi, u @ chi))


def analytic_coherence(psi: StateVector, env: EnvironmentModel, t: float) -> float:
    """Closed-form reduced coherence |a0 a1*| prod_k |overlap_k(t)|.

    For the default |0> environment start the per-qubit factor is
    |cos(2 g_k t)|.
    """
    if psi.dim != 2:
        raise ValueError("coherence decay is defined for a qubit system")
    a0, a1 = psi.amplitudes
    factor = abs(a0 * np.conj(a1))
    for g in env.couplings:
        factor *= abs(_qubit_overlap(g, t, env.initial.amplitudes))
    return float(factor)


def _apply_pair_unitary(tensor: np.ndarray, u4: np.ndarray, site: int) -> np.ndarray:
    """Apply a two-site unitary to (system axis 0, environment axis site+1)."""
    nsites = tensor.ndim
    moved = np.moveaxis(tensor, (0, site + 1), (0, 1))
    shape = moved.shape
    flat = moved.reshape(4, -1)
    flat = u4 @ flat
    moved = flat.reshape(shape)
    return np.moveaxis(moved, (0, 1), (0, site + 1))


def exact_coherence(psi: StateVector, env: EnvironmentModel, t: float) -> float:
    """Reduced coherence from exact full-state evolution.

    Evolves the (k+1)-qubit state under the branch-conditioned coupling
    sum_k g_k sigma_z x sigma_x(k) for time t (the terms commute, so the
    evolution factorizes into two-site gates built by
    :func:`symbreak.symmetry.exponentiate`), then traces out the
    environment. Capped at k <= 12 qubits.
    """
    if psi.dim != 2:
        raise ValueError("coherence decay is defined for a qubit system")
    k = env.k
    if k > EXACT_ENV_LIMIT:
        raise ValueError(f"exact evolution supports at most {EXACT_ENV_LIMIT} environment qubits")
    state = psi.amplitudes.reshape(2, *(1,) * k).astype(np.complex128)
    full = state
    for _ in range(k):
        full = np.multiply.outer(full, env.initial.amplitudes)
    full = full.reshape((2,) * (k + 1))
    for site, g in enumerate(env.couplings):
        h_pair = HermitianOperator(np.kron(_SIGMA_Z, g * _SIGMA_X))
        u4 = exponentiate(h_pair, t).matrix
        full = _apply_pair_unitary(full, u4, site)
    branch0 = full[0].ravel()
    branch1 = full[1].ravel()
    return float(abs(np.vdot(branch1, branch0)))


def decoherence_factor(
    psi: StateVector, env: EnvironmentModel, t: float, method: str = "exact"
) -> DecoherencePoint:
    """One point of the coherence-decay curve.

    ``method="exact"`` runs the full-state evolution (k <= 12) and
    reports the closed form alongside; ``method="analytic"`` evaluates
    only the closed form and works for any k.
    """
    analytic = analytic_coherence(psi, env, t)
    if method == "analytic":
        return DecoherencePoint(time=float(t), coherence=analytic, analytic=analytic)
    if method != "exact":
        raise ValueError(f"unknown method {method!r}")
    return DecoherencePoint(
        time=float(t), coherence=exact_coherence(psi, env, t), analytic=analytic
    )


def decoherence_trace(
    psi: StateVector, env: EnvironmentModel, times, method: str = "exact"
) -> DecoherenceTrace:
    """Coherence decay over a grid of times."""
    points = [decoherence_factor(psi, env, t, method=method) for t in times]
    return DecoherenceTrace(
        times=tuple(p.time for p in points),
        coherence=tuple(p.coherence for p in points),
        analytic=tuple(p.analytic for p in points),
        k_used=env.k,
    )

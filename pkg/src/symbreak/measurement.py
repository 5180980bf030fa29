"""Projective measurement as degeneracy breaking.

Probabilities come from eigenspace projections of the measured
observable; sampling collapses the state onto the selected eigenspace
(degenerate outcomes keep the full eigenspace, so whatever symmetry the
outcome did not resolve survives). Repeating a measurement on the
collapsed state reproduces the outcome with probability 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rng import TrialRng
from .states import StateVector
from .symmetry import HermitianOperator, UnitaryOperator, degenerate_eigenspaces

PROBABILITY_FLOOR = 1e-15
PROJECTION_RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class MeasurementRecord:
    """What one measurement did: spectrum, weights, sampled branch, collapse."""

    observable_label: str
    eigenvalues: tuple[float, ...]
    probabilities: tuple[float, ...]
    outcome_index: int
    pre_state: StateVector
    post_state: StateVector
    seed: int

    @property
    def outcome(self) -> float:
        return self.eigenvalues[self.outcome_index]

    def to_json_dict(self) -> dict:
        return {
            "observable_label": self.observable_label,
            "eigenvalues": [float(v) for v in self.eigenvalues],
            "probabilities": [float(p) for p in self.probabilities],
            "outcome_index": self.outcome_index,
            "pre_state": self.pre_state.to_json_dict(),
            "post_state": self.post_state.to_json_dict(),
            "seed": self.seed,
        }


def clamp_probabilities(raw: np.ndarray) -> np.ndarray:
    """Zero out floating-point dust (< 1e-15) and renormalize."""
    probs = np.where(raw < PROBABILITY_FLOOR, 0.0, raw)
    total = float(probs.sum())
    if total <= 0.0:
        raise ValueError("all outcome probabilities vanished")
    return probs / total


def _grouped_spectrum(psi: StateVector, a: HermitianOperator):
    """Degenerate-grouped eigenvalues, clamped weights, and eigenvector groups."""
    if psi.dim != a.dim:
        raise ValueError(f"dimension mismatch: state {psi.dim} vs observable {a.dim}")
    values, vectors = a.eigensystem()
    overlaps = vectors.conj().T @ psi.amplitudes
    weights = np.abs(overlaps) ** 2
    groups = degenerate_eigenspaces(values)
    eigenvalues = np.array([rep for rep, _ in groups])
    raw = np.array([float(weights[idx].sum()) for _, idx in groups])
    return eigenvalues, clamp_probabilities(raw), [idx for _, idx in groups], vectors


def born_probabilities(psi: StateVector, a: HermitianOperator) -> dict[float, float]:
    """Probability of each (degenerate-grouped) eigenvalue, ascending."""
    eigenvalues, probs, _, _ = _grouped_spectrum(psi, a)
    return {float(v): float(p) for v, p in zip(eigenvalues, probs)}


def measure(psi: StateVector, a: HermitianOperator, rng: TrialRng) -> MeasurementRecord:
    """Sample one outcome and collapse onto its eigenspace.

    The outcome is drawn by inverse CDF over eigenvalues in ascending
    order with half-open cumulative intervals, so zero-probability
    branches are never selected. The post state is the normalized
    eigenspace projection of ``psi`` (degenerate eigenspaces are kept
    whole, not resolved).
    """
    eigenvalues, probs, groups, vectors = _grouped_spectrum(psi, a)
    cum = np.cumsum(probs)
    cum[-1] = 1.0
    u = rng.uniform()
    outcome = int(np.searchsorted(cum, u, side="right"))
    outcome = min(outcome, len(probs) - 1)
    idx = groups[outcome]
    block = vectors[:, idx]
    projected = block @ (block.conj().T @ psi.amplitudes)
    norm = float(np.linalg.norm(projected))
    post = StateVector(projected / norm)
    return MeasurementRecord(
        observable_label=a.label,
        eigenvalues=tuple(float(v) for v in eigenvalues),
        probabilities=tuple(float(p) for p in probs),
        outcome_index=outcome,
        pre_state=psi,
        post_state=post,
        seed=rng.seed,
    )


def repeat_measure(record: MeasurementRecord, a: HermitianOperator) -> MeasurementRecord:
    """Measure the collapsed state again with the same observable.

    The same eigenvalue comes back with probability 1, so no random
    stream is needed; a throwaway stream seeded from the record is used
    to drive the (deterministic) sampling path.
    """
    if a.label != record.observable_label:
        raise ValueError(
            f"observable {a.label!r} does not match record {record.observable_label!r}"
        )
    return measure(record.post_state, a, TrialRng(record.seed))


def apply_symmetry(psi: StateVector, u: UnitaryOperator) -> StateVector:
    """Transform a state by a symmetry group element."""
    if psi.dim != u.dim:
        raise ValueError(f"dimension mismatch: state {psi.dim} vs unitary {u.dim}")
    transformed = u.matrix @ psi.amplitudes
    return StateVector(transformed / np.linalg.norm(transformed))


def conjugate_observable(a: HermitianOperator, u: UnitaryOperator) -> HermitianOperator:
    """Transform an observable by a symmetry group element: U A U^dagger."""
    if a.dim != u.dim:
        raise ValueError(f"dimension mismatch: observable {a.dim} vs unitary {u.dim}")
    m = u.matrix @ a.matrix @ u.matrix.conj().T
    return HermitianOperator((m + m.conj().T) / 2, label=a.label)

"""Why squared amplitudes: scanning power-law probability candidates.

Any multiplicative probability assignment on amplitudes must be a power
law f(x) = x^beta. Normalization then pins the exponent: on any state
with more than one nonzero amplitude, sum_i |a_i|^(2 beta) = 1 only at
beta = 1. This module measures those violations on state corpora and
validates the surviving rule against sampled frequencies.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .measurement import born_probabilities
from .rng import TrialRng
from .states import StateVector, random_state
from .symmetry import HermitianOperator

DEFAULT_BETA_GRID = (0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0)
NORMALIZATION_PASS_TOL = 1e-9
_STREAM_OUTCOMES = 7


@dataclass(frozen=True)
class PowerLawCandidate:
    """Candidate probability map f(x) = x^beta on squared amplitudes."""

    beta: float

    def __post_init__(self):
        if self.beta <= 0:
            raise ValueError(f"exponent must be positive, got {self.beta}")

    def __call__(self, x):
        return np.power(x, self.beta)


@dataclass(frozen=True)
class ExponentScanReport:
    """Per-exponent normalization and multiplicativity violations."""

    betas: tuple[float, ...]
    max_normalization_violation: tuple[float, ...]
    multiplicativity_violation: tuple[float, ...]
    passing: tuple[float, ...]
    degenerate_corpus: bool

    def to_json_dict(self) -> dict:
        return {
            "betas": list(self.betas),
            "max_normalization_violation": list(self.max_normalization_violation),
            "multiplicativity_violation": list(self.multiplicativity_violation),
            "passing": list(self.passing),
            "degenerate_corpus": self.degenerate_corpus,
        }


def candidate_total(psi: StateVector, f: PowerLawCandidate) -> float:
    """sum_i f(|a_i|^2); equals 1 exactly when f is the identity."""
    return float(np.sum(f(np.abs(psi.amplitudes) ** 2)))


def multiplicativity_violation(f, samples) -> float:
    """max |f(x) f(y) - f(x y)| over sample pairs in (0, 1]^2.

    Power laws satisfy the identity to rounding; passing an arbitrary
    callable probes how badly a non-power-law breaks it.
    """
    pairs = np.asarray(list(samples), dtype=np.float64)
    if pairs.size == 0:
        raise ValueError("need at least one (x, y) sample")
    pairs = pairs.reshape(-1, 2)
    if np.any(pairs <= 0):
        raise ValueError("samples must be positive")
    x, y = pairs[:, 0], pairs[:, 1]
    return float(np.max(np.abs(np.asarray(f(x)) * np.asarray(f(y)) - np.asarray(f(x * y)))))


def _has_split_weight(psi: StateVector) -> bool:
    weights = np.sort(np.abs(psi.amplitudes) ** 2)[::-1]
    return len(weights) > 1 and weights[1] > 1e-12


def exponent_scan(states, betas=DEFAULT_BETA_GRID) -> ExponentScanReport:
    """Find which exponents keep candidate totals at 1 across a corpus.

    An exponent passes when its worst normalization violation over all
    states is <= 1e-9. A corpus of basis states only cannot discriminate
    (every exponent passes); the report flags that case.
    """
    states = list(states)
    betas = [float(b) for b in betas]
    if not states or not betas:
        raise ValueError("need at least one state and one exponent")
    degenerate = not any(_has_split_weight(psi) for psi in states)
    max_violation = []
    mult_violation = []
    probe = np.linspace(0.05, 0.95, 10)
    probe_pairs = [(x, y) for x in probe for y in probe]
    for beta in betas:
        f = PowerLawCandidate(beta)
        max_violation.append(max(abs(candidate_total(psi, f) - 1.0) for psi in states))
        mult_violation.append(multiplicativity_violation(f, probe_pairs))
    passing = tuple(
        b for b, v in zip(betas, max_violation) if v <= NORMALIZATION_PASS_TOL
    )
    return ExponentScanReport(
        betas=tuple(betas),
        max_normalization_violation=tuple(max_violation),
        multiplicativity_violation=tuple(mult_violation),
        passing=passing,
        degenerate_corpus=degenerate,
    )


def composite_consistency_check(a: StateVector, b: StateVector, f: PowerLawCandidate) -> float:
    """Independent preparations vs the joint state they form.

    The weight of the (i, j) branch of the symmetrized pair state is
    f(|a_i b_j|^2); independence says it must equal f(|a_i|^2) f(|b_j|^2).
    Returns the worst absolute mismatch over index pairs (zero for every
    power law, which is what forces the power-law form in the first
    place).
    """
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    wa = np.abs(a.amplitudes) ** 2
    wb = np.abs(b.amplitudes) ** 2
    joint = f(np.outer(wa, wb))
    product = np.outer(f(wa), f(wb))
    return float(np.max(np.abs(joint - product)))


def empirical_born_test(
    psi: StateVector, a: HermitianOperator, trials: int, seed: int
):
    """Sampled outcome frequencies against squared-amplitude weights.

    Runs ``trials`` independent measurements (vectorized over one
    derived stream), returning the frequency of each eigenvalue and the
    chi-square statistic against the predicted weights.
    """
    if trials < 10_000:
        raise ValueError(f"need at least 10^4 trials for a stable test, got {trials}")
    probs = born_probabilities(psi, a)
    eigenvalues = np.array(list(probs.keys()))
    p = np.array(list(probs.values()))
    cum = np.cumsum(p)
    cum[-1] = 1.0
    u = TrialRng(seed, _STREAM_OUTCOMES).uniforms(trials)
    outcomes = np.searchsorted(cum, u, side="right")
    counts = np.bincount(outcomes, minlength=len(p))
    freqs = counts / trials
    live = p > 0
    chi_square = float(np.sum((counts[live] - trials * p[live]) ** 2 / (trials * p[live])))
    frequencies = {float(v): float(fr) for v, fr in zip(eigenvalues, freqs)}
    return frequencies, chi_square


def random_state_corpus(count: int, seed: int, dims=(2, 3, 4, 5, 6)) -> list[StateVector]:
    """Rotation-invariant random states cycling through the given dims."""
    rng = TrialRng(seed)
    states = []
    for i in range(count):
        states.append(random_state(dims[i % len(dims)], rng.derive(i + 1)))
    return states

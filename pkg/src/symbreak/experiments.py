"""Canned experiments: polarizer chains, entangled pairs, repeated checks.

Each runner is a pure function of its parameters and a master seed, and
returns a ResultRecord whose summary is byte-stable under JSON
serialization. Heavy trial loops are vectorized over named substreams
derived from the master seed, so a rerun with the same configuration
reproduces every number exactly.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .decoherence import EnvironmentModel, decoherence_trace
from .measurement import (
    born_probabilities,
    clamp_probabilities,
    conjugate_observable,
    measure,
    repeat_measure,
)
from .rng import TrialRng
from .states import StateVector, from_amplitudes
from .symmetry import HermitianOperator, exponentiate, spin_representation

# substream indices (one per purpose, never reused within a run)
_STREAM_SETTINGS_A = 11
_STREAM_SETTINGS_B = 12
_STREAM_OUTCOMES = 13
_STREAM_STEPS = 14

EXPERIMENT_NAMES = (
    "stern-gerlach",
    "epr",
    "two-particle",
    "zeno",
    "decoherence",
)


@dataclass(frozen=True)
class ExperimentConfig:
    """A named experiment plus the knobs it runs with (angles in radians)."""

    experiment: str
    trials: int
    seed: int
    parameters: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.experiment not in EXPERIMENT_NAMES:
            raise ValueError(
                f"unknown experiment {self.experiment!r}; expected one of {EXPERIMENT_NAMES}"
            )
        if int(self.trials) < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")

    def to_json_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "trials": self.trials,
            "seed": self.seed,
            "parameters": dict(self.parameters),
        }


@dataclass(frozen=True)
class ResultRecord:
    """Outcome of one experiment run.

    ``summary`` holds only deterministic numbers; ``wall_time`` is
    reported separately so serialized summaries stay byte-identical
    across reruns.
    """

    experiment: str
    config: dict
    summary: dict
    per_trial_rows: list | None
    per_trial_header: tuple[str, ...] | None
    wall_time: float

    def summary_payload(self) -> dict:
        return {
            "experiment": self.experiment,
            "config": self.config,
            "summary": self.summary,
        }


def _spin_half_observables():
    rep = spin_representation(0.5)
    jy = HermitianOperator(rep.generators[1], label="J_y")
    jz = HermitianOperator(rep.generators[2], label="J_z")
    return jy, jz


def spin_axis_observable(angle: float) -> HermitianOperator:
    """Spin-1/2 projection along an axis tilted from z in the z-x plane.

    Built as the conjugate of J_z by the rotation exp(-i angle J_y).
    """
    jy, jz = _spin_half_observables()
    rotation = exponentiate(jy, angle)
    return conjugate_observable(jz, rotation)


def run_sequential_stern_gerlach(
    first_axis_keep: str,
    second_axis_angle: float,
    trials: int,
    seed: int,
) -> ResultRecord:
    """Polarize along z, keep one branch, then measure along a tilted axis.

    The kept branch is re-measured along the second axis; outcome
    frequencies are reported against the exact branch weights.

    Summary keys: frequency_plus, frequency_minus, analytic_plus,
    eigenvalues, trials.
    """
    start = time.perf_counter()
    if first_axis_keep not in ("+", "-"):
        raise ValueError(f"first_axis_keep must be '+' or '-', got {first_axis_keep!r}")
    trials = int(trials)
    psi = StateVector.basis(2, 0 if first_axis_keep == "+" else 1)
    observable = spin_axis_observable(float(second_axis_angle))
    probs = born_probabilities(psi, observable)
    eigenvalues = np.array(list(probs.keys()))
    p = np.array(list(probs.values()))
    cum = np.cumsum(p)
    cum[-1] = 1.0
    u = TrialRng(seed, _STREAM_OUTCOMES).uniforms(trials)
    outcomes = np.searchsorted(cum, u, side="right")
    counts = np.bincount(outcomes, minlength=len(p))
    plus_index = int(np.argmax(eigenvalues))
    analytic_plus = float(np.cos(second_axis_angle / 2.0) ** 2)
    if first_axis_keep == "-":
        analytic_plus = 1.0 - analytic_plus
    summary = {
        "frequency_plus": counts[plus_index] / trials,
        "frequency_minus": counts[1 - plus_index] / trials,
        "analytic_plus": analytic_plus,
        "eigenvalues": [float(v) for v in eigenvalues],
        "trials": trials,
    }
    config = {
        "experiment": "stern-gerlach",
        "first_axis_keep": first_axis_keep,
        "second_axis_angle": float(second_axis_angle),
        "trials": trials,
        "seed": seed,
    }
    rows = [(i, float(eigenvalues[o])) for i, o in enumerate(outcomes)]
    return ResultRecord(
        experiment="stern-gerlach",
        config=config,
        summary=summary,
        per_trial_rows=rows,
        per_trial_header=("trial", "outcome"),
        wall_time=time.perf_counter() - start,
    )


def _singlet() -> StateVector:
    return from_amplitudes([0.0, 1.0, -1.0, 0.0])


def _pair_joint_probabilities(angle_a: float, angle_b: float):
    """Joint (sign_a, sign_b) outcome weights for the singlet pair.

    Signs are ordered (--, -+, +-, ++); weights are the squared
    amplitudes of the product eigenbasis, which is exactly what
    measuring the two commuting spin projections in sequence samples.
    """
    singlet = _singlet()
    _, vectors_a = spin_axis_observable(angle_a).eigensystem()
    _, vectors_b = spin_axis_observable(angle_b).eigensystem()
    # eigensystem returns ascending eigenvalues: column 0 is the minus axis
    basis = np.kron(vectors_a, vectors_b)
    amplitudes = basis.conj().T @ singlet.amplitudes
    return clamp_probabilities(np.abs(amplitudes) ** 2)


def run_epr(
    alice_angles: tuple[float, float],
    bob_angles: tuple[float, float],
    trials: int,
    seed: int,
) -> ResultRecord:
    """Singlet-pair correlations with randomly chosen analyzer settings.

    Each trial picks one of Alice's and one of Bob's two axes at random
    and samples both spin projections from the joint branch weights.
    Reports E(x, y) per setting pair, the CHSH combination
    S = E(a,b) - E(a,b') + E(a',b) + E(a',b'), and station marginals.

    Summary keys: S, abs_S, analytic_S, E_xy and analytic_E_xy for each
    setting pair xy in {00, 01, 10, 11}, alice_plus_xy / bob_plus_xy
    marginal frequencies, trials_xy per-pair counts, trials.
    """
    start = time.perf_counter()
    trials = int(trials)
    a_axes = tuple(float(x) for x in alice_angles)
    b_axes = tuple(float(x) for x in bob_angles)
    if len(a_axes) != 2 or len(b_axes) != 2:
        raise ValueError("need exactly two analyzer angles per station")
    rng = TrialRng(seed)
    pick_a = (rng.derive(_STREAM_SETTINGS_A).uniforms(trials) < 0.5).astype(np.int64)
    pick_b = (rng.derive(_STREAM_SETTINGS_B).uniforms(trials) < 0.5).astype(np.int64)
    u = rng.derive(_STREAM_OUTCOMES).uniforms(trials)

    signs = np.array([(-1, -1), (-1, 1), (1, -1), (1, 1)])
    correlations = {}
    marginals = {}
    counts_by_pair = {}
    sum_s = 0.0
    for ia in (0, 1):
        for ib in (0, 1):
            mask = (pick_a == ia) & (pick_b == ib)
            n_pair = int(mask.sum())
            joint = _pair_joint_probabilities(a_axes[ia], b_axes[ib])
            cum = np.cumsum(joint)
            cum[-1] = 1.0
            outcome = np.searchsorted(cum, u[mask], side="right")
            sa = signs[outcome, 0]
            sb = signs[outcome, 1]
            e_value = float(np.mean(sa * sb)) if n_pair else 0.0
            correlations[f"E_{ia}{ib}"] = e_value
            marginals[f"alice_plus_{ia}{ib}"] = float(np.mean(sa == 1)) if n_pair else 0.0
            marginals[f"bob_plus_{ia}{ib}"] = float(np.mean(sb == 1)) if n_pair else 0.0
            counts_by_pair[f"trials_{ia}{ib}"] = n_pair
    s_value = (
        correlations["E_00"] - correlations["E_01"] + correlations["E_10"] + correlations["E_11"]
    )
    analytic = {
        f"analytic_E_{ia}{ib}": -float(np.cos(a_axes[ia] - b_axes[ib]))
        for ia in (0, 1)
        for ib in (0, 1)
    }
    analytic_s = (
        analytic["analytic_E_00"]
        - analytic["analytic_E_01"]
        + analytic["analytic_E_10"]
        + analytic["analytic_E_11"]
    )
    summary = {
        "S": s_value,
        "abs_S": abs(s_value),
        "analytic_S": analytic_s,
        **correlations,
        **analytic,
        **marginals,
        **counts_by_pair,
        "trials": trials,
    }
    config = {
        "experiment": "epr",
        "alice_angles": list(a_axes),
        "bob_angles": list(b_axes),
        "trials": trials,
        "seed": seed,
    }
    return ResultRecord(
        experiment="epr",
        config=config,
        summary=summary,
        per_trial_rows=None,
        per_trial_header=None,
        wall_time=time.perf_counter() - start,
    )


def run_two_particle_universe(
    initial_relative_phase: float,
    seed: int,
    repeats: int = 100,
) -> ResultRecord:
    """A universe of two subsystems whose only observable is comparison.

    The observer's apparatus is the projector onto its own state, so the
    measured question is "same or opposite". The partner state sits at
    the given angle on the Bloch sphere relative to the observer. After
    the first answer the comparison observable has a definite value, and
    every repeat returns it unchanged: the two-subsystem universe looks
    classical from then on.

    Summary keys: first_outcome, first_eigenvalue, probability_same,
    repeats, all_repeats_identical, classical_after_first,
    single_copy_note.
    """
    start = time.perf_counter()
    phase = float(initial_relative_phase)
    partner = from_amplitudes([np.cos(phase / 2.0), np.sin(phase / 2.0)])
    same_projector = HermitianOperator(
        np.outer([1.0, 0.0], [1.0, 0.0]), label="same-as-observer"
    )
    rng = TrialRng(seed)
    first = measure(partner, same_projector, rng)
    repeat_outcomes = []
    record = first
    for _ in range(int(repeats)):
        record = repeat_measure(record, same_projector)
        repeat_outcomes.append(record.outcome)
    all_same = all(o == first.outcome for o in repeat_outcomes)
    summary = {
        "first_outcome": "same" if first.outcome == 1.0 else "opposite",
        "first_eigenvalue": first.outcome,
        "probability_same": born_probabilities(partner, same_projector).get(1.0, 0.0),
        "repeats": int(repeats),
        "all_repeats_identical": bool(all_same),
        "classical_after_first": True,
        "single_copy_note": "frequencies require an ensemble of identically prepared universes",
    }
    config = {
        "experiment": "two-particle",
        "initial_relative_phase": phase,
        "repeats": int(repeats),
        "seed": seed,
    }
    rows = [(0, first.outcome)] + [(i + 1, o) for i, o in enumerate(repeat_outcomes)]
    return ResultRecord(
        experiment="two-particle",
        config=config,
        summary=summary,
        per_trial_rows=rows,
        per_trial_header=("measurement", "eigenvalue"),
        wall_time=time.perf_counter() - start,
    )


def zeno_survival_analytic(n_checks: int, total_rotation: float) -> float:
    """Probability that every one of n checks lands on the starting branch."""
    step = total_rotation / (2.0 * n_checks)
    return float(np.cos(step) ** (2 * n_checks))


def run_zeno(
    n_checks: int,
    total_rotation: float,
    trials: int,
    seed: int,
) -> ResultRecord:
    """Rotate in n small steps, checking the polarization after each step.

    Between checks the state is an exact z eigenstate, so the full chain
    is a two-state Markov walk with transition weight cos^2(step/2) to
    stay; survival counts trials whose every check returned the starting
    branch. Step probabilities below the sampling floor are treated as
    zero, matching single-measurement semantics.

    Summary keys: survival, analytic_survival, final_up_fraction,
    n_checks, total_rotation, trials.
    """
    start = time.perf_counter()
    n_checks = int(n_checks)
    trials = int(trials)
    if n_checks < 1:
        raise ValueError(f"need at least one check, got {n_checks}")
    step = float(total_rotation) / n_checks
    p_stay = float(np.cos(step / 2.0) ** 2)
    p_flip_back = 1.0 - p_stay
    p_stay, p_flip_back = clamp_probabilities(np.array([p_stay, p_flip_back]))

    u = TrialRng(seed, _STREAM_STEPS).uniforms((n_checks, trials))
    state = np.zeros(trials, dtype=np.int8)  # 0 = up branch
    never_left = np.ones(trials, dtype=bool)
    for k in range(n_checks):
        stay = u[k] < np.where(state == 0, p_stay, p_flip_back)
        # staying keeps the branch; otherwise the check lands on the other one
        state = np.where(stay, state, 1 - state)
        never_left &= state == 0
    survival = float(np.mean(never_left))
    summary = {
        "survival": survival,
        "analytic_survival": zeno_survival_analytic(n_checks, total_rotation),
        "final_up_fraction": float(np.mean(state == 0)),
        "n_checks": n_checks,
        "total_rotation": float(total_rotation),
        "trials": trials,
    }
    config = {
        "experiment": "zeno",
        "n_checks": n_checks,
        "total_rotation": float(total_rotation),
        "trials": trials,
        "seed": seed,
    }
    return ResultRecord(
        experiment="zeno",
        config=config,
        summary=summary,
        per_trial_rows=None,
        per_trial_header=None,
        wall_time=time.perf_counter() - start,
    )


def run_decoherence_demo(
    couplings,
    times,
    amplitudes=(np.sqrt(0.5), np.sqrt(0.5)),
    method: str = "exact",
) -> ResultRecord:
    """Coherence decay of a qubit against its environment register.

    Produces the full (time, coherence, prediction) trace plus summary
    bounds. Coherence is suppressed but generically never reaches zero:
    the closed-form product bound is evaluated at run time.

    Summary keys: k, initial_coherence, min_coherence, max_coherence,
    max_abs_error_vs_analytic, n_times, method.
    """
    start = time.perf_counter()
    psi = from_amplitudes(list(amplitudes))
    env = EnvironmentModel(couplings=tuple(float(g) for g in couplings))
    trace = decoherence_trace(psi, env, [float(t) for t in times], method=method)
    initial = abs(psi.amplitudes[0] * np.conj(psi.amplitudes[1]))
    max_error = max(
        (abs(c - a) for c, a in zip(trace.coherence, trace.analytic)), default=0.0
    )
    summary = {
        "k": env.k,
        "initial_coherence": float(initial),
        "min_coherence": min(trace.coherence) if trace.coherence else float(initial),
        "max_coherence": max(trace.coherence) if trace.coherence else float(initial),
        "max_abs_error_vs_analytic": float(max_error),
        "n_times": len(trace.times),
        "method": method,
    }
    config = {
        "experiment": "decoherence",
        "couplings": [float(g) for g in couplings],
        "times": [float(t) for t in times],
        "amplitudes": [float(abs(a)) for a in psi.amplitudes],
        "method": method,
    }
    rows = [(t, c, a) for t, c, a in trace.rows()]
    return ResultRecord(
        experiment="decoherence",
        config=config,
        summary=summary,
        per_trial_rows=rows,
        per_trial_header=("time", "coherence", "analytic"),
        wall_time=time.perf_counter() - start,
    )


def run_experiment(config: ExperimentConfig) -> ResultRecord:
    """Dispatch a named experiment with defaults for missing parameters."""
    p = dict(config.parameters)
    name = config.experiment
    if name == "stern-gerlach":
        return run_sequential_stern_gerlach(
            first_axis_keep=p.get("first_axis_keep", "+"),
            second_axis_angle=p.get("second_axis_angle", np.pi / 2),
            trials=config.trials,
            seed=config.seed,
        )
    if name == "epr":
        return run_epr(
            alice_angles=tuple(p.get("alice_angles", (0.0, np.pi / 2))),
            bob_angles=tuple(p.get("bob_angles", (np.pi / 4, 3 * np.pi / 4))),
            trials=config.trials,
            seed=config.seed,
        )
    if name == "two-particle":
        return run_two_particle_universe(
            initial_relative_phase=p.get("initial_relative_phase", np.pi / 3),
            seed=config.seed,
            repeats=int(p.get("repeats", 100)),
        )
    if name == "zeno":
        return run_zeno(
            n_checks=int(p.get("n_checks", 16)),
            total_rotation=p.get("total_rotation", np.pi),
            trials=config.trials,
            seed=config.seed,
        )
    if name == "decoherence":
        return run_decoherence_demo(
            couplings=p.get("couplings", (0.17, 0.39, 0.61, 0.83)),
            times=p.get("times", [0.25 * i for i in range(41)]),
            amplitudes=p.get("amplitudes", (np.sqrt(0.5), np.sqrt(0.5))),
            method=p.get("method", "exact"),
        )
    raise ValueError(f"unknown experiment {name!r}")

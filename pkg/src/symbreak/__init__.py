"""Quantum measurement as symmetry breaking, on a desk-scale simulator.

State spaces are finite unitary group representations; measurement
breaks the degeneracy of a state over an observable's eigenspaces;
decoherence is entanglement with apparatus and environment registers;
pointer locking is an Ising phase transition; and the squared-amplitude
probability rule is singled out numerically among power-law candidates.
"""

from .born import (
    ExponentScanReport,
    PowerLawCandidate,
    candidate_total,
    composite_consistency_check,
    empirical_born_test,
    exponent_scan,
    multiplicativity_violation,
    random_state_corpus,
)
from .decoherence import (
    DecoherencePoint,
    DecoherenceTrace,
    EnvironmentModel,
    analytic_coherence,
    chain_entangle,
    decoherence_factor,
    decoherence_trace,
    entangle_with_apparatus,
    exact_coherence,
)
from .experiments import (
    ExperimentConfig,
    ResultRecord,
    run_decoherence_demo,
    run_epr,
    run_experiment,
    run_sequential_stern_gerlach,
    run_two_particle_universe,
    run_zeno,
    spin_axis_observable,
)
from .gibbs import (
    ExactGibbsSummary,
    GibbsConfig,
    GibbsTrajectory,
    PhaseReport,
    SweepPoint,
    SweepReport,
    detect_symmetry_breaking,
    exact_gibbs_enumeration,
    gibbs_sample,
    order_parameter_sweep,
)
from .measurement import (
    MeasurementRecord,
    apply_symmetry,
    born_probabilities,
    conjugate_observable,
    measure,
    repeat_measure,
)
from .rng import TrialRng, derive_seed
from .states import (
    CompositeState,
    DensityOperator,
    StateVector,
    expectation,
    from_amplitudes,
    is_separable_pure,
    partial_trace,
    purity,
    random_state,
    reduced_density,
    schmidt_coefficients,
    symmetrized_composite,
    tensor_state,
)
from .symmetry import (
    GroupDescriptor,
    HermitianOperator,
    Representation,
    UnitaryOperator,
    commutator,
    cyclic_representation,
    degenerate_eigenspaces,
    eigensystem,
    exponentiate,
    shift_unitary,
    spin_representation,
    tensor_product,
    z2_representation,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]

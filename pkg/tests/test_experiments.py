import numpy as np
import pytest

from symbreak.experiments import (
    ExperimentConfig,
    run_decoherence_demo,
    run_epr,
    run_experiment,
    run_sequential_stern_gerlach,
    run_two_particle_universe,
    run_zeno,
    spin_axis_observable,
    zeno_survival_analytic,
)
from symbreak.measurement import born_probabilities
from symbreak.states import StateVector


def three_sigma(p, n):
    return 3 * np.sqrt(p * (1 - p) / n)


class TestSternGerlach:
    def test_transverse_axis_splits_evenly(self):
        record = run_sequential_stern_gerlach("+", np.pi / 2, 100_000, seed=41)
        assert abs(record.summary["frequency_plus"] - 0.5) <= 0.005
        assert abs(record.summary["frequency_minus"] - 0.5) <= 0.005

    def test_same_axis_is_deterministic(self):
        record = run_sequential_stern_gerlach("+", 0.0, 10_000, seed=42)
        assert record.summary["frequency_plus"] == 1.0

    @pytest.mark.parametrize("angle", [0.4, 1.1, 2.0])
    def test_tilted_axis_follows_half_angle_law(self, angle):
        trials = 100_000
        record = run_sequential_stern_gerlach("+", angle, trials, seed=43)
        expected = np.cos(angle / 2) ** 2
        assert abs(record.summary["frequency_plus"] - expected) <= three_sigma(expected, trials)
        assert record.summary["analytic_plus"] == pytest.approx(expected, abs=1e-12)

    def test_keeping_minus_branch_flips_the_law(self):
        trials = 100_000
        record = run_sequential_stern_gerlach("-", 0.8, trials, seed=44)
        expected = 1 - np.cos(0.8 / 2) ** 2
        assert abs(record.summary["frequency_plus"] - expected) <= three_sigma(expected, trials)

    def test_observable_is_rotated_z(self):
        observable = spin_axis_observable(np.pi / 2)
        probs = born_probabilities(StateVector.basis(2, 0), observable)
        assert all(abs(p - 0.5) <= 1e-10 for p in probs.values())

    def test_invalid_branch_label(self):
        with pytest.raises(ValueError):
            run_sequential_stern_gerlach("up", 0.0, 100, seed=1)


class TestEpr:
    def test_same_axis_anticorrelation_every_trial(self):
        record = run_epr((0.0, 1.0), (0.0, 1.0), 100_000, seed=47)
        assert record.summary["E_00"] == -1.0
        assert record.summary["E_11"] == -1.0

    def test_optimal_angles_reach_tsirelson(self):
        record = run_epr(
            (0.0, np.pi / 2), (np.pi / 4, 3 * np.pi / 4), 1_000_000, seed=53
        )
        assert abs(record.summary["abs_S"] - 2 * np.sqrt(2)) <= 0.01
        assert record.summary["analytic_S"] == pytest.approx(-2 * np.sqrt(2), abs=1e-12)

    def test_classical_bound_violated_significantly(self):
        trials = 1_000_000
        record = run_epr((0.0, np.pi / 2), (np.pi / 4, 3 * np.pi / 4), trials, seed=59)
        # each setting pair sees ~trials/4 samples; var(E) <= (1-E^2)
        per_pair = trials / 4
        s_error = np.sqrt(sum((1 - record.summary[f"E_{a}{b}"] ** 2) / per_pair for a in (0, 1) for b in (0, 1)))
        assert record.summary["abs_S"] - 2.0 >= 5 * s_error

    def test_never_beats_tsirelson_by_more_than_noise(self):
        trials = 200_000
        record = run_epr((0.0, np.pi / 2), (np.pi / 4, 3 * np.pi / 4), trials, seed=61)
        per_pair = trials / 4
        s_error = np.sqrt(sum((1 - record.summary[f"E_{a}{b}"] ** 2) / per_pair for a in (0, 1) for b in (0, 1)))
        assert record.summary["abs_S"] <= 2 * np.sqrt(2) + 5 * s_error

    def test_no_signaling_marginals(self):
        trials = 400_000
        record = run_epr((0.2, 1.3), (0.7, 2.1), trials, seed=67)
        for station in ("alice", "bob"):
            for ia in (0, 1):
                for ib in (0, 1):
                    marginal = record.summary[f"{station}_plus_{ia}{ib}"]
                    n_pair = record.summary[f"trials_{ia}{ib}"]
                    assert abs(marginal - 0.5) <= three_sigma(0.5, n_pair)

    def test_needs_two_angles_per_station(self):
        with pytest.raises(ValueError):
            run_epr((0.0,), (0.0, 1.0), 100, seed=1)


class TestTwoParticleUniverse:
    def test_identical_preparations_always_compare_same(self):
        record = run_two_particle_universe(0.0, seed=71)
        assert record.summary["first_outcome"] == "same"
        assert record.summary["probability_same"] == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal_preparations_always_compare_opposite(self):
        record = run_two_particle_universe(np.pi, seed=73)
        assert record.summary["first_outcome"] == "opposite"
        assert record.summary["probability_same"] == pytest.approx(0.0, abs=1e-10)

    def test_generic_angle_locks_after_first_measurement(self):
        record = run_two_particle_universe(1.1, seed=79, repeats=100)
        assert record.summary["all_repeats_identical"]
        assert record.summary["classical_after_first"]
        assert record.summary["repeats"] == 100
        # every recorded repeat matches the first outcome
        rows = record.per_trial_rows
        first = rows[0][1]
        assert all(value == first for _, value in rows)

    def test_single_copy_caveat_is_reported(self):
        record = run_two_particle_universe(0.5, seed=83)
        assert "ensemble" in record.summary["single_copy_note"]


class TestZeno:
    def test_single_full_rotation_never_survives(self):
        record = run_zeno(1, np.pi, 10_000, seed=89)
        assert record.summary["survival"] == 0.0
        assert record.summary["analytic_survival"] == pytest.approx(0.0, abs=1e-12)

    def test_no_rotation_always_survives(self):
        record = run_zeno(1, 0.0, 10_000, seed=97)
        assert record.summary["survival"] == 1.0

    @pytest.mark.parametrize("n_checks", [1, 4, 16, 64])
    def test_survival_matches_analytic_within_3_sigma(self, n_checks):
        trials = 100_000
        record = run_zeno(n_checks, np.pi, trials, seed=101)
        p = zeno_survival_analytic(n_checks, np.pi)
        assert abs(record.summary["survival"] - p) <= three_sigma(p, trials) + 1e-12

    def test_frequent_checks_freeze_the_state(self):
        trials = 100_000
        few = run_zeno(4, np.pi, trials, seed=103)
        many = run_zeno(64, np.pi, trials, seed=107)
        p_few, p_many = few.summary["survival"], many.summary["survival"]
        pooled = np.sqrt(
            p_few * (1 - p_few) / trials + p_many * (1 - p_many) / trials
        )
        assert p_many - p_few >= 5 * pooled

    def test_analytic_curve_is_monotone(self):
        values = [zeno_survival_analytic(n, np.pi) for n in (1, 2, 4, 8, 16, 32, 64, 128)]
        assert all(b >= a for a, b in zip(values, values[1:]))
        assert values[-1] > 0.98

    def test_rejects_zero_checks(self):
        with pytest.raises(ValueError):
            run_zeno(0, np.pi, 100, seed=1)


class TestDecoherenceDemo:
    def test_no_environment_keeps_coherence_flat(self):
        record = run_decoherence_demo((), [0.0, 1.0, 2.0])
        coherences = [c for _, c, _ in record.per_trial_rows]
        assert all(c == pytest.approx(0.5, abs=1e-12) for c in coherences)

    def test_eight_qubits_match_analytic(self):
        rng = np.random.default_rng(11)
        couplings = rng.uniform(0.1, 1.0, size=8)
        record = run_decoherence_demo(couplings, np.linspace(0.0, 4.0, 25))
        assert record.summary["max_abs_error_vs_analytic"] <= 1e-10

    def test_incommensurate_couplings_suppress_coherence(self):
        # the closed-form product bound is evaluated at run time
        couplings = [0.37, 0.59 * np.sqrt(2), 0.83 * np.pi / 3, 1.11, 0.71, 0.93]
        times = np.linspace(3.0, 30.0, 40)
        record = run_decoherence_demo(couplings, times, method="analytic")
        initial = record.summary["initial_coherence"]
        assert record.summary["min_coherence"] <= 0.05 * initial
        assert record.summary["min_coherence"] > 0.0


class TestDispatch:
    def test_config_validation(self):
        with pytest.raises(ValueError):
            ExperimentConfig(experiment="unknown", trials=10, seed=1)
        with pytest.raises(ValueError):
            ExperimentConfig(experiment="epr", trials=0, seed=1)

    def test_dispatch_runs_each_experiment(self):
        for name in ("stern-gerlach", "epr", "two-particle", "zeno", "decoherence"):
            config = ExperimentConfig(experiment=name, trials=10_000, seed=3)
            record = run_experiment(config)
            assert record.experiment == name
            assert record.wall_time >= 0.0

    def test_dispatch_respects_parameters(self):
        config = ExperimentConfig(
            experiment="zeno",
            trials=20_000,
            seed=5,
            parameters={"n_checks": 2, "total_rotation": 0.0},
        )
        record = run_experiment(config)
        assert record.summary["survival"] == 1.0

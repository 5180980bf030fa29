"""Classical Gibbs dynamics of pointer selection: 2D Ising Metropolis.

The pointer-locking story is played out on an n x n periodic lattice
with energy H = -J sum_<ij> s_i s_j - h sum_i s_i. Below the critical
temperature the magnetization sign chosen at the start of a run is
locked in; above it the up/down symmetry is restored. Small lattices
(n <= 4) have an exact enumeration oracle for the same energy function.

Branch *selection* is not derived from these dynamics: runs start in a
ground state of H (sign picked by the seed when h = 0) and the sampler
demonstrates the stability or decay of that choice. A hot random start
is available via ``init="random"``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np

from .rng import TrialRng, derive_seed

_STREAM_INIT = 101
_STREAM_SWEEPS = 102

# cap on doubles drawn per chunk when generating sweep randomness
_CHUNK_BUDGET = 4_000_000

INIT_MODES = ("ground", "random")


@dataclass(frozen=True)
class GibbsConfig:
    """Parameters of one Metropolis run.

    ``sweeps`` counts total lattice sweeps; magnetization and energy are
    recorded for every sweep at index >= ``burn_in``.
    """

    lattice: int
    coupling: float
    field: float
    temperature: float
    sweeps: int
    burn_in: int
    seed: int
    init: str = "ground"

    def __post_init__(self):
        if int(self.lattice) < 2:
            raise ValueError(f"lattice side must be >= 2, got {self.lattice}")
        if self.coupling <= 0:
            raise ValueError(f"coupling must be positive, got {self.coupling}")
        if self.temperature <= 0:
            raise ValueError(f"temperature must be positive, got {self.temperature}")
        if not 0 <= int(self.burn_in) < int(self.sweeps):
            raise ValueError(
                f"need sweeps > burn_in >= 0, got sweeps={self.sweeps} burn_in={self.burn_in}"
            )
        if self.init not in INIT_MODES:
            raise ValueError(f"init must be one of {INIT_MODES}, got {self.init!r}")

    @classmethod
    def from_json_dict(cls, payload: dict) -> "GibbsConfig":
        known = {f for f in cls.__dataclass_fields__}
        extra = set(payload) - known
        if extra:
            raise ValueError(f"unknown config keys: {sorted(extra)}")
        missing = {f for f in known if f != "init"} - set(payload)
        if missing:
            raise ValueError(f"missing config keys: {sorted(missing)}")
        return cls(
            lattice=int(payload["lattice"]),
            coupling=float(payload["coupling"]),
            field=float(payload["field"]),
            temperature=float(payload["temperature"]),
            sweeps=int(payload["sweeps"]),
            burn_in=int(payload["burn_in"]),
            seed=int(payload["seed"]),
            init=payload.get("init", "ground"),
        )

    def to_json_dict(self) -> dict:
        return {
            "lattice": self.lattice,
            "coupling": self.coupling,
            "field": self.field,
            "temperature": self.temperature,
            "sweeps": self.sweeps,
            "burn_in": self.burn_in,
            "seed": self.seed,
            "init": self.init,
        }

    def replace(self, **changes) -> "GibbsConfig":
        payload = self.to_json_dict()
        payload.update(changes)
        return GibbsConfig(**payload)


@dataclass(frozen=True)
class GibbsTrajectory:
    """Recorded magnetization/energy series of one run (post burn-in)."""

    config: GibbsConfig
    magnetization: np.ndarray
    energy: np.ndarray
    final_configuration: np.ndarray
    configurations: np.ndarray | None = None

    @property
    def first_recorded_sweep(self) -> int:
        return self.config.burn_in

    def rows(self):
        start = self.first_recorded_sweep
        return [
            (start + i, float(self.magnetization[i]), float(self.energy[i]))
            for i in range(len(self.magnetization))
        ]


@dataclass(frozen=True)
class PhaseReport:
    """Did the run stay in a single ordered phase, and which one."""

    magnetization_samples: np.ndarray
    mean_abs_magnetization: float
    broken: bool
    selected_sign: int


@dataclass(frozen=True)
class SweepPoint:
    temperature: float
    mean_abs_magnetization: float
    broken_fraction: float


@dataclass(frozen=True)
class SweepReport:
    """Order-parameter sweep over temperature."""

    points: tuple[SweepPoint, ...]
    threshold: float
    seeds_per_temperature: int
    crossing: tuple[float, float] | None
    crossing_estimate: float | None


@numba.njit(cache=True)
def _metropolis_chunk(
    spins, j_coupling, h_field, temperature, sites, uniforms, m_out, e_out, codes, record_codes, offset, total_m, total_e
):  # pragma: no cover - exercised via gibbs_sample
    n = spins.shape[0]
    nsweeps = sites.shape[0]
    n2 = n * n
    for s in range(nsweeps):
        for t in range(n2):
            site = sites[s, t]
            i = site // n
            jj = site - i * n
            ip = i + 1 if i + 1 < n else 0
            im = i - 1 if i > 0 else n - 1
            jp = jj + 1 if jj + 1 < n else 0
            jm = jj - 1 if jj > 0 else n - 1
            nb = spins[ip, jj] + spins[im, jj] + spins[i, jp] + spins[i, jm]
            de = 2.0 * spins[i, jj] * (j_coupling * nb + h_field)
            if de <= 0.0 or uniforms[s, t] < math.exp(-de / temperature):
                spins[i, jj] = -spins[i, jj]
                total_m += 2 * spins[i, jj]
                total_e += de
        m_out[offset + s] = total_m / n2
        e_out[offset + s] = total_e
        if record_codes:
            code = np.uint64(0)
            bit = 0
            for i in range(n):
                for jj in range(n):
                    if spins[i, jj] > 0:
                        code |= np.uint64(1) << np.uint64(bit)
                    bit += 1
            codes[offset + s] = code
    return total_m, total_e


def _lattice_energy(spins: np.ndarray, j_coupling: float, h_field: float) -> float:
    right = np.roll(spins, -1, axis=1)
    down = np.roll(spins, -1, axis=0)
    bond = float(np.sum(spins * right) + np.sum(spins * down))
    return -j_coupling * bond - h_field * float(np.sum(spins))


def initial_configuration(cfg: GibbsConfig) -> np.ndarray:
    """Starting lattice per the configured mode.

    "ground": uniform configuration in a ground state of H (aligned with
    the field; for h = 0 the sign is drawn from the seed, a fair coin
    between the two degenerate ground states). "random": iid +-1 spins.
    """
    n = cfg.lattice
    rng = TrialRng(cfg.seed, _STREAM_INIT)
    if cfg.init == "random":
        return np.where(rng.uniforms((n, n)) < 0.5, 1, -1).astype(np.int8)
    if cfg.field > 0:
        sign = 1
    elif cfg.field < 0:
        sign = -1
    else:
        sign = 1 if rng.uniform() < 0.5 else -1
    return np.full((n, n), sign, dtype=np.int8)


def gibbs_sample(
    cfg: GibbsConfig,
    initial: np.ndarray | None = None,
    record_configurations: bool = False,
) -> GibbsTrajectory:
    """Metropolis single-spin-flip trajectory, deterministic under the seed.

    One sweep is n*n update attempts at uniformly random sites (random
    scan); a flip with energy change dE is accepted with probability
    min(1, exp(-dE/T)). A deterministic row-major scan is NOT used: with
    the Metropolis rule it accepts every dE <= 0 move outright, and the
    resulting sweep map is reducible, so its long-run distribution
    provably differs from the Gibbs distribution (the n <= 4 enumeration
    oracle exposes this). Random-scan Metropolis is reversible and
    ergodic at T > 0, and the seeded counter-based stream keeps runs
    bit-reproducible.

    The stream is consumed at a fixed rate (one site index and one
    uniform per attempt), so runs with the same seed but different
    starting configurations share the exact same randomness.

    ``initial`` overrides the configured starting lattice (used for
    equivariance checks). ``record_configurations`` additionally stores
    a bit-encoded configuration per recorded sweep (n <= 8 only).
    """
    n = cfg.lattice
    if record_configurations and n * n > 64:
        raise ValueError("configuration recording is limited to n*n <= 64 sites")
    if initial is None:
        spins = initial_configuration(cfg)
    else:
        spins = np.asarray(initial, dtype=np.int8).copy()
        if spins.shape != (n, n) or not np.all(np.abs(spins) == 1):
            raise ValueError("initial configuration must be an n x n array of +-1 spins")

    m_series = np.empty(cfg.sweeps, dtype=np.float64)
    e_series = np.empty(cfg.sweeps, dtype=np.float64)
    codes = np.empty(cfg.sweeps if record_configurations else 1, dtype=np.uint64)

    total_m = int(np.sum(spins))
    total_e = _lattice_energy(spins, cfg.coupling, cfg.field)
    stream = TrialRng(cfg.seed, _STREAM_SWEEPS)
    chunk = max(1, _CHUNK_BUDGET // (2 * n * n))
    done = 0
    while done < cfg.sweeps:
        todo = min(chunk, cfg.sweeps - done)
        sites = stream.integers(0, n * n, size=(todo, n * n))
        uniforms = stream.uniforms((todo, n * n))
        total_m, total_e = _metropolis_chunk(
            spins,
            float(cfg.coupling),
            float(cfg.field),
            float(cfg.temperature),
            sites,
            uniforms,
            m_series,
            e_series,
            codes,
            record_configurations,
            done,
            total_m,
            total_e,
        )
        done += todo

    recorded = slice(cfg.burn_in, cfg.sweeps)
    return GibbsTrajectory(
        config=cfg,
        magnetization=m_series[recorded].copy(),
        energy=e_series[recorded].copy(),
        final_configuration=spins,
        configurations=codes[recorded].copy() if record_configurations else None,
    )


def detect_symmetry_breaking(trajectory: GibbsTrajectory, threshold: float = 0.5) -> PhaseReport:
    """Call the run broken when the mean |m| exceeds the threshold."""
    m = trajectory.magnetization
    if m.size == 0:
        raise ValueError("trajectory has no recorded sweeps")
    mean_abs = float(np.mean(np.abs(m)))
    broken = mean_abs > threshold
    sign = int(np.sign(np.mean(m))) if broken else 0
    return PhaseReport(
        magnetization_samples=m,
        mean_abs_magnetization=mean_abs,
        broken=broken,
        selected_sign=sign,
    )


@dataclass(frozen=True)
class ExactGibbsSummary:
    """Exact Boltzmann averages from full enumeration."""

    mean_abs_magnetization: float
    mean_energy: float
    log_partition_function: float
    partition_function: float
    probabilities: np.ndarray
    energies: np.ndarray
    magnetizations: np.ndarray


def enumerate_configurations(n: int):
    """All 2^(n*n) spin configurations as (spins, bond_sum, site_sum).

    The energy of configuration c is -J * bond_sum[c] - h * site_sum[c].
    Configuration index c sets site b (row-major) up iff bit b of c is 1,
    matching the encoding recorded by :func:`gibbs_sample`.
    """
    sites = n * n
    count = 1 << sites
    index = np.arange(count, dtype=np.uint64)
    bits = ((index[:, None] >> np.arange(sites, dtype=np.uint64)) & 1).astype(np.int64)
    spins = 2 * bits - 1  # (count, sites)
    grid = spins.reshape(count, n, n)
    right = np.roll(grid, -1, axis=2)
    down = np.roll(grid, -1, axis=1)
    bond_sum = np.sum(grid * right, axis=(1, 2)) + np.sum(grid * down, axis=(1, 2))
    site_sum = np.sum(spins, axis=1)
    return spins, bond_sum.astype(np.float64), site_sum.astype(np.float64)


def exact_gibbs_enumeration(cfg: GibbsConfig) -> ExactGibbsSummary:
    """Exact Boltzmann sums over all configurations (n <= 4 only)."""
    n = cfg.lattice
    if n > 4:
        raise ValueError(f"exact enumeration is limited to n <= 4, got n = {n}")
    _, bond_sum, site_sum = enumerate_configurations(n)
    energies = -cfg.coupling * bond_sum - cfg.field * site_sum
    shifted = -(energies - energies.min()) / cfg.temperature
    weights = np.exp(shifted)
    total = float(weights.sum())
    probs = weights / total
    log_z = math.log(total) - energies.min() / cfg.temperature
    magnetizations = site_sum / (n * n)
    return ExactGibbsSummary(
        mean_abs_magnetization=float(np.sum(probs * np.abs(magnetizations))),
        mean_energy=float(np.sum(probs * energies)),
        log_partition_function=log_z,
        partition_function=float(np.exp(log_z)) if log_z < 700 else math.inf,
        probabilities=probs,
        energies=energies,
        magnetizations=magnetizations,
    )


def order_parameter_sweep(
    cfg: GibbsConfig,
    temperatures,
    seeds_per_temperature: int = 50,
    threshold: float = 0.5,
) -> SweepReport:
    """Mean |m| and broken fraction across temperatures.

    Each (temperature, replica) cell runs :func:`gibbs_sample` with a
    child seed derived from the template seed; the crossing of the
    broken-fraction 0.5 level is bracketed and linearly interpolated.
    """
    temps = [float(t) for t in temperatures]
    if not temps:
        raise ValueError("temperature list is empty")
    points = []
    for ti, temp in enumerate(temps):
        mean_abs = np.empty(seeds_per_temperature)
        broken = np.empty(seeds_per_temperature, dtype=bool)
        for si in range(seeds_per_temperature):
            run_cfg = cfg.replace(temperature=temp, seed=derive_seed(cfg.seed, ti, si))
            report = detect_symmetry_breaking(gibbs_sample(run_cfg), threshold)
            mean_abs[si] = report.mean_abs_magnetization
            broken[si] = report.broken
        points.append(
            SweepPoint(
                temperature=temp,
                mean_abs_magnetization=float(np.mean(mean_abs)),
                broken_fraction=float(np.mean(broken)),
            )
        )

    crossing = None
    estimate = None
    for lo, hi in zip(points, points[1:]):
        if lo.broken_fraction >= 0.5 > hi.broken_fraction:
            crossing = (lo.temperature, hi.temperature)
            span = lo.broken_fraction - hi.broken_fraction
            frac = (lo.broken_fraction - 0.5) / span if span > 0 else 0.5
            estimate = lo.temperature + frac * (hi.temperature - lo.temperature)
            break
    return SweepReport(
        points=tuple(points),
        threshold=threshold,
        seeds_per_temperature=seeds_per_temperature,
        crossing=crossing,
        crossing_estimate=estimate,
    )

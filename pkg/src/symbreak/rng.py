"""Deterministic random streams for reproducible sampling.

Every stochastic routine in this package draws from a Philox4x64
counter-based bit generator keyed by the pair ``(master_seed, stream)``.
Distinct stream indices give statistically independent, non-overlapping
streams, so trials and substreams can be reconstructed (or run in
parallel) without sharing mutable generator state.
"""

from __future__ import annotations

import numpy as np

_U64_MAX = (1 << 64) - 1


class TrialRng:
    """One Philox stream, addressed by (master_seed, stream).

    The master seed is the user-facing 64-bit seed of a run; ``stream``
    selects an independent substream (a trial index, a named purpose, a
    lattice run, ...). ``derive`` creates sibling streams from the same
    master seed.
    """

    def __init__(self, master_seed: int, stream: int = 0):
        if not 0 <= int(master_seed) <= _U64_MAX:
            raise ValueError(f"master seed must be a 64-bit unsigned integer, got {master_seed}")
        if not 0 <= int(stream) <= _U64_MAX:
            raise ValueError(f"stream index must be a 64-bit unsigned integer, got {stream}")
        self.seed = int(master_seed)
        self.stream = int(stream)
        key = np.array([self.seed, self.stream], dtype=np.uint64)
        self.generator = np.random.Generator(np.random.Philox(key=key))

    def derive(self, stream: int) -> "TrialRng":
        """Fresh stream with the same master seed and a new stream index."""
        return TrialRng(self.seed, stream)

    def uniform(self) -> float:
        return float(self.generator.random())

    def uniforms(self, size) -> np.ndarray:
        return self.generator.random(size)

    def integers(self, low: int, high: int | None = None, size=None):
        return self.generator.integers(low, high, size=size)

    def normals(self, size) -> np.ndarray:
        return self.generator.standard_normal(size)

    def complex_normals(self, size) -> np.ndarray:
        """Rotation-invariant complex Gaussian draws."""
        return self.generator.standard_normal(size) + 1j * self.generator.standard_normal(size)

    def __repr__(self) -> str:
        return f"TrialRng(master_seed={self.seed}, stream={self.stream})"


def derive_seed(master_seed: int, *path: int) -> int:
    """Stable 64-bit child seed for a nested run.

    Used e.g. for one lattice per (temperature index, replica index)
    cell of a sweep. Uses numpy's SeedSequence spawning, which is
    documented and platform-stable.
    """
    seq = np.random.SeedSequence(int(master_seed), spawn_key=tuple(int(p) for p in path))
    return int(seq.generate_state(1, np.uint64)[0])

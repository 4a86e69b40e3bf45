"""Seeded random streams.

PCG64 driven through SeedSequence gives the same draws on every platform, so
a (master seed, trial) pair fully determines a run.
"""
from __future__ import annotations

import numpy as np

MAX_SEED = 2**64 - 1


class RngStream:
    def __init__(self, seed, *spawn_key):
        seed = int(seed)
        if not 0 <= seed <= MAX_SEED:
            raise ValueError(f'seed {seed} is outside the unsigned 64-bit range')
        self._seed = seed
        self._key = tuple(int(k) for k in spawn_key)
        self._generator = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, *self._key])))

    @classmethod
    def for_trial(cls, master_seed, trial):
        return cls(master_seed, trial)

    @property
    def seed(self):
        return self._seed

    def random(self):
        return float(self._generator.random())

    def below(self, n):
        return int(self._generator.integers(n))

    def __repr__(self):
        return f'<RngStream seed={self._seed} key={self._key}>'

"""Counter-based splittable random streams.

Every randomized operation in the library draws from an `Rng`, a thin
wrapper around numpy's Philox counter-based generator.  A stream is
identified by a 64-bit seed plus a tuple of split indices, so the same
(seed, path) always reproduces the same draws and sibling streams are
statistically independent.  Splitting never mutates the parent, which
makes per-row / per-cell randomness independent of traversal order.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


class Rng:
    """Reproducible random stream with cheap independent substreams."""

    __slots__ = ("seed", "path", "gen")

    def __init__(self, seed: int, path: tuple[int, ...] = ()):
        self.seed = int(seed) & _MASK64
        self.path = tuple(int(p) for p in path)
        seq = np.random.SeedSequence(self.seed, spawn_key=self.path)
        self.gen = np.random.Generator(np.random.Philox(seq))

    def split(self, *ids: int) -> "Rng":
        """Return an independent stream for the given substream ids."""
        return Rng(self.seed, self.path + ids)

    def signs(self, count: int) -> np.ndarray:
        """Vector of `count` independent +/-1 values (float64)."""
        return self.gen.integers(0, 2, size=count).astype(np.float64) * 2.0 - 1.0

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Rng(seed={self.seed}, path={self.path})"

from __future__ import annotations

import hashlib

import numpy as np

from errors import ContractViolation


def _key_part(part: int | str) -> int:
    if isinstance(part, str):
        # Stable across processes, unlike hash().
        digest = hashlib.blake2b(part.encode("utf-8"), digest_size=8).digest()
        return int.from_bytes(digest, "little")
    if part < 0:
        raise ContractViolation(f"Stream key parts must be nonnegative, got {part}")
    return int(part)


class RandomStream:
    """
    Seeded, splittable random source.

    A stream is identified by its 64-bit seed plus a key path. `substream(*keys)`
    derives an independent child through numpy's SeedSequence spawn keys, so a
    (client, round, step) tuple always maps to the same draws no matter in which
    order clients are evaluated. The bit generator is PCG64, whose output is
    identical on every platform.
    """

    def __init__(self, seed: int, key: tuple[int, ...] = ()):
        if not 0 <= seed < 2**64:
            raise ContractViolation(f"Seed must be a 64-bit unsigned integer, got {seed}")
        self.seed = int(seed)
        self.key = tuple(key)
        self.position = 0
        sequence = np.random.SeedSequence(self.seed, spawn_key=self.key)
        self._generator = np.random.Generator(np.random.PCG64(sequence))

    def __repr__(self):
        return f"RandomStream(seed={self.seed}, key={self.key}, position={self.position})"

    def substream(self, *keys: int | str) -> RandomStream:
        return RandomStream(self.seed, self.key + tuple(_key_part(k) for k in keys))

    def _advance(self, count: int) -> None:
        self.position += int(count)

    def uniform(self, low: float = 0.0, high: float = 1.0, size=None):
        out = self._generator.uniform(low, high, size=size)
        self._advance(np.size(out))
        return out

    def normal(self, loc: float = 0.0, scale: float = 1.0, size=None):
        out = self._generator.normal(loc, scale, size=size)
        self._advance(np.size(out))
        return out

    def integers(self, low: int, high: int | None = None, size=None):
        out = self._generator.integers(low, high, size=size)
        self._advance(np.size(out))
        return out

    def choice_without_replacement(self, population: int, size: int) -> np.ndarray:
        """`size` distinct indices from range(population), in draw order."""
        if size > population:
            raise ContractViolation(f"Cannot draw {size} of {population} without replacement")
        out = self._generator.choice(population, size=size, replace=False)
        self._advance(size)
        return out

    def permutation(self, n: int) -> np.ndarray:
        out = self._generator.permutation(n)
        self._advance(n)
        return out

    def dirichlet(self, alpha: np.ndarray) -> np.ndarray:
        out = self._generator.dirichlet(alpha)
        self._advance(len(alpha))
        return out

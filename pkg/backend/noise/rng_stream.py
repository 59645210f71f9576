"""
Seedable random streams for Brownian increments and marked Poisson jumps

Every path owns one RngStream. A stream is a numpy Generator driven by the
counter-based Philox bit generator whose key is derived from (seed, stream_id)
with the SplitMix64 finaliser, so streams can be created independently by any
worker and replayed bit-exactly.
"""
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from backend.errors import DomainError
from backend.model import LevyMeasure

RNG_ALGORITHM = "Philox4x64-10/splitmix64"

_MASK64 = (1 << 64) - 1
_GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def mix64(seed: int, stream_id: int) -> int:
    """SplitMix64 finaliser applied to seed + golden_gamma * (stream_id + 1)"""
    z = (seed + _GOLDEN_GAMMA * (stream_id + 1)) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def _check_u64(name: str, value: int) -> int:
    value = int(value)
    if not 0 <= value <= _MASK64:
        raise DomainError(f"{name} must be an unsigned 64-bit integer, got {value}")
    return value


@dataclass(frozen=True)
class JumpBatch:
    """Jump events drawn for one step: indices into LevyMeasure.marks"""

    count: int
    mark_indices: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.count < 0 or len(self.mark_indices) != self.count:
            raise DomainError(
                f"JumpBatch count {self.count} does not match {len(self.mark_indices)} indices"
            )


@dataclass(frozen=True)
class NoiseBlock:
    """Draws for a run of consecutive steps of one path"""

    normals: np.ndarray       # standard normals, one per step
    counts: np.ndarray        # jump events per step
    mark_indices: np.ndarray  # marks for all events of the block, in step order


class RngStream:
    """Deterministic random source for one path"""

    def __init__(self, seed: int, stream_id: int = 0):
        self.seed = _check_u64("seed", seed)
        self.stream_id = _check_u64("stream_id", stream_id)
        key = np.array([mix64(self.seed, self.stream_id), self.stream_id], dtype=np.uint64)
        self._generator = np.random.Generator(np.random.Philox(key=key))

    def __repr__(self):
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"

    @property
    def algorithm(self) -> str:
        return RNG_ALGORITHM

    def gaussian(self, dt: float) -> float:
        """One Normal(0, dt) sample"""
        if not (math.isfinite(dt) and dt > 0):
            raise DomainError(f"dt must be positive and finite, got {dt}")
        return math.sqrt(dt) * float(self._generator.standard_normal())

    def gaussian_block(self, dt: float, size: int) -> np.ndarray:
        """`size` Normal(0, dt) samples; same sequence as repeated gaussian()"""
        if not (math.isfinite(dt) and dt > 0):
            raise DomainError(f"dt must be positive and finite, got {dt}")
        return math.sqrt(dt) * self._generator.standard_normal(size)

    def poisson(self, rate_dt: float) -> int:
        if not (math.isfinite(rate_dt) and rate_dt >= 0):
            raise DomainError(f"Poisson mean must be finite and >= 0, got {rate_dt}")
        if rate_dt == 0.0:
            return 0
        return int(self._generator.poisson(rate_dt))

    def poisson_block(self, rate_dt: float, size: int) -> np.ndarray:
        if not (math.isfinite(rate_dt) and rate_dt >= 0):
            raise DomainError(f"Poisson mean must be finite and >= 0, got {rate_dt}")
        if rate_dt == 0.0:
            return np.zeros(size, dtype=np.int64)
        return self._generator.poisson(rate_dt, size).astype(np.int64)

    def categorical(self, levy: LevyMeasure, count: int) -> np.ndarray:
        """Mark k with probability lambda_k / sum(lambda)"""
        if count < 0:
            raise DomainError(f"count must be >= 0, got {count}")
        if count == 0:
            return np.zeros(0, dtype=np.int64)
        if levy.is_empty:
            raise DomainError("cannot sample marks from an empty jump measure")
        cdf = np.cumsum(levy.rates) / levy.total_rate
        cdf[-1] = 1.0
        u = self._generator.random(count)
        return np.searchsorted(cdf, u, side="right").astype(np.int64)

    def draw_block(self, step_sizes: np.ndarray, levy: LevyMeasure) -> NoiseBlock:
        """
        Draw everything a path needs for len(step_sizes) steps

        Order within the block: standard normals, Poisson counts with mean
        total_rate * h per step, then the marks of all events.
        """
        size = len(step_sizes)
        normals = self._generator.standard_normal(size)
        if levy.is_empty:
            counts = np.zeros(size, dtype=np.int64)
        else:
            counts = self._generator.poisson(levy.total_rate * step_sizes).astype(np.int64)
        marks = self.categorical(levy, int(counts.sum()))
        return NoiseBlock(normals=normals, counts=counts, mark_indices=marks)


def gaussian_increment(rng: RngStream, dt: float) -> float:
    """Brownian increment Normal(0, dt); advances the stream"""
    return rng.gaussian(dt)


def poisson_count(rng: RngStream, rate_dt: float) -> int:
    """Number of jump events in a step, Poisson(rate_dt)"""
    return rng.poisson(rate_dt)


def sample_marks(rng: RngStream, levy: LevyMeasure, count: int) -> JumpBatch:
    """I.i.d. categorical marks for `count` events"""
    indices = rng.categorical(levy, count)
    return JumpBatch(count=count, mark_indices=tuple(int(k) for k in indices))

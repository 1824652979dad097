"""Seeded Monte Carlo sampling of Maxwell velocities and empirical checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .distribution import MaxwellParams, VelocityVector, speed_cdf
from .errors import DomainError
from .rng import SeedSpec, Stream, chunked


@dataclass(frozen=True)
class SampleBatch:
    """Velocities (shape ``(count, 3)``) plus what is needed to regenerate them."""

    velocities: np.ndarray = field(repr=False)
    params: MaxwellParams
    seed_spec: SeedSpec
    count: int

    def __post_init__(self):
        v = self.velocities
        if v.ndim != 2 or v.shape[1] != 3 or v.shape[0] != self.count:
            raise DomainError("velocities must have shape (count, 3)")
        v.flags.writeable = False

    def __len__(self):
        return self.count

    def __getitem__(self, i) -> VelocityVector:
        return VelocityVector(*map(float, self.velocities[i]))

    def speeds(self) -> np.ndarray:
        return np.sqrt(np.einsum("ij,ij->i", self.velocities, self.velocities))

    def regenerate(self) -> "SampleBatch":
        return sample_batch(self.count, self.params, self.seed_spec)


def sample_batch(n: int, p: MaxwellParams, s: SeedSpec, workers: int = 1) -> SampleBatch:
    """Draw ``n`` velocity vectors with i.i.d. N(0, 1/(2c)) components.

    Vector ``j`` of a chunk takes normals ``3j, 3j+1, 3j+2`` of that chunk's
    stream as (vx, vy, vz).
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise DomainError("n must be a positive integer")
    sigma = np.sqrt(p.component_variance)

    def work(size, spec):
        return Stream(spec).normals(3 * size).reshape(size, 3)

    v = np.concatenate(chunked(int(n), s, work, workers)) * sigma
    return SampleBatch(v, p, s, int(n))


def empirical_tail_fraction(batch: SampleBatch, e_activation: float, mass: float) -> float:
    """Fraction of the batch with m|v|^2/2 >= e_activation."""
    if not e_activation >= 0:
        raise DomainError("activation energy must be non-negative")
    if not mass > 0:
        raise DomainError("mass must be positive")
    v = batch.velocities
    energy = 0.5 * mass * np.einsum("ij,ij->i", v, v)
    return float(np.count_nonzero(energy >= e_activation)) / batch.count


def ks_statistic(batch: SampleBatch) -> float:
    """Kolmogorov-Smirnov distance between sample speeds and the speed CDF."""
    s = np.sort(batch.speeds())
    n = s.size
    cdf = speed_cdf(s, batch.params)
    i = np.arange(1, n + 1)
    d_plus = np.max(i / n - cdf)
    d_minus = np.max(cdf - (i - 1) / n)
    return float(max(d_plus, d_minus))


class EmpiricalMoments(NamedTuple):
    mean: np.ndarray
    variance: np.ndarray
    mean_speed: float
    mean_squared_speed: float


def empirical_moments(batch: SampleBatch) -> EmpiricalMoments:
    if batch.count < 2:
        raise DomainError("need at least two samples")
    v = batch.velocities
    sq = np.einsum("ij,ij->i", v, v)
    return EmpiricalMoments(
        mean=v.mean(axis=0),
        variance=v.var(axis=0, ddof=1),
        mean_speed=float(np.sqrt(sq).mean()),
        mean_squared_speed=float(sq.mean()),
    )

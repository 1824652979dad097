"""Lattice random walks and diffusion-length estimates.

Each step picks one of ``dimension`` axes uniformly and moves +-step_length
along it.  A step consumes one raw 64-bit word ``r`` of the trial chunk's
stream: the sign is bit 0 (1 -> +1, 0 -> -1) and the axis is
``((r >> 32) * dimension) >> 32``.  Words are laid out step-major within a
chunk: all trials' first step, then all trials' second step, and so on.

Diffusion convention: MSD = 2 * dimension * D * t.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .rng import SeedSpec, Stream, chunked

_STEP_BLOCK_WORDS = 1 << 22


def _positive_int(name, v):
    if not isinstance(v, (int, np.integer)) or isinstance(v, bool) or v < 1:
        raise DomainError(f"{name} must be a positive integer")


def _positive(name, v):
    if not (isinstance(v, (int, float, np.integer, np.floating))
            and math.isfinite(v) and v > 0):
        raise DomainError(f"{name} must be positive")


@dataclass(frozen=True)
class WalkSpec:
    steps: int
    dimension: int = 1
    step_length: float = 1.0
    trials: int = 10_000
    seed_spec: SeedSpec = field(default_factory=lambda: SeedSpec(0))

    def __post_init__(self):
        _positive_int("steps", self.steps)
        _positive_int("trials", self.trials)
        if self.dimension not in (1, 2, 3):
            raise DomainError("dimension must be 1, 2 or 3")
        _positive("step_length", self.step_length)


@dataclass(frozen=True)
class WalkSummary:
    mean_displacement: tuple
    mean_squared_displacement: float
    variance_of_squared_displacement: float
    trials: int

    def standard_error(self) -> float:
        """Standard error of the MSD estimate."""
        return math.sqrt(self.variance_of_squared_displacement / self.trials)


def _final_positions(trials: int, steps: int, dim: int, spec: SeedSpec) -> np.ndarray:
    stream = Stream(spec)
    pos = np.zeros((dim, trials), dtype=np.int64)
    block = max(1, _STEP_BLOCK_WORDS // trials)
    done = 0
    while done < steps:
        k = min(block, steps - done)
        r = stream.raw(k * trials).reshape(k, trials)
        sign = (r & np.uint64(1)).astype(np.int64) * 2 - 1
        if dim == 1:
            pos[0] += sign.sum(axis=0)
        else:
            axis = (((r >> np.uint64(32)) * np.uint64(dim)) >> np.uint64(32)).astype(np.int64)
            for d in range(dim):
                pos[d] += np.where(axis == d, sign, 0).sum(axis=0)
        done += k
    return pos.T


def final_positions(spec: WalkSpec, workers: int = 1) -> np.ndarray:
    """End points of every trial in lattice units, shape ``(trials, dimension)``."""
    def work(size, seed):
        return _final_positions(size, spec.steps, spec.dimension, seed)

    return np.concatenate(chunked(spec.trials, spec.seed_spec, work, workers))


def simulate_walks(spec: WalkSpec, workers: int = 1) -> WalkSummary:
    pos = final_positions(spec, workers) * spec.step_length
    sq = np.einsum("ij,ij->i", pos, pos)
    ddof = 1 if spec.trials > 1 else 0
    return WalkSummary(
        mean_displacement=tuple(float(x) for x in pos.mean(axis=0)),
        mean_squared_displacement=float(sq.mean()),
        variance_of_squared_displacement=float(sq.var(ddof=ddof)),
        trials=spec.trials,
    )


def diffusion_length(d_coefficient: float, time: float, dimension: int = 1) -> float:
    """Spread sqrt(2 * dimension * D * t)."""
    _positive("diffusion coefficient", d_coefficient)
    _positive("time", time)
    if dimension not in (1, 2, 3):
        raise DomainError("dimension must be 1, 2 or 3")
    return math.sqrt(2.0 * dimension * d_coefficient * time)


def diffusion_coefficient_from_walk(step_length: float, step_time: float,
                                    dimension: int = 1) -> float:
    """D = step_length**2 / (2 * dimension * step_time)."""
    _positive("step_length", step_length)
    _positive("step_time", step_time)
    if dimension not in (1, 2, 3):
        raise DomainError("dimension must be 1, 2 or 3")
    return step_length ** 2 / (2.0 * dimension * step_time)

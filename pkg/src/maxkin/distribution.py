"""Analytic Maxwell-Boltzmann velocity distribution.

The whole family is fixed by one parameter ``c`` (inverse squared-speed
scale):

    F(v) = (c/pi)**1.5 * exp(-c |v|**2)

Each Cartesian component is an independent centred Gaussian with variance
1/(2c).  ``c`` is obtained from temperature and mass through the mean-energy
condition <m|v|**2/2> = 3kT/2, whose exact solution is c = m / (2kT).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError
from .quadrature import p_gamma_3half

BOLTZMANN_SI = 1.380649e-23  # J/K, exact by SI definition
AMU_KG = 1.66053906892e-27

ArrayLike = Union[float, np.ndarray]


class UnitSystem(str, enum.Enum):
    SI = "SI"
    REDUCED = "Reduced"

    @property
    def boltzmann(self) -> float:
        return BOLTZMANN_SI if self is UnitSystem.SI else 1.0


def _positive(name, value):
    if not (isinstance(value, (int, float, np.floating, np.integer))
            and math.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be a positive finite number, got {value!r}")


@dataclass(frozen=True)
class ThermalState:
    temperature: float
    mass: float
    unit_system: UnitSystem = UnitSystem.SI

    def __post_init__(self):
        _positive("temperature", self.temperature)
        _positive("mass", self.mass)
        object.__setattr__(self, "unit_system", UnitSystem(self.unit_system))

    @property
    def kT(self) -> float:
        return self.unit_system.boltzmann * self.temperature


@dataclass(frozen=True)
class MaxwellParams:
    """Distribution parameter ``c``; the normalization is always derived."""

    c: float

    def __post_init__(self):
        _positive("c", self.c)

    @property
    def prefactor(self) -> float:
        return (self.c / math.pi) ** 1.5

    @property
    def component_variance(self) -> float:
        return 0.5 / self.c


@dataclass(frozen=True)
class VelocityVector:
    vx: float
    vy: float
    vz: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.vx, self.vy, self.vz)):
            raise DomainError("velocity components must be finite")

    def __iter__(self):
        return iter((self.vx, self.vy, self.vz))

    def as_array(self) -> np.ndarray:
        return np.array([self.vx, self.vy, self.vz])

    @property
    def squared_speed(self) -> float:
        return self.vx * self.vx + self.vy * self.vy + self.vz * self.vz


def params_from_state(state: ThermalState) -> MaxwellParams:
    return MaxwellParams(state.mass / (2.0 * state.kT))


def _squared_speed(v) -> ArrayLike:
    if isinstance(v, VelocityVector):
        return v.squared_speed
    if isinstance(v, tuple) and len(v) == 3:
        vx, vy, vz = (np.asarray(u, dtype=float) for u in v)
        return vx * vx + vy * vy + vz * vz
    arr = np.asarray(v, dtype=float)
    if arr.shape[-1:] != (3,):
        raise DomainError("velocity must have 3 components on its last axis")
    return np.einsum("...i,...i->...", arr, arr)


def density(v, p: MaxwellParams) -> ArrayLike:
    """Probability density per unit velocity volume at ``v``.

    ``v`` is a :class:`VelocityVector`, an array whose last axis holds
    (vx, vy, vz), or a tuple ``(vx, vy, vz)`` of mutually broadcastable
    arrays.  Far tails underflow to exactly 0.0.
    """
    out = p.prefactor * np.exp(-p.c * _squared_speed(v))
    return float(out) if np.ndim(out) == 0 else out


def component_density(u: ArrayLike, p: MaxwellParams) -> ArrayLike:
    """Marginal density of one Cartesian velocity component."""
    u = np.asarray(u, dtype=float)
    out = math.sqrt(p.c / math.pi) * np.exp(-p.c * u * u)
    return float(out) if out.ndim == 0 else out


def _speeds(s) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    if np.any(np.isnan(s)) or np.any(s < 0):
        raise DomainError("speed must be non-negative")
    return s


def speed_density(s: ArrayLike, p: MaxwellParams) -> ArrayLike:
    """Density of |v|: 4 pi s**2 (c/pi)**1.5 exp(-c s**2)."""
    s = _speeds(s)
    out = 4.0 * math.pi * s * s * p.prefactor * np.exp(-p.c * s * s)
    return float(out) if out.ndim == 0 else out


def speed_cdf(s: ArrayLike, p: MaxwellParams) -> ArrayLike:
    """P(|v| <= s), i.e. P(3/2, c s**2)."""
    s = _speeds(s)
    return p_gamma_3half(p.c * s * s)


def mean_kinetic_energy(p: MaxwellParams, mass: float) -> float:
    """<m|v|**2/2> = 3m / (4c)."""
    _positive("mass", mass)
    return 3.0 * mass / (4.0 * p.c)


def _log_terms(sq, c, dims):
    # ln of (c/pi)**(dims/2) * exp(-c sq), kept as separate addends for fsum
    return [0.5 * dims * math.log(c / math.pi), -c * sq]


def separability_residual(a: float, b: float, c3: float, p: MaxwellParams) -> float:
    """Defect of the functional equation ln psi(a+b+c3) = sum of ln phi.

    ``a``, ``b``, ``c3`` are squared velocity components.  psi is the vector
    density and phi the component density, both as functions of squared
    arguments.  Logs are taken analytically so the check also holds where
    the densities themselves underflow.
    """
    if min(a, b, c3) < 0 or any(math.isnan(x) for x in (a, b, c3)):
        raise DomainError("squared components must be non-negative")
    c = p.c
    terms = _log_terms(a + b + c3, c, 3)
    for x in (a, b, c3):
        terms.extend(-t for t in _log_terms(x, c, 1))
    return abs(math.fsum(terms))

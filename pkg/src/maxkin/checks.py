"""Built-in oracle suite behind ``maxkin verify``.

Each check computes a residual with an independent numerical route
(quadrature or Monte Carlo) and compares it with a tolerance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, asdict

import numpy as np

from .distribution import (
    AMU_KG,
    MaxwellParams,
    ThermalState,
    UnitSystem,
    density,
    mean_kinetic_energy,
    params_from_state,
    separability_residual,
)
from .quadrature import integrate, integrate_nd
from .rng import SeedSpec, Stream
from .sampler import ks_statistic, sample_batch

NORMALIZATION_C = (0.1, 0.5, 1.0, 10.0)
KS_COEFFICIENT_1PCT = 1.63
QUAD_TOL = 1e-11

DEFAULT_TOLERANCES = {
    "gauss_integral": 1e-10,
    "normalization": 1e-9,
    "mean_energy": 1e-12,
    "mean_energy_quadrature": 1e-9,
    "separability": 1e-12,
    "isotropy": 1e-12,
}


@dataclass(frozen=True)
class Check:
    name: str
    measured: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.measured <= self.tolerance

    def as_row(self) -> dict:
        row = asdict(self)
        row["status"] = "PASS" if self.passed else "FAIL"
        return row


def gauss_integral_residual() -> float:
    r = integrate(lambda x: np.exp(-x * x), -np.inf, np.inf, tol=1e-12)
    return abs(r.value - math.sqrt(math.pi))


def normalization_residual(c_values=NORMALIZATION_C) -> float:
    worst = 0.0
    for c in c_values:
        p = MaxwellParams(c)
        r = integrate_nd(lambda x, y, z: density((x, y, z), p),
                         [(-np.inf, np.inf)] * 3, tol=QUAD_TOL)
        worst = max(worst, abs(r.value - 1.0))
    return worst


def _states():
    return [ThermalState(1.0, 1.0, UnitSystem.REDUCED),
            ThermalState(2.0, 1.0, UnitSystem.REDUCED),
            ThermalState(310.0, AMU_KG, UnitSystem.SI),
            ThermalState(310.0, 32 * AMU_KG, UnitSystem.SI)]


def mean_energy_residual() -> float:
    """Worst relative gap between <E> and 3kT/2 over reference states."""
    worst = 0.0
    for st in _states():
        e = mean_kinetic_energy(params_from_state(st), st.mass)
        target = 1.5 * st.kT
        worst = max(worst, abs(e - target) / target)
    return worst


def mean_energy_quadrature_residual(c: float = 0.5, mass: float = 1.0) -> float:
    """Relative gap between 3-D quadrature of m|v|^2/2 F and the closed form."""
    p = MaxwellParams(c)

    def energy_density(x, y, z):
        return 0.5 * mass * (x * x + y * y + z * z) * density((x, y, z), p)

    r = integrate_nd(energy_density, [(-np.inf, np.inf)] * 3, tol=QUAD_TOL)
    closed = mean_kinetic_energy(p, mass)
    return abs(r.value - closed) / closed


def separability_max_residual(n: int = 1000, seed: int = 0) -> float:
    u = Stream(SeedSpec(seed, 1)).uniform(4 * n).reshape(n, 4)
    worst = 0.0
    for a, b, d, t in u:
        c = 0.01 + (10.0 - 0.01) * t
        worst = max(worst, separability_residual(100 * a, 100 * b, 100 * d, MaxwellParams(c)))
    return worst


def random_rotations(n: int, stream: Stream) -> np.ndarray:
    """Uniform rotations from normalized Gaussian quaternions."""
    q = stream.normals(4 * n).reshape(n, 4)
    q /= np.linalg.norm(q, axis=1, keepdims=True)
    w, x, y, z = q.T
    return np.stack([
        np.stack([1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)], -1),
        np.stack([2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)], -1),
        np.stack([2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)], -1),
    ], 1)


def isotropy_max_residual(n: int = 1000, seed: int = 0) -> float:
    """Worst |F(Rv) - F(v)| / F(v) over random rotations and velocities.

    Velocities are drawn within five thermal scales, c |v|^2 <= 75.
    """
    stream = Stream(SeedSpec(seed, 2))
    rot = random_rotations(n, stream)
    c = 0.01 + (10.0 - 0.01) * stream.uniform(n)
    v = (2.0 * stream.uniform(3 * n).reshape(n, 3) - 1.0) * (5.0 / np.sqrt(c))[:, None]
    rv = np.einsum("nij,nj->ni", rot, v)
    worst = 0.0
    for i in range(n):
        p = MaxwellParams(float(c[i]))
        f0 = density(v[i], p)
        worst = max(worst, abs(density(rv[i], p) - f0) / f0)
    return worst


def ks_check(n: int = 100_000, seed: int = 0, c: float = 0.5) -> Check:
    batch = sample_batch(n, MaxwellParams(c), SeedSpec(seed))
    return Check("ks_statistic", ks_statistic(batch), KS_COEFFICIENT_1PCT / math.sqrt(n))


def run_all(tolerances=None, ks_n: int = 100_000, seed: int = 0) -> list:
    tol = dict(DEFAULT_TOLERANCES)
    tol.update({k: v for k, v in (tolerances or {}).items() if v is not None})
    return [
        Check("gauss_integral", gauss_integral_residual(), tol["gauss_integral"]),
        Check("normalization", normalization_residual(), tol["normalization"]),
        Check("mean_energy", mean_energy_residual(), tol["mean_energy"]),
        Check("mean_energy_quadrature", mean_energy_quadrature_residual(),
              tol["mean_energy_quadrature"]),
        Check("separability", separability_max_residual(seed=seed), tol["separability"]),
        Check("isotropy", isotropy_max_residual(seed=seed), tol["isotropy"]),
        ks_check(ks_n, seed),
    ]

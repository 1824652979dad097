"""Maxwell-Boltzmann kinetics: analytic distribution, quadrature oracles,
seeded Monte Carlo, activation-energy tails and random walks."""

from .distribution import (
    AMU_KG,
    BOLTZMANN_SI,
    MaxwellParams,
    ThermalState,
    UnitSystem,
    VelocityVector,
    component_density,
    density,
    mean_kinetic_energy,
    params_from_state,
    separability_residual,
    speed_cdf,
    speed_density,
)
from .errors import ConvergenceError, DomainError, InputError
from .kinetics import (
    ActivationSpec,
    SensitivityReport,
    TailModel,
    fever_report,
    reaction_time,
    solve_lambda,
    tail_fraction,
    temperature_sensitivity,
)
from .quadrature import (
    QuadratureResult,
    gaussian_moment,
    integrate,
    integrate_nd,
    q_gamma_3half,
)
from .random_walk import (
    WalkSpec,
    WalkSummary,
    diffusion_coefficient_from_walk,
    diffusion_length,
    simulate_walks,
)
from .rng import SeedSpec
from .sampler import (
    SampleBatch,
    empirical_moments,
    empirical_tail_fraction,
    ks_statistic,
    sample_batch,
)

__version__ = "0.1.0"

"""Fast-particle fractions, reaction times and temperature sensitivity.

Two tail models are offered side by side:

* ``exact``: the Maxwell energy tail Q(3/2, lam), lam = E_a / kT;
* ``exponential``: the shorthand exp(-lam), kept because the classic
  back-of-the-envelope fever estimate is made with it.
"""
from __future__ import annotations

import enum
import math
from decimal import Decimal
from dataclasses import dataclass
from typing import Union

from .distribution import ThermalState
from .errors import DomainError
from .quadrature import q_gamma_3half

DEFAULT_COLLISION_TIME = 1e-9  # s
MIN_TARGET_FRACTION = 1e-300
LAMBDA_BRACKET = (0.0, 800.0)
MAX_BISECTIONS = 200


class TailModel(str, enum.Enum):
    EXACT = "exact"
    EXPONENTIAL = "exponential"


@dataclass(frozen=True)
class ActivationSpec:
    lam: float

    def __post_init__(self):
        if not (math.isfinite(self.lam) and self.lam >= 0):
            raise DomainError("lambda must be a finite non-negative number")

    @classmethod
    def from_energy(cls, e_activation: float, state: ThermalState) -> "ActivationSpec":
        if not e_activation >= 0:
            raise DomainError("activation energy must be non-negative")
        return cls(e_activation / state.kT)


@dataclass(frozen=True)
class SensitivityReport:
    lambda_base: float
    t_base: float
    t_new: float
    lambda_new: float
    fraction_base: float
    fraction_new: float
    ratio: float
    relative_change: float
    model: TailModel = TailModel.EXACT

    @property
    def percent_change(self) -> float:
        return 100.0 * self.relative_change


def _lam(a: Union[ActivationSpec, float]) -> float:
    return a.lam if isinstance(a, ActivationSpec) else ActivationSpec(float(a)).lam


def tail_fraction(a: Union[ActivationSpec, float], model=TailModel.EXACT) -> float:
    """Fraction of molecules with kinetic energy above lam * kT."""
    lam = _lam(a)
    if TailModel(model) is TailModel.EXPONENTIAL:
        return math.exp(-lam)
    return q_gamma_3half(lam)


def solve_lambda(target_fraction: float, model=TailModel.EXACT) -> float:
    """Invert :func:`tail_fraction`; bisection for the exact model."""
    if not (MIN_TARGET_FRACTION <= target_fraction <= 1.0):
        raise DomainError(
            f"target fraction must lie in [{MIN_TARGET_FRACTION:g}, 1]")
    if target_fraction == 1.0:
        return 0.0
    if TailModel(model) is TailModel.EXPONENTIAL:
        return -math.log(target_fraction)
    lo, hi = LAMBDA_BRACKET
    for _ in range(MAX_BISECTIONS):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if q_gamma_3half(mid) > target_fraction:
            lo = mid
        else:
            hi = mid
    # pick the endpoint whose tail is closer to the target
    if abs(q_gamma_3half(lo) - target_fraction) <= abs(q_gamma_3half(hi) - target_fraction):
        return lo
    return hi


def reaction_time(fraction: float, collision_time: float = DEFAULT_COLLISION_TIME) -> float:
    """Order-of-magnitude reaction time: one chance per collision time.

    The quotient is taken between the shortest decimal forms of the inputs,
    so decimal inputs such as 1e-9 / 1e-12 give exactly 1000.0.
    """
    if not (0.0 < fraction <= 1.0):
        raise DomainError("fraction must lie in (0, 1]")
    if not (collision_time > 0 and math.isfinite(collision_time)):
        raise DomainError("collision time must be positive")
    return float(Decimal(repr(float(collision_time))) / Decimal(repr(float(fraction))))


def temperature_sensitivity(lambda_base: float, t_base: float, t_new: float,
                            model=TailModel.EXACT) -> SensitivityReport:
    """Change of the fast fraction when the temperature moves t_base -> t_new.

    lam scales as 1/T, so lambda_new = lambda_base * (t_base / t_new).
    """
    if not (t_base > 0 and t_new > 0):
        raise DomainError("temperatures must be positive")
    model = TailModel(model)
    lam_new = lambda_base * (t_base / t_new)
    f0 = tail_fraction(lambda_base, model)
    f1 = tail_fraction(lam_new, model)
    if f0 == 0.0:
        raise DomainError("baseline tail fraction underflows")
    ratio = f1 / f0
    return SensitivityReport(
        lambda_base=float(lambda_base), t_base=float(t_base), t_new=float(t_new),
        lambda_new=lam_new, fraction_base=f0, fraction_new=f1,
        ratio=ratio, relative_change=ratio - 1.0, model=model)


def fever_report(t_base: float = 310.0, t_new: float = 311.0,
                 baseline_fraction: float = 1e-12,
                 model=TailModel.EXACT) -> SensitivityReport:
    """Solve lam from the baseline fraction, then move the temperature."""
    lam = solve_lambda(baseline_fraction, model)
    return temperature_sensitivity(lam, t_base, t_new, model)

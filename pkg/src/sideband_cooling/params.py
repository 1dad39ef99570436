"""Physical parameters of a laser-cooled trapped two-level particle.

All rates are dimensionless multiples of a reference rate declared by
``PhysParams.unit``: ``"gamma"`` (Gamma = 1, natural for weak confinement) or
``"nu"`` (nu = 1, natural for strong confinement).  Changing the reference is
always explicit, see :meth:`PhysParams.in_units`.
"""
from __future__ import annotations

import dataclasses
import math
import warnings
from dataclasses import dataclass

from .errors import LambDickeWarning, NonPositiveRate, OutOfRange

UNITS = ("gamma", "nu")
ETA_WARN = 0.3


@dataclass(frozen=True)
class PhysParams:
    """Lamb-Dicke parameter, trap frequency and laser/atom rates.

    ``delta > 0`` is red detuning (cooling side).  ``d3`` is the magnitude of
    the dipole component along the laser axis.
    """

    eta: float
    nu: float
    gamma: float = 1.0
    omega: float = 0.0
    delta: float = 0.0
    d3: float = 0.0
    unit: str = "gamma"

    def replace(self, **changes) -> "PhysParams":
        return dataclasses.replace(self, **changes)

    @property
    def rates(self) -> tuple[float, float, float, float]:
        return (self.nu, self.gamma, self.omega, self.delta)

    def scaled(self, factor: float) -> "PhysParams":
        """Multiply every rate by ``factor`` (the unit label is kept)."""
        return self.replace(nu=self.nu * factor, gamma=self.gamma * factor,
                            omega=self.omega * factor, delta=self.delta * factor)

    def in_units(self, unit: str) -> "PhysParams":
        """Re-express all rates in units of Gamma or of nu."""
        if unit not in UNITS:
            raise OutOfRange(f"unknown unit {unit!r}, expected one of {UNITS}")
        ref = self.gamma if unit == "gamma" else self.nu
        if ref <= 0:
            raise NonPositiveRate(f"cannot convert to unit {unit!r}: reference rate is {ref}")
        return self.scaled(1.0 / ref).replace(unit=unit)

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


def validate(p: PhysParams) -> PhysParams:
    """Check the parameter invariants and return ``p`` unchanged.

    Emits :class:`LambDickeWarning` (not an error) for ``eta > 0.3``.
    """
    if not p.gamma > 0:
        raise NonPositiveRate(f"gamma must be > 0, got {p.gamma}")
    if not p.nu > 0:
        raise NonPositiveRate(f"nu must be > 0, got {p.nu}")
    if not p.eta >= 0:
        raise OutOfRange(f"eta must be >= 0, got {p.eta}")
    if not p.omega >= 0:
        raise OutOfRange(f"omega must be >= 0, got {p.omega}")
    if not 0.0 <= p.d3 <= 1.0:
        raise OutOfRange(f"d3 must lie in [0, 1], got {p.d3}")
    if not math.isfinite(p.delta):
        raise OutOfRange(f"delta must be finite, got {p.delta}")
    if p.unit not in UNITS:
        raise OutOfRange(f"unit must be one of {UNITS}, got {p.unit!r}")
    ref = p.gamma if p.unit == "gamma" else p.nu
    if abs(ref - 1.0) > 1e-12:
        raise OutOfRange(f"unit={p.unit!r} requires {p.unit} == 1, got {ref}; "
                         "use PhysParams.in_units() to convert")
    if p.eta > ETA_WARN:
        warnings.warn(f"eta={p.eta} > {ETA_WARN}: expansions in the Lamb-Dicke "
                      "parameter are unreliable", LambDickeWarning, stacklevel=2)
    return p


def theta(d3: float) -> float:
    """Geometric dipole factor (7 - d3**2) / 5 entering the recoil heating."""
    if not 0.0 <= d3 <= 1.0:
        raise OutOfRange(f"d3 must lie in [0, 1], got {d3}")
    return (7.0 - d3 * d3) / 5.0


def alpha_from_theta(theta_value: float, d3: float) -> float:
    """Invert theta = 1 + alpha - d3**2/5 for the literature's alpha."""
    return theta_value - 1.0 + d3 * d3 / 5.0


def mu_squared(p: PhysParams) -> float:
    """2 Omega^2 + Gamma^2 + 4 Delta^2."""
    return 2.0 * p.omega ** 2 + p.gamma ** 2 + 4.0 * p.delta ** 2


@dataclass(frozen=True)
class Thresholds:
    weak: float = 0.1          # nu / Gamma at or below -> Weak
    strong_gamma: float = 0.1  # Gamma / nu at or below (and ...)
    strong_omega: float = 0.3  # ... Omega / nu at or below -> Strong


@dataclass(frozen=True)
class Regime:
    tag: str  # "Weak", "Strong" or "Intermediate"
    nu_over_gamma: float
    drive_over_trap: float  # max(Omega, Gamma) / min(nu, |Delta|)


def classify_regime(p: PhysParams, thresholds: Thresholds = Thresholds()) -> Regime:
    nu_g = p.nu / p.gamma
    slow = min(p.nu, abs(p.delta))
    drive = max(p.omega, p.gamma) / slow if slow > 0 else math.inf
    if nu_g <= thresholds.weak:
        tag = "Weak"
    elif p.gamma / p.nu <= thresholds.strong_gamma and p.omega / p.nu <= thresholds.strong_omega:
        tag = "Strong"
    else:
        tag = "Intermediate"
    return Regime(tag, nu_g, drive)

"""Closed-form stationary phonon numbers and cooling rates.

The general results hold in zeroth (phonon number) resp. second (cooling
rate) order in eta for arbitrary Rabi frequency; the ``*_weak``,
``*_strong``, ``*_small_omega`` and ``*_sideband`` variants are their
regime limits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DivisionByZero, NoClosedForm, PoleAtSideband
from .params import PhysParams, Regime, mu_squared, theta

POLE_TOL = 1e-12


@dataclass(frozen=True)
class XiFrequencies:
    xi1_4: float
    xi2_6: float
    xi3_6: float


@dataclass(frozen=True)
class CoolingSummary:
    m_ss: float
    gamma_c: float
    c: float | None = None

    @property
    def heating(self) -> bool:
        """Negative stationary phonon number: the model predicts heating."""
        return self.m_ss < 0


def _need_nonzero(**values):
    for name, v in values.items():
        if v == 0:
            raise DivisionByZero(f"{name} must be non-zero")


def xi_frequencies(p: PhysParams) -> XiFrequencies:
    """The three polynomial frequency combinations, Horner-ordered in Omega^2."""
    g2, n2, d = p.gamma ** 2, p.nu ** 2, p.delta
    d2, o2, nu = d * d, p.omega ** 2, p.nu
    gd = g2 + 4.0 * d2

    xi1 = gd * (g2 + n2) + o2 * (2.0 * (g2 + 3.0 * n2))

    # (Gamma^2 + 4 D^2)^2 + 8 (Gamma^2 - 4 D^2) nu^2 + 16 nu^4, factored so it
    # does not cancel on the sideband D = nu when Gamma << nu
    x2_0 = (g2 + n2) * (g2 + 4.0 * (d - nu) ** 2) * (g2 + 4.0 * (d + nu) ** 2)
    x2_1 = 4.0 * ((g2 + 2.0 * n2) * gd - 8.0 * n2 * n2)
    x2_2 = 4.0 * (g2 + 4.0 * n2)
    xi2 = x2_0 + o2 * (x2_1 + o2 * x2_2)

    x3_0 = 2.0 * (2.0 * d + nu) * (g2 + n2) * (g2 + 4.0 * (d - nu) ** 2) * nu
    x3_1 = (3.0 * g2 * g2 - (4.0 * d2 - 8.0 * d * nu - 7.0 * n2) * g2
            - 4.0 * (d2 - 6.0 * d * nu + 5.0 * n2) * n2)
    xi3 = x3_0 + o2 * x3_1
    return XiFrequencies(xi1, xi2, xi3)


def m_ss_full(p: PhysParams) -> float:
    """Stationary mean phonon number for arbitrary Omega (zeroth order in eta)."""
    _need_nonzero(nu=p.nu, delta=p.delta)
    xi = xi_frequencies(p)
    return (xi.xi2_6 * theta(p.d3) - 2.0 * xi.xi3_6) / (16.0 * p.nu * p.delta * xi.xi1_4)


def m_ss_small_omega(p: PhysParams) -> float:
    """Omega -> 0 limit of :func:`m_ss_full`; independent of Omega."""
    _need_nonzero(nu=p.nu, delta=p.delta)
    g2, d, nu = p.gamma ** 2, p.delta, p.nu
    d2, n2 = d * d, nu * nu
    gd = g2 + 4.0 * d2
    first = (g2 * g2 + 8.0 * g2 * (d2 + n2) + 16.0 * (d2 - n2) ** 2) / (16.0 * nu * d * gd)
    second = (2.0 * d + nu) / (4.0 * d * gd) * (g2 + 4.0 * (d - nu) ** 2)
    return first * theta(p.d3) - second


def m_ss_weak(p: PhysParams) -> float:
    """Weak-confinement stationary phonon number (nu << Gamma)."""
    _need_nonzero(nu=p.nu, delta=p.delta)
    mu2 = mu_squared(p)
    d, nu = p.delta, p.nu
    return (mu2 * theta(p.d3) / (16.0 * d * nu)
            - (3.0 * p.gamma ** 2 - 4.0 * d * d) * p.omega ** 2 / (8.0 * mu2 * nu * d))


def m_ss_weak_optimal(p: PhysParams) -> float:
    """Weak confinement at Delta = Gamma/2 and Omega << Gamma: Gamma theta / 4 nu."""
    _need_nonzero(nu=p.nu)
    return p.gamma * theta(p.d3) / (4.0 * p.nu)


def m_ss_strong(p: PhysParams) -> float:
    """Strong-confinement stationary phonon number (Gamma, Omega << nu, Delta)."""
    _need_nonzero(nu=p.nu, delta=p.delta)
    d, nu = p.delta, p.nu
    return (d - nu) ** 2 / (4.0 * nu * d ** 3) * ((d + nu) ** 2 * theta(p.d3) - (2.0 * d + nu) * nu)


def m_ss_sideband(p: PhysParams) -> float:
    """Resolved-sideband limit Delta = nu: (Gamma^2 / 16 nu^2)(4 theta - 3)."""
    _need_nonzero(nu=p.nu)
    return p.gamma ** 2 / (16.0 * p.nu ** 2) * (4.0 * theta(p.d3) - 3.0)


def gamma_c_full(p: PhysParams) -> float:
    """Effective cooling rate, second order in eta, any Omega.  Odd in Delta."""
    mu2 = mu_squared(p)
    xi = xi_frequencies(p)
    return (16.0 * p.eta ** 2 * p.nu * p.delta * p.gamma * p.omega ** 2 / mu2) * xi.xi1_4 / xi.xi2_6


def gamma_c_small_omega(p: PhysParams) -> float:
    k = p.eta ** 2 * p.gamma * p.omega ** 2
    g2 = p.gamma ** 2
    return k / (g2 + 4.0 * (p.delta - p.nu) ** 2) - k / (g2 + 4.0 * (p.delta + p.nu) ** 2)


def gamma_c_weak_optimal(p: PhysParams) -> float:
    """Weak confinement, Delta = Gamma/2, weak driving: 2 eta^2 nu Omega^2 / Gamma^2."""
    return 2.0 * p.eta ** 2 * p.nu * p.omega ** 2 / p.gamma ** 2


def gamma_c_sideband(p: PhysParams) -> float:
    """Strong confinement at Delta = nu: eta^2 Omega^2 / Gamma."""
    return p.eta ** 2 * p.omega ** 2 / p.gamma


def gamma_c_strong_pair(p: PhysParams) -> tuple[float, float]:
    """(gamma_c, c) of the scalar strong-confinement cooling equation.

    Raises PoleAtSideband within ``POLE_TOL`` of Delta = +-nu; use
    :func:`gamma_c_full` there instead.
    """
    d, nu = p.delta, p.nu
    if d == 0:
        raise DivisionByZero("delta must be non-zero")
    if abs(d - nu) < POLE_TOL or abs(d + nu) < POLE_TOL:
        raise PoleAtSideband(f"delta={d} sits on the sideband pole at +-nu={nu}")
    k = p.eta ** 2 * p.gamma * p.omega ** 2
    gamma_c = k / (4.0 * (d - nu) ** 2) - k / (4.0 * (d + nu) ** 2)
    c = k / (4.0 * d * d) * (theta(p.d3) + d * d / (d + nu) ** 2 - 1.0)
    return gamma_c, c


def cooling_summary(p: PhysParams) -> CoolingSummary:
    return CoolingSummary(m_ss_full(p), gamma_c_full(p))


def mean_phonon_trajectory(m0, m_ss, gamma_c, t):
    """m(t) = [m0 - m_ss] exp(-gamma_c t) + m_ss; ``t`` may be an array."""
    t = np.asarray(t, dtype=float)
    out = (m0 - m_ss) * np.exp(-gamma_c * t) + m_ss
    return out if out.ndim else float(out)


def optimal_detuning(regime: Regime | str, p: PhysParams) -> float:
    """Detuning minimising m_ss: Gamma/2 (weak) or nu (strong)."""
    tag = regime if isinstance(regime, str) else regime.tag
    if tag == "Weak":
        return 0.5 * p.gamma
    if tag == "Strong":
        return p.nu
    raise NoClosedForm(f"no closed-form optimal detuning in the {tag} regime; "
                       "use grid_search_detuning")


def grid_search_detuning(p: PhysParams, deltas: Sequence[float]) -> float:
    """Detuning on ``deltas`` with the smallest positive m_ss_full."""
    best, best_m = math.nan, math.inf
    for d in deltas:
        m = m_ss_full(p.replace(delta=float(d)))
        if 0 <= m < best_m:
            best, best_m = float(d), m
    if math.isnan(best):
        raise NoClosedForm("no detuning on the grid gives a positive stationary phonon number")
    return best

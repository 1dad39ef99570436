"""Laser sideband cooling of a single trapped two-level particle.

Rate equations for the phonon and coherence expectation values, their
weak/strong confinement reductions, closed-form stationary phonon numbers
and cooling rates, and a truncated Fock-space master equation to check them
against.
"""
from ._version import __version__
from .analytic import (cooling_summary, gamma_c_full, gamma_c_small_omega, m_ss_full,
                       m_ss_small_omega, m_ss_strong, m_ss_weak, mean_phonon_trajectory,
                       optimal_detuning, xi_frequencies)
from .errors import (ConfigError, CoolingError, LambDickeWarning, NumericalError,
                     ParameterError, SingularGenerator, TruncationLeak)
from .params import PhysParams, classify_regime, theta, validate
from .rate_eqs import (assemble_generator, initial_state, integrate, integrate_reduced,
                       integrate_strong, reduced_weak_system, stationary_phonon_number,
                       stationary_state)
from .stability import rotation_check, spectrum
from .timeseries import TimeSeries

__all__ = [
    "__version__", "PhysParams", "validate", "classify_regime", "theta",
    "xi_frequencies", "m_ss_full", "m_ss_small_omega", "m_ss_weak", "m_ss_strong",
    "gamma_c_full", "gamma_c_small_omega", "cooling_summary", "mean_phonon_trajectory",
    "optimal_detuning", "assemble_generator", "initial_state", "integrate",
    "stationary_state", "stationary_phonon_number", "reduced_weak_system",
    "integrate_reduced", "integrate_strong", "spectrum", "rotation_check", "TimeSeries",
    "CoolingError", "ParameterError", "ConfigError", "NumericalError", "SingularGenerator",
    "TruncationLeak", "LambDickeWarning",
]

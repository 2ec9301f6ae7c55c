"""Computational laboratory for discrepancies in the distribution of Gaussian primes."""

__version__ = "0.1.0"

from .decomp import AnglePrime, angle_prime, sqrt_minus_one, two_squares
from .errors import ConfigError, ConsistencyError
from .fourier import FourierSpec, coeff_numeric, coeff_phi1, coeff_phi2
from .gint import GaussInt, divisible_by_two_plus_two_i, gauss_mul, normalize_generator
from .hecke import gauss_sum_sign, mean_value, sign_psi, sign_xi
from .race import HistogramSpec, RaceSeries, e_phi, f_phi, li, log_density
from .sieve import SieveConfig, stream_primes
from .zdist import ZeroDatum, aggregate_ord, g_eval, simulate_distribution, variance_formula

__all__ = [
    "AnglePrime",
    "ConfigError",
    "ConsistencyError",
    "FourierSpec",
    "GaussInt",
    "HistogramSpec",
    "RaceSeries",
    "SieveConfig",
    "ZeroDatum",
    "aggregate_ord",
    "angle_prime",
    "coeff_numeric",
    "coeff_phi1",
    "coeff_phi2",
    "divisible_by_two_plus_two_i",
    "e_phi",
    "f_phi",
    "g_eval",
    "gauss_mul",
    "gauss_sum_sign",
    "li",
    "log_density",
    "mean_value",
    "normalize_generator",
    "sign_psi",
    "sign_xi",
    "simulate_distribution",
    "sqrt_minus_one",
    "stream_primes",
    "two_squares",
    "variance_formula",
]

"""Exact moments, cumulants and characteristic function of Re tr(A U) for Haar U.

The statistic X_N = Re tr(A_N U) / sigma with U Haar on U(N) and
sigma^2 = tr(A A*) / (2N) tends to a standard normal.  This package computes
its law exactly (Weingarten calculus over the symmetric group) and
numerically (Bessel determinants, Monte Carlo), and measures the rate.
"""

__version__ = "0.1.0"

from .partitions import Partition, enumerate_partitions
from .characters import character, character_table
from .weingarten import weingarten_character, weingarten_recursive, weingarten_table
from .moments import SpectrumSpec, make_spectrum, moment, moment_table, trace_moment_integral
from .cumulants import cumulant_table, cumulants_from_moments, k_coefficients, kappa_closed_form
from .charfun import be_ratio, density_difference, kolmogorov_upper_bound, psi_n
from .smoothing import BumpKernel, bump_ft_asymptotic, bump_ft_numeric, smoothing_floor
from .montecarlo import kolmogorov_distance, rate_fit, sample_trace_stat, tv_estimate
from .config import ExperimentConfig

__all__ = [
    "__version__",
    "Partition",
    "enumerate_partitions",
    "character",
    "character_table",
    "weingarten_character",
    "weingarten_recursive",
    "weingarten_table",
    "SpectrumSpec",
    "make_spectrum",
    "moment",
    "moment_table",
    "trace_moment_integral",
    "cumulant_table",
    "cumulants_from_moments",
    "k_coefficients",
    "kappa_closed_form",
    "be_ratio",
    "density_difference",
    "kolmogorov_upper_bound",
    "psi_n",
    "BumpKernel",
    "bump_ft_asymptotic",
    "bump_ft_numeric",
    "smoothing_floor",
    "kolmogorov_distance",
    "rate_fit",
    "sample_trace_stat",
    "tv_estimate",
    "ExperimentConfig",
]

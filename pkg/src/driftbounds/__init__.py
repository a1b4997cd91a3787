"""Nonasymptotic error bounds and simulation schedules for MCMC under a geometric drift condition."""

__version__ = "0.1.0"

from .baxendale import ChainClass, ErgodicityCertificate, big_m, certificate, rho
from .bounds import MseInputs, Schedule, asym_var_bound, median_runs, mse_bound, schedule_ma, schedule_one_walk
from .drift import (
    Deterministic,
    DriftParams,
    FunctionNorms,
    GeneralInit,
    NuConcentratedOnC,
    NuUnknown,
    NuVIntegralBound,
    Stationary,
    fc_norm_bound,
    pi_v_bound,
    transform_r,
    validate,
)
from .errors import ConvergenceError, DomainError

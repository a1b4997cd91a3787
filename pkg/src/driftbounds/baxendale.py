"""Explicit V-uniform ergodicity constants from drift parameters.

Under the drift condition ``|||P^n - pi|||_V <= M gamma^n`` holds for every
``gamma`` in ``(rho, 1)``. This module evaluates ``rho`` and ``M(gamma)`` in the
atomic (``beta_tilde == 1``) and nonatomic cases, for general, reversible and
reversible-positive kernels. Formulas are written term by term so they can be
read against their published form.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

from .drift import DriftParams, NuConcentratedOnC, NuVIntegralBound, validate
from .errors import DomainError
from .numerics import bisect, scan_then_golden

_E2 = math.e ** 2


class ChainClass(enum.Enum):
    GENERAL = "general"
    REVERSIBLE = "reversible"
    REVERSIBLE_POSITIVE = "reversible_positive"


@dataclass(frozen=True)
class ErgodicityCertificate:
    rho: float
    gamma: float
    m_const: float
    chain_class: ChainClass
    params: DriftParams


def alpha_exponents(params: DriftParams) -> Tuple[float, float]:
    if params.atomic:
        raise DomainError("alpha exponents are undefined in the atomic case (beta_tilde = 1)")
    bt, lam, k, b = params.beta_tilde, params.lam, params.k_const, params.beta
    log_inv_lam = math.log(1 / lam)
    alpha1 = 1 + math.log((k - bt) / (1 - b)) / log_inv_lam
    nu = params.nu_on_c
    if isinstance(nu, NuConcentratedOnC):
        alpha2 = 1.0
    elif isinstance(nu, NuVIntegralBound):
        alpha2 = 1 + math.log(nu.k_tilde) / log_inv_lam
    else:
        alpha2 = 1 + math.log(k / bt) / log_inv_lam
    return alpha1, alpha2


def r0_bound(params: DriftParams) -> float:
    alpha1, _ = alpha_exponents(params)
    if alpha1 <= 0:
        raise DomainError(f"alpha1 = {alpha1} <= 0: (K - beta_tilde) / (1 - beta) is too small")
    return min(1 / params.lam, (1 - params.beta_tilde) ** (-1 / alpha1))


def l_of_r(params: DriftParams, R: float) -> float:
    """``beta_tilde R^a2 / (1 - (1 - beta_tilde) R^a1)``; infinite once the denominator vanishes."""
    r0 = r0_bound(params)
    if not 1 < R <= r0 * (1 + 1e-14):
        raise DomainError(f"R must lie in (1, R0={r0}], got {R}")
    return _l_raw(params, R)


def _l_raw(params: DriftParams, R: float) -> float:
    alpha1, alpha2 = alpha_exponents(params)
    denom = 1 - (1 - params.beta_tilde) * R ** alpha1
    if denom <= 0:
        return math.inf
    return params.beta_tilde * R ** alpha2 / denom


def _r1_lhs(u: float, R: float) -> float:
    # u = r - 1, kept separately so r close to 1 loses no digits.
    return u / ((1 + u) * math.log(R / (1 + u)) ** 2)


def _r1_rhs(beta: float, R: float, L: float) -> float:
    return _E2 * beta * (R - 1) / (8 * (L - 1))


def solve_r1_offset(beta: float, R: float, L: float) -> float:
    """``R1 - 1``, where ``R1`` is the unique ``r`` in ``(1, R)`` with
    ``(r-1)/(r log^2(R/r)) = e^2 beta (R-1) / (8 (L-1))``.

    ``L = inf`` is the limit where the right side vanishes, giving ``r = R``.
    """
    if not (beta > 0 and R > 1 and L > 1):
        raise DomainError(f"solve_r1 needs beta>0, R>1, L>1; got {beta}, {R}, {L}")
    if math.isinf(L):
        return R - 1
    rhs = _r1_rhs(beta, R, L)
    # Negative at u=0, equal to R-1 > 0 at u=R-1.
    return bisect(lambda u: u - rhs * (1 + u) * math.log(R / (1 + u)) ** 2, 0.0, R - 1)


def solve_r1(beta: float, R: float, L: float) -> float:
    return 1 + solve_r1_offset(beta, R, L)


def r1_residual(beta: float, R: float, L: float, u: float) -> float:
    """Relative residual ``|lhs/rhs - 1|`` of the R1 equation at ``r = 1 + u``."""
    return abs(_r1_lhs(u, R) / _r1_rhs(beta, R, L) - 1)


def k1(r: float, beta: float, R: float, L: float) -> float:
    if not 1 < r < R:
        raise DomainError(f"K1 needs 1 < r < R, got r={r}, R={R}")
    n = (L - 1) / (R - 1)
    log_rr = math.log(R / r)
    corr = 8 * n / _E2 * (r - 1) / r / log_rr ** 2
    den_bracket = beta - corr
    if den_bracket <= 0:
        raise DomainError("K1 denominator is nonpositive: r is not below R1")
    num = 2 * beta + 2 * math.log(n) / log_rr - corr
    return num / ((r - 1) * den_bracket)


def _r_tilde(params: DriftParams) -> float:
    """Maximiser over ``(1, R0)`` of ``R1(beta, R, L(R))``."""
    r0 = r0_bound(params)
    hi = r0 * (1 - 1e-9)

    def neg_r1(R: float) -> float:
        return -solve_r1(params.beta, R, l_of_r(params, R))

    return scan_then_golden(neg_r1, 1.0, hi, tol=1e-9, points=64)


def _r2(params: DriftParams) -> float:
    b, lam, k = params.beta, params.lam, params.k_const
    if params.atomic:
        if k <= lam + 2 * b:
            return 1 / lam
        expo = 1 + math.log(k) / math.log(1 / lam)
        r_s = bisect(lambda r: r ** expo - 1 - 2 * b * r, 1.0, 1 / lam)
        return min(1 / lam, r_s)
    r0 = r0_bound(params)
    if l_of_r(params, r0) <= 1 + 2 * b * r0:
        return r0
    return bisect(lambda r: _l_raw(params, r) - 1 - 2 * b * r, 1.0, r0)


@lru_cache(maxsize=4096)
def _regime(params: DriftParams, chain_class: ChainClass) -> Tuple[float, float]:
    """``(rho, R_tilde)``; ``R_tilde`` is nan when the regime does not use it."""
    validate(params)
    nan = math.nan
    if chain_class is ChainClass.GENERAL:
        if params.atomic:
            return 1 / solve_r1(params.beta, 1 / params.lam, params.k_const / params.lam), nan
        rt = _r_tilde(params)
        return 1 / solve_r1(params.beta, rt, l_of_r(params, rt)), rt
    if chain_class is ChainClass.REVERSIBLE:
        return 1 / _r2(params), nan
    if params.atomic:
        return params.lam, nan
    return 1 / r0_bound(params), nan


def rho(params: DriftParams, chain_class: ChainClass) -> float:
    return _regime(params, chain_class)[0]


def big_m(params: DriftParams, gamma: float, chain_class: ChainClass) -> float:
    rho_, r_tilde = _regime(params, chain_class)
    if not gamma > rho_:
        raise DomainError(f"gamma must exceed rho (gamma={gamma}, rho={rho_})")
    if not gamma < 1:
        raise DomainError(f"gamma must be < 1, got {gamma}")
    lam, k, bt, b = params.lam, params.k_const, params.beta_tilde, params.beta

    if params.atomic:
        if chain_class is ChainClass.GENERAL:
            kx = k1(1 / gamma, b, 1 / lam, k / lam)
        else:
            kx = 1 + 1 / (gamma - rho_)
        return (
            max(lam, k - lam / gamma) / (gamma - lam)
            + k * (k - lam / gamma) / (gamma * (gamma - lam)) * kx
            + (k - lam / gamma) * max(lam, k - lam) / ((gamma - lam) * (1 - lam))
            + lam * (k - 1) / ((gamma - lam) * (1 - lam))
        )

    a1, a2 = alpha_exponents(params)
    if chain_class is ChainClass.GENERAL:
        kx = k1(1 / gamma, b, r_tilde, l_of_r(params, r_tilde))
    else:
        kx = 1 + math.sqrt(bt) / (gamma - rho_)
    d = 1 - (1 - bt) * gamma ** (-a1)
    if d <= 0:
        raise DomainError("1 - (1 - beta_tilde) gamma^-alpha1 must be positive")
    return (
        gamma ** (-a2 - 1) * (k * gamma - lam) / ((gamma - lam) * d ** 2)
        * (bt * max(lam, k - lam) / (1 - lam)
           + (1 - bt) * (gamma ** (-a1) - 1) / (1 / gamma - 1))
        + max(lam, k - lam / gamma) / (gamma - lam)
        + bt * gamma ** (-a2 - 2) * k * (k * gamma - lam) / ((gamma - lam) * d ** 2) * kx
        + gamma ** (-a2) * lam * (k - 1) / ((1 - lam) * (gamma - lam) * d)
        + k * (k * gamma - lam - bt * (gamma - lam)) / (gamma ** 2 * (gamma - lam) * d)
        + (k - lam - bt * (1 - lam)) / ((1 - lam) * (1 - gamma))
        * ((gamma ** (-a2) - 1) + (1 - bt) * (gamma ** (-a1) - 1) / bt)
    )


def certificate(params: DriftParams, gamma: float, chain_class: ChainClass) -> ErgodicityCertificate:
    m = big_m(params, gamma, chain_class)
    return ErgodicityCertificate(rho(params, chain_class), gamma, m, chain_class, params)

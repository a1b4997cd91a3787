"""MSE bounds for trajectory averages and (eps, alpha) simulation schedules.

The one-walk estimator averages ``f`` over steps ``t .. t+n-1`` of a single
trajectory. Chebyshev's inequality turns an MSE bound below ``eps**2 * alpha``
into ``P(|I_hat - I| <= eps) >= 1 - alpha``. The median of ``m`` independent
runs, each good at level ``a < 1/2``, is good at level ``alpha`` once ``m`` is
large enough.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Tuple

from .baxendale import ErgodicityCertificate
from .drift import Deterministic, FunctionNorms, GeneralInit, StartSpec, Stationary
from .errors import DomainError

DEFAULT_A = 0.11969


@dataclass(frozen=True)
class MseInputs:
    norms: FunctionNorms
    cert_v: ErgodicityCertificate
    cert_vr: ErgodicityCertificate
    r: float
    start: StartSpec
    n: int
    t: int = 0

    def __post_init__(self):
        _check_r(self.r, self.norms.p)
        if self.n < 1:
            raise DomainError(f"n must be >= 1, got {self.n}")
        if self.t < 0:
            raise DomainError(f"t must be >= 0, got {self.t}")


@dataclass(frozen=True)
class Schedule:
    t: int
    n: int
    m: int = 1
    audit: Dict[str, float] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.m < 1 or self.m % 2 == 0:
            raise DomainError(f"m must be an odd positive integer, got {self.m}")

    @property
    def total_cost(self) -> int:
        return self.m * (self.t + self.n)


def _check_r(r: float, p: float) -> None:
    if p < 2:
        raise DomainError(f"p must be >= 2, got {p}")
    lo = p / (p - 1)
    if not lo - 1e-12 <= r <= p + 1e-12:
        raise DomainError(f"r must lie in [p/(p-1), p] = [{lo}, {p}], got {r}")


def autocorr_factor(cert_vr: ErgodicityCertificate) -> float:
    g = cert_vr.gamma
    return 1 + 2 * cert_vr.m_const * g / (1 - g)


def _init_term(start: StartSpec, cert_v: ErgodicityCertificate, t: int) -> float:
    """Bound on ``||pi_t - pi||_V`` style initialisation penalty, before ``M / (n (1-gamma))``."""
    if isinstance(start, Stationary):
        return 0.0
    base = start.v_at_x if isinstance(start, Deterministic) else start.min_bound
    if t == 0:
        return base
    return cert_v.m_const * cert_v.gamma ** t * base


def mse_bound(inputs: MseInputs) -> float:
    cv = inputs.cert_v
    lead = inputs.norms.fc_norm_2p / inputs.n * autocorr_factor(inputs.cert_vr)
    init = _init_term(inputs.start, cv, inputs.t)
    return lead * (inputs.norms.pi_v + cv.m_const * init / (inputs.n * (1 - cv.gamma)))


def asym_var_bound(norms: FunctionNorms, cert_vr: ErgodicityCertificate, r: float) -> float:
    """Upper bound on the CLT asymptotic variance of the trajectory average."""
    _check_r(r, norms.p)
    return norms.pi_v * norms.fc_norm_2p * autocorr_factor(cert_vr)


def _check_eps_alpha(eps: float, alpha: float) -> None:
    if not eps > 0:
        raise DomainError(f"eps must be positive, got {eps}")
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")


def schedule_terms(
    norms: FunctionNorms,
    cert_v: ErgodicityCertificate,
    cert_vr: ErgodicityCertificate,
    r: float,
    eps: float,
    alpha: float,
    start: StartSpec,
) -> Tuple[float, float, float]:
    """``(b, c, c_tilde)``: stationary-variance term and the two start penalties."""
    _check_r(r, norms.p)
    _check_eps_alpha(eps, alpha)
    common = norms.fc_norm_2p / (eps ** 2 * alpha) * autocorr_factor(cert_vr)
    return _terms(common, norms.pi_v, cert_v.m_const, cert_v.gamma, start)


def _terms(common: float, pi_v: float, m: float, gamma: float,
           start: StartSpec) -> Tuple[float, float, float]:
    b = pi_v * common
    if isinstance(start, Stationary):
        return b, 0.0, 0.0
    base = start.v_at_x if isinstance(start, Deterministic) else start.min_bound
    c = m * base / (1 - gamma) * common
    c_tilde = m * m * base / (1 - gamma) * common
    return b, c, c_tilde


def _n_of(b: float, c: float) -> int:
    return math.ceil((b + math.sqrt(b * b + 4 * c)) / 2)


def burn_in_real(b: float, c_tilde: float, gamma: float) -> float:
    """Continuous minimiser of ``t + n(t)``; negative values mean no burn-in."""
    if c_tilde <= 0:
        return -math.inf
    l2 = math.log(gamma) ** 2
    arg = (2 + math.sqrt(4 + b * b * l2)) / (c_tilde * l2)
    return math.log(arg) / math.log(gamma)


def _one_walk(b: float, c: float, c_tilde: float, gamma: float,
              deterministic: bool) -> Tuple[int, int]:
    if deterministic:
        t = max(0, math.ceil(burn_in_real(b, c_tilde, gamma)))
        if t > 0:
            return t, _n_of(b, c_tilde * gamma ** t)
    return 0, _n_of(b, c)


def schedule_one_walk(
    norms: FunctionNorms,
    cert_v: ErgodicityCertificate,
    cert_vr: ErgodicityCertificate,
    r: float,
    eps: float,
    alpha: float,
    start: StartSpec,
) -> Schedule:
    """Cheapest integer ``(t, n)`` certified for ``P(|I_hat - I| <= eps) >= 1 - alpha``.

    Burn-in is only used for a deterministic start: ``t`` is the first integer
    at or past the continuous minimiser of ``t + n(t)``. When that is 0 the
    no-burn-in penalty ``c`` is used, which never exceeds ``c_tilde``.
    """
    b, c, c_tilde = schedule_terms(norms, cert_v, cert_vr, r, eps, alpha, start)
    t, n = _one_walk(b, c, c_tilde, cert_v.gamma, isinstance(start, Deterministic))
    audit = {
        "b": b, "c": c, "c_tilde": c_tilde,
        "c_t": c_tilde * cert_v.gamma ** t if t > 0 else c,
        "gamma": cert_v.gamma, "M": cert_v.m_const,
        "gamma_r": cert_vr.gamma, "M_r": cert_vr.m_const,
        "alpha_run": alpha,
    }
    return Schedule(t=t, n=n, m=1, audit=audit)


def median_runs(a: float, alpha: float) -> int:
    """Smallest odd ``m >= 2 ln(2 alpha) / ln(4 a (1 - a))``."""
    if not 0 < a < 0.5:
        raise DomainError(f"per-run level a must lie in (0, 1/2), got {a}")
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    need = 2 * math.log(2 * alpha) / math.log(4 * a * (1 - a))
    m = max(1, math.ceil(need))
    return m if m % 2 == 1 else m + 1


def schedule_ma(
    norms: FunctionNorms,
    cert_v: ErgodicityCertificate,
    cert_vr: ErgodicityCertificate,
    r: float,
    eps: float,
    alpha: float,
    start: StartSpec,
    a: float = DEFAULT_A,
) -> Schedule:
    """Median-of-averages plan: ``m`` runs, each certified at level ``a``."""
    m = median_runs(a, alpha)
    run = schedule_one_walk(norms, cert_v, cert_vr, r, eps, a, start)
    audit = dict(run.audit, a=a, alpha=alpha)
    return Schedule(t=run.t, n=run.n, m=m, audit=audit)

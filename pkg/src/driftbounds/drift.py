"""Drift-condition parameters and the lemmas that transform or bound them.

A chain satisfies the drift condition when there is a small set ``C``, a
minorizing measure ``nu`` with ``P(x, .) >= beta_tilde * nu`` on ``C``, and a
function ``V >= 1`` with ``PV <= lambda * V`` off ``C`` and ``PV <= K`` on ``C``.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Union

from .errors import DomainError


@dataclass(frozen=True)
class NuConcentratedOnC:
    """``nu(C) = 1``."""


@dataclass(frozen=True)
class NuVIntegralBound:
    """``nu(C) + int_{C^c} V dnu <= k_tilde``."""

    k_tilde: float


@dataclass(frozen=True)
class NuUnknown:
    """Nothing is known about ``nu`` beyond minorization."""


NuOnC = Union[NuConcentratedOnC, NuVIntegralBound, NuUnknown]


@dataclass(frozen=True)
class DriftParams:
    beta_tilde: float
    lam: float
    k_const: float
    beta: float
    nu_on_c: NuOnC = field(default_factory=NuUnknown)

    @property
    def atomic(self) -> bool:
        return self.beta_tilde == 1.0


@dataclass(frozen=True)
class FunctionNorms:
    """V-norm quantities of the target function.

    ``fc_norm_2p`` bounds ``| |f - pi f|^p |_V^(2/p)`` and ``pi_v`` bounds
    ``pi V``. ``f_p_norm`` is ``| |f|^p |_V``; ``b_v = inf V``.
    """

    f_p_norm: float
    fc_norm_2p: float
    pi_v: float
    p: float = 2.0
    b_v: float = 1.0
    pi_c: float = 1.0

    def __post_init__(self):
        if self.p < 2:
            raise DomainError(f"moment order p must be >= 2, got {self.p}")
        for name in ("f_p_norm", "fc_norm_2p"):
            if getattr(self, name) < 0:
                raise DomainError(f"{name} must be nonnegative")
        if self.pi_v < 1:
            raise DomainError(f"pi_v must be >= 1, got {self.pi_v}")
        if self.b_v < 1:
            raise DomainError(f"b_v must be >= 1, got {self.b_v}")
        if not 0 < self.pi_c <= 1:
            raise DomainError(f"pi_c must lie in (0, 1], got {self.pi_c}")


@dataclass(frozen=True)
class Stationary:
    """Chain started from its stationary law."""


@dataclass(frozen=True)
class Deterministic:
    """Chain started at a fixed point ``x`` with ``V(x) = v_at_x``."""

    v_at_x: float

    def __post_init__(self):
        if self.v_at_x < 1:
            raise DomainError(f"V(x) must be >= 1, got {self.v_at_x}")


@dataclass(frozen=True)
class GeneralInit:
    """Arbitrary initial law, summarised by ``min{pi0 V, ||pi0 - pi||_V}``."""

    min_bound: float

    def __post_init__(self):
        if self.min_bound < 0:
            raise DomainError(f"min_bound must be >= 0, got {self.min_bound}")


StartSpec = Union[Stationary, Deterministic, GeneralInit]


def validate(params: DriftParams) -> None:
    b, bt, lam, k = params.beta, params.beta_tilde, params.lam, params.k_const
    checks = [
        (0 < bt <= 1, f"0 < beta_tilde <= 1 (beta_tilde={bt})"),
        (0 < b <= bt, f"0 < beta <= beta_tilde (beta={b}, beta_tilde={bt})"),
        (0 < lam < 1, f"0 < lambda < 1 (lambda={lam})"),
        (k >= 1, f"K >= 1 (K={k})"),
        (k > lam, f"K > lambda (K={k}, lambda={lam})"),
    ]
    for ok, msg in checks:
        if not ok:
            raise DomainError("drift parameters violate " + msg)
    nu = params.nu_on_c
    if isinstance(nu, NuVIntegralBound) and nu.k_tilde < 1:
        raise DomainError(f"k_tilde must be >= 1, got {nu.k_tilde}")


def transform_r(params: DriftParams, r: float) -> DriftParams:
    """Drift parameters for ``V**(1/r)``, which follow by Jensen's inequality."""
    if r < 1:
        raise DomainError(f"r must be >= 1, got {r}")
    if r == 1:
        return params
    return replace(params, lam=params.lam ** (1 / r), k_const=params.k_const ** (1 / r))


def pi_v_bound(params: DriftParams, pi_c: float = 1.0) -> float:
    """Upper bound ``pi(C) (K - lambda) / (1 - lambda)`` on ``pi V``."""
    validate(params)
    if not 0 < pi_c <= 1:
        raise DomainError(f"pi_c must lie in (0, 1], got {pi_c}")
    return pi_c * (params.k_const - params.lam) / (1 - params.lam)


def k_p_lambda(params: DriftParams, p: float) -> float:
    lp = params.lam ** (1 / p)
    if 1 - lp <= 0:
        raise DomainError("lambda**(1/p) is numerically 1")
    return (params.k_const ** (1 / p) - lp) / (1 - lp)


def fc_norm_bound(
    f_p_norm: float,
    p: float,
    params: DriftParams,
    b_v: Optional[float] = None,
    pi_c: Optional[float] = None,
) -> float:
    """Bound ``| |f_c|^p |_V^(2/p)`` for the centred target ``f_c = f - pi f``.

    With ``b_v`` and ``pi_c`` both given the tighter form is used.
    """
    if f_p_norm < 0:
        raise DomainError("f_p_norm must be nonnegative")
    if p < 1:
        raise DomainError(f"p must be >= 1, got {p}")
    kpl = k_p_lambda(params, p)
    root = f_p_norm ** (1 / p)
    if b_v is not None and pi_c is not None:
        return (root + pi_c * kpl / b_v ** (1 / p)) ** 2
    return (root + kpl) ** 2


def lemma_norms(f_p_norm: float, params: DriftParams, p: float = 2.0,
                b_v: float = 1.0, pi_c: float = 1.0) -> FunctionNorms:
    """FunctionNorms built from the lemma bounds alone."""
    return FunctionNorms(
        f_p_norm=f_p_norm,
        fc_norm_2p=fc_norm_bound(f_p_norm, p, params, b_v, pi_c),
        pi_v=max(1.0, pi_v_bound(params, pi_c)),
        p=p,
        b_v=b_v,
        pi_c=pi_c,
    )


def combine_norms(user: FunctionNorms, params: DriftParams) -> FunctionNorms:
    """Take the smaller of user-supplied and lemma-derived bounds."""
    lem = lemma_norms(user.f_p_norm, params, user.p, user.b_v, user.pi_c)
    return replace(
        user,
        pi_v=min(user.pi_v, lem.pi_v),
        fc_norm_2p=min(user.fc_norm_2p, lem.fc_norm_2p),
    )


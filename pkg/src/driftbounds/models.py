"""Simulable chains, and the contracting-normals AR(1) chain.

The contracting-normals kernel is ``P(x, .) = N(theta x, 1 - theta^2)`` with
stationary law ``N(0, 1)``. With ``V(x) = 1 + x^2`` and small set ``[-d, d]``
its drift parameters are available in closed form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.signal import lfilter
from scipy.special import ndtr

from .baxendale import ChainClass
from .drift import DriftParams, FunctionNorms, NuConcentratedOnC, lemma_norms, validate
from .errors import DomainError

StepFn = Callable[[float, np.random.Generator], float]
PathFn = Callable[[float, int, np.random.Generator], np.ndarray]


@dataclass(frozen=True)
class ChainModel:
    """A chain we can simulate, plus what is certified about it.

    ``path(x0, length, rng)``, when given, must return the same states that
    ``length - 1`` calls of ``step`` would produce from the same generator; it
    is a vectorised fast path. ``f_fn`` must then accept arrays.
    """

    step: StepFn
    v_fn: Callable
    f_fn: Callable
    drift: DriftParams
    chain_class: ChainClass
    x0: float = 0.0
    exact_i: Optional[float] = None
    path: Optional[PathFn] = None


@dataclass(frozen=True)
class ContractingNormals:
    theta: float
    d: float

    def __post_init__(self):
        if not abs(self.theta) < 1:
            raise DomainError(f"|theta| must be < 1, got {self.theta}")
        if not self.d > 1:
            raise DomainError(f"small-set radius d must be > 1, got {self.d}")


def _phi_diff(hi: float, lo: float) -> float:
    # Phi(hi) - Phi(lo) through upper tails, accurate when both are large.
    return float(ndtr(-lo) - ndtr(-hi))


def cn_drift_params(theta: float, d: float) -> DriftParams:
    ContractingNormals(theta, d)
    a = abs(theta)
    th2 = theta * theta
    s = math.sqrt(1 - th2)
    lam = th2 + 2 * (1 - th2) / (1 + d * d)
    k = 2 + th2 * (d * d - 1)
    bt = 2 * _phi_diff((1 + a) * d / s, a * d / s)
    params = DriftParams(beta_tilde=bt, lam=lam, k_const=k, beta=bt, nu_on_c=NuConcentratedOnC())
    validate(params)
    return params


def cn_chain_class(theta: float) -> ChainClass:
    """Class of the kernel itself; positive only for ``theta >= 0``."""
    return ChainClass.REVERSIBLE_POSITIVE if theta >= 0 else ChainClass.REVERSIBLE


# The law of X_n under -theta equals the law under theta started at (-1)^n x0,
# and V is even, so constants computed at |theta| as reversible-positive hold
# for negative theta too.
CN_CERTIFIED_CLASS = ChainClass.REVERSIBLE_POSITIVE


def cn_step(x: float, theta: float, rng: np.random.Generator) -> float:
    return theta * x + math.sqrt(1 - theta * theta) * rng.standard_normal()


def cn_path(x0: float, length: int, theta: float, rng: np.random.Generator) -> np.ndarray:
    """States ``X_0 .. X_{length-1}``; consumes the normals in the same order as ``cn_step``."""
    if length < 1:
        raise DomainError("path length must be >= 1")
    z = rng.standard_normal(length - 1)
    out = np.empty(length)
    out[0] = x0
    if length > 1:
        s = math.sqrt(1 - theta * theta)
        out[1:], _ = lfilter([s], [1.0, -theta], z, zi=[theta * x0])
    return out


def cn_norms(theta: float, d: float, setting: int = 2) -> FunctionNorms:
    """Norms for ``f(x) = x`` with ``V(x) = 1 + x^2``.

    Setting 2 uses the exact values ``pi V = 2`` and ``|f_c^2|_V = 1``;
    setting 1 uses only the drift-lemma bounds.
    """
    if setting == 2:
        return FunctionNorms(f_p_norm=1.0, fc_norm_2p=1.0, pi_v=2.0, p=2.0, b_v=1.0, pi_c=1.0)
    if setting == 1:
        return lemma_norms(1.0, cn_drift_params(theta, d), p=2.0, b_v=1.0, pi_c=1.0)
    raise DomainError(f"setting must be 1 or 2, got {setting}")


def v_quadratic(x):
    return 1 + x * x


def identity(x):
    return x


def contracting_normals(theta: float, d: float, x0: float = 0.0,
                        exact_i: Optional[float] = 0.0) -> ChainModel:
    return ChainModel(
        step=lambda x, rng: cn_step(x, theta, rng),
        v_fn=v_quadratic,
        f_fn=identity,
        drift=cn_drift_params(theta, d),
        chain_class=cn_chain_class(theta),
        x0=x0,
        exact_i=exact_i,
        path=lambda x, length, rng: cn_path(x, length, theta, rng),
    )

import math

import numpy as np
import pytest
from scipy import stats

from driftbounds import baxendale as bx
from driftbounds.baxendale import ChainClass
from driftbounds.errors import DomainError
from driftbounds.models import (
    CN_CERTIFIED_CLASS,
    cn_chain_class,
    cn_drift_params,
    cn_norms,
    cn_path,
    cn_step,
    contracting_normals,
)


def phi(x):
    return 0.5 * (1 + math.erf(x / math.sqrt(2)))


def test_cn_params_table_point():
    p = cn_drift_params(0.5, 1.6226)
    assert p.lam == pytest.approx(0.66290, abs=1e-5)
    assert p.k_const == pytest.approx(2.40820, abs=1e-5)
    assert p.beta_tilde == pytest.approx(0.3439, abs=1e-3)
    assert p.beta == p.beta_tilde
    # independent Phi through math.erf
    want = 2 * (phi(1.5 * 1.6226 / math.sqrt(0.75)) - phi(0.5 * 1.6226 / math.sqrt(0.75)))
    assert p.beta_tilde == pytest.approx(want, abs=1e-12)


@pytest.mark.parametrize("d", [1.2, 2.0, 4.0])
def test_cn_params_theta_zero(d):
    p = cn_drift_params(0.0, d)
    assert p.lam == pytest.approx(2 / (1 + d * d))
    assert p.k_const == 2.0
    assert p.beta_tilde == pytest.approx(2 * phi(d) - 1, abs=1e-12)


def test_cn_params_symmetric():
    assert cn_drift_params(-0.5, 1.6226) == cn_drift_params(0.5, 1.6226)


@pytest.mark.parametrize("theta, d", [(1.0, 2.0), (0.5, 1.0), (-1.2, 2.0)])
def test_cn_params_reject(theta, d):
    with pytest.raises(DomainError):
        cn_drift_params(theta, d)


def test_chain_classes():
    assert cn_chain_class(0.5) is ChainClass.REVERSIBLE_POSITIVE
    assert cn_chain_class(-0.5) is ChainClass.REVERSIBLE
    assert CN_CERTIFIED_CLASS is ChainClass.REVERSIBLE_POSITIVE


def test_rho_downstream():
    assert bx.rho(cn_drift_params(0.5, 1.6226), CN_CERTIFIED_CLASS) == pytest.approx(0.895, rel=5e-3)


def test_norms_settings():
    s2 = cn_norms(0.5, 1.6226, 2)
    assert (s2.pi_v, s2.fc_norm_2p) == (2.0, 1.0)
    s1 = cn_norms(0.5, 1.6226, 1)
    assert s1.pi_v == pytest.approx(5.177, abs=1e-3)
    assert s1.fc_norm_2p == pytest.approx(24.70, abs=5e-3)
    assert s1.pi_v >= s2.pi_v and s1.fc_norm_2p >= s2.fc_norm_2p
    # n scales with pi_v * fc between the settings
    assert s1.pi_v * s1.fc_norm_2p / (s2.pi_v * s2.fc_norm_2p) == pytest.approx(6.46e9 / 1.01e8, rel=0.02)


def test_step_theta_zero_is_standard_normal():
    rng = np.random.default_rng(0)
    xs = np.array([cn_step(37.0, 0.0, rng) for _ in range(10_000)])
    assert stats.kstest(xs, "norm").pvalue > 0.01


def test_step_mean():
    rng = np.random.default_rng(1)
    xs = np.array([cn_step(10.0, 0.5, rng) for _ in range(100_000)])
    se = math.sqrt(0.75 / xs.size)
    assert abs(xs.mean() - 5.0) < 4 * se
    assert abs(xs.mean() - 5.0) < 0.01


def test_path_matches_step_loop():
    a, b = np.random.default_rng(5), np.random.default_rng(5)
    path = cn_path(2.0, 50, -0.7, a)
    x, loop = 2.0, [2.0]
    for _ in range(49):
        x = cn_step(x, -0.7, b)
        loop.append(x)
    np.testing.assert_allclose(path, loop, rtol=1e-12, atol=1e-12)


def _xn(x0, theta, n, reps, rng):
    z = rng.standard_normal((reps, n))
    x = np.full(reps, x0, dtype=float)
    s = math.sqrt(1 - theta * theta)
    for k in range(n):
        x = theta * x + s * z[:, k]
    return x


@pytest.mark.parametrize("n", [1, 2, 5])
def test_symmetry_lemma_moments(n):
    reps = 100_000
    a = _xn(2.0, 0.5, n, reps, np.random.default_rng(100 + n))
    b = _xn((-1) ** n * 2.0, -0.5, n, reps, np.random.default_rng(200 + n))
    for k in (1, 2, 3):
        ma, mb = (a ** k).mean(), (b ** k).mean()
        se = math.sqrt((a ** k).var() / reps + (b ** k).var() / reps)
        assert abs(ma - mb) < 4 * se


def test_v_at_least_one_and_minimised_at_zero():
    m = contracting_normals(0.5, 1.6226)
    xs = np.linspace(-50, 50, 10_001)
    v = m.v_fn(xs)
    assert v.min() >= 1 and m.v_fn(0.0) == 1.0


def test_drift_inequality_monte_carlo():
    p = cn_drift_params(0.5, 1.6226)
    rng = np.random.default_rng(12)
    xs = np.concatenate([rng.uniform(-1.6226, 1.6226, 50), rng.uniform(1.63, 20, 50) * rng.choice([-1, 1], 50)])
    for x in xs:
        y = 0.5 * x + math.sqrt(0.75) * rng.standard_normal(4000)
        v = 1 + y * y
        mean, se = v.mean(), v.std() / math.sqrt(v.size)
        bound = p.k_const if abs(x) <= 1.6226 else p.lam * (1 + x * x)
        assert mean <= bound + 5 * se


def test_stationarity_preserved():
    rng = np.random.default_rng(3)
    x = rng.standard_normal(200_000)
    for _ in range(5):
        x = 0.5 * x + math.sqrt(0.75) * rng.standard_normal(x.size)
    se2 = math.sqrt(2 / x.size)
    assert abs(x.mean()) < 4 / math.sqrt(x.size)
    assert abs((x ** 2).mean() - 1) < 4 * se2

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose
from scipy import stats

from halfstable import (DoneyClass, OneSidedMode, StableParams, detect_doney,
                        levy_density, one_sided_mode, psi, sample_increment)
from halfstable.errors import DomainError


def test_params_admissibility():
    StableParams(0.8, 0.99)
    StableParams(2.0, 0.5)
    with pytest.raises(DomainError):
        StableParams(2.2, 0.5)
    with pytest.raises(DomainError):
        StableParams(0.8, 1.0)
    with pytest.raises(DomainError):
        StableParams(1.5, 0.8)  # outside [1 - 1/alpha, 1/alpha]


def test_params_accept_rational_strings():
    p = StableParams("7/5", "3/7")
    assert p.alpha == pytest.approx(1.4)
    assert p.rho == pytest.approx(3.0 / 7.0)


def test_dual_is_involutive(p_generic):
    q = p_generic.dual()
    assert q.rho == pytest.approx(p_generic.rho_hat)
    assert q.dual().rho == pytest.approx(p_generic.rho)
    # jump intensities swap sides under reflection
    assert q.c_plus == pytest.approx(p_generic.c_minus)


def test_psi_closed_cases():
    assert psi(StableParams(2.0, 0.5), 3.0) == pytest.approx(9.0)
    # alpha = 1: sin(pi rho)|z| + i cos(pi rho) z
    p = StableParams(1.0, 0.7)
    z = -2.5
    ref = np.sin(0.7 * np.pi) * abs(z) + 1j * np.cos(0.7 * np.pi) * z
    assert_allclose(psi(p, z), ref, rtol=1e-14)
    val = psi(StableParams(1.5, 0.6), 1.0)
    assert_allclose(val, np.exp(-0.15j * np.pi), rtol=1e-14)


def test_psi_conjugation(rng):
    p = StableParams(1.7, 0.52)
    z = rng.uniform(-5, 5, 40)
    assert_allclose(psi(p, -z), np.conj(psi(p, z)), rtol=1e-14)


def test_levy_density_tails(p_generic):
    x = np.array([0.5, 2.0, 8.0])
    assert_allclose(levy_density(p_generic, x),
                    p_generic.c_plus * x ** (-2.5), rtol=1e-14)
    assert levy_density(p_generic, -1.0) == pytest.approx(p_generic.c_minus)
    with pytest.raises(DomainError):
        levy_density(p_generic, 0.0)
    with pytest.raises(DomainError):
        levy_density(StableParams(1.0, 0.5), 1.0)


def test_doney_detection_examples():
    assert detect_doney(StableParams(1.4, "3/7")) == DoneyClass(1, 2, 0.0)
    cls = detect_doney(StableParams(1.5, "2/3"))
    assert (cls.k, cls.l) == (0, 1)
    assert detect_doney(StableParams(np.sqrt(2) / 2, 0.37),
                        tol=1e-9, k_max=5) is None


@given(k=st.integers(-3, 3), l=st.integers(1, 3),
       alpha=st.floats(1.05, 1.95))
@settings(max_examples=50, deadline=None)
def test_doney_detection_property(k, l, alpha):
    """Any constructed lattice pair must be recovered (possibly as an
    equivalent pair with smaller |k|, since alpha rho = l - k alpha has
    aliases when alpha is itself close to rational)."""
    rho = (l - k * alpha) / alpha
    lo, hi = 1.0 - 1.0 / alpha, 1.0 / alpha
    if not (lo + 1e-6 < rho < hi - 1e-6):
        return
    p = StableParams(alpha, rho)
    cls = detect_doney(p)
    assert cls is not None
    assert cls.residual <= 1e-12
    assert abs(alpha * rho - (cls.l - cls.k * alpha)) <= 1e-9


def test_one_sided_detection():
    assert one_sided_mode(StableParams(1.5, "2/3")) == \
        OneSidedMode("spectrally_negative")
    assert one_sided_mode(StableParams(1.5, "1/3")) == \
        OneSidedMode("spectrally_positive")
    assert one_sided_mode(StableParams(1.5, 0.5)) is None
    assert one_sided_mode(StableParams(2.0, 0.5)) is None
    with pytest.raises(DomainError):
        OneSidedMode("sideways")


def test_sampler_brownian_moments():
    rng = np.random.default_rng(3)
    x = sample_increment(StableParams(2.0, 0.5), 1.0, rng, 200_000)
    assert abs(np.mean(x)) < 0.02
    assert np.var(x) == pytest.approx(2.0, rel=0.02)


def test_sampler_cauchy_case():
    # alpha = 1: X_1 = sin(pi rho) Z - cos(pi rho), Z standard Cauchy
    rng = np.random.default_rng(4)
    p = StableParams(1.0, 0.7)
    x = sample_increment(p, 1.0, rng, 100_000)
    z = (x + np.cos(0.7 * np.pi)) / np.sin(0.7 * np.pi)
    ks = stats.kstest(z, stats.cauchy.cdf)
    assert ks.pvalue > 1e-3


def test_sampler_positivity_and_scaling():
    rng = np.random.default_rng(5)
    p = StableParams(1.5, 0.6)
    n = 400_000
    x = sample_increment(p, 1.0, rng, n)
    se = np.sqrt(0.6 * 0.4 / n)
    assert abs(np.mean(x > 0) - 0.6) < 4 * se
    # t^(1/alpha) self-similarity: same seed, different horizon
    a = sample_increment(p, 1.0, np.random.default_rng(9), 1000)
    b = sample_increment(p, 2.0, np.random.default_rng(9), 1000)
    assert_allclose(b, 2.0 ** (1.0 / 1.5) * a, rtol=1e-12)
    with pytest.raises(DomainError):
        sample_increment(p, 0.0, rng)

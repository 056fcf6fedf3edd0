import numpy as np
import pytest
from scipy import stats

from betaensemble.errors import InvalidParameterError
from betaensemble.sampling import RngStream, sample_chi, sample_chi_squared, sample_gamma, sample_gaussian


def test_streams_reproducible_and_distinct():
    a = RngStream(5, 3).standard_normal(10)
    b = RngStream(5, 3).standard_normal(10)
    c = RngStream(5, 4).standard_normal(10)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


@pytest.mark.parametrize("seed,stream", [(-1, 0), (2**64, 0), (0, -1)])
def test_stream_rejects_bad_ids(seed, stream):
    with pytest.raises(InvalidParameterError):
        RngStream(seed, stream)


@pytest.mark.parametrize("shape", [0.3, 1.0, 4.5, 40.0])
def test_gamma_matches_scipy_law(shape):
    x = sample_gamma(shape, RngStream(1, 0), size=20000)
    assert stats.kstest(x, stats.gamma(shape).cdf).pvalue > 1e-3


@pytest.mark.parametrize("k", [0.5, 1.0, 3.0, 200.0])
def test_chi_matches_scipy_law(k):
    x = sample_chi(k, RngStream(2, 0), size=20000)
    assert stats.kstest(x, stats.chi(k).cdf).pvalue > 1e-3


def test_chi_squared_vector_dof_moments():
    dof = np.array([2.0, 50.0, 500.0])
    x = np.array([sample_chi_squared(dof, RngStream(3, t)) for t in range(4000)])
    assert np.allclose(x.mean(axis=0), dof, rtol=0.05)
    assert np.allclose(x.var(axis=0), 2 * dof, rtol=0.1)


def test_gaussian_moments_and_validation():
    x = sample_gaussian(1.0, 4.0, RngStream(4, 0), size=50000)
    assert abs(x.mean() - 1.0) < 0.03
    assert abs(x.var() - 4.0) < 0.1
    with pytest.raises(InvalidParameterError):
        sample_gaussian(0.0, 0.0, RngStream(4, 0))
    with pytest.raises(InvalidParameterError):
        sample_gamma(-1.0, RngStream(4, 0))

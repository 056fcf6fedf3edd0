"""Reproducible random sources for the tridiagonal models.

Every trial owns one :class:`RngStream`, keyed by ``(seed, stream_id)``.
Streams are derived with :class:`numpy.random.SeedSequence` spawn keys, so
the draws of trial ``t`` never depend on how many other trials ran before it
or on which thread ran it.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidParameterError

__all__ = [
    "RngStream",
    "sample_gaussian",
    "sample_chi",
    "sample_chi_squared",
    "sample_gamma",
]


class RngStream:
    """Independent PCG64 stream identified by ``(seed, stream_id)``.

    Parameters
    ----------
    seed : int
        Campaign seed, any non-negative integer below 2**64.
    stream_id : int
        Stream index; trial ``t`` of an experiment uses ``stream_id = t``.
    """

    def __init__(self, seed: int = 0, stream_id: int = 0):
        seed = int(seed)
        stream_id = int(stream_id)
        if not 0 <= seed < 2**64:
            raise InvalidParameterError(f"seed must be a 64-bit unsigned integer, got {seed}")
        if stream_id < 0:
            raise InvalidParameterError(f"stream_id must be non-negative, got {stream_id}")
        self.seed = seed
        self.stream_id = stream_id
        ss = np.random.SeedSequence(seed, spawn_key=(stream_id,))
        self.generator = np.random.Generator(np.random.PCG64(ss))

    def __repr__(self):
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"

    def uniform(self, size=None):
        return self.generator.random(size)

    def standard_normal(self, size=None):
        return self.generator.standard_normal(size)


def sample_gaussian(mean, variance, rng: RngStream, size=None):
    """Draw from N(mean, variance)."""
    variance = np.asarray(variance, dtype=float)
    if np.any(~(variance > 0)):
        raise InvalidParameterError(f"variance must be positive, got {variance}")
    return mean + np.sqrt(variance) * rng.standard_normal(size)


def sample_gamma(shape, rng: RngStream, size=None):
    """Unit-scale Gamma(shape) draws.

    Marsaglia-Tsang squeeze sampling for ``shape >= 1`` (numpy's generator);
    below 1 the boost ``Gamma(a) = Gamma(a + 1) * U**(1/a)`` keeps the same
    sampler in its valid range.
    """
    shape = np.asarray(shape, dtype=float)
    if np.any(~(shape > 0)):
        raise InvalidParameterError(f"gamma shape must be positive, got {shape}")
    if size is None:
        size = shape.shape
    shape = np.broadcast_to(shape, size)
    small = shape < 1.0
    boosted = np.where(small, shape + 1.0, shape)
    g = rng.generator.standard_gamma(boosted, size=size)
    if np.any(small):
        u = rng.generator.random(size=size)
        g = np.where(small, g * u ** (1.0 / shape), g)
    return g if g.ndim else float(g)


def sample_chi_squared(k, rng: RngStream, size=None):
    """Chi-squared draws with (possibly non-integer) ``k`` degrees of freedom."""
    k = np.asarray(k, dtype=float)
    if np.any(~(k > 0)):
        raise InvalidParameterError(f"degrees of freedom must be positive, got {k}")
    return 2.0 * sample_gamma(k / 2.0, rng, size)


def sample_chi(k, rng: RngStream, size=None):
    """Chi draws: square root of a chi-squared draw with ``k`` degrees of freedom."""
    return np.sqrt(sample_chi_squared(k, rng, size))

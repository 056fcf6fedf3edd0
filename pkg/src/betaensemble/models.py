"""Tridiagonal Gaussian beta-ensemble models.

The random model is the symmetric tridiagonal matrix

    A = (1/sqrt(2 beta)) * tridiag(N(0, 2) diagonal, chi_{(n-k) beta} off-diagonal),

whose eigenvalues, divided by ``spectral_scale(n) = sqrt(2n)``, follow the
Gaussian beta-ensemble normalised to the semicircle on [-1, 1].  At
``beta = inf`` the model freezes to ``A_inf`` with off-diagonal
``sqrt((n-k)/2)`` and zero diagonal; its eigenvalues are exactly the zeros of
the Hermite polynomial H_n.

Indices in docstrings are 1-based (``offdiag[k]`` couples rows ``k`` and
``k+1``); arrays are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass
import math
import os

import numpy as np

from .errors import InvalidInputError, InvalidParameterError
from .sampling import RngStream, sample_chi_squared, sample_gaussian
from .special import ScaledReal

__all__ = [
    "EnsembleParams",
    "TridiagSym",
    "TridiagAsym",
    "ConjugationWeights",
    "BidiagDelta",
    "spectral_scale",
    "build_symmetric",
    "build_zero_temperature",
    "build_asymmetric",
    "build_asymmetric_zero_temperature",
    "conjugation_weights",
    "conjugate",
    "fluctuation_delta",
    "write_matrix_csv",
]


def spectral_scale(n: int) -> float:
    """Divisor that maps raw eigenvalues onto the semicircle support [-1, 1]."""
    return math.sqrt(2.0 * n)


@dataclass(frozen=True)
class EnsembleParams:
    """Size ``n >= 1`` and inverse temperature ``beta > 0`` (``math.inf`` allowed)."""

    n: int
    beta: float

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise InvalidParameterError(f"n must be a positive integer, got {self.n!r}")
        if not (self.beta > 0):
            raise InvalidParameterError(f"beta must be positive, got {self.beta!r}")

    @property
    def frozen(self) -> bool:
        return math.isinf(self.beta)

    @property
    def extrapolated(self) -> bool:
        """True for 0 < beta < 1, outside the range the theory covers."""
        return self.beta < 1


@dataclass
class TridiagSym:
    """Symmetric tridiagonal matrix by its diagonal (n) and off-diagonal (n-1)."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        self.diag = np.asarray(self.diag, dtype=float)
        self.offdiag = np.asarray(self.offdiag, dtype=float)
        if self.diag.ndim != 1 or self.offdiag.shape != (max(self.diag.size - 1, 0),):
            raise InvalidInputError("need diag of length n and offdiag of length n-1")

    @property
    def n(self) -> int:
        return self.diag.size

    def to_dense(self) -> np.ndarray:
        return (np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1))

    def matvec(self, v):
        v = np.asarray(v)
        out = self.diag * v
        out[:-1] += self.offdiag * v[1:]
        out[1:] += self.offdiag * v[:-1]
        return out


@dataclass
class TridiagAsym:
    """Tridiagonal matrix with separate super- (upper) and sub-diagonal (lower)."""

    diag: np.ndarray
    upper: np.ndarray
    lower: np.ndarray

    def __post_init__(self):
        self.diag = np.asarray(self.diag, dtype=float)
        self.upper = np.asarray(self.upper, dtype=float)
        self.lower = np.asarray(self.lower, dtype=float)
        m = max(self.diag.size - 1, 0)
        if self.upper.shape != (m,) or self.lower.shape != (m,):
            raise InvalidInputError("need diag of length n, upper and lower of length n-1")

    @property
    def n(self) -> int:
        return self.diag.size

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.upper, 1) + np.diag(self.lower, -1)


@dataclass
class ConjugationWeights:
    """Diagonal similarity D with ``log d_i`` stored to avoid overflow.

    ``d_1 = 1`` and ``d_i = (beta n)^{(1-i)/2} * prod_{k<i} chi_{(n-k) beta}``.
    """

    log_d: np.ndarray

    @property
    def n(self) -> int:
        return self.log_d.size

    @property
    def d(self) -> ScaledReal:
        return ScaledReal(np.ones(self.log_d.size, dtype=int), self.log_d)

    def ratio(self, k, l):
        """d_k / d_l for 0-based indices, evaluated through the logs."""
        return np.exp(self.log_d[k] - self.log_d[l])


@dataclass
class BidiagDelta:
    """Lower-bidiagonal perturbation: ``diag`` (n) and ``sub`` (n-1)."""

    diag: np.ndarray
    sub: np.ndarray

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.sub, -1)


def _as_params(params_or_n, beta=None) -> EnsembleParams:
    if isinstance(params_or_n, EnsembleParams):
        return params_or_n
    return EnsembleParams(int(params_or_n), math.inf if beta is None else beta)


def _check_chi(params: EnsembleParams, chi_draws):
    chi = np.asarray(chi_draws, dtype=float)
    if chi.shape != (params.n - 1,):
        raise InvalidInputError(f"expected {params.n - 1} chi draws, got shape {chi.shape}")
    if np.any(~(chi > 0)):
        raise InvalidInputError("chi draws must be positive")
    return chi


def build_symmetric(params: EnsembleParams, rng: RngStream):
    """Sample ``A_{n,beta}``; returns ``(matrix, chi_draws)``.

    ``chi_draws[k-1]`` is the chi variable with ``(n-k) beta`` degrees of
    freedom, so ``offdiag = chi_draws / sqrt(2 beta)``.  The raw draws feed
    :func:`conjugation_weights` and :func:`build_asymmetric`.
    """
    params = _as_params(params)
    if params.frozen:
        raise InvalidParameterError("use build_zero_temperature for beta = inf")
    n, beta = params.n, float(params.beta)
    s = 1.0 / math.sqrt(2.0 * beta)
    g = np.atleast_1d(sample_gaussian(0.0, 2.0, rng, size=n))
    if n > 1:
        dof = (n - np.arange(1, n)) * beta
        chi = np.sqrt(np.atleast_1d(sample_chi_squared(dof, rng)))
    else:
        chi = np.empty(0)
    return TridiagSym(s * g, s * chi), chi


def build_zero_temperature(n: int) -> TridiagSym:
    """Deterministic ``A_inf``: zero diagonal, ``offdiag[k] = sqrt((n-k)/2)``."""
    _as_params(n)
    k = np.arange(1, n)
    return TridiagSym(np.zeros(n), np.sqrt((n - k) / 2.0))


def build_asymmetric(params: EnsembleParams, chi_draws, gaussian_diag) -> TridiagAsym:
    """Non-symmetric form with constant super-diagonal ``sqrt(n/2)``.

    ``lower[k] = chi_k^2 / (sqrt(beta n) sqrt(2 beta))``.  ``gaussian_diag`` is
    the diagonal of the symmetric sample built from the same draws, copied
    unchanged.  ``upper[k] * lower[k] = offdiag[k]**2``, so the spectra agree.
    """
    params = _as_params(params)
    n, beta = params.n, float(params.beta)
    chi = _check_chi(params, chi_draws)
    diag = np.asarray(gaussian_diag, dtype=float)
    if diag.shape != (n,):
        raise InvalidInputError(f"expected diagonal of length {n}, got shape {diag.shape}")
    lower = chi * chi / (math.sqrt(beta * n) * math.sqrt(2.0 * beta))
    return TridiagAsym(diag.copy(), np.full(n - 1, math.sqrt(n / 2.0)), lower)


def build_asymmetric_zero_temperature(n: int) -> TridiagAsym:
    """Asymmetric form of ``A_inf``: chi^2 replaced by its mean ``(n-k) beta``.

    This gives ``lower[k] = (n-k)/sqrt(2n)`` and ``upper = sqrt(n/2)``,
    independent of beta.
    """
    _as_params(n)
    k = np.arange(1, n)
    return TridiagAsym(np.zeros(n), np.full(n - 1, math.sqrt(n / 2.0)), (n - k) / math.sqrt(2.0 * n))


def conjugation_weights(params: EnsembleParams, chi_draws=None) -> ConjugationWeights:
    """Weights with ``asym = D sym D^{-1}``.

    With ``chi_draws=None`` (or ``beta = inf``) the zero-temperature weights
    ``d_i = prod_{k<i} sqrt((n-k)/n)`` are returned.
    """
    params = _as_params(params)
    n = params.n
    if chi_draws is None or params.frozen:
        k = np.arange(1, n)
        steps = 0.5 * np.log((n - k) / n)
    else:
        chi = _check_chi(params, chi_draws)
        steps = np.log(chi) - 0.5 * math.log(params.beta * n)
    return ConjugationWeights(np.concatenate(([0.0], np.cumsum(steps))))


def conjugate(sym: TridiagSym, weights: ConjugationWeights) -> TridiagAsym:
    """Compute ``D sym D^{-1}`` entrywise through the log-weights."""
    r = np.exp(np.diff(weights.log_d))  # d_{k+1} / d_k
    return TridiagAsym(sym.diag.copy(), sym.offdiag / r, sym.offdiag * r)


def fluctuation_delta(asym_beta: TridiagAsym, asym_inf: TridiagAsym, n: int | None = None) -> BidiagDelta:
    """``Delta = (asym_beta - asym_inf) / sqrt(2n)``, in spectral units.

    The constant super-diagonals cancel exactly; the diagonal is
    ``g_k / (sqrt(2 beta) sqrt(2n))`` and the sub-diagonal
    ``(chi^2 - (n-k) beta) / (sqrt(beta n) sqrt(2 beta) sqrt(2n))``, so every
    entry has mean zero and ``Var(sub[k]) = (n-k) / (2 beta n^2)``.
    """
    if asym_beta.n != asym_inf.n or (n is not None and n != asym_beta.n):
        raise InvalidInputError("dimension mismatch between the two asymmetric matrices")
    if np.any(asym_beta.upper != asym_inf.upper):
        raise InvalidInputError("upper diagonals differ; Delta would not be bidiagonal")
    s = spectral_scale(asym_beta.n)
    return BidiagDelta((asym_beta.diag - asym_inf.diag) / s, (asym_beta.lower - asym_inf.lower) / s)


def write_matrix_csv(path, mat: TridiagSym, beta, seed) -> None:
    """Write ``index,diag,offdiag`` rows (offdiag blank on the last row).

    The first line is a comment header recording ``n``, ``beta`` and ``seed``.
    Written to a temporary file and renamed, so a partial file never appears.
    """
    tmp = f"{path}.tmp{os.getpid()}"
    with open(tmp, "w") as fh:
        fh.write(f"# n={mat.n} beta={beta} seed={seed}\n")
        fh.write("index,diag,offdiag\n")
        for i in range(mat.n):
            off = repr(float(mat.offdiag[i])) if i < mat.n - 1 else ""
            fh.write(f"{i + 1},{float(mat.diag[i])!r},{off}\n")
    os.replace(tmp, path)

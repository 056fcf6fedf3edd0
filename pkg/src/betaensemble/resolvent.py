"""Stieltjes transforms, resolvent entries and the resolvent expansion.

Everything is expressed for the normalised matrix ``M = A / sqrt(2n)`` whose
spectrum fills [-1, 1], with ``z = E + i eta`` in the upper half-plane.
"""

from __future__ import annotations

from dataclasses import dataclass, field, asdict
from functools import lru_cache
import math

import numpy as np
from scipy.linalg import solve_banded

from .eigensolver import Spectrum, spectrum
from .errors import InvalidInputError, InvalidParameterError, NumericalFailureError
from .models import (
    EnsembleParams,
    TridiagAsym,
    TridiagSym,
    build_asymmetric,
    build_asymmetric_zero_temperature,
    build_symmetric,
    build_zero_temperature,
    fluctuation_delta,
    spectral_scale,
)
from .sampling import RngStream
from .special import hermite_function_table, hermite_ratio, hermite_zeros

__all__ = [
    "SpectralDomain",
    "BoundReport",
    "ExpansionRecord",
    "stieltjes_from_spectrum",
    "stieltjes_zero_temp_ratio",
    "banded_resolvent",
    "stieltjes_banded_trace",
    "ZeroTempResolvent",
    "zero_temp_resolvent",
    "resolvent_entry_zero_temp",
    "audit_prop_R_bounds",
    "audit_diag_power_sums",
    "expansion_trace",
    "schur_residual",
]


def _upper(z):
    z = np.asarray(z, dtype=complex)
    if np.any(~(z.imag > 0)):
        raise InvalidInputError("z must lie in the upper half-plane (Im z > 0)")
    return z


@dataclass
class SpectralDomain:
    """Grid of spectral parameters inside the bulk region.

    ``regime="local"`` requires eta >= n^(-1+epsilon); ``regime="mesoscopic"``
    requires eta >= n^(-1/2+epsilon).  All points have |E| <= 1 - delta and
    |z| <= 10.
    """

    epsilon: float
    delta: float
    grid: list = field(default_factory=list)
    regime: str = "local"

    def __post_init__(self):
        if not self.epsilon > 0:
            raise InvalidParameterError(f"epsilon must be positive, got {self.epsilon}")
        if not 0 < self.delta < 1:
            raise InvalidParameterError(f"delta must lie in (0, 1), got {self.delta}")
        if self.regime not in ("local", "mesoscopic"):
            raise InvalidParameterError(f"unknown regime {self.regime!r}")
        self.grid = [complex(z) for z in self.grid]

    def eta_min(self, n: int) -> float:
        power = -1.0 if self.regime == "local" else -0.5
        return float(n) ** (power + self.epsilon)

    def validate(self, n: int) -> None:
        if not self.grid:
            raise InvalidInputError("spectral grid is empty")
        lo = self.eta_min(n) * (1 - 1e-12)
        for z in self.grid:
            if z.imag < lo or abs(z.real) > 1 - self.delta + 1e-12 or abs(z) > 10:
                raise InvalidInputError(f"grid point {z} is outside the {self.regime} domain for n={n}")

    @classmethod
    def default(cls, n: int, epsilon: float = 0.1, delta: float = 0.2, n_re: int = 11,
                n_im: int = 11, eta_max: float = 0.1, regime: str = "local"):
        """Equally spaced E in [-1+delta, 1-delta] times geometric eta in [eta_min, eta_max]."""
        dom = cls(epsilon, delta, [], regime)
        lo = dom.eta_min(n)
        hi = max(eta_max, lo)
        es = np.linspace(-(1 - delta), 1 - delta, n_re) if n_re > 1 else np.zeros(1)
        etas = np.geomspace(lo, hi, n_im) if n_im > 1 else np.array([lo])
        dom.grid = [complex(e, h) for h in etas for e in es]
        return dom


def stieltjes_from_spectrum(spec: Spectrum, z):
    """s(z) = (1/n) sum_j 1/(lambda_j - z) over the scaled eigenvalues."""
    z = _upper(z)
    lam = spec.eigs_scaled
    val = np.mean(1.0 / (lam[:, None] - z.ravel()[None, :]), axis=0).reshape(z.shape)
    return complex(val) if val.ndim == 0 else val


def stieltjes_zero_temp_ratio(n: int, z):
    """Zero-temperature s_n(z) from the Hermite ratio.

    s_n(z) = -2^{3/2} sqrt(n) H_{n-1}(w) / H_n(w) with w = sqrt(2n) z, since
    the zero-temperature eigenvalues are the zeros of H_n.
    """
    z = _upper(z)
    ratio = hermite_ratio(n, math.sqrt(2.0 * n) * z)
    if not np.all(np.isfinite(ratio)):
        raise NumericalFailureError("H_n vanished in scaled arithmetic")
    val = -2.0 ** 1.5 * math.sqrt(n) * ratio
    return complex(val) if np.ndim(val) == 0 else val


def _band(mat, z, scale):
    n = mat.n
    ab = np.zeros((3, n), dtype=complex)
    if isinstance(mat, TridiagAsym):
        up, lo = mat.upper, mat.lower
    else:
        up = lo = mat.offdiag
    ab[0, 1:] = up / scale
    ab[1] = mat.diag / scale - z
    ab[2, :-1] = lo / scale
    return ab


def banded_resolvent(mat, z, scale: float | None = None, rhs=None):
    """Columns of ``(mat/scale - z)^{-1}`` applied to ``rhs`` (identity by default).

    Banded LU with partial pivoting, O(n) per right-hand side.  ``mat`` may be
    symmetric or asymmetric tridiagonal; ``scale`` defaults to sqrt(2n).
    """
    z = complex(_upper(z))
    n = mat.n
    scale = spectral_scale(n) if scale is None else scale
    b = np.eye(n, dtype=complex) if rhs is None else np.asarray(rhs, dtype=complex)
    if n == 1:
        return b / (mat.diag[0] / scale - z)
    return solve_banded((1, 1), _band(mat, z, scale), b, check_finite=False)


def stieltjes_banded_trace(mat, z, scale: float | None = None):
    """(1/n) tr (mat/scale - z)^{-1} from direct banded solves."""
    zs = np.atleast_1d(_upper(z))
    vals = np.array([np.trace(banded_resolvent(mat, zz, scale)) / mat.n for zz in zs.ravel()])
    return complex(vals[0]) if np.ndim(z) == 0 else vals.reshape(np.shape(z))


class ZeroTempResolvent:
    """Zero-temperature eigenvectors from Hermite functions, and resolvent entries.

    Row ``i`` (1-based) of eigenvector ``m`` is proportional to
    ``E_{n-i}(sqrt(n) * lambdabar_m)``, with ``lambdabar_m`` the zeros of H_n
    divided by sqrt(2n); the columns are normalised to unit length and signed
    so the first row is positive.  Entries: R_kl(z) = sum_m u_m(k) u_m(l) / (lambdabar_m - z).
    """

    def __init__(self, n: int):
        if n < 1:
            raise InvalidParameterError(f"n must be positive, got {n}")
        self.n = n
        self.eigs_scaled = hermite_zeros(n) / spectral_scale(n)
        # E_d is evaluated at sqrt(n) * lambdabar_m, i.e. at the H_n zeros over sqrt(2)
        table = hermite_function_table(n - 1, math.sqrt(n) * self.eigs_scaled)
        u = table[::-1].copy()  # row i <-> degree n-1-i
        u /= np.linalg.norm(u, axis=0)
        u *= np.sign(u[0])
        self.vectors = u

    def degree(self, row):
        """Hermite degree attached to a 1-based row index."""
        return self.n - np.asarray(row)

    def spectrum(self) -> Spectrum:
        return Spectrum(self.eigs_scaled.copy(), self.vectors[0] ** 2)

    def _inv(self, z):
        return 1.0 / (self.eigs_scaled - complex(_upper(z)))

    def entry(self, k: int, l: int, z) -> complex:
        """R_kl(z) for 1-based rows ``k``, ``l``."""
        if not (1 <= k <= self.n and 1 <= l <= self.n):
            raise InvalidParameterError(f"indices must lie in [1, {self.n}]")
        return complex(np.sum(self.vectors[k - 1] * self.vectors[l - 1] * self._inv(z)))

    def diagonal(self, z) -> np.ndarray:
        """All R_kk(z), k = 1..n."""
        return (self.vectors ** 2) @ self._inv(z)

    def pairs(self, rows_k, rows_l, z) -> np.ndarray:
        """R_kl(z) for matched arrays of 1-based rows."""
        a = self.vectors[np.asarray(rows_k) - 1]
        b = self.vectors[np.asarray(rows_l) - 1]
        return (a * b) @ self._inv(z)


@lru_cache(maxsize=8)
def zero_temp_resolvent(n: int) -> ZeroTempResolvent:
    """Cached :class:`ZeroTempResolvent` (the eigenvector table is O(n^2))."""
    return ZeroTempResolvent(n)


def resolvent_entry_zero_temp(n: int, k: int, l: int, z, spec: Spectrum | None = None) -> complex:
    """R^inf_kl(z) through the Hermite-function eigenvector identity.

    ``spec`` is accepted for interface symmetry; the eigenvalues are taken
    from the cached Hermite zeros, which agree with any zero-temperature
    spectrum to solver precision.
    """
    return zero_temp_resolvent(n).entry(k, l, z)


@dataclass
class BoundReport:
    """Audit of |R_kl| against an entry bound.

    ``argmax`` is ``(k, l, z)`` in 1-based row indices.  ``fitted_constant``
    is the smallest C for which the bound holds on every sample at this n
    (the largest ratio); ``per_z_max`` keeps the per-z maxima.
    """

    kind: str
    n: int
    epsilon: float
    max_ratio: float
    argmax: tuple
    fitted_constant: float
    per_z_max: list = field(default_factory=list)
    trivial_cap_ok: bool = True
    samples: int = 0

    def to_dict(self):
        d = asdict(self)
        k, l, z = self.argmax
        d["argmax"] = {"k": int(k), "l": int(l), "z_re": z.real, "z_im": z.imag}
        d["per_z_max"] = [float(v) for v in self.per_z_max]
        return d


def _offdiag_degrees(n: int, count: int = 40) -> np.ndarray:
    return np.unique(np.round(np.geomspace(1, n - 1, count)).astype(int))


def audit_prop_R_bounds(n: int, domain: SpectralDomain, epsilon: float | None = None,
                        kind: str = "diagonal") -> BoundReport:
    """Largest ratio of |R^inf_kl| to the entry bound, over a stratified sample.

    Rows are labelled by their Hermite degree d = n - row.

    diagonal:     |R_kk| (1 + |sqrt(d) - sqrt(n) |E||) / (sqrt(n) log n), all d;
                  also checks the trivial cap |R_kk| <= 1/eta.
    offdiagonal:  |R_kl| d_k^{1/4} d_l^{1/4} |sqrt(d_k) - sqrt(d_l)| / n^{1/2 - epsilon/8}
                  over pairs d_k > d_l >= 1 from a geometric grid of degrees.
    """
    if kind not in ("diagonal", "offdiagonal"):
        raise InvalidParameterError(f"unknown bound kind {kind!r}")
    epsilon = domain.epsilon if epsilon is None else epsilon
    if domain.regime != "mesoscopic":
        raise InvalidParameterError("entry bounds are audited on the eta > n^(-1/2+eps) domain")
    domain.validate(n)
    res = zero_temp_resolvent(n)
    best = (-1.0, (1, 1, 0j))
    per_z = []
    cap_ok = True
    samples = 0
    if kind == "diagonal":
        rows = np.arange(1, n + 1)
        deg = res.degree(rows).astype(float)
        for z in domain.grid:
            r = np.abs(res.diagonal(z))
            cap_ok &= bool(np.all(r <= 1.0 / z.imag * (1 + 1e-10)))
            h = np.abs(np.sqrt(deg) - math.sqrt(n) * abs(z.real))
            ratio = r * (1 + h) / (math.sqrt(n) * math.log(n))
            j = int(np.argmax(ratio))
            per_z.append(float(ratio[j]))
            samples += ratio.size
            if ratio[j] > best[0]:
                best = (float(ratio[j]), (int(rows[j]), int(rows[j]), z))
    else:
        degs = _offdiag_degrees(n)
        dk, dl = np.meshgrid(degs, degs, indexing="ij")
        mask = dk > dl
        dk, dl = dk[mask], dl[mask]
        rk, rl = n - dk, n - dl
        weight = dk ** 0.25 * dl ** 0.25 * np.abs(np.sqrt(dk) - np.sqrt(dl)) / n ** (0.5 - epsilon / 8)
        for z in domain.grid:
            ratio = np.abs(res.pairs(rk, rl, z)) * weight
            j = int(np.argmax(ratio))
            per_z.append(float(ratio[j]))
            samples += ratio.size
            if ratio[j] > best[0]:
                best = (float(ratio[j]), (int(rk[j]), int(rl[j]), z))
    return BoundReport(kind, n, float(epsilon), best[0], best[1], best[0], per_z, cap_ok, samples)


def audit_diag_power_sums(n: int, z, m: int, epsilon: float = 0.2) -> float:
    """sum_k |R^inf_kk(z)|^m divided by n^{m/2 - m epsilon/8}."""
    if m < 3:
        raise InvalidParameterError(f"power m must be at least 3, got {m}")
    z = complex(_upper(z))
    if z.imag <= n ** (-0.5 + epsilon):
        raise InvalidParameterError("need eta > n^(-1/2+epsilon)")
    r = np.abs(zero_temp_resolvent(n).diagonal(z))
    return float(np.sum(r ** m) / n ** (m / 2 - m * epsilon / 8))


@dataclass
class ExpansionRecord:
    """Truncated resolvent expansion of s_beta(z) around zero temperature."""

    s_exact: complex
    s_zero_temp: complex
    s_truncated: complex
    per_order_terms: list
    remainder: complex


def _delta_symmetric_basis(draws_sym, chi, params):
    """Delta conjugated into the basis where the zero-temperature part is symmetric.

    With D_inf the zero-temperature weights, D_inf^{-1} Delta D_inf keeps the
    diagonal and multiplies sub[s] by d_s / d_{s+1} = sqrt(n / (n - s - 1)).
    """
    n = params.n
    asym = build_asymmetric(params, chi, draws_sym.diag)
    delta = fluctuation_delta(asym, build_asymmetric_zero_temperature(n))
    s = np.arange(n - 1)
    return delta.diag, delta.sub * np.sqrt(n / (n - s - 1.0))


def expansion_trace(n: int, beta: float, m_order: int, z, rng: RngStream,
                    max_order: int = 6) -> ExpansionRecord:
    """Expand s_beta(z) = (1/n) tr (M_inf + Delta - z)^{-1} in powers of Delta.

    term_p = (1/n) tr[(R_inf (-Delta))^p R_inf], p = 1..m_order, built
    columnwise with banded solves of the zero-temperature matrix.  The exact
    s_beta comes from an eigensolve of the symmetric sample drawn from the
    same stream; ``remainder = s_exact - s_truncated``.
    """
    if not 0 <= m_order <= max_order:
        raise InvalidParameterError(f"m_order must lie in [0, {max_order}], got {m_order}")
    z = complex(_upper(z))
    params = EnsembleParams(int(n), beta)
    sym, chi = build_symmetric(params, rng)
    dd, ds = _delta_symmetric_basis(sym, chi, params)
    zero = build_zero_temperature(n)
    y = banded_resolvent(zero, z)
    s_inf = complex(np.trace(y) / n)
    terms = []
    for _ in range(m_order):
        x = dd[:, None] * y
        x[1:] += ds[:, None] * y[:-1]
        y = banded_resolvent(zero, z, rhs=-x)
        terms.append(complex(np.trace(y) / n))
    s_exact = stieltjes_from_spectrum(spectrum(sym), z)
    s_trunc = s_inf + sum(terms)
    return ExpansionRecord(s_exact, s_inf, s_trunc, terms, s_exact - s_trunc)


def schur_residual(m: TridiagSym, z, scale: float | None = None) -> float:
    """|R_11 - 1/(M_11 - z - M_12^2 Rminor_11)| for M = m/scale (default sqrt(2n)).

    R is the resolvent of M and Rminor that of its bottom-right (n-1) minor,
    both from direct banded solves.
    """
    z = complex(_upper(z))
    n = m.n
    if n < 2:
        raise InvalidInputError("the Schur identity needs n >= 2")
    scale = spectral_scale(n) if scale is None else scale
    e1 = np.zeros(n, dtype=complex)
    e1[0] = 1.0
    r11 = banded_resolvent(m, z, scale, rhs=e1)[0]
    minor = TridiagSym(m.diag[1:], m.offdiag[1:])
    f1 = np.zeros(n - 1, dtype=complex)
    f1[0] = 1.0
    rm11 = banded_resolvent(minor, z, scale, rhs=f1)[0]
    b = m.offdiag[0] / scale
    return float(abs(r11 - 1.0 / (m.diag[0] / scale - z - b * b * rm11)))

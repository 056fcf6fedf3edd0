"""Special functions: Hermite polynomials and functions, Airy, semicircle law.

Conventions
-----------
``hermite_poly`` is the physicists' H_n (leading coefficient 2**n).
``hermite_function`` is the orthonormal Hermite function with a compressed
argument, ``E_k(x) = 2**(1/4) * psi_k(sqrt(2) * x)`` where ``psi_k`` is the
usual orthonormal Hermite function.  Its oscillatory region is
``|x| < sqrt(k)`` and its bulk amplitude is ``sqrt(2/pi) * k**(-1/4)``.

Hermite values overflow double precision for degrees around 150, so every
recurrence here carries a mantissa together with a natural-log scale.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np
from scipy import integrate

from .errors import InvalidInputError, InvalidParameterError

__all__ = [
    "ScaledReal",
    "ScaledComplex",
    "hermite_poly",
    "hermite_poly_complex",
    "hermite_ratio",
    "hermite_zeros",
    "hermite_function",
    "hermite_function_table",
    "airy",
    "airy_prime",
    "semicircle_density",
    "semicircle_cdf",
    "semicircle_tail",
    "semicircle_stieltjes",
    "equilibrium_potential",
    "arcsin_upper",
    "phase_phi",
    "pr_oscillatory",
    "pr_transition",
    "tail_inverse",
    "hermite_zero_prediction",
    "semiclassical_location",
]

_RESCALE_AT = 1e150
_LOG_RESCALE_AT = math.log(_RESCALE_AT)


# ---------------------------------------------------------------------------
# Scaled arithmetic
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScaledReal:
    """Real number stored as ``sign * exp(log_magnitude)``.

    Fields may be numpy arrays, in which case every operation is elementwise.
    Zero is ``sign == 0`` with ``log_magnitude == -inf``.
    """

    sign: object
    log_magnitude: object

    @classmethod
    def from_float(cls, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            logm = np.log(np.abs(x))
        sign = np.sign(x).astype(int)
        if x.ndim == 0:
            return cls(int(sign), float(logm))
        return cls(sign, logm)

    def to_float(self):
        return self.sign * np.exp(self.log_magnitude)

    def __float__(self):
        return float(self.to_float())

    def __neg__(self):
        return ScaledReal(-self.sign, self.log_magnitude)

    def __mul__(self, other):
        other = _as_scaled(other)
        return ScaledReal(self.sign * other.sign, self.log_magnitude + other.log_magnitude)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_scaled(other)
        if np.any(np.asarray(other.sign) == 0):
            raise ZeroDivisionError("division by a ScaledReal zero")
        return ScaledReal(self.sign * other.sign, self.log_magnitude - other.log_magnitude)

    def __add__(self, other):
        other = _as_scaled(other)
        la = np.asarray(self.log_magnitude, dtype=float)
        lb = np.asarray(other.log_magnitude, dtype=float)
        top = np.maximum(la, lb)
        finite_top = np.where(np.isfinite(top), top, 0.0)
        with np.errstate(invalid="ignore"):
            v = self.sign * np.exp(la - finite_top) + other.sign * np.exp(lb - finite_top)
        with np.errstate(divide="ignore"):
            logm = np.where(v == 0, -np.inf, finite_top + np.log(np.abs(v)))
        sign = np.sign(v).astype(int)
        if sign.ndim == 0:
            return ScaledReal(int(sign), float(logm))
        return ScaledReal(sign, logm)

    def __sub__(self, other):
        return self + (-_as_scaled(other))


def _as_scaled(x):
    return x if isinstance(x, ScaledReal) else ScaledReal.from_float(x)


@dataclass(frozen=True)
class ScaledComplex:
    """Complex number stored in log-polar form ``exp(log_magnitude + i*phase)``."""

    log_magnitude: object
    phase: object

    def to_complex(self):
        return np.exp(self.log_magnitude + 1j * self.phase)


def _hermite_recurrence(n, x):
    """Run H_{k+1} = 2x H_k - 2k H_{k-1} up to degree n with rescaling.

    Returns ``(h_prev, h_curr, log_scale)`` so that
    ``H_{n-1}(x) = h_prev * exp(log_scale)`` and ``H_n(x) = h_curr * exp(log_scale)``.
    For ``n == 0`` the returned ``h_prev`` is zero.
    """
    x = np.asarray(x)
    dtype = complex if np.iscomplexobj(x) else float
    h_prev = np.zeros(x.shape, dtype=dtype)
    h_curr = np.ones(x.shape, dtype=dtype)
    log_scale = np.zeros(x.shape)
    two_x = 2.0 * x
    for k in range(n):
        h_next = two_x * h_curr - (2.0 * k) * h_prev
        h_prev, h_curr = h_curr, h_next
        big = np.maximum(np.abs(h_prev), np.abs(h_curr))
        over = big > _RESCALE_AT
        if np.any(over):
            s = np.where(over, big, 1.0)
            h_prev = h_prev / s
            h_curr = h_curr / s
            log_scale = log_scale + np.log(s)
    return h_prev, h_curr, log_scale


def hermite_poly(n: int, x):
    """Physicists' Hermite polynomial H_n(x) as a :class:`ScaledReal`."""
    if n < 0:
        raise InvalidParameterError(f"degree must be non-negative, got {n}")
    x = np.asarray(x, dtype=float)
    _, h, log_scale = _hermite_recurrence(n, x)
    with np.errstate(divide="ignore"):
        logm = np.log(np.abs(h)) + log_scale
    sign = np.sign(h).astype(int)
    logm = np.where(sign == 0, -np.inf, logm)
    if x.ndim == 0:
        return ScaledReal(int(sign), float(logm))
    return ScaledReal(sign, logm)


def hermite_poly_complex(n: int, z):
    """H_n(z) for complex ``z`` in log-polar form (:class:`ScaledComplex`)."""
    if n < 0:
        raise InvalidParameterError(f"degree must be non-negative, got {n}")
    z = np.asarray(z, dtype=complex)
    _, h, log_scale = _hermite_recurrence(n, z)
    with np.errstate(divide="ignore"):
        logm = np.log(np.abs(h)) + log_scale
    return ScaledComplex(logm, np.angle(h))


def hermite_ratio(n: int, z):
    """H_{n-1}(z) / H_n(z), computed from a single scaled recurrence pass."""
    if n < 1:
        raise InvalidParameterError(f"ratio needs n >= 1, got {n}")
    h_prev, h_curr, _ = _hermite_recurrence(n, np.asarray(z))
    with np.errstate(divide="ignore", invalid="ignore"):
        return h_prev / h_curr


def hermite_zeros(n: int, tol: float = 1e-15, max_iter: int = 100):
    """Zeros of H_n, ascending, by Newton iteration on the scaled recurrence.

    Starting points come from the zero-location asymptotics; the Newton step
    ``H_n / H_n' = H_n / (2n H_{n-1})`` is a ratio of mantissas, so it never
    overflows.
    """
    if n < 1:
        raise InvalidParameterError(f"need n >= 1, got {n}")
    if n == 1:
        return np.zeros(1)
    k = np.arange(1, n + 1)
    t = (6 * k - 3) / (6 * n) + np.arcsin(tail_inverse(k / n)) / (2 * np.pi * n)
    x = math.sqrt(2 * n) * tail_inverse(np.clip(t, 1e-300, 1 - 1e-16))
    x = np.sort(x)
    for _ in range(max_iter):
        h_prev, h_curr, _ = _hermite_recurrence(n, x)
        step = h_curr / (2.0 * n * h_prev)
        x = x - step
        if np.all(np.abs(step) <= tol * np.maximum(1.0, np.abs(x))):
            break
    x = np.sort(x)
    if np.any(np.diff(x) <= 0):
        raise ArithmeticError("Newton iteration merged two Hermite zeros")
    # exact symmetry of the zero set
    x = 0.5 * (x - x[::-1])
    return x


# ---------------------------------------------------------------------------
# Hermite functions
# ---------------------------------------------------------------------------


def _hermite_function_scaled(nmax, x, table):
    u = math.sqrt(2.0) * np.asarray(x, dtype=float)
    # E_0(x) = 2^{1/4} pi^{-1/4} exp(-u^2/2), kept as log-scale with mantissa 1
    log_scale = -0.5 * u * u + 0.25 * math.log(2.0) - 0.25 * math.log(math.pi)
    p_prev = np.zeros(u.shape)
    p_curr = np.ones(u.shape)
    out = np.empty((nmax + 1,) + u.shape) if table else None
    if table:
        out[0] = np.exp(log_scale)
    for j in range(nmax):
        p_next = math.sqrt(2.0 / (j + 1)) * u * p_curr - math.sqrt(j / (j + 1)) * p_prev
        p_prev, p_curr = p_curr, p_next
        big = np.maximum(np.abs(p_prev), np.abs(p_curr))
        over = big > _RESCALE_AT
        if np.any(over):
            s = np.where(over, big, 1.0)
            p_prev = p_prev / s
            p_curr = p_curr / s
            log_scale = log_scale + np.log(s)
        if table:
            out[j + 1] = p_curr * np.exp(log_scale)
    if table:
        return out
    return p_curr * np.exp(log_scale)


def hermite_function(n: int, x):
    """Orthonormal Hermite function E_n(x) (compressed-argument convention)."""
    if n < 0:
        raise InvalidParameterError(f"degree must be non-negative, got {n}")
    val = _hermite_function_scaled(n, x, table=False)
    return float(val) if np.ndim(val) == 0 else val


def hermite_function_table(nmax: int, x):
    """Array ``T`` with ``T[j] = E_j(x)`` for ``j = 0..nmax``."""
    if nmax < 0:
        raise InvalidParameterError(f"degree must be non-negative, got {nmax}")
    return _hermite_function_scaled(nmax, x, table=True)


# ---------------------------------------------------------------------------
# Airy functions
# ---------------------------------------------------------------------------

_AIRY_SWITCH = 6.0
_AI0 = 1.0 / (3.0 ** (2.0 / 3.0) * math.gamma(2.0 / 3.0))
_AIP0 = -1.0 / (3.0 ** (1.0 / 3.0) * math.gamma(1.0 / 3.0))


def _airy_u_coefficients(count):
    u = [1.0]
    for k in range(1, count):
        # u_k = Gamma(3k+1/2) / (54^k k! Gamma(k+1/2))
        u.append(math.exp(math.lgamma(3 * k + 0.5) - k * math.log(54.0)
                          - math.lgamma(k + 1) - math.lgamma(k + 0.5)))
    u = np.array(u)
    v = np.array([1.0] + [-(6 * k + 1) / (6 * k - 1) * u[k] for k in range(1, count)])
    return u, v


_AIRY_U, _AIRY_V = _airy_u_coefficients(40)


def _airy_series(x):
    x = np.asarray(x, dtype=float)
    x3 = x ** 3
    f = np.ones_like(x)
    g = x.copy()
    fp = 0.5 * x * x
    gp = np.ones_like(x)
    tf, tg, tfp, tgp = f.copy(), g.copy(), fp.copy(), gp.copy()
    for k in range(0, 90):
        tf = tf * x3 / ((3 * k + 2) * (3 * k + 3))
        tg = tg * x3 / ((3 * k + 3) * (3 * k + 4))
        tgp = tgp * x3 / ((3 * k + 1) * (3 * k + 3))
        f += tf
        g += tg
        gp += tgp
        if k >= 1:
            tfp = tfp * x3 / (3 * k * (3 * k + 2))
            fp += tfp
    ai = _AI0 * f + _AIP0 * g
    aip = _AI0 * fp + _AIP0 * gp
    return ai, aip


def _truncated_sum(coef, inv_zeta, parity=None):
    """Sum of (-1)^k c_k zeta^-k, stopped at the smallest term."""
    total = np.zeros_like(inv_zeta)
    prev = np.full_like(inv_zeta, np.inf)
    active = np.ones(inv_zeta.shape, dtype=bool)
    idx = range(len(coef)) if parity is None else range(parity, len(coef), 2)
    for sgn_i, k in enumerate(idx):
        term = (-1) ** sgn_i * coef[k] * inv_zeta ** k
        active &= np.abs(term) < prev
        total = total + np.where(active, term, 0.0)
        prev = np.abs(term)
    return total


def _airy_asymptotic_positive(x):
    zeta = (2.0 / 3.0) * x ** 1.5
    iz = 1.0 / zeta
    pref = np.exp(-zeta) / (2.0 * math.sqrt(math.pi))
    ai = pref / x ** 0.25 * _truncated_sum(_AIRY_U, iz)
    aip = -pref * x ** 0.25 * _truncated_sum(_AIRY_V, iz)
    return ai, aip


def _airy_asymptotic_negative(x):
    y = -x
    zeta = (2.0 / 3.0) * y ** 1.5
    iz = 1.0 / zeta
    c, s = np.cos(zeta - math.pi / 4), np.sin(zeta - math.pi / 4)
    u_even = _truncated_sum(_AIRY_U, iz, parity=0)
    u_odd = _truncated_sum(_AIRY_U, iz, parity=1)
    v_even = _truncated_sum(_AIRY_V, iz, parity=0)
    v_odd = _truncated_sum(_AIRY_V, iz, parity=1)
    ai = (c * u_even + s * u_odd) / (math.sqrt(math.pi) * y ** 0.25)
    aip = y ** 0.25 * (s * v_even - c * v_odd) / math.sqrt(math.pi)
    return ai, aip


def _airy_both(x):
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    ai = np.empty_like(x)
    aip = np.empty_like(x)
    mid = np.abs(x) <= _AIRY_SWITCH
    hi = x > _AIRY_SWITCH
    lo = x < -_AIRY_SWITCH
    if mid.any():
        ai[mid], aip[mid] = _airy_series(x[mid])
    if hi.any():
        ai[hi], aip[hi] = _airy_asymptotic_positive(x[hi])
    if lo.any():
        ai[lo], aip[lo] = _airy_asymptotic_negative(x[lo])
    if scalar:
        return float(ai[0]), float(aip[0])
    return ai, aip


def airy(x):
    """Airy function Ai(x): Maclaurin series for |x| <= 6, asymptotic expansions beyond."""
    return _airy_both(x)[0]


def airy_prime(x):
    """Derivative Ai'(x), same representation switch as :func:`airy`."""
    return _airy_both(x)[1]


# ---------------------------------------------------------------------------
# Semicircle law
# ---------------------------------------------------------------------------


def semicircle_density(x):
    """rho_sc(x) = (2/pi) sqrt(1 - x^2) on [-1, 1], zero outside."""
    x = np.asarray(x, dtype=float)
    val = np.where(np.abs(x) < 1, (2.0 / np.pi) * np.sqrt(np.clip(1 - x * x, 0, None)), 0.0)
    return float(val) if val.ndim == 0 else val


def semicircle_cdf(x):
    """Distribution function of rho_sc, in closed form."""
    x = np.clip(np.asarray(x, dtype=float), -1.0, 1.0)
    val = 0.5 + (x * np.sqrt(1 - x * x) + np.arcsin(x)) / np.pi
    return float(val) if val.ndim == 0 else val


def semicircle_tail(x):
    """Right-tail mass: the integral of rho_sc over [x, 1]."""
    x = np.clip(np.asarray(x, dtype=float), -1.0, 1.0)
    val = 0.5 - (x * np.sqrt(1 - x * x) + np.arcsin(x)) / np.pi
    return float(val) if val.ndim == 0 else val


def semicircle_stieltjes(z):
    """s_sc(z) = 2(-z + (z-1)^{1/2}(z+1)^{1/2}) with principal square roots.

    Defined off the support [-1, 1]; equals the integral of rho_sc(x)/(x - z).
    """
    z = np.asarray(z, dtype=complex)
    on_cut = (z.imag == 0) & (np.abs(z.real) <= 1)
    if np.any(on_cut):
        raise InvalidInputError("s_sc is undefined on the support [-1, 1]")
    val = 2.0 * (-z + np.sqrt(z - 1) * np.sqrt(z + 1))
    return complex(val) if val.ndim == 0 else val


def equilibrium_potential(z):
    """Logarithmic potential g(z) = integral of rho_sc(x) log(z - x) dx.

    Adaptive Gauss-Kronrod quadrature after the substitution x = cos(theta),
    which removes the square-root endpoint behaviour.
    """
    z = np.asarray(z, dtype=complex)
    bad = (z.imag == 0) & (z.real <= 1)
    if np.any(bad):
        raise InvalidInputError("g(z) is defined only off the half-line (-inf, 1]")

    def one(zz):
        def f_re(th):
            return np.sin(th) ** 2 * np.log(np.abs(zz - np.cos(th)))

        def f_im(th):
            return np.sin(th) ** 2 * np.angle(zz - np.cos(th))

        opts = dict(epsabs=1e-13, epsrel=1e-11, limit=400)
        re = integrate.quad(f_re, 0.0, np.pi, **opts)[0]
        im = integrate.quad(f_im, 0.0, np.pi, **opts)[0]
        return (2.0 / np.pi) * complex(re, im)

    if z.ndim == 0:
        return one(complex(z))
    return np.array([one(complex(v)) for v in z.ravel()]).reshape(z.shape)


def arcsin_upper(z):
    """arcsin(z) = -i log(iz + sqrt(1-z) sqrt(1+z)), principal branches.

    Maps the upper half-plane onto the half-strip |Re w| < pi/2, Im w > 0.
    """
    z = np.asarray(z, dtype=complex)
    return -1j * np.log(1j * z + np.sqrt(1 - z) * np.sqrt(1 + z))


def phase_phi(z):
    """phi(z) = -i z (1-z)^{1/2} (1+z)^{1/2} - 2i arcsin z + i pi.

    Only evaluated on the bulk strip Im z > 0, |Re z| < 1.
    """
    z = np.asarray(z, dtype=complex)
    if np.any(z.imag <= 0) or np.any(np.abs(z.real) >= 1):
        raise InvalidInputError("phase_phi needs Im z > 0 and |Re z| < 1")
    val = -1j * z * np.sqrt(1 - z) * np.sqrt(1 + z) - 2j * arcsin_upper(z) + 1j * np.pi
    return complex(val) if val.ndim == 0 else val


# ---------------------------------------------------------------------------
# Plancherel-Rotach approximants
# ---------------------------------------------------------------------------


def _a_minus_sin(a):
    """a - sin(a) without cancellation for small a."""
    a = np.asarray(a, dtype=float)
    small = np.abs(a) < 0.1
    a2 = a * a
    series = a * a2 / 6 * (1 - a2 / 20 * (1 - a2 / 42 * (1 - a2 / 72 * (1 - a2 / 110))))
    return np.where(small, series, a - np.sin(a))


def _sinh_minus(a):
    """sinh(a) - a without cancellation for small a."""
    a = np.asarray(a, dtype=float)
    small = np.abs(a) < 0.1
    a2 = a * a
    series = a * a2 / 6 * (1 + a2 / 20 * (1 + a2 / 42 * (1 + a2 / 72 * (1 + a2 / 110))))
    return np.where(small, series, np.sinh(a) - a)


def _airy_argument(one_minus_t, t):
    """Olver's variable zeta(t) for w'' = u^2 (t^2 - 1) w, and zeta / (t^2 - 1).

    (2/3)(-zeta)^{3/2} = int_t^1 sqrt(1-s^2) ds for t < 1,
    (2/3) zeta^{3/2}   = int_1^t sqrt(s^2-1) ds for t > 1.
    """
    inside = one_minus_t > 0
    d = np.abs(one_minus_t)
    # t = cos(phi) inside, t = cosh(psi) outside; both angles via half-angle forms
    phi = 2.0 * np.arcsin(np.sqrt(np.where(inside, d, 0.0) / 2.0))
    psi = 2.0 * np.arcsinh(np.sqrt(np.where(inside, 0.0, d) / 2.0))
    area_in = 0.25 * _a_minus_sin(2.0 * phi)
    area_out = 0.25 * _sinh_minus(2.0 * psi)
    zeta = np.where(inside, -(1.5 * area_in) ** (2.0 / 3.0), (1.5 * area_out) ** (2.0 / 3.0))
    t2m1 = -one_minus_t * (1.0 + t)
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(d < 1e-12, 2.0 ** (-2.0 / 3.0), zeta / t2m1)
    return zeta, ratio


def pr_oscillatory(k: int, x, mu: float = 0.2):
    """Leading oscillatory-region approximant to E_k(x), |x| < sqrt(k)(1 - mu).

    sqrt(2/pi) k^{-1/4} (1 - x^2/k)^{-1/4}
        * cos(sqrt(k) pi int_{sqrt k}^x rho_sc(y/sqrt k) dy + arcsin(x/sqrt k)/2)
    with the phase integral in closed form: it equals -k * pi * tail(x/sqrt k).
    """
    if k < 1:
        raise InvalidParameterError(f"k must be >= 1, got {k}")
    x = np.asarray(x, dtype=float)
    rk = math.sqrt(k)
    if np.any(np.abs(x) >= rk * (1 - mu)):
        raise InvalidInputError("x outside the oscillatory region |x| < sqrt(k)(1 - mu)")
    t = x / rk
    phase = -k * np.pi * semicircle_tail(t) + 0.5 * np.arcsin(t)
    val = math.sqrt(2.0 / math.pi) * k ** -0.25 * (1 - t * t) ** -0.25 * np.cos(phase)
    return float(val) if val.ndim == 0 else val


def pr_transition(k: int, x, mu: float = 0.2):
    """Airy-type approximant to E_k(x) near the turning point |x| = sqrt(k).

    Uniform form  sqrt(2) K^{-1/4} (2K)^{1/6} (zeta/(t^2-1))^{1/4} Ai((2K)^{2/3} zeta)
    with K = k + 1/2, t = |x|/sqrt(K); the Airy argument f = (2K)^{2/3} zeta obeys
    (-f)^{3/2} = (3 pi / 2) K int_t^1 rho_sc inside the turning point.  The left
    edge follows from parity, E_k(-x) = (-1)^k E_k(x).
    """
    if k < 1:
        raise InvalidParameterError(f"k must be >= 1, got {k}")
    x = np.asarray(x, dtype=float)
    rk = math.sqrt(k)
    ax = np.abs(x)
    if np.any(ax <= rk * (1 - mu)) or np.any(ax >= rk * (1 + mu)):
        raise InvalidInputError("x outside the transition region sqrt(k)(1 -+ mu)")
    big_k = k + 0.5
    rkk = math.sqrt(big_k)
    one_minus_t = (rkk - ax) / rkk
    t = ax / rkk
    zeta, ratio = _airy_argument(one_minus_t, t)
    u23 = (2.0 * big_k) ** (2.0 / 3.0)
    val = (math.sqrt(2.0) * big_k ** -0.25 * (2.0 * big_k) ** (1.0 / 6.0)
           * ratio ** 0.25 * airy(u23 * zeta))
    val = np.where((x < 0) & (k % 2 == 1), -val, val)
    return float(val) if val.ndim == 0 else val


# ---------------------------------------------------------------------------
# Quantiles of the semicircle law
# ---------------------------------------------------------------------------


def _newton_bisect(target, f, fprime, decreasing=False, tol=1e-12, max_iter=200):
    """Solve f(x) = target on [-1, 1] for a monotone f, elementwise.

    Newton steps that leave the current bracket are replaced by bisection.
    """
    target = np.asarray(target, dtype=float)
    lo = np.full(target.shape, -1.0)
    hi = np.full(target.shape, 1.0)
    x = np.zeros(target.shape)
    for _ in range(max_iter):
        r = f(x) - target
        if decreasing:
            r = -r
        hi = np.where(r > 0, x, hi)
        lo = np.where(r <= 0, x, lo)
        d = fprime(x) * (-1 if decreasing else 1)
        with np.errstate(divide="ignore", invalid="ignore"):
            x_new = x - r / d
        bad = ~np.isfinite(x_new) | (x_new <= lo) | (x_new >= hi)
        x_new = np.where(bad, 0.5 * (lo + hi), x_new)
        done = np.abs(x_new - x) <= tol
        x = x_new
        if np.all(done):
            break
    return x


def tail_inverse(t):
    """zeta(t): the point whose right-tail semicircle mass equals t.

    Decreasing in t, with tail_inverse(1/2) = 0.
    """
    t = np.asarray(t, dtype=float)
    if np.any((t < 0) | (t > 1)):
        raise InvalidParameterError("tail mass must lie in [0, 1]")
    x = _newton_bisect(t, semicircle_tail, semicircle_density, decreasing=True, tol=1e-15)
    x = np.where(t == 0.5, 0.0, x)
    return float(x) if x.ndim == 0 else x


def hermite_zero_prediction(k, n: int, k0: int = 10):
    """Predicted scaled k-th zero (counted from the right) of H_n.

    zeta((6k - 3)/(6n) + arcsin(zeta(k/n)) / (2 pi n)), on the scale where the
    zeros fill [-1, 1] (raw zeros divided by sqrt(2n)).
    """
    k = np.asarray(k)
    if np.any(k < k0) or np.any(k > n - k0):
        raise InvalidParameterError(f"k must lie in [{k0}, {n - k0}]")
    arg = (6 * k - 3) / (6 * n) + np.arcsin(tail_inverse(k / n)) / (2 * np.pi * n)
    return tail_inverse(arg)


def semiclassical_location(j, n: int):
    """gamma_j with semicircle_cdf(gamma_j) = j / n."""
    j = np.asarray(j)
    if np.any(j < 1) or np.any(j > n):
        raise InvalidParameterError(f"j must lie in [1, {n}]")
    x = _newton_bisect(j / n, semicircle_cdf, semicircle_density, tol=1e-13)
    x = np.where(2 * j == n, 0.0, x)
    x = np.where(j == n, 1.0, x)
    return float(x) if x.ndim == 0 else x

"""Symmetric tridiagonal eigensolver: Sturm bisection plus inverse iteration.

Bisection on the LDL^T inertia count gives every eigenvalue independently and
bit-for-bit reproducibly; inverse iteration then recovers single eigenvectors
(or just their first components) in O(n) work each.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numba
import numpy as np

from .errors import InvalidInputError, NumericalFailureError
from .models import TridiagSym, spectral_scale

__all__ = ["Spectrum", "sturm_count", "eigenvalues", "eigenvector", "spectrum", "default_tol"]

_EPS = np.finfo(float).eps
_SAFE_MIN = np.finfo(float).tiny


@numba.njit(cache=True, nogil=True)
def _count_below(d, e2, x, pivmin):
    """Number of negative pivots of LDL^T = T - x I (eigenvalues < x)."""
    count = 0
    q = d[0] - x
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0:
        count += 1
    for i in range(1, d.size):
        q = d[i] - x - e2[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0:
            count += 1
    return count


@numba.njit(cache=True, nogil=True)
def _counts_below(d, e2, xs, pivmin, out):
    """:func:`_count_below` at many shifts at once.

    The shift loop is innermost so the divisions of different shifts are
    independent and pipeline well.
    """
    m = xs.size
    q = np.empty(m)
    for j in range(m):
        v = d[0] - xs[j]
        if abs(v) < pivmin:
            v = -pivmin
        q[j] = v
        out[j] = 1 if v < 0 else 0
    for i in range(1, d.size):
        di = d[i]
        ei = e2[i - 1]
        for j in range(m):
            v = di - xs[j] - ei / q[j]
            if abs(v) < pivmin:
                v = -pivmin
            q[j] = v
            out[j] += 1 if v < 0 else 0


@numba.njit(cache=True, nogil=True)
def _bisect_block(d, e2, lo0, hi0, tol, pivmin):
    """All eigenvalues of one block by simultaneous bisection.

    Eigenvalue j keeps a bracket with count(lo_j) <= j < count(hi_j); every
    sweep halves all brackets still wider than ``tol``.
    """
    n = d.size
    lo = np.full(n, lo0)
    hi = np.full(n, hi0)
    idx = np.arange(n)
    while True:
        act = idx[(hi - lo) > tol]
        if act.size == 0:
            break
        mids = 0.5 * (lo[act] + hi[act])
        c = np.empty(act.size, dtype=np.int64)
        _counts_below(d, e2, mids, pivmin, c)
        for t in range(act.size):
            j = act[t]
            if mids[t] <= lo[j] or mids[t] >= hi[j]:
                lo[j] = mids[t]
                hi[j] = mids[t]
            elif c[t] > j:
                hi[j] = mids[t]
            else:
                lo[j] = mids[t]
    return 0.5 * (lo + hi)


@numba.njit(cache=True, nogil=True)
def _tridiag_solve(d, e, lam, b, pert):
    """Solve (T - lam I) x = b by Gaussian elimination with partial pivoting.

    Zero pivots are replaced by ``pert`` (inverse iteration only needs the
    direction of the solution).
    """
    n = d.size
    # U has up to two super-diagonals after row interchanges
    u0 = np.empty(n)
    u1 = np.zeros(n)
    u2 = np.zeros(n)
    rhs = b.copy()
    diag = d[0] - lam
    sup = e[0] if n > 1 else 0.0
    for i in range(n - 1):
        sub = e[i]
        nd = d[i + 1] - lam
        nsup = e[i + 1] if i + 1 < n - 1 else 0.0
        if abs(diag) >= abs(sub):
            if diag == 0.0:
                diag = pert
            m = sub / diag
            u0[i] = diag
            u1[i] = sup
            u2[i] = 0.0
            rhs[i + 1] -= m * rhs[i]
            diag = nd - m * sup
            sup = nsup
        else:
            m = diag / sub
            u0[i] = sub
            u1[i] = nd
            u2[i] = nsup
            tmp = rhs[i]
            rhs[i] = rhs[i + 1]
            rhs[i + 1] = tmp - m * rhs[i]
            diag = sup - m * nd
            sup = -m * nsup
    if diag == 0.0:
        diag = pert
    u0[n - 1] = diag
    x = np.empty(n)
    for i in range(n - 1, -1, -1):
        s = rhs[i]
        if i + 1 < n:
            s -= u1[i] * x[i + 1]
        if i + 2 < n:
            s -= u2[i] * x[i + 2]
        x[i] = s / u0[i]
    return x


@numba.njit(cache=True, nogil=True)
def _residual(d, e, lam, v):
    n = d.size
    r2 = 0.0
    for i in range(n):
        s = (d[i] - lam) * v[i]
        if i > 0:
            s += e[i - 1] * v[i - 1]
        if i < n - 1:
            s += e[i] * v[i + 1]
        r2 += s * s
    return math.sqrt(r2)


@numba.njit(cache=True, nogil=True)
def _inverse_iteration(d, e, lam, start, pert, target, max_iter, basis):
    """Inverse iteration, orthogonalised against the rows of ``basis``.

    Two further steps follow the first one that meets ``target``: each step
    shrinks the leftover components along other eigenvectors by about
    |lam error| / gap, which matters for tiny components.
    """
    v = start.copy()
    res = np.inf
    extra = -1
    for _ in range(max_iter):
        x = _tridiag_solve(d, e, lam, v, pert)
        for r in range(basis.shape[0]):
            c = 0.0
            for i in range(x.size):
                c += basis[r, i] * x[i]
            for i in range(x.size):
                x[i] -= c * basis[r, i]
        nrm = 0.0
        for i in range(x.size):
            nrm += x[i] * x[i]
        nrm = math.sqrt(nrm)
        if not nrm > 0.0 or not math.isfinite(nrm):
            return v, np.inf
        v = x / nrm
        res = _residual(d, e, lam, v)
        if res <= target and extra < 0:
            extra = 2
        if extra == 0:
            return v, res
        if extra > 0:
            extra -= 1
    return v, res


@numba.njit(cache=True, nogil=True)
def _first_components(d, e, lams, start, pert, target, max_iter, cluster):
    """Squared first components of the eigenvectors for every eigenvalue.

    Returns the weights and the worst residual; eigenvalues closer than
    ``cluster`` to their predecessor are orthogonalised against it.
    """
    n = lams.size
    w = np.empty(n)
    worst = 0.0
    prev = np.zeros((0, d.size))
    for j in range(n):
        if j > 0 and lams[j] - lams[j - 1] < cluster:
            basis = prev
        else:
            basis = np.zeros((0, d.size))
        v, res = _inverse_iteration(d, e, lams[j], start, pert, target, max_iter, basis)
        if res > worst:
            worst = res
        w[j] = v[0] * v[0]
        prev = np.empty((1, d.size))
        prev[0, :] = v
    return w, worst


def _check_matrix(m: TridiagSym):
    if not (np.all(np.isfinite(m.diag)) and np.all(np.isfinite(m.offdiag))):
        raise InvalidInputError("matrix has non-finite entries")


def _gershgorin(m: TridiagSym):
    a = np.abs(m.offdiag)
    r = np.zeros(m.n)
    r[:-1] += a
    r[1:] += a
    return float(np.min(m.diag - r)), float(np.max(m.diag + r))


def _norm_bound(m: TridiagSym) -> float:
    lo, hi = _gershgorin(m)
    return max(abs(lo), abs(hi), _SAFE_MIN)


def default_tol(m: TridiagSym) -> float:
    """Absolute bisection tolerance: 1e-12 times the Gershgorin radius."""
    return 1e-12 * _norm_bound(m)


def _pivmin(m: TridiagSym) -> float:
    e2max = float(np.max(m.offdiag ** 2)) if m.n > 1 else 0.0
    return _SAFE_MIN * max(1.0, e2max)


def sturm_count(m: TridiagSym, x: float) -> int:
    """Number of eigenvalues of ``m`` strictly below ``x``."""
    if not math.isfinite(x):
        raise InvalidInputError(f"x must be finite, got {x}")
    _check_matrix(m)
    e2 = np.ascontiguousarray(m.offdiag ** 2)
    return int(_count_below(np.ascontiguousarray(m.diag), e2, float(x), _pivmin(m)))


def _split_points(m: TridiagSym):
    """Indices i where offdiag[i] is negligible, so the matrix decouples."""
    a = np.abs(m.diag)
    small = np.abs(m.offdiag) <= _EPS * np.sqrt(a[:-1] * a[1:]) + _SAFE_MIN
    return np.flatnonzero(small)


def eigenvalues(m: TridiagSym, tol: float | None = None) -> np.ndarray:
    """All eigenvalues of ``m`` in ascending order, to absolute accuracy ``tol``."""
    _check_matrix(m)
    if tol is None:
        tol = default_tol(m)
    if not tol > 0:
        raise InvalidInputError(f"tol must be positive, got {tol}")
    n = m.n
    if n == 1:
        return m.diag.copy()
    cuts = _split_points(m)
    bounds = [0] + [int(c) + 1 for c in cuts] + [n]
    out = []
    for a, b in zip(bounds[:-1], bounds[1:]):
        block = TridiagSym(m.diag[a:b], m.offdiag[a:b - 1])
        lo, hi = _gershgorin(block)
        pad = tol + _EPS * max(abs(lo), abs(hi))
        d = np.ascontiguousarray(block.diag)
        e2 = np.ascontiguousarray(block.offdiag ** 2)
        out.append(_bisect_block(d, e2, lo - pad, hi + pad, float(tol), _pivmin(block)))
    return np.sort(np.concatenate(out))


def _start_vector(n: int) -> np.ndarray:
    v = np.random.default_rng(20240607).uniform(0.5, 1.5, n)
    return v / np.linalg.norm(v)


def eigenvector(m: TridiagSym, lam: float, tol: float | None = None, neighbors=()) -> np.ndarray:
    """Unit eigenvector for the eigenvalue ``lam`` by inverse iteration.

    ``neighbors`` are already computed unit eigenvectors; those belonging to
    eigenvalues within ``1e3 * tol`` should be passed so the result is
    orthogonalised against them.  The sign makes the first non-negligible
    component positive.
    """
    _check_matrix(m)
    if tol is None:
        tol = default_tol(m)
    n = m.n
    if n == 1:
        return np.ones(1)
    nrm = _norm_bound(m)
    basis = np.asarray(list(neighbors), dtype=float).reshape(-1, n)
    v, res = _inverse_iteration(
        np.ascontiguousarray(m.diag), np.ascontiguousarray(m.offdiag), float(lam),
        _start_vector(n), _EPS * nrm, 1e-10 * nrm, 10, np.ascontiguousarray(basis))
    if not res <= 1e-9 * nrm:
        raise NumericalFailureError(
            f"inverse iteration did not converge for lambda={lam}", residual=float(res))
    big = np.flatnonzero(np.abs(v) > 1e-8 * np.max(np.abs(v)))
    if v[big[0]] < 0:
        v = -v
    return v


@dataclass
class Spectrum:
    """Scaled eigenvalues (ascending) and first-component weights q_j^2."""

    eigs_scaled: np.ndarray
    weights: np.ndarray

    @property
    def n(self) -> int:
        return self.eigs_scaled.size

    def stieltjes(self, z):
        """Empirical (unweighted) Stieltjes transform (1/n) sum 1/(lambda_j - z)."""
        z = np.asarray(z, dtype=complex)
        val = np.mean(1.0 / (self.eigs_scaled[:, None] - z.ravel()[None, :]), axis=0)
        return complex(val[0]) if z.ndim == 0 else val.reshape(z.shape)


def spectrum(m: TridiagSym, n: int | None = None, tol: float | None = None) -> Spectrum:
    """Eigenvalues divided by ``sqrt(2n)`` and squared first eigenvector components."""
    if n is not None and n != m.n:
        raise InvalidInputError(f"matrix has dimension {m.n}, not {n}")
    n = m.n
    if tol is None:
        tol = default_tol(m)
    lam = eigenvalues(m, tol)
    if n == 1:
        return Spectrum(lam / spectral_scale(1), np.ones(1))
    nrm = _norm_bound(m)
    w, worst = _first_components(
        np.ascontiguousarray(m.diag), np.ascontiguousarray(m.offdiag), lam,
        _start_vector(n), _EPS * nrm, 1e-10 * nrm, 10, 1e3 * tol)
    if not worst <= 1e-9 * nrm:
        raise NumericalFailureError("inverse iteration did not converge", residual=float(worst))
    return Spectrum(lam / spectral_scale(n), w)

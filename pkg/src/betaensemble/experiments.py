"""Monte Carlo campaigns and deterministic sweeps.

Every random trial ``t`` draws from ``RngStream(seed, t)``; trials run on a
thread pool and are merged in trial order, so a summary never depends on
scheduling.  A trial that raises is kept as an invalid record; a campaign
with more than 1% invalid trials raises :class:`CampaignFailure`.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
import math
import os

import numpy as np
from scipy import stats

from .eigensolver import Spectrum, eigenvalues, eigenvector, spectrum
from .errors import InvalidInputError, InvalidParameterError, NumericalFailureError
from .models import (
    EnsembleParams,
    TridiagSym,
    build_asymmetric,
    build_symmetric,
    build_zero_temperature,
    conjugation_weights,
    spectral_scale,
)
from .resolvent import (
    SpectralDomain,
    audit_prop_R_bounds,
    banded_resolvent,
    expansion_trace,
    schur_residual,
    stieltjes_banded_trace,
    stieltjes_from_spectrum,
    stieltjes_zero_temp_ratio,
    zero_temp_resolvent,
)
from .sampling import RngStream, sample_chi
from .special import (
    hermite_function,
    hermite_zero_prediction,
    pr_oscillatory,
    pr_transition,
    semicircle_cdf,
    semicircle_density,
    semicircle_stieltjes,
    semiclassical_location,
)

THREADS_ENV = "BETAENSEMBLE_THREADS"
MAX_INVALID_FRACTION = 0.01


class CampaignFailure(NumericalFailureError):
    """Too many trials of a campaign failed to produce a result."""


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


@dataclass
class _Outcome:
    trial: int
    value: object = None
    error: str | None = None

    @property
    def valid(self):
        return self.error is None


def _run_trials(fn, trials: int, threads: int | None = None) -> list:
    """Run ``fn(t)`` for t in range(trials); failures become invalid outcomes."""

    def one(t):
        try:
            return _Outcome(t, fn(t))
        except (ArithmeticError, ValueError) as exc:
            return _Outcome(t, None, f"{type(exc).__name__}: {exc}")

    threads = default_threads() if threads is None else threads
    if threads <= 1:
        return [one(t) for t in range(trials)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(one, range(trials)))


def _check_invalid(outcomes, label):
    bad = sum(not o.valid for o in outcomes)
    if bad > MAX_INVALID_FRACTION * len(outcomes):
        raise CampaignFailure(f"{label}: {bad} of {len(outcomes)} trials invalid")
    return bad


def loglog_slope(x, y) -> float:
    """Least-squares slope of log y against log x."""
    return float(np.polyfit(np.log(np.asarray(x, float)), np.log(np.asarray(y, float)), 1)[0])


def wilson_interval(successes: int, total: int, z: float = 1.959963984540054):
    """Wilson score interval for a binomial proportion."""
    if total <= 0:
        raise InvalidParameterError("total must be positive")
    p = successes / total
    denom = 1 + z * z / total
    centre = (p + z * z / (2 * total)) / denom
    half = z * math.sqrt(p * (1 - p) / total + z * z / (4 * total * total)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


def _scaled_eigs(m: TridiagSym) -> np.ndarray:
    return eigenvalues(m) / spectral_scale(m.n)


# ---------------------------------------------------------------------------
# Local law
# ---------------------------------------------------------------------------


@dataclass
class TrialResult:
    seed: int
    stream_id: int
    n: int
    beta: float
    sup_error: float
    per_point: list = field(default_factory=list)
    valid: bool = True
    message: str = ""


@dataclass
class CampaignSummary:
    n: int
    beta: float
    trials: int
    c: float
    exceed_fraction: float
    wilson_low: float
    wilson_high: float
    quantiles: dict
    invalid: int
    results: list = field(default_factory=list, repr=False)

    def to_dict(self):
        d = asdict(self)
        d.pop("results")
        return d


def run_local_law_trial(params: EnsembleParams, domain: SpectralDomain, seed: int,
                        stream_id: int = 0) -> TrialResult:
    """One sample: sup over the grid of |s_beta(z) - s_sc(z)|."""
    domain.validate(params.n)
    z = np.array(domain.grid)
    try:
        m, _ = build_symmetric(params, RngStream(seed, stream_id))
        lam = _scaled_eigs(m)
        s = np.mean(1.0 / (lam[:, None] - z[None, :]), axis=0)
        err = np.abs(s - semicircle_stieltjes(z))
    except (ArithmeticError, ValueError) as exc:
        return TrialResult(seed, stream_id, params.n, params.beta, math.nan, [], False, str(exc))
    per_point = [(complex(a), float(b)) for a, b in zip(z, err)]
    return TrialResult(seed, stream_id, params.n, params.beta, float(err.max()), per_point)


def deviation_probability_campaign(ns, beta: float, c: float, trials: int, seed: int,
                                   epsilon: float = 0.1, delta: float = 0.2, n_re: int = 11,
                                   n_im: int = 11, threads: int | None = None) -> list:
    """Exceed fraction P(sup_z |s - s_sc| > c) per n, with Wilson intervals."""
    if trials < 1:
        raise InvalidParameterError("trials must be positive")
    out = []
    for n in ns:
        params = EnsembleParams(int(n), beta)
        dom = SpectralDomain.default(int(n), epsilon, delta, n_re, n_im)
        res = [o.value for o in _run_trials(
            lambda t: run_local_law_trial(params, dom, seed, t), trials, threads)]
        invalid = sum(not r.valid for r in res)
        if invalid > MAX_INVALID_FRACTION * trials:
            raise CampaignFailure(f"local law n={n}: {invalid} of {trials} trials invalid")
        sup = np.array([r.sup_error for r in res if r.valid])
        exceed = int(np.sum(sup > c))
        lo, hi = wilson_interval(exceed, sup.size)
        q = {f"q{int(p * 100)}": float(np.quantile(sup, p)) for p in (0.5, 0.9, 0.95, 0.99)}
        q["max"] = float(sup.max())
        out.append(CampaignSummary(int(n), beta, trials, c, exceed / sup.size, lo, hi, q, invalid, res))
    return out


# ---------------------------------------------------------------------------
# Rigidity and counting
# ---------------------------------------------------------------------------


@dataclass
class RigidityRecord:
    max_dev: float
    argmax_j: int
    per_j: np.ndarray


def rigidity_check(spec: Spectrum, delta: float = 0.1) -> RigidityRecord:
    """|lambdabar_j - gamma_j| for bulk indices delta*n <= j <= (1-delta)*n."""
    n = spec.n
    j = np.arange(max(1, math.ceil(delta * n)), math.floor((1 - delta) * n) + 1)
    if j.size == 0:
        raise InvalidParameterError("empty bulk window")
    dev = np.abs(spec.eigs_scaled[j - 1] - semiclassical_location(j, n))
    k = int(np.argmax(dev))
    return RigidityRecord(float(dev[k]), int(j[k]), dev)


def rigidity_campaign(ns, beta: float, trials: int, seed: int, delta: float = 0.1,
                      threads: int | None = None) -> dict:
    """Median over trials of the maximal bulk deviation, per n, and its decay slope."""
    medians = []
    invalid = 0
    for n in ns:
        params = EnsembleParams(int(n), beta)

        def trial(t):
            m, _ = build_symmetric(params, RngStream(seed, t))
            return rigidity_check(Spectrum(_scaled_eigs(m), np.full(m.n, 1.0 / m.n)), delta).max_dev

        outs = _run_trials(trial, trials, threads)
        invalid += _check_invalid(outs, f"rigidity n={n}")
        medians.append(float(np.median([o.value for o in outs if o.valid])))
    return {"ns": list(map(int, ns)), "median_max_dev": medians,
            "slope": loglog_slope(ns, medians), "invalid": invalid}


def counting_check(spec: Spectrum, interval, tau: float | None = None,
                   eta: float | None = None) -> float:
    """|N_I - n * int_I rho_sc| for I = [a, b].

    When ``tau`` and ``eta`` are supplied, the interval must be long enough
    for the counting estimate: |I| >= max(2 eta, (eta/tau) log(1/tau)).
    """
    a, b = map(float, interval)
    if not b > a:
        raise InvalidInputError("interval must have a < b")
    if tau is not None and eta is not None:
        need = max(2 * eta, eta / tau * math.log(1 / tau))
        if b - a < need:
            raise InvalidInputError(f"interval length {b - a} below the required {need}")
    lam = spec.eigs_scaled
    count = np.searchsorted(lam, b, side="right") - np.searchsorted(lam, a, side="left")
    return float(abs(count - spec.n * (semicircle_cdf(b) - semicircle_cdf(a))))


def counting_campaign(n: int, beta: float, interval, trials: int, seed: int,
                      fraction: float = 0.05, threads: int | None = None) -> dict:
    """95th percentile of the counting discrepancy against fraction * n * |I|."""
    params = EnsembleParams(int(n), beta)

    def trial(t):
        m, _ = build_symmetric(params, RngStream(seed, t))
        return counting_check(Spectrum(_scaled_eigs(m), np.full(n, 1.0 / n)), interval)

    outs = _run_trials(trial, trials, threads)
    invalid = _check_invalid(outs, "counting")
    vals = np.array([o.value for o in outs if o.valid])
    p95 = float(np.quantile(vals, 0.95))
    threshold = fraction * n * (interval[1] - interval[0])
    return {"n": n, "beta": beta, "interval": list(interval), "p95": p95,
            "threshold": threshold, "passed": p95 < threshold, "invalid": invalid,
            "discrepancies": vals.tolist()}


# ---------------------------------------------------------------------------
# First row and concentration
# ---------------------------------------------------------------------------


def _normalized_chi_vector(n, beta, rng):
    v = np.asarray(sample_chi(np.full(n, float(beta)), rng))
    return v / np.linalg.norm(v)


def first_row_independence_test(params: EnsembleParams, trials: int, seed: int,
                                threads: int | None = None) -> dict:
    """Compare sqrt(n) q_j from eigenvectors with normalised chi_beta vectors.

    The eigen-derived sample pools sqrt(n) |q_j| over j and trials; the
    reference sample is drawn directly (streams ``trials + t``).  Also reports
    the correlation between q_1^2 and the smallest eigenvalue.
    """
    if trials < 1:
        raise InvalidParameterError("trials must be positive")
    n, beta = params.n, params.beta

    def trial(t):
        m, _ = build_symmetric(params, RngStream(seed, t))
        sp = spectrum(m)
        ref = _normalized_chi_vector(n, beta, RngStream(seed, trials + t))
        return sp.weights, sp.eigs_scaled[0], ref

    outs = _run_trials(trial, trials, threads)
    invalid = _check_invalid(outs, "first-row")
    good = [o.value for o in outs if o.valid]
    w = np.array([g[0] for g in good])
    lam1 = np.array([g[1] for g in good])
    ref = np.array([g[2] for g in good])
    eig_sample = np.sqrt(n * w).ravel()
    ref_sample = (math.sqrt(n) * ref).ravel()
    ks = stats.ks_2samp(eig_sample, ref_sample)
    r = float(np.corrcoef(w[:, 0], lam1)[0, 1])
    return {"n": n, "beta": beta, "trials": trials, "ks_statistic": float(ks.statistic),
            "p_value": float(ks.pvalue), "corr_q1_lambda1": r,
            "max_weight_sum_error": float(np.max(np.abs(w.sum(axis=1) - 1))), "invalid": invalid}


def concentration_check(params: EnsembleParams, z: complex, trials: int, seed: int,
                        lambdas=None) -> dict:
    """Tail of X = sum_j (q_j^2 - 1/n)/(lambdabar_j - z) with the spectrum held fixed.

    One spectrum is sampled from stream 0; the weights are then redrawn as
    normalised chi_beta vectors, which is their conditional law.  The tail
    log P(|X - mean| > lam * sigma) is regressed on lam^2.
    """
    n, beta = params.n, params.beta
    z = complex(z)
    if not z.imag > n ** -0.5:
        raise InvalidParameterError("need Im z > n^(-1/2)")
    lambdas = np.linspace(1.0, 3.0, 9) if lambdas is None else np.asarray(lambdas, float)
    m, _ = build_symmetric(params, RngStream(seed, 0))
    lam = _scaled_eigs(m)
    kernel = 1.0 / (lam - z)
    xs = np.empty(trials, dtype=complex)
    for t in range(trials):
        q = _normalized_chi_vector(n, beta, RngStream(seed, t + 1))
        xs[t] = np.sum((q * q - 1.0 / n) * kernel)
    mean = xs.mean()
    dev = np.abs(xs - mean)
    sigma = float(math.sqrt(np.mean(dev ** 2)))
    tail = np.array([np.mean(dev > l * sigma) for l in lambdas])
    keep = tail > 0
    slope = float(np.polyfit(lambdas[keep] ** 2, np.log(tail[keep]), 1)[0]) if keep.sum() >= 2 else math.nan
    scale = float(math.sqrt(np.sum(np.abs(kernel) ** 2)) / n)
    return {"n": n, "beta": beta, "z": [z.real, z.imag], "trials": trials,
            "mean_abs": float(abs(mean)), "centered": bool(abs(mean) <= 3 * sigma / math.sqrt(trials)),
            "sigma": sigma, "scale_reference": scale, "scale_ratio": sigma / scale,
            "lambdas": lambdas.tolist(), "tail": tail.tolist(), "tail_slope": slope}


# ---------------------------------------------------------------------------
# Deterministic zero-temperature studies
# ---------------------------------------------------------------------------


def zero_temp_convergence_study(ns, epsilon: float = 0.1, delta: float = 0.2, n_re: int = 11,
                                n_im: int = 11, eta_max: float = 0.1) -> dict:
    """sup over the default grid of |s_n - s_sc| at zero temperature, per n."""
    sups = []
    for n in ns:
        dom = SpectralDomain.default(int(n), epsilon, delta, n_re, n_im, eta_max)
        z = np.array(dom.grid)
        lam = _scaled_eigs(build_zero_temperature(int(n)))
        s = np.mean(1.0 / (lam[:, None] - z[None, :]), axis=0)
        sups.append(float(np.max(np.abs(s - semicircle_stieltjes(z)))))
    slope = loglog_slope(ns, sups) if len(ns) > 1 else math.nan
    return {"ns": list(map(int, ns)), "sup_error": sups, "slope": slope}


def stieltjes_three_way(n: int, grid) -> dict:
    """Pairwise relative gaps between spectral-sum, Hermite-ratio and banded-trace s_n."""
    z = np.asarray(grid, dtype=complex)
    mat = build_zero_temperature(n)
    a = stieltjes_from_spectrum(Spectrum(_scaled_eigs(mat), np.full(n, 1.0 / n)), z)
    b = stieltjes_zero_temp_ratio(n, z)
    c = stieltjes_banded_trace(mat, z)

    def rel(x, y):
        return float(np.max(np.abs(x - y) / np.abs(y)))

    return {"n": n, "points": int(z.size), "spectral_vs_ratio": rel(a, b),
            "spectral_vs_banded": rel(a, c), "ratio_vs_banded": rel(b, c)}


def schur_campaign(trials: int, seed: int, max_n: int = 200, betas=(1.0, 2.0, 4.0)) -> dict:
    """Schur-complement residual over random (n, beta, z) triples."""
    res = []
    for t in range(trials):
        rng = RngStream(seed, t)
        g = rng.generator
        n = int(g.integers(2, max_n + 1))
        beta = float(betas[int(g.integers(0, len(betas)))])
        z = complex(g.uniform(-0.9, 0.9), 10 ** g.uniform(-2, 0))
        m, _ = build_symmetric(EnsembleParams(n, beta), rng)
        res.append({"n": n, "beta": beta, "z": [z.real, z.imag], "residual": schur_residual(m, z)})
    return {"trials": trials, "max_residual": max(r["residual"] for r in res), "records": res}


def conjugation_check(n: int, beta: float, seed: int, z: complex = 0.1 + 0.05j) -> dict:
    """Symmetric versus asymmetric model built from one set of draws.

    Spectra: the asymmetric matrix is symmetrised through upper*lower and
    solved independently.  Resolvents: full banded inverses of both, compared
    through R~_kl = (d_k/d_l) R_kl.
    """
    params = EnsembleParams(int(n), beta)
    sym, chi = build_symmetric(params, RngStream(seed, 0))
    asym = build_asymmetric(params, chi, sym.diag)
    w = conjugation_weights(params, chi)
    ev_sym = eigenvalues(sym)
    ev_asym = eigenvalues(TridiagSym(asym.diag, np.sqrt(asym.upper * asym.lower)))
    spec_rel = float(np.max(np.abs(ev_sym - ev_asym)) / np.max(np.abs(ev_sym)))
    r = banded_resolvent(sym, z)
    rt = banded_resolvent(asym, z)
    k, l = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    pred = w.ratio(k, l) * r
    res_rel = float(np.max(np.abs(rt - pred) / np.abs(pred)))
    return {"n": n, "beta": beta, "spectrum_rel": spec_rel, "resolvent_rel": res_rel}


def eigenvector_hermite_check(n_vec: int = 30, n_weight: int = 1000, delta: float = 0.2) -> dict:
    """Eigensolver eigenvectors versus the Hermite-function identity, and weight asymptotics.

    The weight statistic is n E_{n-1}(lambda_m)^2 / (sqrt(n) rho_sc(lambdabar_m)) over
    bulk eigenvalues |lambdabar_m| < 1 - delta.
    """
    mat = build_zero_temperature(n_vec)
    lam = eigenvalues(mat)
    herm = zero_temp_resolvent(n_vec).vectors
    worst = 0.0
    for j, lj in enumerate(lam):
        v = eigenvector(mat, lj)
        u = herm[:, j]
        big = np.abs(u) > 1e-8
        worst = max(worst, float(np.max(np.abs(v[big] - u[big]) / np.abs(u[big]))))
    lb = _scaled_eigs(build_zero_temperature(n_weight))
    bulk = np.abs(lb) < 1 - delta
    e = hermite_function(n_weight - 1, math.sqrt(n_weight) * lb[bulk])
    ratio = n_weight * e ** 2 / (math.sqrt(n_weight) * semicircle_density(lb[bulk]))
    return {"n_vec": n_vec, "max_component_rel": worst, "n_weight": n_weight,
            "weight_ratio_min": float(ratio.min()), "weight_ratio_max": float(ratio.max())}


def asymptotics_validation(ks, mu: float = 0.2, points: int = 2001) -> dict:
    """Plancherel-Rotach accuracy per degree k.

    oscillatory_error: max over |x| <= 0.8 sqrt(k) of |pr_oscillatory - E_k| / k^{-1/4}.
    transition_error: max over the transition window of |pr_transition - E_k| / k^{-1/12}.
    transition_amplitude: max of |pr_transition| over the window (scales as k^{-1/12}).
    """
    osc, trans, amp, parity = [], [], [], []
    for k in ks:
        rk = math.sqrt(k)
        x = np.linspace(-(1 - mu), 1 - mu, points) * rk * (1 - 1e-12)
        e = hermite_function(k, x)
        osc.append(float(np.max(np.abs(pr_oscillatory(k, x, mu) - e)) / k ** -0.25))
        parity.append(float(np.max(np.abs(np.abs(pr_oscillatory(k, x, mu) - e)
                                          - np.abs(pr_oscillatory(k, -x, mu) - hermite_function(k, -x))))))
        xt = np.linspace(1 - mu, 1 + mu, points)[1:-1] * rk
        pt = pr_transition(k, xt, mu)
        trans.append(float(np.max(np.abs(pt - hermite_function(k, xt))) / k ** (-1.0 / 12)))
        amp.append(float(np.max(np.abs(pt))))
    return {"ks": list(map(int, ks)), "oscillatory_error": osc, "oscillatory_slope": loglog_slope(ks, osc),
            "transition_error": trans, "transition_amplitude": amp,
            "transition_exponent": loglog_slope(ks, amp), "parity_gap": max(parity)}


def zero_prediction_study(ns, k0: int = 10) -> dict:
    """Fitted envelope constant max_k |pred - true| n^2 (k/n (1-k/n))^{4/3}, per n."""
    consts = []
    for n in ns:
        true = _scaled_eigs(build_zero_temperature(int(n)))[::-1]  # k-th from the right
        k = np.arange(k0, n - k0 + 1)
        pred = hermite_zero_prediction(k, int(n), k0)
        env = n ** 2 * ((k / n) * (1 - k / n)) ** (4.0 / 3)
        consts.append(float(np.max(np.abs(pred - true[k - 1]) * env)))
    return {"ns": list(map(int, ns)), "constants": consts,
            "spread": max(consts) / min(consts)}


def partial_sum_bound_check(n: int, k: int, l: int, eta: float = 0.05) -> float:
    """Max over endpoints of |sum_{t<=m} E_k E_l / (n E_{n-1}^2)| over the bound.

    The summand is evaluated at the zero-temperature eigenvalues (ascending);
    the bound is k^{-1/4} l^{-1/4} (sqrt k - sqrt l)^{-1} n^eta.
    """
    if not 1 <= l < k <= n:
        raise InvalidParameterError(f"need 1 <= l < k <= n, got k={k}, l={l}, n={n}")
    x = math.sqrt(n) * zero_temp_resolvent(n).eigs_scaled
    num = hermite_function(k, x) * hermite_function(l, x)
    den = n * hermite_function(n - 1, x) ** 2
    ps = np.cumsum(num / den)
    rhs = k ** -0.25 * l ** -0.25 / (math.sqrt(k) - math.sqrt(l)) * n ** eta
    return float(np.max(np.abs(ps)) / rhs)


def partial_sum_study(ns, fk=(0.3, 0.5, 0.7, 0.9), fl=(0.1, 0.2, 0.4, 0.6), gap: float = 2.0,
                      eta: float = 0.05) -> dict:
    """Largest partial-sum ratio per n over a grid of degree fractions."""
    per_n = []
    for n in ns:
        best = 0.0
        for a in fk:
            for b in fl:
                k, l = int(a * n), int(b * n)
                if l < k and math.sqrt(k) - math.sqrt(l) >= gap:
                    best = max(best, partial_sum_bound_check(int(n), k, l, eta))
        per_n.append(best)
    return {"ns": list(map(int, ns)), "max_ratio": per_n, "spread": max(per_n) / min(per_n)}


def resolvent_audit_study(ns, epsilon: float = 0.2, energies=None) -> dict:
    """Entry-bound audits over an n-sweep.

    Per n the constant is the largest sampled ratio; the fitted constant is
    their geometric mean (least squares on the log scale).  Stable means
    max/min <= 3 across n; no sampled ratio may exceed 10x the fitted constant.
    """
    energies = np.linspace(-0.8, 0.8, 5) if energies is None else energies
    out = {}
    for kind in ("diagonal", "offdiagonal"):
        reports = []
        for n in ns:
            eta0 = n ** (-0.5 + epsilon) * 1.01
            grid = [complex(e, h) for e in energies for h in (eta0, 2 * eta0)]
            dom = SpectralDomain(epsilon, 0.2, grid, "mesoscopic")
            reports.append(audit_prop_R_bounds(int(n), dom, epsilon, kind))
        consts = [r.fitted_constant for r in reports]
        fitted = float(np.exp(np.mean(np.log(consts))))
        worst = max(r.max_ratio for r in reports)
        out[kind] = {"ns": list(map(int, ns)), "constants": consts, "fitted_constant": fitted,
                     "spread": max(consts) / min(consts), "max_ratio": worst,
                     "max_over_fitted": worst / fitted,
                     "trivial_cap_ok": all(r.trivial_cap_ok for r in reports),
                     "reports": [r.to_dict() for r in reports]}
    return out


def expansion_study(n: int, beta: float, trials: int, seed: int, z: complex | None = None,
                    m_order: int = 3, threshold: float = 0.05, threads: int | None = None) -> dict:
    """Per-order magnitudes and truncation error of the resolvent expansion.

    ``decreasing`` means |term_1| > |term_2| > ... > |term_m|.
    """
    z = complex(0.2, n ** -0.3) if z is None else complex(z)
    outs = _run_trials(lambda t: expansion_trace(n, beta, m_order, z, RngStream(seed, t)),
                       trials, threads)
    invalid = _check_invalid(outs, "expansion")
    recs = [o.value for o in outs if o.valid]
    mags = np.array([[abs(t) for t in r.per_order_terms] for r in recs])
    rem = np.array([abs(r.remainder) for r in recs])
    dec = np.all(np.diff(mags, axis=1) < 0, axis=1)
    return {"n": n, "beta": beta, "z": [z.real, z.imag], "m_order": m_order, "trials": trials,
            "decreasing_fraction": float(dec.mean()), "truncation_fraction": float(np.mean(rem < threshold)),
            "magnitudes": mags.tolist(), "remainders": rem.tolist(), "invalid": invalid}

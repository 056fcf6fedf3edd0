import math

import numpy as np
import pytest

from betaensemble import experiments as ex
from betaensemble.eigensolver import Spectrum
from betaensemble.errors import InvalidInputError, NumericalFailureError
from betaensemble.models import EnsembleParams
from betaensemble.special import semiclassical_location


def test_loglog_slope_and_wilson():
    x = np.array([10, 20, 40])
    assert ex.loglog_slope(x, 3 * x ** -1.0) == pytest.approx(-1.0)
    proportion = pytest.importorskip("statsmodels.stats.proportion")
    for k, n in [(0, 100), (7, 100), (50, 60)]:
        want = proportion.proportion_confint(k, n, method="wilson")
        assert ex.wilson_interval(k, n) == pytest.approx(want, abs=1e-12)


def test_run_trials_ordered_and_invalid_records():
    def fn(t):
        if t == 3:
            raise NumericalFailureError("boom")
        return t * t

    outs = ex._run_trials(fn, 6, threads=2)
    assert [o.value for o in outs if o.valid] == [0, 1, 4, 16, 25]
    with pytest.raises(ex.CampaignFailure):
        ex._check_invalid(outs, "demo")


def test_rigidity_and_counting_on_exact_locations():
    n = 100
    j = np.arange(1, n + 1)
    spec = Spectrum(semiclassical_location(j, n) - 1e-9, np.full(n, 1 / n))
    assert ex.rigidity_check(spec, 0.1).max_dev < 1e-8
    assert ex.counting_check(spec, (0.1, 0.4)) < 1.0
    with pytest.raises(InvalidInputError):
        ex.counting_check(spec, (0.4, 0.1))
    with pytest.raises(InvalidInputError):
        ex.counting_check(spec, (0.1, 0.11), tau=0.01, eta=0.05)


def test_local_law_campaign_is_deterministic():
    a = ex.deviation_probability_campaign([50], 2.0, 0.5, 6, seed=3, n_re=3, n_im=3)
    b = ex.deviation_probability_campaign([50], 2.0, 0.5, 6, seed=3, n_re=3, n_im=3, threads=2)
    assert [r.sup_error for r in a[0].results] == [r.sup_error for r in b[0].results]
    assert 0 <= a[0].exceed_fraction <= 1


def test_small_studies_run():
    assert ex.stieltjes_three_way(100, [0.1 + 0.1j])["spectral_vs_ratio"] < 1e-9
    assert ex.schur_campaign(5, 0, max_n=30)["max_residual"] < 1e-10
    c = ex.conjugation_check(40, 2.0, 0)
    assert c["spectrum_rel"] < 1e-10 and c["resolvent_rel"] < 1e-8
    assert ex.partial_sum_bound_check(100, 50, 10) > 0


def test_first_row_and_concentration_small():
    fr = ex.first_row_independence_test(EnsembleParams(10, 2.0), 100, seed=1)
    assert fr["max_weight_sum_error"] < 1e-10 and 0 <= fr["ks_statistic"] <= 1
    cc = ex.concentration_check(EnsembleParams(50, 2.0), 0.1 + 0.3j, 300, seed=1)
    assert cc["sigma"] > 0 and len(cc["tail"]) == 9


def test_default_threads_env(monkeypatch):
    monkeypatch.setenv("BETAENSEMBLE_THREADS", "3")
    assert ex.default_threads() == 3

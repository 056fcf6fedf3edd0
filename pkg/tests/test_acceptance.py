"""Acceptance gate: one PASS/FAIL line per criterion at its stated tolerance.

Lines are printed as the tests run and repeated in the terminal summary.
"""

import math
import time

import numpy as np
import pytest

from betaensemble import experiments as ex
from betaensemble.models import EnsembleParams
from betaensemble.resolvent import SpectralDomain

from conftest import ACCEPTANCE_LINES

SEED = 1


def report(number, name, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:>2} {name}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.t0


def test_01_zero_temperature_law():
    with Timer() as t:
        res = ex.zero_temp_convergence_study([100, 200, 400, 800, 1600], epsilon=0.1, delta=0.2)
    ok = -1.3 <= res["slope"] <= -0.7 and res["sup_error"][-1] < 0.02 and t.seconds < 120
    report(1, "zero-temperature law", ok,
           f"slope={res['slope']:.3f} (need [-1.3,-0.7]), sup_error(1600)={res['sup_error'][-1]:.4f} (<0.02), "
           f"{t.seconds:.1f}s")


def test_02_three_way_stieltjes():
    dom = SpectralDomain.default(1000, 0.1, 0.2, 5, 5)
    with Timer() as t:
        res = ex.stieltjes_three_way(1000, dom.grid)
    worst = max(res["spectral_vs_ratio"], res["spectral_vs_banded"], res["ratio_vs_banded"])
    report(2, "three-way Stieltjes identity", worst < 1e-8 and res["points"] == 25 and t.seconds < 30,
           f"max pairwise relative gap={worst:.2e} over {res['points']} points (<1e-8), {t.seconds:.1f}s")


def test_03_schur_complement():
    with Timer() as t:
        res = ex.schur_campaign(50, SEED, max_n=200)
    report(3, "Schur complement", res["max_residual"] < 1e-10 and t.seconds < 10,
           f"max residual={res['max_residual']:.2e} over 50 triples (<1e-10), {t.seconds:.1f}s")


def test_04_conjugation():
    with Timer() as t:
        res = [ex.conjugation_check(200, beta, SEED) for beta in (1.0, 2.0, 4.0)]
    spec = max(r["spectrum_rel"] for r in res)
    resv = max(r["resolvent_rel"] for r in res)
    report(4, "similarity/conjugation", spec < 1e-10 and resv < 1e-8 and t.seconds < 20,
           f"spectrum rel={spec:.2e} (<1e-10), resolvent rel={resv:.2e} (<1e-8), n=200, {t.seconds:.1f}s")


def test_05_eigenvector_hermite():
    with Timer() as t:
        res = ex.eigenvector_hermite_check(30, 1000, delta=0.2)
    ok = (res["max_component_rel"] < 1e-6 and 0.8 <= res["weight_ratio_min"]
          and res["weight_ratio_max"] <= 1.2 and t.seconds < 30)
    report(5, "eigenvector-Hermite identity", ok,
           f"component rel={res['max_component_rel']:.2e} (<1e-6), weight ratio in "
           f"[{res['weight_ratio_min']:.5f}, {res['weight_ratio_max']:.5f}] (within [0.8,1.2]), {t.seconds:.1f}s")


def test_06_plancherel_rotach():
    with Timer() as t:
        asym = ex.asymptotics_validation([100, 400, 1600])
        zeros = ex.zero_prediction_study([100, 400])
    ok = (abs(asym["oscillatory_slope"] + 1) <= 0.3 and abs(asym["transition_exponent"] + 1 / 12) <= 0.02
          and zeros["spread"] <= 3 and t.seconds < 120)
    report(6, "Plancherel-Rotach accuracy", ok,
           f"oscillatory slope={asym['oscillatory_slope']:.3f} (-1+-0.3), transition exponent="
           f"{asym['transition_exponent']:.4f} (-1/12+-0.02), zero constants="
           f"{[round(c, 5) for c in zeros['constants']]} spread={zeros['spread']:.2f} (<=3), {t.seconds:.1f}s")


def test_07_entry_bound_audit():
    with Timer() as t:
        res = ex.resolvent_audit_study([250, 500, 1000], epsilon=0.2)
    d, o = res["diagonal"], res["offdiagonal"]
    ok = all(r["spread"] <= 3 and r["max_over_fitted"] <= 10 for r in (d, o)) and t.seconds < 180
    report(7, "entry-bound audit", ok,
           f"diagonal spread={d['spread']:.2f} max/fitted={d['max_over_fitted']:.2f}; off-diagonal "
           f"spread={o['spread']:.2f} max/fitted={o['max_over_fitted']:.2f} (<=3, <=10), {t.seconds:.1f}s")


def test_08_resolvent_expansion():
    n = 400
    z = complex(0.2, n ** (-0.5 + 0.2))
    with Timer() as t:
        res = ex.expansion_study(n, 2.0, 100, SEED, z, m_order=3, threshold=0.05)
    ok = res["decreasing_fraction"] >= 0.95 and res["truncation_fraction"] >= 0.95 and t.seconds < 300
    report(8, "resolvent expansion", ok,
           f"decreasing in {res['decreasing_fraction']:.0%}, truncation error <0.05 in "
           f"{res['truncation_fraction']:.0%} of 100 trials (each >=95%), {t.seconds:.1f}s")


def test_09_local_law_campaign():
    with Timer() as t:
        fracs = {}
        for beta in (1.0, 2.0, 4.0):
            sums = ex.deviation_probability_campaign([200, 500, 1000], beta, 0.1, 100, SEED,
                                                     epsilon=0.1, delta=0.2)
            fracs[beta] = [s.exceed_fraction for s in sums]
    ok = all(f[-1] == 0 and f[1] <= f[0] and f[2] <= f[1] for f in fracs.values()) and t.seconds < 600
    report(9, "local law campaign", ok,
           f"exceed fractions over n=200,500,1000: {fracs} (need 0 at n=1000, non-increasing), {t.seconds:.1f}s")


def test_10_rigidity():
    with Timer() as t:
        res = ex.rigidity_campaign([250, 500, 1000], 2.0, 100, SEED, delta=0.1)
    report(10, "rigidity", -1.3 <= res["slope"] <= -0.7 and t.seconds < 600,
           f"median max-deviation slope={res['slope']:.3f} (need [-1.3,-0.7]), {t.seconds:.1f}s")


def test_11_counting():
    with Timer() as t:
        res = ex.counting_campaign(1000, 1.0, (0.1, 0.4), 100, SEED)
    report(11, "counting", res["passed"] and t.seconds < 300,
           f"p95={res['p95']:.2f} (< {res['threshold']:.1f}), {t.seconds:.1f}s")


def test_12_first_row_and_concentration():
    with Timer() as t:
        fr = ex.first_row_independence_test(EnsembleParams(50, 2.0), 2000, SEED)
        cc = ex.concentration_check(EnsembleParams(500, 2.0), 0.2 + 0.1j, 5000, SEED)
    ok = fr["ks_statistic"] < 0.05 and cc["tail_slope"] < -0.3 and t.seconds < 300
    report(12, "first-row law and concentration", ok,
           f"KS={fr['ks_statistic']:.4f} (<0.05), tail slope={cc['tail_slope']:.3f} (<-0.3), {t.seconds:.1f}s")


def test_13_determinism():
    a = ex.counting_campaign(1000, 1.0, (0.1, 0.4), 20, SEED)
    b = ex.counting_campaign(1000, 1.0, (0.1, 0.4), 20, SEED, threads=2)
    c = ex.expansion_study(200, 2.0, 5, SEED)
    d = ex.expansion_study(200, 2.0, 5, SEED)
    e = ex.first_row_independence_test(EnsembleParams(20, 1.0), 50, SEED)
    f = ex.first_row_independence_test(EnsembleParams(20, 1.0), 50, SEED)
    ok = (a["discrepancies"] == b["discrepancies"] and c["magnitudes"] == d["magnitudes"]
          and c["remainders"] == d["remainders"] and e == f)
    report(13, "determinism", ok, "counting, expansion and first-row reruns with the same seed are bit-identical"
           if ok else "reruns differ")

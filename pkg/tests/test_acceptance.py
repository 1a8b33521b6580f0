"""End-to-end acceptance checks, one printed PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v``; each test prints its
verdict even when output capture is on.
"""

import math
import time

import numpy as np
import pytest
from scipy import stats

from ordscale import tables
from ordscale.cli import main
from ordscale.data import GAUGE5, RECONSTRUCTED_GAUGE5
from ordscale.estimators import BASELINE, EstimatorId as E, EstimatorOptions, Target
from ordscale.loss import baee_constant, stein_constant
from ordscale.model import (CensoringScheme, DoublyTypeII, IID, PopulationParams, ProgressiveTypeII, Records,
                            TypeII, scheme_for, scheme_stats_batch, simulate_scheme_data, sufficient_stats)
from ordscale.numeric import make_rng
from ordscale.risk import SimConfig, rri_curve
from ordscale.sigma1 import gen_bayes1, kubokawa_phi1
from ordscale.sigma2 import gen_bayes2, kubokawa_phi2

LOSSES = ("quadratic", "entropy", "symmetric")
ETAS = tuple(round(0.1 * k, 10) for k in range(1, 11))

# estimators whose dominance over the BAEE is claimed
IMPROVED = {
    Target.SIGMA1: (E.S1_1, E.S1_2, E.S1_3, E.KUB1, E.MAR1, E.STRAW1),
    Target.SIGMA2: (E.S2_1, E.S2_2, E.S2_3, E.KUB2, E.MAR2),
}


@pytest.fixture
def verdict(capsys):
    def report(number, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")
        assert ok, detail
    return report


def _deviation_detail(devs):
    return "; ".join(f"T{d.table} r{d.row + 1} {d.estimator.key} {d.computed:.3f} vs {d.published:.2f}"
                     for d in devs)


def test_criterion_1_sigma1_tables(verdict):
    start = time.perf_counter()
    devs = [d for t in (3, 4, 5) for d in tables.compare(t, reconstruct_missing=True, tol=0.02)]
    elapsed = time.perf_counter() - start
    ok = not devs and elapsed < 10
    verdict(1, ok, f"{84 - len(devs)}/84 cells within 0.02 in {elapsed:.2f}s"
            + (f"; off: {_deviation_detail(devs)}" if devs else ""))


def test_criterion_2_sigma2_tables(verdict):
    start = time.perf_counter()
    devs = [d for t in (6, 7, 8) for d in tables.compare(t, reconstruct_missing=True, tol=0.02)]

    # without the reconstructed observation the row-1 BAEE moves by a known amount
    full = sufficient_stats(np.sort(GAUGE5 + (RECONSTRUCTED_GAUGE5,)), 1, 30).v
    short_row = tables.reproduce(6, reconstruct_missing=False)[0]
    expected = (full - (RECONSTRUCTED_GAUGE5 - min(GAUGE5))) / 29
    offset_ok = math.isclose(short_row.values[0], expected, rel_tol=1e-12) and short_row.approximate
    elapsed = time.perf_counter() - start

    ok = not devs and offset_ok and elapsed < 10
    verdict(2, ok, f"{84 - len(devs)}/84 cells within 0.02 in {elapsed:.2f}s; unreconstructed offset "
            f"{'as documented' if offset_ok else 'WRONG'} (row 1 BAEE {short_row.values[0]:.4f} vs 255.29)"
            + (f"; off: {_deviation_detail(devs)}" if devs else ""))


def test_criterion_3_constant_oracles(verdict):
    worst = 0.0
    for kind in LOSSES:
        for m in range(3, 61):
            worst = max(worst,
                        abs(baee_constant(kind, m) - baee_constant(kind, m, numeric=True)),
                        abs(stein_constant(kind, m) - stein_constant(kind, m, numeric=True)))
    verdict(3, worst < 1e-8, f"max |closed - quadrature/root| = {worst:.2e} over 3 losses, m = 3..60")


def test_criterion_4_generalized_bayes(verdict):
    grid = [(v1, v2) for v1 in (0.3, 1.0, 2.5, 8.0) for v2 in (0.2, 0.9, 1.7, 4.0, 20.0)]
    m1, m2 = 9, 7
    worst = 0.0
    for kind in LOSSES:
        for v1, v2 in grid:
            worst = max(worst,
                        abs(gen_bayes1(kind, v1, v2, m1, m2) / (kubokawa_phi1(kind, v2 / v1, m1, m2) * v1) - 1),
                        abs(gen_bayes2(kind, v1, v2, m1, m2) / (kubokawa_phi2(kind, v1 / v2, m1, m2) * v2) - 1))
    verdict(4, worst < 1e-6, f"max relative gap {worst:.2e} on {len(grid)} (v1, v2) points x 3 losses, both targets")


@pytest.fixture(scope="module")
def preset_runs():
    """(8, 10) preset, 50,000 replicates, every loss and target."""
    start = time.perf_counter()
    runs = {}
    for loss in LOSSES:
        for target in Target:
            ests = tuple(e for e in IMPROVED[target] if not (e is E.STRAW1 and loss == "symmetric"))
            cfg = SimConfig(CensoringScheme(8, 1, 8), CensoringScheme(10, 1, 10), eta_grid=ETAS,
                            replicates=50_000, seed=2024, loss=loss, target=target, estimators=ests,
                            options=EstimatorOptions(alpha=1.5))
            runs[loss, target] = rri_curve(cfg)
    return runs, time.perf_counter() - start


def _band(row, base):
    return 2.0 * math.hypot(row.stderr, base.stderr)


def test_criterion_5_dominance(verdict, preset_runs):
    runs, elapsed = preset_runs
    failures = {}
    for (loss, target), table in runs.items():
        base = BASELINE[target]
        for est in {r.estimator for r in table.rows} - {base}:
            bad = [r.eta for r in table.select(est)
                   if r.risk > table.at(r.eta, base).risk + _band(r, table.at(r.eta, base))]
            if bad:
                failures[f"{est.key}/{loss}"] = bad
    ok = not failures and elapsed < 300
    detail = ", ".join(f"{k} at eta {v[0]}..{v[-1]} ({len(v)} pts)" for k, v in sorted(failures.items()))
    verdict(5, ok, f"simulated in {elapsed:.1f}s; " + (f"risk above BAEE band: {detail}" if failures
                                                       else "all improved estimators within the band"))


def test_criterion_6_figure_shapes(verdict, preset_runs):
    table = preset_runs[0]["quadratic", Target.SIGMA1]
    base = {r.eta: r for r in table.select(E.BAEE1)}

    def improvement(est):
        return [(base[r.eta].risk - r.risk, 2 * math.hypot(r.stderr, base[r.eta].stderr)) for r in table.select(est)]

    s1 = improvement(E.S1_1)
    monotone = all(b[0] - a[0] >= -max(a[1], b[1]) for a, b in zip(s1, s1[1:]))
    kub = improvement(E.KUB1)
    peak = max(range(len(kub)), key=lambda i: kub[i][0])
    rise_fall = (0 < peak < len(kub) - 1
                 and kub[peak][0] - kub[0][0] > kub[peak][1]
                 and kub[peak][0] - kub[-1][0] > kub[peak][1])
    verdict(6, monotone and rise_fall,
            f"1s1 non-decreasing: {monotone}; kub1 rises then falls: {rise_fall} (peak at eta {ETAS[peak]})")


def test_criterion_7_baee_risk(verdict, preset_runs):
    table = preset_runs[0]["quadratic", Target.SIGMA1]
    exact = 1 / (7 + 1)
    z = [abs(r.risk - exact) / r.stderr for r in table.select(E.BAEE1)]
    verdict(7, max(z) <= 3, f"max |risk - 1/(m1+1)| / stderr = {max(z):.2f} over {len(z)} eta values")


def test_criterion_8_gamma_shape(verdict):
    sigma = 1.7
    adapters = {"doubly type-II": DoublyTypeII(20, 3, 17), "type-II": TypeII(15, 9),
                "progressive": ProgressiveTypeII(12, 5, (2, 0, 3, 0, 2)), "records": Records(6),
                "iid": IID(10)}
    pvalues = {}
    for i, (name, desc) in enumerate(adapters.items()):
        data = simulate_scheme_data(desc, PopulationParams(0.4, sigma), make_rng(1000 + i), 100_000)
        _, v = scheme_stats_batch(desc, data)
        pvalues[name] = stats.kstest(v / sigma, stats.gamma(scheme_for(desc).m).cdf).pvalue
    ok = all(p > 0.01 for p in pvalues.values())
    verdict(8, ok, "KS p-values " + ", ".join(f"{k} {p:.3f}" for k, p in pvalues.items()))


def test_criterion_9_determinism(verdict, tmp_path, monkeypatch, capsys):
    outputs = []
    for threads in ("1", "4", "4"):
        monkeypatch.setenv("ORDSCALE_THREADS", threads)
        path = tmp_path / f"run{len(outputs)}.csv"
        code = main(["simulate", "--preset", "fig1", "--replicates", "25000", "--seed", "42", "--out", str(path)])
        capsys.readouterr()
        assert code == 0
        outputs.append(path.read_bytes())
    ok = outputs[0] == outputs[1] == outputs[2]
    verdict(9, ok, f"3 runs (1, 4, 4 threads) byte-identical: {ok} ({len(outputs[0])} bytes)")

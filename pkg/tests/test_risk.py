import hashlib

import numpy as np
import pytest

from ordscale import risk
from ordscale.estimators import ConfigError, EstimatorId as E, Target
from ordscale.model import CensoringScheme
from ordscale.risk import (SimConfig, draw_block, estimate_risk, paired_stderr, read_csv, rri_curve,
                           write_csv)


def config(**kw):
    base = dict(scheme1=CensoringScheme(8, 1, 8), scheme2=CensoringScheme(10, 1, 10),
                replicates=20_000, seed=7, block_size=5_000)
    base.update(kw)
    return SimConfig(**base)


def test_baee_quadratic_risk_is_exact():
    # (c V - sigma)^2 / sigma^2 with V/sigma ~ Gamma(m), c = 1/(m+1) has mean 1/(m+1)
    cfg = config(eta_grid=(0.5,), estimators=("baee1",))
    r, se = estimate_risk(cfg, "baee1", 0.5)
    assert abs(r - 1 / 8) < 3 * se


def test_single_replicate():
    cfg = config(replicates=1, eta_grid=(1.0,), estimators=("baee1",))
    st1, _ = draw_block(cfg, 0, 0)
    r, se = estimate_risk(cfg, "baee1", 1.0)
    assert r == pytest.approx((st1.v / 8 - 1) ** 2)
    assert se == 0.0


def test_scale_invariance_in_sigma2():
    a = rri_curve(config(sigma2=1.0, eta_grid=(0.3, 0.9), target=Target.SIGMA2))
    b = rri_curve(config(sigma2=7.0, eta_grid=(0.3, 0.9), target=Target.SIGMA2))
    for x, y in zip(a.rows, b.rows):
        assert x.estimator is y.estimator
        assert y.risk == pytest.approx(x.risk, rel=1e-9)


def test_baseline_relative_change_is_zero():
    table = rri_curve(config(eta_grid=(0.2, 0.6)))
    assert all(r.rri == 0.0 for r in table.select(E.BAEE1))


def test_default_estimators_and_baseline_first():
    cfg = config()
    assert cfg.estimators[0] is E.BAEE1
    assert E.GB1 not in cfg.estimators and E.STRAW1 in cfg.estimators
    sym = config(loss="symmetric")
    assert E.STRAW1 not in sym.estimators
    only = config(estimators=("1s1",))
    assert only.estimators == (E.BAEE1, E.S1_1)


def test_configuration_errors():
    with pytest.raises(ConfigError):
        config(eta_grid=(0.5, 1.2))
    with pytest.raises(ConfigError):
        config(eta_grid=(0.0,))
    with pytest.raises(ConfigError):
        config(eta_grid=(0.5, 0.4))
    with pytest.raises(ConfigError):
        config(replicates=0)
    with pytest.raises(ConfigError):
        config(target=Target.SIGMA2, estimators=("straw1",))
    with pytest.raises(ConfigError):
        config(loss="symmetric", estimators=("straw1",))
    with pytest.raises(ConfigError):
        estimate_risk(config(eta_grid=(0.5,)), "baee1", 0.7)


def test_common_random_numbers(monkeypatch):
    seen = {}
    real = risk.evaluate

    def spy(est, st1, st2, loss, options):
        digest = hashlib.sha256(np.ascontiguousarray(st1.v).tobytes() + np.ascontiguousarray(st2.v).tobytes())
        seen.setdefault(st1.v.size and float(st1.v[0]), set()).add(digest.hexdigest())
        return real(est, st1, st2, loss, options)

    monkeypatch.setattr(risk, "evaluate", spy)
    monkeypatch.setenv("ORDSCALE_THREADS", "1")
    rri_curve(config(eta_grid=(0.5,), replicates=10_000))
    # every estimator saw identical draws within each block
    assert len(seen) == 2 and all(len(v) == 1 for v in seen.values())


def test_thread_count_independence(monkeypatch, tmp_path):
    cfg = config(eta_grid=(0.25, 0.75), replicates=30_000, block_size=4_000)
    outputs = []
    for threads in ("1", "4"):
        monkeypatch.setenv("ORDSCALE_THREADS", threads)
        path = tmp_path / f"t{threads}.csv"
        write_csv(rri_curve(cfg), path)
        outputs.append(path.read_bytes())
    assert outputs[0] == outputs[1]


def test_bad_thread_setting(monkeypatch):
    monkeypatch.setenv("ORDSCALE_THREADS", "zero")
    with pytest.raises(ConfigError):
        rri_curve(config(eta_grid=(0.5,), replicates=10))


def test_paired_stderr_is_small():
    cfg = config(eta_grid=(0.5,))
    _, se = estimate_risk(cfg, "1s1", 0.5)
    assert 0 <= paired_stderr(cfg, E.S1_1, 0.5) < se


class TestCsv:
    def test_header_and_order(self, tmp_path):
        cfg = config(eta_grid=(0.1, 0.2, 0.3), estimators=("1s1",), replicates=2_000)
        path = tmp_path / "out.csv"
        write_csv(rri_curve(cfg), path)
        lines = path.read_text().splitlines()
        assert lines[0] == "eta,estimator,risk,stderr,rri,improvement"
        assert len(lines) == 7
        assert [l.split(",")[:2] for l in lines[1:]] == [
            ["0.1", "baee1"], ["0.1", "1s1"], ["0.2", "baee1"], ["0.2", "1s1"], ["0.3", "baee1"], ["0.3", "1s1"]]

    def test_empty_table(self, tmp_path):
        path = tmp_path / "empty.csv"
        write_csv(risk.RiskTable(), path)
        assert path.read_text() == "eta,estimator,risk,stderr,rri,improvement\n"

    def test_round_trip(self, tmp_path):
        table = rri_curve(config(eta_grid=(0.4,), replicates=3_000))
        path = tmp_path / "rt.csv"
        write_csv(table, path)
        back = read_csv(path)
        for a, b in zip(table.rows, back.rows):
            assert a.estimator is b.estimator
            assert b.risk == pytest.approx(a.risk, rel=1e-9)
            assert b.improvement == pytest.approx(-a.rri, rel=1e-9, abs=1e-12)

    def test_byte_determinism(self, tmp_path):
        cfg = config(eta_grid=(0.5, 1.0), replicates=5_000)
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        write_csv(rri_curve(cfg), p1)
        write_csv(rri_curve(cfg), p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_unwritable_path(self, tmp_path):
        with pytest.raises(OSError, match="cannot write"):
            write_csv(risk.RiskTable(), tmp_path / "missing" / "x.csv")

"""Monte Carlo risk of the estimators over the scale ratio eta = sigma_1 / sigma_2.

Replicates at each grid point are split into fixed-size blocks.  Block
``j`` at grid index ``i`` draws from the stream ``(seed, i, j)``, and every
estimator is evaluated on the same draws (common random numbers).  Blocks
are reduced in index order, so results do not depend on how many worker
threads ran them.
"""

from __future__ import annotations

import csv
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .estimators import (BASELINE, SCALAR_ONLY, ConfigError, EstimatorId, EstimatorOptions, Target,
                         check_applicable, evaluate)
from .loss import Loss, get_loss, loss_value
from .model import CensoringScheme, PopulationParams, SufficientStats, simulate_stats
from .numeric import stream
from .sigma1 import NoImprovementWarning

THREADS_ENV = "ORDSCALE_THREADS"
CSV_HEADER = ("eta", "estimator", "risk", "stderr", "rri", "improvement")


def _applicable(est, target, loss) -> bool:
    try:
        check_applicable(est, target, loss)
    except ConfigError:
        return False
    return True


@dataclass(frozen=True)
class SimConfig:
    scheme1: CensoringScheme
    scheme2: CensoringScheme
    mu1: float = 0.0
    mu2: float = 0.0
    eta_grid: tuple = tuple(round(0.1 * k, 10) for k in range(1, 11))
    sigma2: float = 1.0
    replicates: int = 50_000
    seed: int = 0
    loss: Loss | str = "quadratic"
    target: Target = Target.SIGMA1
    estimators: tuple = ()
    options: EstimatorOptions = field(default_factory=EstimatorOptions)
    block_size: int = 10_000

    def __post_init__(self):
        grid = tuple(float(e) for e in self.eta_grid)
        object.__setattr__(self, "eta_grid", grid)
        if not grid:
            raise ConfigError("eta grid is empty")
        if any(not 0 < e <= 1 for e in grid):
            raise ConfigError(f"every eta must lie in (0, 1], got {grid}")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ConfigError("eta grid must be strictly increasing")
        if self.replicates < 1:
            raise ConfigError("replicates must be at least 1")
        if self.block_size < 1:
            raise ConfigError("block_size must be at least 1")
        if not self.sigma2 > 0:
            raise ConfigError("sigma2 must be positive")
        ests = tuple(EstimatorId.parse(e) if isinstance(e, str) else e for e in self.estimators)
        if not ests:
            # generalized Bayes coincides with the boundary estimator but has
            # no vectorized route, so it is left out unless asked for
            ests = tuple(e for e in EstimatorId.for_target(self.target)
                         if e not in SCALAR_ONLY and _applicable(e, self.target, self.loss))
        base = BASELINE[self.target]
        if base not in ests:
            ests = (base,) + ests
        for e in ests:
            check_applicable(e, self.target, self.loss)
        object.__setattr__(self, "estimators", ests)
        object.__setattr__(self, "loss", get_loss(self.loss))


@dataclass(frozen=True)
class RiskRow:
    eta: float
    estimator: EstimatorId
    risk: float
    stderr: float
    rri: float

    @property
    def improvement(self) -> float:
        """Negated relative risk change, positive when the estimator beats the baseline."""
        return 0.0 - self.rri  # avoids emitting "-0"


@dataclass
class RiskTable:
    rows: list = field(default_factory=list)
    baseline: EstimatorId | None = None

    def select(self, estimator: EstimatorId) -> list:
        return [r for r in self.rows if r.estimator is estimator]

    def at(self, eta: float, estimator: EstimatorId) -> RiskRow:
        for r in self.rows:
            if r.estimator is estimator and math.isclose(r.eta, eta, abs_tol=1e-12):
                return r
        raise KeyError((eta, estimator))


def worker_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


def _eta_index(config: SimConfig, eta: float) -> int:
    for i, e in enumerate(config.eta_grid):
        if math.isclose(e, eta, rel_tol=0, abs_tol=1e-12):
            return i
    raise ConfigError(f"eta={eta} is not on the configured grid")


def draw_block(config: SimConfig, eta_idx: int, block_idx: int) -> tuple[SufficientStats, SufficientStats]:
    """Statistics of one replicate block; identical for every estimator."""
    n_blocks = -(-config.replicates // config.block_size)
    if not 0 <= block_idx < n_blocks:
        raise IndexError(block_idx)
    size = min(config.block_size, config.replicates - block_idx * config.block_size)
    eta = config.eta_grid[eta_idx]
    rng = stream(config.seed, eta_idx, block_idx)
    st1 = simulate_stats(config.scheme1, PopulationParams(config.mu1, eta * config.sigma2), rng, size)
    st2 = simulate_stats(config.scheme2, PopulationParams(config.mu2, config.sigma2), rng, size)
    return st1, st2


def _block_losses(config: SimConfig, eta_idx: int, block_idx: int, estimators) -> dict:
    st1, st2 = draw_block(config, eta_idx, block_idx)
    eta = config.eta_grid[eta_idx]
    sigma = eta * config.sigma2 if config.target is Target.SIGMA1 else config.sigma2
    out = {}
    for est in estimators:
        values = np.asarray(evaluate(est, st1, st2, config.loss, config.options), dtype=float)
        out[est] = loss_value(config.loss, values / sigma)
    return out


def _grid_losses(config: SimConfig, eta_idx: int, estimators) -> dict:
    n_blocks = -(-config.replicates // config.block_size)
    jobs = range(n_blocks)
    workers = min(worker_count(), n_blocks)
    # warning filters are process-wide, so they are set once around all workers
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NoImprovementWarning)
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                blocks = list(pool.map(lambda j: _block_losses(config, eta_idx, j, estimators), jobs))
        else:
            blocks = [_block_losses(config, eta_idx, j, estimators) for j in jobs]
    return {est: np.concatenate([b[est] for b in blocks]) for est in estimators}


def _summary(losses: np.ndarray) -> tuple[float, float]:
    n = losses.size
    risk = float(np.mean(losses))
    se = float(np.std(losses, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return risk, se


def estimate_risk(config: SimConfig, estimator: EstimatorId | str, eta: float) -> tuple[float, float]:
    """Monte Carlo risk and its standard error at one grid point."""
    if isinstance(estimator, str):
        estimator = EstimatorId.parse(estimator)
    check_applicable(estimator, config.target, config.loss)
    losses = _grid_losses(config, _eta_index(config, eta), [estimator])
    return _summary(losses[estimator])


def rri_curve(config: SimConfig) -> RiskTable:
    """Risk, standard error and relative risk change against the BAEE at every grid point.

    ``rri = 100 (risk - baseline risk) / baseline risk``; negative values
    mean the estimator improves on the baseline.
    """
    base = BASELINE[config.target]
    table = RiskTable(baseline=base)
    for i, eta in enumerate(config.eta_grid):
        losses = _grid_losses(config, i, config.estimators)
        base_risk, _ = _summary(losses[base])
        if base_risk <= 0:
            raise ConfigError(f"baseline risk is zero at eta={eta}; relative change undefined")
        for est in config.estimators:
            risk, se = _summary(losses[est])
            table.rows.append(RiskRow(eta, est, risk, se, 100.0 * (risk - base_risk) / base_risk))
    return table


def paired_stderr(config: SimConfig, estimator: EstimatorId, eta: float) -> float:
    """Standard error of the risk difference to the baseline under common random numbers."""
    base = BASELINE[config.target]
    losses = _grid_losses(config, _eta_index(config, eta), [base, estimator])
    return _summary(losses[estimator] - losses[base])[1]


def _fmt(x: float) -> str:
    return f"{x:.10g}"


def write_csv(table: RiskTable, path) -> None:
    """Write ``table`` with header ``eta,estimator,risk,stderr,rri,improvement``."""
    try:
        with open(path, "w", newline="", encoding="ascii") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_HEADER)
            for r in table.rows:
                w.writerow([_fmt(r.eta), r.estimator.key, _fmt(r.risk), _fmt(r.stderr),
                            _fmt(r.rri), _fmt(r.improvement)])
    except OSError as exc:
        raise OSError(f"cannot write risk table to {path}: {exc.strerror or exc}") from exc


def read_csv(path) -> RiskTable:
    with open(path, newline="", encoding="ascii") as fh:
        rows = list(csv.DictReader(fh))
    table = RiskTable()
    for r in rows:
        table.rows.append(RiskRow(float(r["eta"]), EstimatorId.parse(r["estimator"]),
                                  float(r["risk"]), float(r["stderr"]), float(r["rri"])))
    return table

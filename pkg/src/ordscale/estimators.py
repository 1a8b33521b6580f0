"""Registry of all estimators with a uniform calling convention."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import sigma1 as s1
from . import sigma2 as s2
from .loss import Loss, get_loss
from .model import SufficientStats


class ConfigError(ValueError):
    """An estimator was requested for a target or loss it does not support."""


class Target(enum.Enum):
    SIGMA1 = "sigma1"
    SIGMA2 = "sigma2"


class EstimatorId(enum.Enum):
    # value: (cli name, target, display symbol)
    BAEE1 = ("baee1", Target.SIGMA1, "δ01")
    RMLE1 = ("rmle1", Target.SIGMA1, "δ_Rmle")
    IRMLE1 = ("irmle1", Target.SIGMA1, "δ_Rmle^r")
    S1_1 = ("1s1", Target.SIGMA1, "δ_1S1")
    S1_2 = ("1s2", Target.SIGMA1, "δ_1S2")
    S1_3 = ("1s3", Target.SIGMA1, "δ_1S3")
    KUB1 = ("kub1", Target.SIGMA1, "δ_φ1")
    MAR1 = ("mar1", Target.SIGMA1, "δ_φα1")
    GB1 = ("gb1", Target.SIGMA1, "δ_B1")
    STRAW1 = ("straw1", Target.SIGMA1, "δ_φ^S")
    BAEE2 = ("baee2", Target.SIGMA2, "δ02")
    RMLE2 = ("rmle2", Target.SIGMA2, "δ*_Rmle")
    IRMLE2 = ("irmle2", Target.SIGMA2, "δ*_Rmle^r")
    S2_1 = ("2s1", Target.SIGMA2, "δ_2S1")
    S2_2 = ("2s2", Target.SIGMA2, "δ_2S2")
    S2_3 = ("2s3", Target.SIGMA2, "δ_2S3")
    KUB2 = ("kub2", Target.SIGMA2, "δ_φ2")
    MAR2 = ("mar2", Target.SIGMA2, "δ*_φα")
    GB2 = ("gb2", Target.SIGMA2, "δ_B2")

    @property
    def key(self) -> str:
        return self.value[0]

    @property
    def target(self) -> Target:
        return self.value[1]

    @property
    def symbol(self) -> str:
        return self.value[2]

    @classmethod
    def parse(cls, name: str) -> "EstimatorId":
        name = name.strip().lower()
        for est in cls:
            if est.key == name or est.name.lower() == name:
                return est
        raise ConfigError(f"unknown estimator {name!r}; choose from {', '.join(e.key for e in cls)}")

    @classmethod
    def for_target(cls, target: Target) -> list["EstimatorId"]:
        return [e for e in cls if e.target is target]


BASELINE = {Target.SIGMA1: EstimatorId.BAEE1, Target.SIGMA2: EstimatorId.BAEE2}

# estimators without a vectorized route; evaluated replicate by replicate
SCALAR_ONLY = frozenset({EstimatorId.GB1, EstimatorId.GB2})


@dataclass(frozen=True)
class EstimatorOptions:
    alpha: float = 1.5
    epsilon: float = 1.0

    def __post_init__(self):
        if not self.alpha >= 1:
            raise ConfigError(f"alpha must be >= 1, got {self.alpha}")
        if not self.epsilon > 0:
            raise ConfigError(f"epsilon must be positive, got {self.epsilon}")


def check_applicable(est: EstimatorId, target: Target, loss: Loss | str) -> None:
    if est.target is not target:
        raise ConfigError(f"{est.key} estimates {est.target.value}, not {target.value}")
    if est is EstimatorId.STRAW1 and get_loss(loss).name not in ("quadratic", "entropy"):
        raise ConfigError("the Strawderman-type estimator is defined for quadratic and entropy loss only")
    smooth = {EstimatorId.KUB1, EstimatorId.MAR1, EstimatorId.GB1,
              EstimatorId.KUB2, EstimatorId.MAR2, EstimatorId.GB2}
    if est in smooth and not get_loss(loss).is_named:
        raise ConfigError(f"{est.key} is available only for the built-in losses")


def _scalar_loop(fn, a: SufficientStats, b: SufficientStats, *args):
    if np.ndim(a.v) == 0:
        return fn(*args, float(a.v), float(b.v), a.m, b.m)
    return np.array([fn(*args, float(x), float(y), a.m, b.m) for x, y in zip(a.v, b.v)])


def evaluate(
    est: EstimatorId,
    stats1: SufficientStats,
    stats2: SufficientStats,
    loss: Loss | str,
    options: EstimatorOptions = EstimatorOptions(),
):
    """Value(s) of ``est`` for the two populations' statistics (scalars or arrays)."""
    loss = get_loss(loss)
    check_applicable(est, est.target, loss)
    E = EstimatorId
    if est.target is Target.SIGMA1:
        inp = s1.Sigma1Inputs(stats1, stats2)
        table = {
            E.BAEE1: lambda: s1.baee1(inp, loss),
            E.RMLE1: lambda: s1.restricted_mle1(inp),
            E.IRMLE1: lambda: s1.improved_rmle1(inp, loss),
            E.S1_1: lambda: s1.stein1_s1(inp, loss),
            E.S1_2: lambda: s1.stein1_s2(inp, loss),
            E.S1_3: lambda: s1.stein1_s3(inp, loss),
            E.KUB1: lambda: s1.kubokawa1(inp, loss),
            E.MAR1: lambda: s1.maruyama1(inp, loss, options.alpha),
            E.GB1: lambda: _scalar_loop(s1.gen_bayes1, stats1, stats2, loss),
            E.STRAW1: lambda: s1.strawderman1(inp, s1.StrawdermanParams(options.epsilon, loss)),
        }
    else:
        inp = s2.Sigma2Inputs(stats1, stats2)
        table = {
            E.BAEE2: lambda: s2.baee2(inp, loss),
            E.RMLE2: lambda: s2.restricted_mle2(inp),
            E.IRMLE2: lambda: s2.improved_rmle2(inp, loss),
            E.S2_1: lambda: s2.stein2_s1(inp, loss),
            E.S2_2: lambda: s2.stein2_s2(inp, loss),
            E.S2_3: lambda: s2.double_shrink2(inp, loss),
            E.KUB2: lambda: s2.kubokawa2(inp, loss),
            E.MAR2: lambda: s2.maruyama2(inp, loss, options.alpha),
            E.GB2: lambda: _scalar_loop(s2.gen_bayes2, stats1, stats2, loss),
        }
    return table[est]()

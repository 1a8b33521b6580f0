"""Doubly type-II censored exponential samples and their sufficient statistics.

For a shifted exponential sample observed between ranks ``a`` and ``b`` the
pair ``(X_(a), V)`` with

    V = sum_{j=a+1}^{b} (n - j + 1) (X_(j) - X_(j-1))

is complete sufficient for ``(mu, sigma)``; ``V / sigma ~ Gamma(b - a, 1)``
independently of ``X_(a)``.  The other life-testing designs (complete
samples, type-II, progressive type-II censoring, record values) reduce to
the same ``(x_a, v)`` pair with a scheme-specific shape ``m`` and a
coefficient ``kappa`` such that ``X_min ~ mu + sigma * Exp(1) / kappa``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .numeric import sample_gamma


class SchemeError(ValueError):
    """Censoring indices or a sampling-scheme description are invalid."""


@dataclass(frozen=True)
class CensoringScheme:
    n: int
    a: int
    b: int
    kappa: float = field(default=None)

    def __post_init__(self):
        if not 1 <= self.a <= self.b <= self.n:
            raise SchemeError(f"need 1 <= a <= b <= n, got a={self.a}, b={self.b}, n={self.n}")
        if self.b - self.a < 2:
            raise SchemeError(f"need b - a >= 2, got a={self.a}, b={self.b}")
        if self.kappa is None:
            object.__setattr__(self, "kappa", float(self.n - self.a + 1))
        elif not self.kappa > 0:
            raise SchemeError(f"kappa must be positive, got {self.kappa}")

    @property
    def m(self) -> int:
        """Gamma shape of ``V / sigma``."""
        return self.b - self.a


@dataclass(frozen=True)
class SufficientStats:
    """``(x_a, v)`` for one population.

    ``x_a`` and ``v`` are floats for observed data and equal-shape arrays
    for a batch of simulated replicates.
    """

    x_a: float | np.ndarray
    v: float | np.ndarray
    scheme: CensoringScheme

    def __post_init__(self):
        if np.any(np.asarray(self.v) <= 0):
            raise ValueError("total-time-on-test statistic must be positive")

    @property
    def m(self) -> int:
        return self.scheme.m

    @property
    def kappa(self) -> float:
        return self.scheme.kappa


@dataclass(frozen=True)
class PopulationParams:
    mu: float
    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")


# --- sampling-scheme descriptors -------------------------------------------

@dataclass(frozen=True)
class DoublyTypeII:
    n: int
    a: int
    b: int


@dataclass(frozen=True)
class IID:
    n: int


@dataclass(frozen=True)
class TypeII:
    N: int
    r: int

    def __post_init__(self):
        if not 1 <= self.r <= self.N:
            raise SchemeError(f"type-II censoring needs 1 <= r <= N, got r={self.r}, N={self.N}")


@dataclass(frozen=True)
class ProgressiveTypeII:
    n: int
    m: int
    removals: tuple

    def __post_init__(self):
        object.__setattr__(self, "removals", tuple(int(r) for r in self.removals))
        if len(self.removals) != self.m:
            raise SchemeError(f"removal vector has {len(self.removals)} entries, expected m={self.m}")
        if any(r < 0 for r in self.removals):
            raise SchemeError("removals must be non-negative")
        if self.n - self.m - sum(self.removals[:-1]) != self.removals[-1]:
            raise SchemeError(
                f"inconsistent removals: n - m - sum(R[:-1]) = "
                f"{self.n - self.m - sum(self.removals[:-1])} but R_m = {self.removals[-1]}"
            )


@dataclass(frozen=True)
class Records:
    k: int

    def __post_init__(self):
        if self.k < 3:
            raise SchemeError(f"need at least 3 records, got {self.k}")


SchemeDescriptor = Union[DoublyTypeII, IID, TypeII, ProgressiveTypeII, Records]


def scheme_for(desc: SchemeDescriptor) -> CensoringScheme:
    """Effective ``(n, a, b, kappa)`` of a descriptor."""
    if isinstance(desc, DoublyTypeII):
        return CensoringScheme(desc.n, desc.a, desc.b)
    if isinstance(desc, IID):
        return CensoringScheme(desc.n, 1, desc.n)
    if isinstance(desc, TypeII):
        return CensoringScheme(desc.N, 1, desc.r)
    if isinstance(desc, ProgressiveTypeII):
        return CensoringScheme(desc.n, 1, desc.m, kappa=float(desc.n))
    if isinstance(desc, Records):
        return CensoringScheme(desc.k, 1, desc.k, kappa=1.0)
    raise TypeError(f"unknown scheme descriptor {desc!r}")


# --- reductions ------------------------------------------------------------

def _ttt(x: np.ndarray, n: int, a: int, b: int) -> np.ndarray:
    """Normalized-spacings statistic on the last axis; ``x`` holds ranks a..b."""
    ranks = np.arange(a + 1, b + 1)
    return np.sum((n - ranks + 1) * np.diff(x, axis=-1), axis=-1)


def sufficient_stats(sorted_sample, a: int, b: int, n: int | None = None) -> SufficientStats:
    """Reduce an ascending sample to ``(x_a, v)``.

    ``sorted_sample`` is either the full sample (``len == n``) or just the
    observed order statistics ``X_(a), ..., X_(b)`` when ``n`` is given.
    """
    x = np.asarray(sorted_sample, dtype=float)
    if x.ndim != 1:
        raise ValueError("sample must be one-dimensional")
    if np.any(np.diff(x) < 0):
        raise ValueError("sample must be sorted ascending")
    if n is None:
        n = len(x)
    scheme = CensoringScheme(n, a, b)
    if len(x) == n:
        obs = x[a - 1:b]
    elif len(x) == b - a + 1:
        obs = x
    else:
        raise ValueError(f"expected {n} or {b - a + 1} observations, got {len(x)}")
    return SufficientStats(float(obs[0]), float(_ttt(obs, n, a, b)), scheme)


def _progressive_v(x: np.ndarray, removals, n: int) -> np.ndarray:
    w = np.asarray(removals, dtype=float) + 1.0
    return np.sum(w * x, axis=-1) - n * x[..., 0]


def scheme_stats_batch(desc: SchemeDescriptor, data: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized ``(x_a, v)`` for data rows on the last axis (no validation)."""
    scheme = scheme_for(desc)
    if isinstance(desc, (DoublyTypeII, IID, TypeII)):
        k = data.shape[-1]
        obs = data[..., scheme.a - 1:scheme.b] if k == scheme.n else data
        return obs[..., 0], _ttt(obs, scheme.n, scheme.a, scheme.b)
    if isinstance(desc, ProgressiveTypeII):
        return data[..., 0], _progressive_v(data, desc.removals, desc.n)
    if isinstance(desc, Records):
        return data[..., 0], data[..., -1] - data[..., 0]
    raise TypeError(f"unknown scheme descriptor {desc!r}")


def scheme_to_stats(desc: SchemeDescriptor, raw_data) -> SufficientStats:
    """Sufficient statistics for data collected under ``desc``.

    Expected data:

    * ``DoublyTypeII`` / ``IID`` / ``TypeII``: the full sample or the observed
      order statistics only (any order; sorted here).
    * ``ProgressiveTypeII``: the ``m`` failure times in order of failure.
    * ``Records``: the ``k`` upper record values in order of occurrence.
    """
    scheme = scheme_for(desc)
    x = np.asarray(raw_data, dtype=float)
    if x.ndim != 1:
        raise ValueError("data must be one-dimensional")
    if isinstance(desc, (DoublyTypeII, IID, TypeII)):
        x = np.sort(x)
        if len(x) not in (scheme.n, scheme.b - scheme.a + 1):
            raise ValueError(
                f"{type(desc).__name__} expects {scheme.n} or {scheme.b - scheme.a + 1} "
                f"observations, got {len(x)}"
            )
    elif isinstance(desc, ProgressiveTypeII):
        if len(x) != desc.m:
            raise ValueError(f"progressive scheme expects {desc.m} failure times, got {len(x)}")
        if np.any(np.diff(x) < 0):
            raise ValueError("progressive failure times must be non-decreasing")
    elif isinstance(desc, Records):
        if len(x) != desc.k:
            raise ValueError(f"expected {desc.k} record values, got {len(x)}")
        if np.any(np.diff(x) <= 0):
            raise ValueError("record values must be strictly increasing")
    x_a, v = scheme_stats_batch(desc, x)
    return SufficientStats(float(x_a), float(v), scheme)


# --- simulation -------------------------------------------------------------

def simulate_stats(
    scheme: CensoringScheme,
    params: PopulationParams,
    rng: np.random.Generator,
    size: int | None = None,
    method: str = "direct",
) -> SufficientStats:
    """Draw ``(x_a, v)`` for ``size`` replicates (a single draw if ``size`` is None).

    ``method="direct"`` samples ``v ~ sigma * Gamma(m)`` and ``x_a`` from the
    Renyi representation of exponential order statistics (``a = 1`` uses
    ``Exp / kappa``, which also covers schemes whose minimum is not the
    plain order statistic).  ``method="sample"`` draws and sorts ``n``
    shifted exponentials and reduces them.
    """
    shape = () if size is None else (size,)
    n, a, b = scheme.n, scheme.a, scheme.b
    if method == "direct":
        v = sample_gamma(scheme.m, params.sigma, rng, size=shape)
        if a == 1:
            e = rng.standard_exponential(shape) / scheme.kappa
        else:
            e = rng.standard_exponential(shape + (a,)) @ (1.0 / (n - np.arange(a)))
        x_a = params.mu + params.sigma * e
    elif method == "sample":
        x = np.sort(params.mu + params.sigma * rng.standard_exponential(shape + (n,)), axis=-1)
        obs = x[..., a - 1:b]
        x_a, v = obs[..., 0], _ttt(obs, n, a, b)
    else:
        raise ValueError(f"unknown method {method!r}")
    if size is None:
        x_a, v = float(x_a), float(v)
    return SufficientStats(x_a, v, scheme)


def simulate_scheme_data(
    desc: SchemeDescriptor,
    params: PopulationParams,
    rng: np.random.Generator,
    size: int,
) -> np.ndarray:
    """Raw observations (one row per replicate) generated the way the design collects them.

    Progressive censoring runs the removal process explicitly: at the j-th
    failure ``R_j`` of the surviving units are withdrawn uniformly at random.
    Record values use the inverse cumulative-hazard construction
    ``X_k = F^{-1}(1 - exp(-G_k))`` with ``G_k`` the arrival times of a unit
    Poisson process.
    """
    mu, sigma = params.mu, params.sigma
    if isinstance(desc, (DoublyTypeII, IID, TypeII)):
        scheme = scheme_for(desc)
        x = np.sort(mu + sigma * rng.standard_exponential((size, scheme.n)), axis=1)
        return x[:, scheme.a - 1:scheme.b]
    if isinstance(desc, ProgressiveTypeII):
        life = mu + sigma * rng.standard_exponential((size, desc.n))
        alive = np.ones_like(life, dtype=bool)
        out = np.empty((size, desc.m))
        rows = np.arange(size)
        for j, r in enumerate(desc.removals):
            masked = np.where(alive, life, np.inf)
            idx = np.argmin(masked, axis=1)
            out[:, j] = masked[rows, idx]
            alive[rows, idx] = False
            if r:
                keys = np.where(alive, rng.random(life.shape), np.inf)
                drop = np.argsort(keys, axis=1)[:, :r]
                alive[rows[:, None], drop] = False
        return out
    if isinstance(desc, Records):
        arrivals = np.cumsum(rng.standard_exponential((size, desc.k)), axis=1)
        u = 1.0 - np.exp(-arrivals)
        return mu - sigma * np.log1p(-u)
    raise TypeError(f"unknown scheme descriptor {desc!r}")

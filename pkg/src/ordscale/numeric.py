"""Numerical building blocks shared by the estimators.

Quadrature and root finding delegate the heavy lifting to QUADPACK and
Brent's method as shipped with scipy; this module pins the tolerances,
handles infinite upper limits and turns silent failures into exceptions.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate as _integrate
from scipy import optimize as _optimize
from scipy import special as _special


class NumericalError(RuntimeError):
    """A numerical routine did not converge."""


class BracketError(ValueError):
    """The root-finding bracket does not contain a sign change."""


@dataclass(frozen=True)
class Tolerance:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_iter: int = 200

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")


DEFAULT_TOL = Tolerance()


def integrate(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: Tolerance = DEFAULT_TOL,
    points: Sequence[float] | None = None,
) -> float:
    """Integrate ``f`` over ``[lo, hi]``; ``hi`` may be ``math.inf``.

    An infinite upper limit is mapped onto ``[0, 1)`` with
    ``t = lo + s / (1 - s)``, ``dt = ds / (1 - s)**2``.  ``points`` are
    interior breakpoints (in the original variable) where the integrand
    is known to peak.

    Raises:
        ValueError: bad limits or the integrand returned NaN.
        NumericalError: the requested accuracy was not reached within
            ``tol.max_iter`` subdivisions.
    """
    if math.isnan(lo) or math.isnan(hi) or not math.isfinite(lo):
        raise ValueError(f"invalid integration limits [{lo}, {hi}]")
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")

    def checked(x: float) -> float:
        y = f(x)
        if math.isnan(y):
            raise ValueError(f"integrand returned NaN at x={x!r}")
        return y

    if math.isinf(hi):
        def g(s: float) -> float:
            if s >= 1.0:
                return 0.0
            w = 1.0 - s
            return checked(lo + s / w) / (w * w)

        a, b = 0.0, 1.0
        pts = [(p - lo) / (1.0 + p - lo) for p in points or () if p > lo]
    else:
        g, a, b = checked, lo, hi
        pts = [p for p in points or () if lo < p < hi]

    with warnings.catch_warnings():
        warnings.simplefilter("error", _integrate.IntegrationWarning)
        try:
            value, err = _integrate.quad(
                g, a, b,
                epsabs=tol.abs_tol, epsrel=tol.rel_tol,
                limit=tol.max_iter, points=sorted(pts) or None,
            )
        except _integrate.IntegrationWarning as exc:
            raise NumericalError(f"quadrature on [{lo}, {hi}] did not converge: {exc}") from exc
    if math.isnan(value):
        raise NumericalError(f"quadrature on [{lo}, {hi}] produced NaN")
    return value


def find_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: Tolerance = DEFAULT_TOL,
) -> float:
    """Brent's method on a sign-changing bracket ``[lo, hi]``."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if math.isnan(flo) or math.isnan(fhi) or flo * fhi > 0:
        raise BracketError(f"no sign change on [{lo}, {hi}]: f={flo!r}, {fhi!r}")
    try:
        root, info = _optimize.brentq(
            f, lo, hi, xtol=tol.abs_tol, rtol=max(tol.rel_tol, 4 * np.finfo(float).eps),
            maxiter=tol.max_iter, full_output=True, disp=False,
        )
    except RuntimeError as exc:  # pragma: no cover - brentq with disp=False does not raise
        raise NumericalError(str(exc)) from exc
    if not info.converged:
        raise NumericalError(f"Brent iteration did not converge on [{lo}, {hi}]: {info.flag}")
    return root


def expand_bracket(
    f: Callable[[float], float],
    guess: float,
    factor: float = 2.0,
    max_steps: int = 60,
) -> tuple[float, float]:
    """Grow ``[guess/factor, guess*factor]`` geometrically until ``f`` changes sign.

    ``f`` must be increasing on ``(0, inf)``; used for the scale constants.
    """
    lo, hi = guess / factor, guess * factor
    for _ in range(max_steps):
        flo, fhi = f(lo), f(hi)
        if flo < 0 < fhi:
            return lo, hi
        if flo >= 0:
            lo /= factor
        if fhi <= 0:
            hi *= factor
    raise BracketError(f"could not bracket a root starting from {guess}")


def log_gamma(x: float) -> float:
    if not x > 0:
        raise ValueError(f"log_gamma needs x > 0, got {x}")
    return math.lgamma(x)


def upper_reg_gamma(s: float, x: float) -> float:
    """Regularized upper incomplete gamma ``Q(s, x) = Γ(s, x) / Γ(s)``."""
    if not s > 0 or x < 0:
        raise ValueError(f"upper_reg_gamma needs s > 0, x >= 0, got ({s}, {x})")
    return float(_special.gammaincc(s, x))


def lower_reg_gamma(s: float, x: float) -> float:
    """Regularized lower incomplete gamma ``P(s, x) = 1 - Q(s, x)``, computed directly."""
    if not s > 0 or x < 0:
        raise ValueError(f"lower_reg_gamma needs s > 0, x >= 0, got ({s}, {x})")
    return float(_special.gammainc(s, x))


def make_rng(seed: int | np.random.SeedSequence | None = None) -> np.random.Generator:
    """PCG64 generator; the algorithm is fixed so seeded runs are bit-reproducible."""
    return np.random.Generator(np.random.PCG64(seed))


def stream(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for the stream identified by ``key`` under ``seed``."""
    return make_rng(np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in key)))


def sample_gamma(shape: float, scale: float, rng: np.random.Generator, size=None):
    if not (shape > 0 and scale > 0):
        raise ValueError(f"gamma needs shape > 0 and scale > 0, got ({shape}, {scale})")
    return rng.gamma(shape, scale, size=size)

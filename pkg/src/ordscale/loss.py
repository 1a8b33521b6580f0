"""Scale-invariant bowl-shaped losses and the scale constants they induce.

A loss is evaluated at ``t = estimate / sigma``.  Two families of constants
are needed by the estimators:

* the equivariant constant ``c0`` with ``E[L'(c0 V) V] = 0`` for
  ``V ~ Gamma(m, 1)`` (best multiple of the total-time-on-test statistic);
* the truncation constants ``beta`` with ``E[L'(beta Z)] = 0`` for
  ``Z ~ Gamma(k, 1)``.

Because ``v * Gamma(m) density = m * Gamma(m + 1) density``, the first
equation is the second one with ``k = m + 1``; both share one solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .numeric import DEFAULT_TOL, Tolerance, expand_bracket, find_root, integrate


@dataclass(frozen=True)
class Loss:
    """A loss ``L(t)`` with its derivative.

    ``name`` is one of ``"quadratic"``, ``"entropy"``, ``"symmetric"`` for
    the built-in losses (which have closed-form constants) and anything
    else for user losses.
    """

    name: str
    value: Callable
    deriv: Callable

    @property
    def is_named(self) -> bool:
        return self.name in _MIN_SHAPE

    def __repr__(self):
        return f"Loss({self.name!r})"


QUADRATIC = Loss("quadratic", lambda t: (t - 1.0) ** 2, lambda t: 2.0 * (t - 1.0))
ENTROPY = Loss("entropy", lambda t: t - np.log(t) - 1.0, lambda t: 1.0 - 1.0 / t)
SYMMETRIC = Loss("symmetric", lambda t: t + 1.0 / t - 2.0, lambda t: 1.0 - 1.0 / (t * t))

LOSSES = {loss.name: loss for loss in (QUADRATIC, ENTROPY, SYMMETRIC)}

# smallest Gamma shape for which E[L'(beta Z)] is finite
_MIN_SHAPE = {"quadratic": 1, "entropy": 2, "symmetric": 3}


def get_loss(name: str | Loss) -> Loss:
    if isinstance(name, Loss):
        return name
    try:
        return LOSSES[name.lower()]
    except KeyError:
        raise ValueError(f"unknown loss {name!r}; expected one of {sorted(LOSSES)}") from None


def custom_loss(value: Callable, deriv: Callable, name: str = "custom") -> Loss:
    """Wrap a user loss after checking it is bowl-shaped with minimum 0 at 1.

    The check is done on a grid only; integrability is the caller's problem.
    """
    if name in LOSSES:
        raise ValueError(f"{name!r} is reserved for the built-in loss")
    if abs(value(1.0)) > 1e-12:
        raise ValueError("custom loss must satisfy L(1) = 0")
    left = np.linspace(0.05, 1.0, 60)
    right = np.linspace(1.0, 20.0, 60)
    vl = np.array([value(t) for t in left])
    vr = np.array([value(t) for t in right])
    if np.any(vl < -1e-12) or np.any(vr < -1e-12):
        raise ValueError("custom loss must be non-negative")
    if np.any(np.diff(vl) > 1e-12) or np.any(np.diff(vr) < -1e-12):
        raise ValueError("custom loss must decrease on (0, 1] and increase on [1, inf)")
    return Loss(name, value, deriv)


def _check_t(t):
    if np.any(np.asarray(t) <= 0):
        raise ValueError("loss argument must be positive")


def loss_value(kind: Loss, t):
    _check_t(t)
    return kind.value(t)


def loss_deriv(kind: Loss, t):
    _check_t(t)
    return kind.deriv(t)


def gamma_expected_deriv(kind: Loss, c: float, k: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """``E[L'(c Z)]`` for ``Z ~ Gamma(k, 1)`` by quadrature."""
    log_norm = math.lgamma(k)

    def integrand(t):
        if t == 0.0:
            return 0.0
        w = math.exp((k - 1.0) * math.log(t) - t - log_norm)
        # far tail: weight underflows before a fast-growing L' overflows
        return 0.0 if w == 0.0 else float(kind.deriv(c * t)) * w

    return integrate(integrand, 0.0, math.inf, tol, points=[max(k - 1.0, 0.5)])


def solve_gamma_constant(kind: Loss, k: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """Root ``c`` of ``E[L'(c Z)] = 0``, ``Z ~ Gamma(k, 1)``, by quadrature and Brent."""
    f = lambda c: gamma_expected_deriv(kind, c, k, tol)  # noqa: E731
    lo, hi = expand_bracket(f, 1.0 / k)
    return find_root(f, lo, hi, Tolerance(1e-14, 1e-13, tol.max_iter))


def stein_constant(kind: Loss, k: int, numeric: bool = False) -> float:
    """Truncation constant ``beta`` with ``E[L'(beta Z)] = 0``, ``Z ~ Gamma(k, 1)``.

    Closed forms: quadratic ``1/k``, entropy ``1/(k-1)``, symmetric
    ``1/sqrt((k-1)(k-2))``.  ``numeric=True`` forces the quadrature route.
    """
    kind = get_loss(kind)
    if kind.is_named and k < _MIN_SHAPE[kind.name]:
        raise ValueError(f"{kind.name} loss needs Gamma shape >= {_MIN_SHAPE[kind.name]}, got {k}")
    if k < 1:
        raise ValueError(f"Gamma shape must be >= 1, got {k}")
    if numeric or not kind.is_named:
        return solve_gamma_constant(kind, k)
    if kind.name == "quadratic":
        return 1.0 / k
    if kind.name == "entropy":
        return 1.0 / (k - 1)
    return 1.0 / math.sqrt((k - 1) * (k - 2))


def baee_constant(kind: Loss, m: int, numeric: bool = False) -> float:
    """Equivariant constant ``c0`` for ``V ~ Gamma(m, 1)``; ``m = b - a >= 2``."""
    if m < 2:
        raise ValueError(f"need b - a >= 2, got {m}")
    return stein_constant(kind, m + 1, numeric=numeric)

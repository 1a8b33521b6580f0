"""Estimators of the smaller scale sigma_1 under the order restriction sigma_1 <= sigma_2.

Every estimator has the form ``phi(...) * v1`` and is affine equivariant.
Inputs may carry arrays (one entry per simulated replicate); the
truncation estimators broadcast, and the smooth ones switch to the
closed-form kernels for arrays.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .loss import Loss, baee_constant, get_loss, stein_constant
from .model import SufficientStats
from .numeric import find_root, log_gamma


class NoImprovementWarning(UserWarning):
    """The shrinkage bound is non-positive, so the estimator reduces to the BAEE."""


@dataclass(frozen=True)
class Sigma1Inputs:
    s1: SufficientStats
    s2: SufficientStats

    @property
    def z1(self):
        return self.s2.v / self.s1.v

    @property
    def z2(self):
        return self.s1.x_a / self.s1.v

    @property
    def z3(self):
        return self.s2.x_a / self.s1.v

    @property
    def m1(self) -> int:
        return self.s1.m

    @property
    def m2(self) -> int:
        return self.s2.m


def _scalar_or_array(x):
    return float(x) if np.ndim(x) == 0 else x


def baee1(inp: Sigma1Inputs, kind: Loss | str):
    return baee_constant(get_loss(kind), inp.m1) * inp.s1.v


def stein1_s1(inp: Sigma1Inputs, kind: Loss | str):
    kind = get_loss(kind)
    c0 = baee_constant(kind, inp.m1)
    beta = stein_constant(kind, inp.m1 + inp.m2 + 1)
    return _scalar_or_array(np.minimum(c0, beta * (1.0 + inp.z1)) * inp.s1.v)


def stein1_s2(inp: Sigma1Inputs, kind: Loss | str):
    """Truncation using both scales and the first population's location; BAEE when ``z2 <= 0``."""
    kind = get_loss(kind)
    c0 = baee_constant(kind, inp.m1)
    beta1 = stein_constant(kind, inp.m1 + inp.m2 + 2)
    z2 = inp.z2
    trunc = beta1 * (1.0 + inp.z1 + inp.s1.kappa * z2)
    phi = np.where(z2 > 0, np.minimum(c0, trunc), c0)
    return _scalar_or_array(phi * inp.s1.v)


def stein1_s3(inp: Sigma1Inputs, kind: Loss | str):
    """Truncation using both locations; BAEE unless ``z2 > 0`` and ``z3 > 0``."""
    kind = get_loss(kind)
    c0 = baee_constant(kind, inp.m1)
    beta2 = stein_constant(kind, inp.m1 + inp.m2 + 3)
    z2, z3 = inp.z2, inp.z3
    trunc = beta2 * (1.0 + inp.z1 + inp.s1.kappa * z2 + inp.s2.kappa * z3)
    phi = np.where((z2 > 0) & (z3 > 0), np.minimum(c0, trunc), c0)
    return _scalar_or_array(phi * inp.s1.v)


def restricted_mle1(inp: Sigma1Inputs):
    m1, m2 = inp.m1, inp.m2
    v1, v2 = inp.s1.v, inp.s2.v
    return _scalar_or_array(np.minimum(v1 / (m1 + 1), (v1 + v2) / (m1 + m2 + 2)))


def improved_rmle1(inp: Sigma1Inputs, kind: Loss | str):
    kind = get_loss(kind)
    beta = stein_constant(kind, inp.m1 + inp.m2 + 1)
    phi = np.minimum(restricted_mle1(inp) / inp.s1.v, beta * (1.0 + inp.z1))
    return _scalar_or_array(phi * inp.s1.v)


# --- smooth boundary and Maruyama estimators --------------------------------

def _smooth_form(kind: Loss, total: int) -> tuple[float, float, float, bool]:
    """(numerator exponent, denominator exponent, constant, take square root)."""
    kind = get_loss(kind)
    if not kind.is_named:
        raise ValueError("smooth estimators are available only for the built-in losses")
    if kind.name == "quadratic":
        return total + 1.0, total + 2.0, 1.0 / (total + 1), False
    if kind.name == "entropy":
        return float(total), total + 1.0, 1.0 / total, False
    return total - 1.0, total + 1.0, 1.0 / ((total - 1) * total), True


def _check_shapes(m1: int, m2: int) -> None:
    if m1 < 2 or m2 < 2:
        raise ValueError(f"need b - a >= 2 for both populations, got {m1}, {m2}")


def _finish(log_ratio, const: float, root: bool):
    phi = const * np.exp(log_ratio)
    return np.sqrt(phi) if root else phi


def maruyama_phi1(kind: Loss | str, alpha: float, u1: float, m1: int, m2: int) -> float:
    """Smooth family indexed by ``alpha >= 1`` (adaptive quadrature).

    ``alpha = 1`` is the boundary function ``kubokawa_phi1``.  For
    ``alpha > 1`` the large-``u1`` limit is a beta-function ratio that
    exceeds the BAEE constant, so the estimate can sit above the BAEE.
    """
    _check_shapes(m1, m2)
    if not alpha >= 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    if not u1 >= 0:
        raise ValueError(f"u1 must be non-negative, got {u1}")
    q_num, q_den, const, root = _smooth_form(kind, m1 + m2)
    p = alpha * (m2 - 1)
    log_ratio = kernels.unit_log_quad(p, alpha * q_num, u1) - kernels.unit_log_quad(p, alpha * q_den, u1)
    return float(_finish(log_ratio, const, root))


def kubokawa_phi1(kind: Loss | str, u1: float, m1: int, m2: int) -> float:
    """Boundary function of the integral-expression class, as a ratio of power-kernel integrals over ``[0, 1]``."""
    return maruyama_phi1(kind, 1.0, u1, m1, m2)


def maruyama_phi1_batch(kind: Loss | str, alpha: float, u1, m1: int, m2: int) -> np.ndarray:
    """Vectorized ``maruyama_phi1`` through the incomplete-beta closed form."""
    _check_shapes(m1, m2)
    if not alpha >= 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    q_num, q_den, const, root = _smooth_form(kind, m1 + m2)
    p = alpha * (m2 - 1)
    u1 = np.asarray(u1, dtype=float)
    log_ratio = kernels.unit_log_closed(p, alpha * q_num, u1) - kernels.unit_log_closed(p, alpha * q_den, u1)
    return _finish(log_ratio, const, root)


def kubokawa_phi1_batch(kind: Loss | str, u1, m1: int, m2: int) -> np.ndarray:
    return maruyama_phi1_batch(kind, 1.0, u1, m1, m2)


def maruyama1(inp: Sigma1Inputs, kind: Loss | str, alpha: float = 1.5):
    if np.ndim(inp.s1.v) == 0:
        return maruyama_phi1(kind, alpha, float(inp.z1), inp.m1, inp.m2) * inp.s1.v
    return maruyama_phi1_batch(kind, alpha, inp.z1, inp.m1, inp.m2) * inp.s1.v


def kubokawa1(inp: Sigma1Inputs, kind: Loss | str):
    return maruyama1(inp, kind, 1.0)


def gen_bayes1(kind: Loss | str, v1: float, v2: float, m1: int, m2: int) -> float:
    """Generalized Bayes estimate of sigma_1 under the order-restricted right-invariant prior.

    After the inner scale integral is done in closed form, the posterior
    moments are one-dimensional integrals of ``x^(m2-1) (1+x)^(-q)`` over
    ``0 < x < v2/v1`` weighted by ``Gamma(q)``.
    """
    _check_shapes(m1, m2)
    if not (v1 > 0 and v2 > 0):
        raise ValueError("v1 and v2 must be positive")
    q_num, q_den, _, root = _smooth_form(kind, m1 + m2)
    z = v2 / v1
    e = m2 - 1.0

    def log_moment(q):
        def logf(x):
            if x <= 0.0:
                return 0.0 if e == 0 else -math.inf
            return e * math.log(x) - q * math.log1p(x)

        peak = min(e / (q - e), z) if e > 0 else 0.0
        width = peak if peak > 0 else min(z, 1.0 / q)
        return log_gamma(q) + kernels.log_scaled_integral(logf, 0.0, z, peak, width=width)

    phi = math.exp(log_moment(q_num) - log_moment(q_den))
    return (math.sqrt(phi) if root else phi) * v1


# --- Strawderman-type shrinkage ---------------------------------------------

@dataclass(frozen=True)
class StrawdermanParams:
    epsilon: float = 1.0
    loss: Loss | str = "quadratic"

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        name = get_loss(self.loss).name
        if name not in ("quadratic", "entropy"):
            raise ValueError(f"shrinkage bound is available for quadratic and entropy loss, not {name!r}")


def entropy_log_root(c0: float, total: int) -> float:
    """Root in (0, 1) of ``c0 * total + ln(1 - r) / r = 0``."""
    f = lambda r: c0 * total + math.log1p(-r) / r  # noqa: E731
    # f(0+) = c0*total - 1 > 0 requires c0*total > 1, true for the BAEE constant
    return find_root(f, 1e-12, 1.0 - 1e-15)


def strawderman_bound(m1: int, m2: int, params: StrawdermanParams) -> float:
    """Largest admissible shrinkage level; may be non-positive."""
    _check_shapes(m1, m2)
    eps = params.epsilon
    kind = get_loss(params.loss)
    c0 = baee_constant(kind, m1)
    total = m1 + m2
    if kind.name == "quadratic":
        r = 2.0 * (c0 * (m1 + 2) - 1.0) / (c0 * (m1 + 2))
        g1 = math.exp(log_gamma(m1 + 1) + log_gamma(total + eps + 1) - log_gamma(total + 1) - log_gamma(m1 + eps + 1))
        g2 = math.exp(log_gamma(m1) + log_gamma(total + eps + 1) - log_gamma(m1 + eps + 1) - log_gamma(total))
        r1 = g1 - 2.0 * g2 / (c0 * (total + 2))
        return min(r, r1)
    r_star = entropy_log_root(c0, total)
    log_b = (log_gamma(m1 + eps) + log_gamma(m1 + eps + 1 + m2)
             - log_gamma(total + eps) - log_gamma(m1 + eps + 1))
    return min(r_star, 1.0 / (1.0 + eps), math.exp(log_b) / total)


def strawderman1(inp: Sigma1Inputs, params: StrawdermanParams = StrawdermanParams()):
    """``(1 - rbar / (1 + z1)^eps) * BAEE`` with ``rbar`` the largest admissible level.

    When the bound is non-positive no shrinkage is allowed; the BAEE is
    returned and a ``NoImprovementWarning`` is issued.
    """
    rbar = strawderman_bound(inp.m1, inp.m2, params)
    base = baee1(inp, params.loss)
    if rbar <= 0:
        warnings.warn(
            f"shrinkage bound {rbar:.4g} <= 0 for shapes ({inp.m1}, {inp.m2}); returning the BAEE",
            NoImprovementWarning, stacklevel=2,
        )
        return _scalar_or_array(base)
    rbar = min(rbar, np.nextafter(1.0, 0.0))
    phi = rbar / (1.0 + inp.z1) ** params.epsilon
    return _scalar_or_array((1.0 - phi) * base)

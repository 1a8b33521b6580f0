"""Estimators of the larger scale sigma_2 under sigma_1 <= sigma_2.

The order restriction pushes estimates of sigma_2 upward, so the
truncations here are ``max`` forms in the other population's scale,
combined with the usual ``min`` truncation in the own location.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .loss import Loss, baee_constant, get_loss, stein_constant
from .model import SufficientStats
from .sigma1 import _check_shapes, _scalar_or_array


@dataclass(frozen=True)
class Sigma2Inputs:
    s1: SufficientStats
    s2: SufficientStats

    @property
    def z_star(self):
        """``v1 / v2``."""
        return self.s1.v / self.s2.v

    @property
    def z1_star(self):
        """``x_a2 / v2``."""
        return self.s2.x_a / self.s2.v

    @property
    def m1(self) -> int:
        return self.s1.m

    @property
    def m2(self) -> int:
        return self.s2.m


def baee2(inp: Sigma2Inputs, kind: Loss | str):
    return baee_constant(get_loss(kind), inp.m2) * inp.s2.v


def stein2_s1(inp: Sigma2Inputs, kind: Loss | str):
    kind = get_loss(kind)
    c0 = baee_constant(kind, inp.m2)
    beta = stein_constant(kind, inp.m1 + inp.m2 + 1)
    return _scalar_or_array(np.maximum(c0, beta * (1.0 + inp.z_star)) * inp.s2.v)


def stein2_s2(inp: Sigma2Inputs, kind: Loss | str):
    """Location-based truncation from population 2 alone; BAEE when ``x_a2 <= 0``."""
    kind = get_loss(kind)
    c0 = baee_constant(kind, inp.m2)
    beta1 = stein_constant(kind, inp.m2 + 2)
    z = inp.z1_star
    phi = np.where(z > 0, np.minimum(c0, beta1 * (1.0 + inp.s2.kappa * z)), c0)
    return _scalar_or_array(phi * inp.s2.v)


def double_shrink2(inp: Sigma2Inputs, kind: Loss | str):
    """Sum of both adjustments to the BAEE: ``stein2_s1 + stein2_s2 - baee2``."""
    kind = get_loss(kind)
    c0 = baee_constant(kind, inp.m2)
    v2 = inp.s2.v
    phi = stein2_s1(inp, kind) / v2 + stein2_s2(inp, kind) / v2 - c0
    return _scalar_or_array(phi * v2)


def restricted_mle2(inp: Sigma2Inputs):
    m1, m2 = inp.m1, inp.m2
    v1, v2 = inp.s1.v, inp.s2.v
    return _scalar_or_array(np.maximum(v2 / (m2 + 1), (v1 + v2) / (m1 + m2 + 2)))


def improved_rmle2(inp: Sigma2Inputs, kind: Loss | str):
    kind = get_loss(kind)
    beta = stein_constant(kind, inp.m1 + inp.m2 + 1)
    phi = np.maximum(restricted_mle2(inp) / inp.s2.v, beta * (1.0 + inp.z_star))
    return _scalar_or_array(phi * inp.s2.v)


# --- boundary function: gamma mixture ---------------------------------------

def _gamma_form(kind: Loss, m2: int) -> tuple[int, int, bool]:
    """Powers ``(p_num, p_den)`` of ``t`` and whether to take a square root."""
    kind = get_loss(kind)
    if not kind.is_named:
        raise ValueError("smooth estimators are available only for the built-in losses")
    if kind.name == "quadratic":
        return m2, m2 + 1, False
    if kind.name == "entropy":
        return m2 - 1, m2, False
    return m2 - 2, m2, True


def kubokawa_phi2(kind: Loss | str, u2: float, m1: int, m2: int) -> float:
    """Boundary function ``J(p_num) / J(p_den)`` with
    ``J(p) = int_0^inf t^p e^-t Q(m1, t u2) dt`` (outer adaptive quadrature)."""
    _check_shapes(m1, m2)
    if not u2 >= 0:
        raise ValueError(f"u2 must be non-negative, got {u2}")
    p_num, p_den, root = _gamma_form(kind, m2)
    ratio = math.exp(kernels.gamma_tail_log_quad(p_num, m1, u2) - kernels.gamma_tail_log_quad(p_den, m1, u2))
    return math.sqrt(ratio) if root else ratio


def kubokawa_phi2_batch(kind: Loss | str, u2, m1: int, m2: int) -> np.ndarray:
    _check_shapes(m1, m2)
    p_num, p_den, root = _gamma_form(kind, m2)
    u2 = np.asarray(u2, dtype=float)
    ratio = np.exp(kernels.gamma_tail_log_closed(p_num, m1, u2) - kernels.gamma_tail_log_closed(p_den, m1, u2))
    return np.sqrt(ratio) if root else ratio


def kubokawa2(inp: Sigma2Inputs, kind: Loss | str):
    if np.ndim(inp.s2.v) == 0:
        return kubokawa_phi2(kind, float(inp.z_star), inp.m1, inp.m2) * inp.s2.v
    return kubokawa_phi2_batch(kind, inp.z_star, inp.m1, inp.m2) * inp.s2.v


def gen_bayes2(kind: Loss | str, v1: float, v2: float, m1: int, m2: int) -> float:
    """Generalized Bayes estimate of sigma_2 under the order-restricted right-invariant prior.

    The posterior moments are integrated in the opposite order to
    ``kubokawa_phi2``: the inner integral runs over the sigma_2 direction
    and becomes a lower incomplete gamma, leaving
    ``G(k) = Gamma(m2 + k) int_0^inf x^(m1-1) e^-x P(m2 + k, x v2 / v1) dx``.
    """
    _check_shapes(m1, m2)
    if not (v1 > 0 and v2 > 0):
        raise ValueError("v1 and v2 must be positive")
    p_num, p_den, root = _gamma_form(kind, m2)
    u = v1 / v2

    def log_g(p):
        s = p + 1.0
        return math.lgamma(s) + kernels.gamma_mix_log_quad(s, m1, u)

    ratio = math.exp(log_g(p_num) - log_g(p_den))
    return (math.sqrt(ratio) if root else ratio) * v2


# --- Maruyama family: power kernels over [1, inf) -----------------------------

def _tail_form(kind: Loss, total: int) -> tuple[float, float, float, bool]:
    kind = get_loss(kind)
    if not kind.is_named:
        raise ValueError("smooth estimators are available only for the built-in losses")
    if kind.name == "quadratic":
        return total + 1.0, total + 2.0, 1.0 / (total + 1), False
    if kind.name == "entropy":
        return float(total), total + 1.0, 1.0 / total, False
    return total - 1.0, total + 1.0, 1.0 / (total * (total - 1)), True


def _maruyama2_args(kind, alpha, m1, m2):
    _check_shapes(m1, m2)
    if not alpha >= 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    q_num, q_den, const, root = _tail_form(kind, m1 + m2)
    p = alpha * (m1 - 1)
    return p, alpha * q_num, alpha * q_den, const, root


def maruyama_phi2(kind: Loss | str, alpha: float, u2: float, m1: int, m2: int) -> float:
    """Smooth family for sigma_2; integrals over ``[1, inf)`` need ``u2 > 0``
    and converge because ``alpha * (q - m1 + 1) > 1`` for every exponent used."""
    p, q_num, q_den, const, root = _maruyama2_args(kind, alpha, m1, m2)
    if not u2 > 0:
        raise ValueError(f"integrals over [1, inf) diverge at u2 = {u2}; need u2 > 0")
    phi = const * math.exp(kernels.tail_log_quad(p, q_num, u2) - kernels.tail_log_quad(p, q_den, u2))
    return math.sqrt(phi) if root else phi


def maruyama_phi2_batch(kind: Loss | str, alpha: float, u2, m1: int, m2: int) -> np.ndarray:
    p, q_num, q_den, const, root = _maruyama2_args(kind, alpha, m1, m2)
    u2 = np.asarray(u2, dtype=float)
    phi = const * np.exp(kernels.tail_log_closed(p, q_num, u2) - kernels.tail_log_closed(p, q_den, u2))
    return np.sqrt(phi) if root else phi


def maruyama2(inp: Sigma2Inputs, kind: Loss | str, alpha: float = 1.5):
    if np.ndim(inp.s2.v) == 0:
        return maruyama_phi2(kind, alpha, float(inp.z_star), inp.m1, inp.m2) * inp.s2.v
    return maruyama_phi2_batch(kind, alpha, inp.z_star, inp.m1, inp.m2) * inp.s2.v

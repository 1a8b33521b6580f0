"""Power-kernel integrals behind the smooth (boundary and Maruyama) estimators.

    unit(p, q, u) = int_0^1   y^p (1 + y u)^(-q) dy
    tail(p, q, u) = int_1^inf y^p (1 + y u)^(-q) dy

Each comes in two independent flavours: adaptive quadrature of the scaled
integrand (``*_log_quad``), and a vectorized closed form in terms of the
regularized incomplete beta function (``*_log_closed``), used inside Monte
Carlo loops.  With ``x = y u`` and ``w = x / (1 + x)``:

    unit = u^-(p+1) B(p+1, q-p-1) I_{u/(1+u)}(p+1, q-p-1)
    tail = u^-(p+1) B(p+1, q-p-1) I_{1/(1+u)}(q-p-1, p+1)

Both helpers return logarithms so that ratios never underflow.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np
from scipy import special

from .numeric import Tolerance, integrate, lower_reg_gamma, upper_reg_gamma

# relative accuracy needed for ratios of O(1)-scaled integrals
KERNEL_TOL = Tolerance(abs_tol=1e-15, rel_tol=1e-12, max_iter=400)

# below this u the hypergeometric series is used instead of the beta form
_SMALL_U = 1e-2


def log_scaled_integral(
    logf: Callable[[float], float],
    lo: float,
    hi: float,
    peak: float,
    tol: Tolerance = KERNEL_TOL,
    width: float | None = None,
) -> float:
    """``log int exp(logf)`` over ``[lo, hi]``, rescaled by the value at ``peak``.

    ``width`` is the length scale of the integrand when the peak sits on an
    endpoint; it defaults to the peak location.
    """
    shift = logf(peak)
    if shift == math.inf and width:
        shift = logf(width)  # integrable endpoint singularity
    if not math.isfinite(shift):
        raise ValueError(f"log-integrand not finite at the peak {peak}")

    def f(t):
        lt = logf(t)
        return 0.0 if lt == -math.inf else math.exp(lt - shift)

    # geometric breakpoints around the peak keep QUADPACK from missing a
    # narrow spike on a long interval
    centre = width if width else peak
    pts = [p for p in (centre * 4.0 ** k for k in range(-12, 13)) if lo < p < hi] or None
    return shift + math.log(integrate(f, lo, hi, tol, points=pts))


def _check_exponents(p: float, q: float) -> None:
    if not q - p - 1 > 0:
        raise ValueError(f"power-kernel integral needs q - p - 1 > 0, got p={p}, q={q}")


def unit_log_quad(p: float, q: float, u: float, tol: Tolerance = KERNEL_TOL) -> float:
    if u < 0:
        raise ValueError(f"u must be non-negative, got {u}")
    _check_exponents(p, q)
    if u == 0:
        return -math.log1p(p)

    def logf(y):
        if y <= 0.0:
            return 0.0 if p == 0 else -math.inf
        return p * math.log(y) - q * math.log1p(y * u)

    peak = min(p / (u * (q - p)), 1.0)
    width = peak if peak > 0 else min(1.0 / (u * q), 0.5)
    return log_scaled_integral(logf, 0.0, 1.0, peak, tol, width)


def tail_log_quad(p: float, q: float, u: float, tol: Tolerance = KERNEL_TOL) -> float:
    """Tail integral after ``y = 1/w``: ``int_0^1 w^(q-p-2) (w + u)^(-q) dw``."""
    if not u > 0:
        raise ValueError(f"integral over [1, inf) diverges unless u > 0, got u={u}")
    _check_exponents(p, q)
    e = q - p - 2.0

    def logf(w):
        if w <= 0.0:
            if e == 0:
                return -q * math.log(u)
            return -math.inf if e > 0 else math.inf
        return e * math.log(w) - q * math.log(w + u)

    peak = min(e * u / (p + 2.0), 1.0) if e > 0 else 0.0
    width = peak if peak > 0 else min(u, 0.5)
    return log_scaled_integral(logf, 0.0, 1.0, peak, tol, width)


def unit_log_closed(p, q, u):
    """Vectorized ``log unit(p, q, u)``; exact at ``u = 0``."""
    _check_exponents(p, q)
    u = np.asarray(u, dtype=float)
    a, b = p + 1.0, q - p - 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        w = u / (1.0 + u)
        big = -a * np.log(u) + special.betaln(a, b) + np.log(special.betainc(a, b, w))
        small = -np.log(a) + np.log(special.hyp2f1(q, a, a + 1.0, -np.minimum(u, _SMALL_U)))
    return np.where(u < _SMALL_U, small, big)


def tail_log_closed(p, q, u):
    """Vectorized ``log tail(p, q, u)`` for ``u > 0``."""
    u = np.asarray(u, dtype=float)
    if np.any(u <= 0):
        raise ValueError("integral over [1, inf) diverges unless u > 0")
    _check_exponents(p, q)
    a, b = p + 1.0, q - p - 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        mid = -a * np.log(u) + special.betaln(a, b) + np.log(special.betainc(b, a, 1.0 / (1.0 + u)))
        # int_0^1 s^(b-1) (1 + s/u)^(-q) ds = 2F1(q, b; b+1; -1/u) / b, for large u
        inv = 1.0 / np.maximum(u, 1.0 / _SMALL_U)
        large = -q * np.log(u) - np.log(b) + np.log(special.hyp2f1(q, b, b + 1.0, -inv))
    return np.where(u > 1.0 / _SMALL_U, large, mid)


# --- gamma-mixture kernels for the larger scale -----------------------------
#
#   gamma_tail(p, m, u) = int_0^inf t^p e^-t Q(m, t u) dt
#                       = Gamma(p+1) I_{1/(1+u)}(p+1, m)
#
# (Q(m, t u) = P(X > t u) for X ~ Gamma(m); the closed form is the
# probability that a Gamma(p+1) variable falls below X / u.)

def _grid_peak(logf: Callable[[float], float], scale: float) -> float:
    grid = scale * np.geomspace(1e-8, 1e4, 481)
    vals = [logf(t) for t in grid]
    return float(grid[int(np.argmax(vals))])


def gamma_tail_log_quad(p: float, m: float, u: float, tol: Tolerance = KERNEL_TOL) -> float:
    """``log int_0^inf t^p e^-t Q(m, t u) dt`` with the incomplete-gamma kernel."""
    if not p > -1 or not m > 0 or u < 0:
        raise ValueError(f"need p > -1, m > 0, u >= 0, got ({p}, {m}, {u})")
    if u == 0:
        return math.lgamma(p + 1.0)

    def logf(t):
        if t <= 0.0:
            return 0.0 if p == 0 else (-math.inf if p > 0 else math.inf)
        q = upper_reg_gamma(m, t * u)
        return -math.inf if q == 0.0 else p * math.log(t) - t + math.log(q)

    peak = _grid_peak(logf, p + 1.0)
    return log_scaled_integral(logf, 0.0, math.inf, peak, tol, peak)


def gamma_mix_log_quad(s: float, m: float, u: float, tol: Tolerance = KERNEL_TOL) -> float:
    """``log int_0^inf x^(m-1) e^-x P(s, x / u) dx`` (the order-swapped form)."""
    if not (s > 0 and m > 0 and u > 0):
        raise ValueError(f"need s > 0, m > 0, u > 0, got ({s}, {m}, {u})")

    def logf(x):
        if x <= 0.0:
            return -math.inf
        pr = lower_reg_gamma(s, x / u)
        return -math.inf if pr == 0.0 else (m - 1.0) * math.log(x) - x + math.log(pr)

    peak = _grid_peak(logf, max(m, u * s))
    return log_scaled_integral(logf, 0.0, math.inf, peak, tol, peak)


def gamma_tail_log_closed(p, m, u):
    """Vectorized ``log gamma_tail(p, m, u)``."""
    u = np.asarray(u, dtype=float)
    if np.any(u < 0):
        raise ValueError("u must be non-negative")
    with np.errstate(divide="ignore"):
        return special.gammaln(p + 1.0) + np.log(special.betainc(p + 1.0, m, 1.0 / (1.0 + u)))

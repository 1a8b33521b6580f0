import math

import numpy as np
import pytest

from ordscale.loss import (ENTROPY, QUADRATIC, SYMMETRIC, baee_constant, custom_loss, gamma_expected_deriv,
                           get_loss, loss_deriv, loss_value, stein_constant)
from ordscale.numeric import BracketError

NAMED = [QUADRATIC, ENTROPY, SYMMETRIC]


class TestValues:
    def test_examples(self):
        assert loss_value(QUADRATIC, 1.0) == 0.0
        assert loss_value(ENTROPY, math.e) == pytest.approx(math.e - 2)
        assert loss_value(SYMMETRIC, 2.0) == pytest.approx(0.5)

    def test_derivative_examples(self):
        assert loss_deriv(QUADRATIC, 1.0) == 0.0
        assert loss_deriv(ENTROPY, 2.0) == pytest.approx(0.5)

    @pytest.mark.parametrize("kind", NAMED, ids=lambda k: k.name)
    @pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
    def test_derivative_matches_finite_difference(self, kind, t):
        h = 1e-5
        fd = (loss_value(kind, t + h) - loss_value(kind, t - h)) / (2 * h)
        assert loss_deriv(kind, t) == pytest.approx(fd, abs=1e-6)

    @pytest.mark.parametrize("kind", NAMED, ids=lambda k: k.name)
    def test_bowl_shape(self, kind):
        left = np.linspace(0.05, 1, 100)
        right = np.linspace(1, 10, 100)
        assert np.all(np.diff(loss_value(kind, left)) <= 0)
        assert np.all(np.diff(loss_value(kind, right)) >= 0)
        assert loss_value(kind, 1.0) == 0.0

    @pytest.mark.parametrize("t", [0.0, -1.0])
    def test_domain(self, t):
        with pytest.raises(ValueError):
            loss_value(QUADRATIC, t)
        with pytest.raises(ValueError):
            loss_deriv(ENTROPY, t)

    def test_lookup(self):
        assert get_loss("Entropy") is ENTROPY
        with pytest.raises(ValueError):
            get_loss("absolute")


class TestConstants:
    def test_baee_examples(self):
        assert baee_constant(QUADRATIC, 29) == pytest.approx(1 / 30)
        assert baee_constant(ENTROPY, 29) == pytest.approx(1 / 29)
        assert baee_constant(SYMMETRIC, 29) == pytest.approx(1 / math.sqrt(29 * 28))

    def test_stein_examples(self):
        k = 58 + 3
        assert stein_constant(QUADRATIC, k) == pytest.approx(1 / 61)
        assert stein_constant(ENTROPY, k) == pytest.approx(1 / 60)
        assert stein_constant(SYMMETRIC, k) == pytest.approx(1 / math.sqrt(60 * 59))

    @pytest.mark.parametrize("kind,k", [(QUADRATIC, 0), (ENTROPY, 1), (SYMMETRIC, 2)])
    def test_stein_domain(self, kind, k):
        with pytest.raises(ValueError):
            stein_constant(kind, k)

    def test_baee_needs_two_spacings(self):
        with pytest.raises(ValueError):
            baee_constant(QUADRATIC, 1)

    @pytest.mark.parametrize("kind", NAMED, ids=lambda k: k.name)
    @pytest.mark.parametrize("m", [2, 5, 29, 60])
    def test_closed_form_solves_defining_equation(self, kind, m):
        # E[L'(cV) V] with V ~ Gamma(m) equals m E[L'(cZ)] with Z ~ Gamma(m+1)
        c = baee_constant(kind, m)
        assert abs(m * gamma_expected_deriv(kind, c, m + 1)) < 1e-8

    @pytest.mark.parametrize("kind", NAMED, ids=lambda k: k.name)
    def test_stein_strictly_decreasing(self, kind):
        vals = [stein_constant(kind, k) for k in range(3, 81)]
        assert all(b < a for a, b in zip(vals, vals[1:]))

    @pytest.mark.parametrize("kind", NAMED, ids=lambda k: k.name)
    def test_dominance_precondition(self, kind):
        for m1 in range(2, 40):
            for m2 in range(2, 40, 3):
                assert stein_constant(kind, m1 + m2 + 1) <= baee_constant(kind, m1)

    def test_numeric_route_for_custom_loss(self):
        # LINEX-type loss e^(t-1) - t, derivative e^(t-1) - 1: E[e^(cZ-1)] = 1 gives
        # (1 - c)^-k = e, i.e. c = 1 - e^(-1/k)
        linex = custom_loss(lambda t: np.exp(t - 1) - t, lambda t: np.exp(t - 1) - 1, "linex")
        for k in (3, 10, 30):
            assert stein_constant(linex, k) == pytest.approx(1 - math.exp(-1 / k), abs=1e-10)

    def test_custom_loss_validation(self):
        with pytest.raises(ValueError):
            custom_loss(lambda t: (t - 2) ** 2, lambda t: 2 * (t - 2))
        with pytest.raises(ValueError):
            custom_loss(lambda t: (t - 1) ** 2, lambda t: 2 * (t - 1), name="quadratic")

    def test_unbracketable_custom_loss(self):
        flat = custom_loss(lambda t: np.where(t < 1, 1 - t, 0.0), lambda t: np.where(t < 1, -1.0, 0.0), "flat")
        with pytest.raises(BracketError):
            stein_constant(flat, 5)

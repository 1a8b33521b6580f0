import numpy as np
import pytest

from ordscale.data import jute
from ordscale.model import CensoringScheme, SufficientStats, sufficient_stats


def jute_stats(a1=1, b1=30, a2=1, b2=30, reconstruct=True):
    ds = jute(reconstruct)
    return sufficient_stats(ds.sample(1), a1, b1), sufficient_stats(ds.sample(2), a2, b2)


def make_stats(x_a, v, n=30, a=1, b=30):
    return SufficientStats(x_a, v, CensoringScheme(n, a, b))


@pytest.fixture
def jute_pair():
    return jute_stats()


@pytest.fixture
def rng():
    return np.random.default_rng(20240501)

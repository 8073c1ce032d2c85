import numpy as np
import pytest

from mdiqkd import ChannelParams, IntensityTriple


@pytest.fixture
def ref_params():
    """e_d = 1.5 %, P_d = 3e-6, f = 1.16, eta_a = eta_b = 0.1."""
    return ChannelParams(e_d=0.015, P_d=3e-6, eta_a=0.1, eta_b=0.1, f=1.16)


@pytest.fixture
def table1_intensities():
    return IntensityTriple(0.01, 0.36)


def random_intensities(rng, hi=0.6):
    """Random valid (alice, bob) triples with every intensity in (0, hi]."""
    def one():
        mu2 = rng.uniform(0.0, hi)
        while mu2 == 0.0:
            mu2 = rng.uniform(0.0, hi)
        mu1 = rng.uniform(0.0, mu2)
        while not 0.0 < mu1 < mu2:
            mu1 = rng.uniform(0.0, mu2)
        return IntensityTriple(mu1, mu2)
    return one(), one()


@pytest.fixture
def rng():
    return np.random.default_rng(20130211)

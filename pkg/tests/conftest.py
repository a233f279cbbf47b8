"""Shared fixtures and independent oracles for the test suite.

Two reference configurations are used throughout: the strongly
noncollinear set (theta0 = 0.28 rad, waist and length 0.5 cm) and the
moderate set (theta0 = 0.1 rad, waist and length 0.1 cm), both at a
0.4047 um pump in BBO.  Monte-Carlo batches are session-scoped because
sampling a million pairs is the most expensive fixture.
"""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from biphoton import (MomentumPoint4, SpdcParams, density4, load_crystal,
                      sample_pairs)

MC_SEED = 20240801
Z_CM = 100.0


@pytest.fixture(scope="session")
def bbo():
    return load_crystal()


@pytest.fixture(scope="session")
def params_a(bbo):
    return SpdcParams.from_crystal(bbo, 0.4047, 0.5, 0.5, theta0=0.28)


@pytest.fixture(scope="session")
def params_b(bbo):
    return SpdcParams.from_crystal(bbo, 0.4047, 0.1, 0.1, theta0=0.1)


@pytest.fixture(scope="session")
def batch_a(params_a):
    return sample_pairs(params_a, Z_CM, 1_000_000, seed=MC_SEED)


@pytest.fixture(scope="session")
def batch_b(params_b):
    return sample_pairs(params_b, Z_CM, 1_000_000, seed=MC_SEED)


def f_exact_simpson(k_minus_x, params, qmax=12.0, n=1_500_001):
    """Slow oracle for the y-reduction: plain Simpson on a fine uniform q grid.

    No lobe splitting, no transformations; the grid is fine enough to
    resolve every oscillation up to qmax and the remainder beyond qmax
    is bounded by the inverse-square envelope (returned bound is
    absolute).
    """
    kappa = float(params.kappa(k_minus_x))
    c = 4.0 * params.theta0 ** 2 - kappa * kappa
    scale = params.sinc_scale
    q = np.linspace(0.0, qmax, n)
    s = np.sinc(scale * (c - q * q) / math.pi)
    vals = s * s
    h = q[1] - q[0]
    simpson = (vals[0] + vals[-1] + 4.0 * vals[1:-1:2].sum()
               + 2.0 * vals[2:-1:2].sum()) * h / 3.0
    tail_bound = 1.0 / (3.0 * scale * scale * (qmax * qmax - abs(c)) ** 1.5)
    return 2.0 * simpson, 2.0 * tail_bound


def brute_reduced(k1x, k2x, params, outer_epsrel=3e-8):
    """Independent y-reduction: nested adaptive quadrature in the raw frame.

    Integrates density4 over (k1y, k2y) directly, never using the
    sum/difference factorization.  The inner integral runs over the
    pump-envelope support around k2y = -k1y; the outer one uses the
    evenness of the reduced integrand in k1y.
    """
    lim_t = 7.0 / params.w_p
    lim_y = 0.4 * math.pi / params.lambda_cm

    def inner(k1y):
        val, _ = quad(
            lambda k2y: density4(MomentumPoint4(k1x, k2x, k1y, k2y), params),
            -k1y - lim_t, -k1y + lim_t, limit=120, epsabs=0.0, epsrel=1e-9)
        return val

    val, _ = quad(inner, 0.0, lim_y, limit=800, epsabs=0.0,
                  epsrel=outer_epsrel)
    return 2.0 * val
